#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace fairgap {

// A row as supplied by an ingestion layer, before validation: features plus a
// label (must be exactly 0 or 1) and an arbitrary attribute tag.
struct RawSample {
  std::vector<double> features;
  double label = 0.0;
  std::string attribute;
};

// Validated dataset: dense features (row-major n×d), binary labels, attribute
// ids densified to {0..K-1} by first appearance. Immutable after construction.
class LabeledDataset {
 public:
  std::size_t size() const { return labels_.size(); }
  int dim() const { return dim_; }
  int num_groups() const { return num_groups_; }

  std::span<const double> features(std::size_t i) const {
    return {features_.data() + i * static_cast<std::size_t>(dim_), static_cast<std::size_t>(dim_)};
  }
  int label(std::size_t i) const { return labels_[i]; }
  int attribute(std::size_t i) const { return attributes_[i]; }

  const std::vector<double>& flat_features() const { return features_; }
  const std::vector<int>& labels() const { return labels_; }
  const std::vector<int>& attributes() const { return attributes_; }

  // Original attribute label for a dense id (empty when constructed from
  // already-dense ids).
  const std::vector<std::string>& group_names() const { return group_names_; }

  // Construction from pre-densified ids (samplers use this; callers guarantee
  // ids lie in {0..num_groups-1}).
  static LabeledDataset from_dense(std::vector<double> flat_features, int dim,
                                   std::vector<int> labels, std::vector<int> attributes,
                                   int num_groups);

 private:
  friend LabeledDataset validate_dataset(const std::vector<RawSample>& rows);

  std::vector<double> features_;  // n * dim, row-major
  std::vector<int> labels_;
  std::vector<int> attributes_;
  int dim_ = 0;
  int num_groups_ = 0;
  std::vector<std::string> group_names_;
};

// Validates raw rows: rejects empty input, inconsistent dimensions and
// non-binary labels; densifies attribute ids by first appearance.
// Throws EmptyDatasetError, DimensionMismatchError(row), NonBinaryLabelError(row).
LabeledDataset validate_dataset(const std::vector<RawSample>& rows);

// Per-group masses and base rates.
struct GroupStats {
  std::vector<double> p_a;  // group masses, sum to 1
  std::vector<double> q_a;  // per-group base rates
  double q_bar = 0.0;       // overall base rate
};

// Empirical group frequencies and positive rates.
GroupStats group_stats(const LabeledDataset& dataset);

}  // namespace fairgap
