#include "fairgap/dataset.hpp"

#include <cmath>
#include <unordered_map>

#include "fairgap/errors.hpp"

namespace fairgap {

LabeledDataset LabeledDataset::from_dense(std::vector<double> flat_features, int dim,
                                          std::vector<int> labels, std::vector<int> attributes,
                                          int num_groups) {
  LabeledDataset ds;
  ds.features_ = std::move(flat_features);
  ds.dim_ = dim;
  ds.labels_ = std::move(labels);
  ds.attributes_ = std::move(attributes);
  ds.num_groups_ = num_groups;
  return ds;
}

LabeledDataset validate_dataset(const std::vector<RawSample>& rows) {
  if (rows.empty()) throw EmptyDatasetError();

  const std::size_t d = rows.front().features.size();
  LabeledDataset ds;
  ds.dim_ = static_cast<int>(d);
  ds.features_.reserve(rows.size() * d);
  ds.labels_.reserve(rows.size());
  ds.attributes_.reserve(rows.size());

  std::unordered_map<std::string, int> id_of;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const RawSample& row = rows[i];
    if (row.features.size() != d) throw DimensionMismatchError(i);
    if (row.label != 0.0 && row.label != 1.0) throw NonBinaryLabelError(i);

    // Densify attribute ids by first appearance.
    auto [it, inserted] = id_of.emplace(row.attribute, static_cast<int>(id_of.size()));
    if (inserted) ds.group_names_.push_back(row.attribute);

    ds.features_.insert(ds.features_.end(), row.features.begin(), row.features.end());
    ds.labels_.push_back(static_cast<int>(row.label));
    ds.attributes_.push_back(it->second);
  }
  ds.num_groups_ = static_cast<int>(id_of.size());
  return ds;
}

GroupStats group_stats(const LabeledDataset& dataset) {
  const int k = dataset.num_groups();
  std::vector<double> count(k, 0.0), positives(k, 0.0);
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    count[dataset.attribute(i)] += 1.0;
    positives[dataset.attribute(i)] += dataset.label(i);
  }

  GroupStats stats;
  stats.p_a.resize(k);
  stats.q_a.resize(k);
  const double n = static_cast<double>(dataset.size());
  for (int a = 0; a < k; ++a) {
    stats.p_a[a] = count[a] / n;
    stats.q_a[a] = count[a] > 0.0 ? positives[a] / count[a] : 0.0;
    stats.q_bar += stats.p_a[a] * stats.q_a[a];
  }
  return stats;
}

}  // namespace fairgap
