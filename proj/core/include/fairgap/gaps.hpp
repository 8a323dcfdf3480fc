#pragma once

#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "fairgap/dataset.hpp"
#include "fairgap/instance.hpp"
#include "fairgap/losses.hpp"
#include "fairgap/score.hpp"

namespace fairgap {

enum class BinningMode { EqualWidth, Quantile };

struct BinningConfig {
  int num_buckets = 10;
  BinningMode mode = BinningMode::EqualWidth;
  // Minimum samples per (bucket, group) cell for calibration-plot rows.
  int min_cell = 2;
};

// One calibration-plot point: positive rate of a (bucket, group) cell with a
// 95% Wald interval.
struct PlotRow {
  int bucket = 0;
  int group = 0;
  long count = 0;
  long positives = 0;
  double rate = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
};

// Verdict attached to a named bound: the bound value, whether the
// corresponding gap satisfies it, and the slack (bound - gap for upper
// bounds, gap - bound for lower bounds).
struct BoundVerdict {
  double value = 0.0;
  bool satisfied = false;
  double slack = 0.0;
  bool is_lower = false;
};

// All gaps of a score, estimated or exact, plus optional bound verdicts.
struct GapReport {
  double suf = 0.0;
  double cal = 0.0;
  double sep = 0.0;
  double ind = 0.0;
  std::vector<double> per_group_suf;
  std::vector<double> per_group_cal;
  // Calibration integrand restricted to each group (same restriction as
  // per_group_cal; kept as a separate field because the single-group bound
  // (4/sqrt(kappa)) sqrt(excess)/p_a targets exactly this quantity).
  std::vector<double> single_group_cal;
  std::optional<double> excess_risk;
  std::map<std::string, BoundVerdict> bounds;

  // Metadata.
  int num_buckets = 0;           // 0 when exact (no binning)
  std::string binning_mode;      // "equal_width" | "quantile" | "exact"
  std::string loss_name;         // empty when no loss involved
  std::size_t n = 0;             // sample count (0 when exact)
  double tolerance = 1e-9;       // verdict tolerance
};

// Bucket id per value. EqualWidth: id = min(floor(v*B), B-1). Quantile:
// boundaries at empirical i/B-quantiles (linear interpolation); values equal
// to a boundary go to the lower bucket. Throws ValueOutOfRangeError.
std::vector<int> assign_buckets(std::span<const double> values, const BinningConfig& config);

// The binning estimator: suf = mean_i |g^(f_i, a_i) - g^(f_i)|,
// cal = mean_i |f_i - g^(f_i, a_i)|, where g^ is the bucket mean of y. An
// empty (bucket, group) cell contributes g^(f,a) := g^(f) (zero local gap).
// sep and ind are binning-free (conditional group means of f).
// The optional excess (computed elsewhere, e.g. on a held-out oracle) is
// recorded verbatim together with the loss name.
GapReport estimate_gaps(const LabeledDataset& dataset, const Score& score,
                        const BinningConfig& config, const BregmanLoss* loss = nullptr,
                        std::optional<double> excess = std::nullopt);

// Same estimator on precomputed score values (one per sample), e.g. a score
// column ingested from a CSV.
GapReport estimate_gaps(const LabeledDataset& dataset, std::span<const double> values,
                        const BinningConfig& config, const BregmanLoss* loss = nullptr,
                        std::optional<double> excess = std::nullopt);

// Exact gaps by enumerating the score's finitely many values on a
// TabularInstance. Score must be Table, Constant or Bayes.
GapReport exact_gaps_tabular(const TabularInstance& instance, const Score& score);

// Calibration-plot rows; cells with fewer than min_cell samples are omitted.
std::vector<PlotRow> calibration_plot_data(const LabeledDataset& dataset, const Score& score,
                                           const BinningConfig& config);
std::vector<PlotRow> calibration_plot_data(const LabeledDataset& dataset,
                                           std::span<const double> values,
                                           const BinningConfig& config);

// CSV with header bucket,group,count,positives,rate,ci_low,ci_high.
void write_plot_csv(std::ostream& out, const std::vector<PlotRow>& rows);

}  // namespace fairgap
