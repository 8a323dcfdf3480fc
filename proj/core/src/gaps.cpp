#include "fairgap/gaps.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <tuple>

#include "fairgap/errors.hpp"

namespace fairgap {

namespace {

const char* mode_name(BinningMode mode) {
  return mode == BinningMode::EqualWidth ? "equal_width" : "quantile";
}

// Empirical i/B-quantile boundaries with linear interpolation between order
// statistics (position (n-1)·q).
std::vector<double> quantile_boundaries(std::span<const double> values, int num_buckets) {
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  std::vector<double> boundaries;
  boundaries.reserve(num_buckets - 1);
  for (int i = 1; i < num_buckets; ++i) {
    const double pos = (static_cast<double>(n) - 1.0) * i / num_buckets;
    const std::size_t lo = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(lo);
    const double hi_val = lo + 1 < n ? sorted[lo + 1] : sorted[lo];
    boundaries.push_back(sorted[lo] + frac * (hi_val - sorted[lo]));
  }
  return boundaries;
}

struct ScoredDataset {
  std::vector<double> f;       // per-sample score values
  std::vector<int> bucket;     // per-sample bucket ids
};

}  // namespace

std::vector<int> assign_buckets(std::span<const double> values, const BinningConfig& config) {
  const int b = config.num_buckets;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] >= 0.0 && values[i] <= 1.0)) throw ValueOutOfRangeError(i);
  }

  std::vector<int> out(values.size());
  if (config.mode == BinningMode::EqualWidth) {
    for (std::size_t i = 0; i < values.size(); ++i) {
      out[i] = std::min(static_cast<int>(values[i] * b), b - 1);
    }
    return out;
  }

  // Quantile mode: values equal to a boundary fall into the lower bucket, so
  // the bucket id is the number of boundaries strictly below the value.
  const std::vector<double> boundaries = quantile_boundaries(values, b);
  for (std::size_t i = 0; i < values.size(); ++i) {
    out[i] = static_cast<int>(
        std::lower_bound(boundaries.begin(), boundaries.end(), values[i]) - boundaries.begin());
  }
  return out;
}

GapReport estimate_gaps(const LabeledDataset& dataset, const Score& score,
                        const BinningConfig& config, const BregmanLoss* loss,
                        std::optional<double> excess) {
  std::vector<double> values(dataset.size());
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    values[i] = eval_score(score, dataset.features(i));
  }
  return estimate_gaps(dataset, values, config, loss, excess);
}

GapReport estimate_gaps(const LabeledDataset& dataset, std::span<const double> values,
                        const BinningConfig& config, const BregmanLoss* loss,
                        std::optional<double> excess) {
  const std::size_t n = dataset.size();
  const int b = config.num_buckets;
  const int k = dataset.num_groups();
  ScoredDataset scored;
  scored.f.assign(values.begin(), values.end());
  scored.bucket = assign_buckets(scored.f, config);

  // Bucket means of y, overall and per group.
  std::vector<long> bucket_count(b, 0), cell_count(static_cast<std::size_t>(b) * k, 0);
  std::vector<double> bucket_pos(b, 0.0), cell_pos(static_cast<std::size_t>(b) * k, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const int cell = scored.bucket[i] * k + dataset.attribute(i);
    bucket_count[scored.bucket[i]] += 1;
    bucket_pos[scored.bucket[i]] += dataset.label(i);
    cell_count[cell] += 1;
    cell_pos[cell] += dataset.label(i);
  }
  // Buckets with no samples at all (possible in quantile mode when tied
  // values collapse boundaries) are skipped; they cannot contribute to a
  // mean over samples.

  std::vector<double> g_hat(b, 0.0), g_hat_a(static_cast<std::size_t>(b) * k, 0.0);
  for (int j = 0; j < b; ++j) {
    if (bucket_count[j] > 0) g_hat[j] = bucket_pos[j] / static_cast<double>(bucket_count[j]);
    for (int a = 0; a < k; ++a) {
      const int cell = j * k + a;
      // Empty (bucket, group) cell: g^(f, a) := g^(f), zero local gap.
      g_hat_a[cell] = cell_count[cell] > 0
                          ? cell_pos[cell] / static_cast<double>(cell_count[cell])
                          : g_hat[j];
    }
  }

  // Per-sample accumulations run in a canonical order sorted by
  // (score, group, label) so that permuting the input rows leaves every
  // floating-point sum — and hence every estimate — bit-identical.
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t lhs, std::size_t rhs) {
    return std::make_tuple(scored.f[lhs], dataset.attribute(lhs), dataset.label(lhs)) <
           std::make_tuple(scored.f[rhs], dataset.attribute(rhs), dataset.label(rhs));
  });

  GapReport report;
  report.per_group_suf.assign(k, 0.0);
  report.per_group_cal.assign(k, 0.0);
  std::vector<double> group_count(k, 0.0);
  double suf_sum = 0.0, cal_sum = 0.0;
  for (const std::size_t i : order) {
    const int a = dataset.attribute(i);
    const int cell = scored.bucket[i] * k + a;
    const double suf_i = std::abs(g_hat_a[cell] - g_hat[scored.bucket[i]]);
    const double cal_i = std::abs(scored.f[i] - g_hat_a[cell]);
    suf_sum += suf_i;
    cal_sum += cal_i;
    report.per_group_suf[a] += suf_i;
    report.per_group_cal[a] += cal_i;
    group_count[a] += 1.0;
  }
  report.suf = suf_sum / static_cast<double>(n);
  report.cal = cal_sum / static_cast<double>(n);
  for (int a = 0; a < k; ++a) {
    if (group_count[a] > 0.0) {
      report.per_group_suf[a] /= group_count[a];
      report.per_group_cal[a] /= group_count[a];
    }
  }
  report.single_group_cal = report.per_group_cal;

  // sep and ind need no binning: conditional means of f over (Y, A), Y and A.
  std::vector<double> f_sum_ya(2 * k, 0.0), cnt_ya(2 * k, 0.0);
  double f_sum_y[2] = {0.0, 0.0}, cnt_y[2] = {0.0, 0.0};
  std::vector<double> f_sum_a(k, 0.0);
  double f_total = 0.0;
  for (const std::size_t i : order) {
    const int y = dataset.label(i);
    const int a = dataset.attribute(i);
    f_sum_ya[y * k + a] += scored.f[i];
    cnt_ya[y * k + a] += 1.0;
    f_sum_y[y] += scored.f[i];
    cnt_y[y] += 1.0;
    f_sum_a[a] += scored.f[i];
    f_total += scored.f[i];
  }
  for (int y = 0; y < 2; ++y) {
    if (cnt_y[y] == 0.0) continue;
    const double mean_y = f_sum_y[y] / cnt_y[y];
    for (int a = 0; a < k; ++a) {
      if (cnt_ya[y * k + a] == 0.0) continue;
      const double mean_ya = f_sum_ya[y * k + a] / cnt_ya[y * k + a];
      report.sep += (cnt_ya[y * k + a] / static_cast<double>(n)) * std::abs(mean_ya - mean_y);
    }
  }
  const double f_mean = f_total / static_cast<double>(n);
  for (int a = 0; a < k; ++a) {
    if (group_count[a] == 0.0) continue;
    report.ind +=
        (group_count[a] / static_cast<double>(n)) * std::abs(f_sum_a[a] / group_count[a] - f_mean);
  }

  report.num_buckets = b;
  report.binning_mode = mode_name(config.mode);
  report.n = n;
  if (loss != nullptr) report.loss_name = loss->name();
  report.excess_risk = excess;
  return report;
}

GapReport exact_gaps_tabular(const TabularInstance& instance, const Score& score) {
  const int k = instance.num_groups();
  const auto& cells = instance.cells();

  // Group support cells by their exact score value (score levels).
  std::map<double, std::vector<std::size_t>> levels;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    levels[instance.cell_score(score, cells[c])].push_back(c);
  }

  GapReport report;
  report.per_group_suf.assign(k, 0.0);
  report.per_group_cal.assign(k, 0.0);
  std::vector<double> p_a(k, 0.0);
  for (const TabularCell& cell : cells) p_a[cell.a] += cell.mass;

  for (const auto& [value, level_cells] : levels) {
    double mass_level = 0.0, y_level = 0.0;
    std::vector<double> mass_a(k, 0.0), y_a(k, 0.0);
    for (std::size_t c : level_cells) {
      mass_level += cells[c].mass;
      y_level += cells[c].mass * cells[c].p_y1;
      mass_a[cells[c].a] += cells[c].mass;
      y_a[cells[c].a] += cells[c].mass * cells[c].p_y1;
    }
    if (mass_level <= 0.0) continue;
    const double g = y_level / mass_level;  // E[Y | f = value]
    for (int a = 0; a < k; ++a) {
      if (mass_a[a] <= 0.0) continue;
      const double g_a = y_a[a] / mass_a[a];  // E[Y | f = value, A = a]
      report.suf += mass_a[a] * std::abs(g - g_a);
      report.cal += mass_a[a] * std::abs(value - g_a);
      report.per_group_suf[a] += mass_a[a] * std::abs(g - g_a);
      report.per_group_cal[a] += mass_a[a] * std::abs(value - g_a);
    }
  }
  for (int a = 0; a < k; ++a) {
    if (p_a[a] > 0.0) {
      report.per_group_suf[a] /= p_a[a];
      report.per_group_cal[a] /= p_a[a];
    }
  }
  report.single_group_cal = report.per_group_cal;

  // Separation: E[f | Y, A] vs E[f | Y], weighting cells by mass * P(Y|cell).
  std::vector<double> fw_ya(2 * k, 0.0), w_ya(2 * k, 0.0);
  double fw_y[2] = {0.0, 0.0}, w_y[2] = {0.0, 0.0};
  std::vector<double> fw_a(k, 0.0);
  double f_mean = 0.0;
  for (const TabularCell& cell : cells) {
    const double f = instance.cell_score(score, cell);
    const double w1 = cell.mass * cell.p_y1;
    const double w0 = cell.mass * (1.0 - cell.p_y1);
    fw_ya[k + cell.a] += w1 * f;
    w_ya[k + cell.a] += w1;
    fw_ya[cell.a] += w0 * f;
    w_ya[cell.a] += w0;
    fw_y[1] += w1 * f;
    w_y[1] += w1;
    fw_y[0] += w0 * f;
    w_y[0] += w0;
    fw_a[cell.a] += cell.mass * f;
    f_mean += cell.mass * f;
  }
  for (int y = 0; y < 2; ++y) {
    if (w_y[y] <= 0.0) continue;
    const double mean_y = fw_y[y] / w_y[y];
    for (int a = 0; a < k; ++a) {
      if (w_ya[y * k + a] <= 0.0) continue;
      report.sep += w_ya[y * k + a] * std::abs(fw_ya[y * k + a] / w_ya[y * k + a] - mean_y);
    }
  }
  for (int a = 0; a < k; ++a) {
    if (p_a[a] > 0.0) report.ind += p_a[a] * std::abs(fw_a[a] / p_a[a] - f_mean);
  }

  report.binning_mode = "exact";
  report.num_buckets = 0;
  report.n = 0;
  return report;
}

std::vector<PlotRow> calibration_plot_data(const LabeledDataset& dataset, const Score& score,
                                           const BinningConfig& config) {
  std::vector<double> values(dataset.size());
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    values[i] = eval_score(score, dataset.features(i));
  }
  return calibration_plot_data(dataset, values, config);
}

std::vector<PlotRow> calibration_plot_data(const LabeledDataset& dataset,
                                           std::span<const double> values,
                                           const BinningConfig& config) {
  const int b = config.num_buckets;
  const int k = dataset.num_groups();
  ScoredDataset scored;
  scored.f.assign(values.begin(), values.end());
  scored.bucket = assign_buckets(scored.f, config);

  std::vector<long> count(static_cast<std::size_t>(b) * k, 0), pos(static_cast<std::size_t>(b) * k, 0);
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const int cell = scored.bucket[i] * k + dataset.attribute(i);
    count[cell] += 1;
    pos[cell] += dataset.label(i);
  }

  std::vector<PlotRow> rows;
  for (int j = 0; j < b; ++j) {
    for (int a = 0; a < k; ++a) {
      const int cell = j * k + a;
      if (count[cell] < config.min_cell) continue;  // mirror the missing-point rule
      PlotRow row;
      row.bucket = j;
      row.group = a;
      row.count = count[cell];
      row.positives = pos[cell];
      row.rate = static_cast<double>(pos[cell]) / static_cast<double>(count[cell]);
      // 95% Wald interval, clipped to [0, 1].
      const double half =
          1.96 * std::sqrt(row.rate * (1.0 - row.rate) / static_cast<double>(count[cell]));
      row.ci_low = std::max(0.0, row.rate - half);
      row.ci_high = std::min(1.0, row.rate + half);
      rows.push_back(row);
    }
  }
  return rows;
}

void write_plot_csv(std::ostream& out, const std::vector<PlotRow>& rows) {
  out << "bucket,group,count,positives,rate,ci_low,ci_high\n";
  char buf[128];
  for (const PlotRow& row : rows) {
    std::snprintf(buf, sizeof(buf), "%d,%d,%ld,%ld,%.17g,%.17g,%.17g\n", row.bucket, row.group,
                  row.count, row.positives, row.rate, row.ci_low, row.ci_high);
    out << buf;
  }
}

}  // namespace fairgap
