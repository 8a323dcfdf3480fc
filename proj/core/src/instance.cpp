#include "fairgap/instance.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "fairgap/errors.hpp"
#include "fairgap/rng.hpp"

namespace fairgap {

TabularInstance TabularInstance::validated(std::vector<TabularCell> cells) {
  if (cells.empty()) throw InvalidInstanceError("empty support");

  double total = 0.0;
  std::set<std::pair<int, int>> seen;
  int max_x = -1, max_a = -1;
  for (const TabularCell& cell : cells) {
    if (cell.mass < 0.0) throw InvalidInstanceError("negative mass");
    if (cell.p_y1 < 0.0 || cell.p_y1 > 1.0) throw InvalidInstanceError("p_y1 outside [0,1]");
    if (cell.x < 0 || cell.a < 0) throw InvalidInstanceError("negative id");
    if (!seen.emplace(cell.x, cell.a).second)
      throw InvalidInstanceError("duplicate (x, a) pair");
    total += cell.mass;
    max_x = std::max(max_x, cell.x);
    max_a = std::max(max_a, cell.a);
  }
  if (std::abs(total - 1.0) > 1e-12) throw InvalidInstanceError("masses do not sum to 1");

  TabularInstance inst;
  inst.cells_ = std::move(cells);
  inst.num_x_ = max_x + 1;
  inst.num_groups_ = max_a + 1;
  return inst;
}

double TabularInstance::cell_score(const Score& score, const TabularCell& cell) const {
  if (const auto* c = std::get_if<ConstantScore>(&score)) return c->value;
  if (const auto* t = std::get_if<TableScore>(&score)) {
    if (cell.x < 0 || static_cast<std::size_t>(cell.x) >= t->values.size())
      throw UnknownSupportPointError(cell.x);
    return t->values[cell.x];
  }
  if (std::holds_alternative<BayesScore>(score)) return cell.p_y1;
  throw UnsupportedScoreVariantError("tabular evaluation needs Table, Constant or Bayes");
}

TableScore TabularInstance::uncalibrated_bayes() const {
  // f^U(x) = E[Y | X=x] = sum_a mass(x,a) p(x,a) / sum_a mass(x,a).
  std::vector<double> mass_x(num_x_, 0.0), weighted(num_x_, 0.0);
  for (const TabularCell& cell : cells_) {
    mass_x[cell.x] += cell.mass;
    weighted[cell.x] += cell.mass * cell.p_y1;
  }
  TableScore table;
  table.values.resize(num_x_, 0.0);
  for (int x = 0; x < num_x_; ++x) {
    table.values[x] = mass_x[x] > 0.0 ? weighted[x] / mass_x[x] : 0.0;
  }
  return table;
}

LabeledDataset TabularInstance::sample(std::size_t n, std::uint64_t seed) const {
  // Cumulative mass for inverse-CDF sampling in fixed cell order.
  std::vector<double> cdf(cells_.size());
  double acc = 0.0;
  for (std::size_t c = 0; c < cells_.size(); ++c) {
    acc += cells_[c].mass;
    cdf[c] = acc;
  }
  cdf.back() = 1.0;

  Rng rng(seed);
  std::vector<double> flat(n * static_cast<std::size_t>(num_x_), 0.0);
  std::vector<int> labels(n), attributes(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = rng.uniform();
    const std::size_t c =
        std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin();
    const TabularCell& cell = cells_[std::min(c, cells_.size() - 1)];
    flat[i * static_cast<std::size_t>(num_x_) + static_cast<std::size_t>(cell.x)] = 1.0;
    labels[i] = rng.bernoulli(cell.p_y1) ? 1 : 0;
    attributes[i] = cell.a;
  }
  return LabeledDataset::from_dense(std::move(flat), num_x_, std::move(labels),
                                    std::move(attributes), num_groups_);
}

GroupStats tabular_group_stats(const TabularInstance& instance) {
  const int k = instance.num_groups();
  GroupStats stats;
  stats.p_a.assign(k, 0.0);
  stats.q_a.assign(k, 0.0);
  for (const TabularCell& cell : instance.cells()) {
    stats.p_a[cell.a] += cell.mass;
    stats.q_a[cell.a] += cell.mass * cell.p_y1;
  }
  for (int a = 0; a < k; ++a) {
    if (stats.p_a[a] <= 0.0) throw GroupWithZeroMassError(a);
    stats.q_a[a] /= stats.p_a[a];
    stats.q_bar += stats.p_a[a] * stats.q_a[a];
  }
  return stats;
}

}  // namespace fairgap
