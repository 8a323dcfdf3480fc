#include "fairgap/bounds.hpp"

#include <cmath>
#include <map>

#include "fairgap/errors.hpp"

namespace fairgap {

namespace {

constexpr double kLn2 = 0.6931471805599453;

}  // namespace

SufCalUpper suf_cal_upper(double excess, double kappa, const std::vector<double>* p_a) {
  if (kappa <= 0.0) throw NonpositiveKappaError();
  if (excess < 0.0) throw NegativeExcessError(excess);

  SufCalUpper out;
  out.average = 4.0 * std::sqrt(excess / kappa);
  if (p_a != nullptr) {
    out.per_group.reserve(p_a->size());
    out.single_group.reserve(p_a->size());
    for (double mass : *p_a) {
      if (mass <= 0.0) throw GroupWithZeroMassError(static_cast<int>(out.per_group.size()));
      out.per_group.push_back(2.0 * std::sqrt(excess / (mass * kappa)));
      out.single_group.push_back(4.0 / std::sqrt(kappa) * std::sqrt(excess) / mass);
    }
  }
  return out;
}

double SeparationConstants::sep_lower_at(double excess, double kappa) const {
  return noise * q_gap - 2.0 * std::sqrt(excess / kappa);
}

double SeparationConstants::ind_lower_at(double excess, double kappa) const {
  return q_gap - 2.0 * std::sqrt(excess / kappa);
}

SeparationConstants separation_constants(const TabularInstance& instance) {
  const GroupStats stats = tabular_group_stats(instance);
  const double var_y = stats.q_bar * (1.0 - stats.q_bar);
  if (var_y <= 0.0) throw DegenerateLabelError();

  SeparationConstants out;
  for (std::size_t a = 0; a < stats.p_a.size(); ++a) {
    out.q_gap += stats.p_a[a] * std::abs(stats.q_bar - stats.q_a[a]);
  }
  double noise_num = 0.0;  // E Var[Y|X,A]
  for (const TabularCell& cell : instance.cells()) {
    noise_num += cell.mass * cell.p_y1 * (1.0 - cell.p_y1);
  }
  out.noise = noise_num / var_y;
  return out;
}

double conditional_mutual_information(const TabularInstance& instance, LogBase base) {
  // Group cells by x, then I(Y;A|X) = E_X KL(P(Y,A|x) || P(Y|x) P(A|x)).
  std::map<int, std::vector<const TabularCell*>> by_x;
  for (const TabularCell& cell : instance.cells()) by_x[cell.x].push_back(&cell);

  double info = 0.0;
  for (const auto& [x, cells] : by_x) {
    double p_x = 0.0;
    for (const TabularCell* cell : cells) p_x += cell->mass;
    if (p_x <= 0.0) continue;
    double p_y1_given_x = 0.0;
    for (const TabularCell* cell : cells) p_y1_given_x += cell->mass / p_x * cell->p_y1;
    for (const TabularCell* cell : cells) {
      const double p_a_given_x = cell->mass / p_x;
      for (int y = 0; y < 2; ++y) {
        const double p_y_given_xa = y == 1 ? cell->p_y1 : 1.0 - cell->p_y1;
        const double joint = p_a_given_x * p_y_given_xa;  // P(y, a | x)
        if (joint <= 0.0) continue;
        const double p_y_given_x = y == 1 ? p_y1_given_x : 1.0 - p_y1_given_x;
        info += p_x * joint * std::log(joint / (p_a_given_x * p_y_given_x));
      }
    }
  }
  info = std::max(0.0, info);
  return base == LogBase::Nat ? info : info / kLn2;
}

double tao_suf_upper(const TabularInstance& instance, LogBase base) {
  return std::sqrt(2.0 * kLn2 * conditional_mutual_information(instance, base));
}

Decomposition decomposition(const TabularInstance& instance, const Score& score,
                            double class_min_risk, const BregmanLoss& loss) {
  if (loss.kind != LossKind::Square) throw NotSquareLossError();

  Decomposition out;
  const TableScore f_u = instance.uncalibrated_bayes();
  const double l_score = tabular_risk(loss, score, instance);
  const double l_fu = tabular_risk(loss, Score{f_u}, instance);
  out.term_i = l_score - class_min_risk;
  out.term_ii = class_min_risk - l_fu;

  // E_X Var_A[f^B | X]: per x, the mass-weighted variance of p_y1 across a.
  std::map<int, std::vector<const TabularCell*>> by_x;
  for (const TabularCell& cell : instance.cells()) by_x[cell.x].push_back(&cell);
  for (const auto& [x, cells] : by_x) {
    double p_x = 0.0, mean = 0.0, second = 0.0;
    for (const TabularCell* cell : cells) p_x += cell->mass;
    if (p_x <= 0.0) continue;
    for (const TabularCell* cell : cells) {
      mean += cell->mass / p_x * cell->p_y1;
      second += cell->mass / p_x * cell->p_y1 * cell->p_y1;
    }
    out.term_iii += p_x * (second - mean * mean);
  }

  const double excess = excess_risk(loss, score, instance);
  out.sum_check = std::abs(out.term_i + out.term_ii + out.term_iii - excess);
  return out;
}

BayesConditionalMeans bayes_conditional_means(const TabularInstance& instance) {
  const GroupStats stats = tabular_group_stats(instance);
  const int k = instance.num_groups();

  // Z_A = E[(f^B)^2 | A] and its unconditional counterpart.
  std::vector<double> z_a(k, 0.0);
  double z_bar = 0.0;
  for (const TabularCell& cell : instance.cells()) {
    z_a[cell.a] += cell.mass * cell.p_y1 * cell.p_y1;
    z_bar += cell.mass * cell.p_y1 * cell.p_y1;
  }

  BayesConditionalMeans out;
  out.given_y1_a.resize(k);
  out.given_y0_a.resize(k);
  for (int a = 0; a < k; ++a) {
    if (stats.q_a[a] <= 0.0 || stats.q_a[a] >= 1.0) throw DegenerateGroupLabelError(a);
    z_a[a] /= stats.p_a[a];
    out.given_y1_a[a] = z_a[a] / stats.q_a[a];
    out.given_y0_a[a] = (stats.q_a[a] - z_a[a]) / (1.0 - stats.q_a[a]);
  }
  if (stats.q_bar <= 0.0 || stats.q_bar >= 1.0) throw DegenerateLabelError();
  out.given_y1 = z_bar / stats.q_bar;
  out.given_y0 = (stats.q_bar - z_bar) / (1.0 - stats.q_bar);
  return out;
}

void attach_verdicts(GapReport& report, const BoundCatalog& catalog, double tolerance) {
  report.tolerance = tolerance;
  for (const auto& [name, entry] : catalog) {
    // Pick the gap the named bound constrains.
    double gap = 0.0;
    bool needs_excess = false;
    if (name == "suf_cal_upper") {
      gap = std::max(report.suf, report.cal);
      needs_excess = true;
    } else if (name.starts_with("per_group_upper(")) {
      const int a = std::stoi(name.substr(16));
      gap = std::max(report.per_group_suf.at(a), report.per_group_cal.at(a));
      needs_excess = true;
    } else if (name.starts_with("single_group_upper(")) {
      const int a = std::stoi(name.substr(19));
      gap = report.single_group_cal.at(a);
      needs_excess = true;
    } else if (name == "sep_lower") {
      gap = report.sep;
    } else if (name == "ind_lower") {
      gap = report.ind;
    } else if (name == "tao_suf_upper") {
      gap = report.suf;
    } else {
      throw Error("unknown bound name: " + name);
    }
    if (needs_excess && !report.excess_risk.has_value()) throw MissingExcessRiskError();

    BoundVerdict verdict;
    verdict.value = entry.value;
    verdict.is_lower = entry.is_lower;
    verdict.slack = entry.is_lower ? gap - entry.value : entry.value - gap;
    verdict.satisfied = verdict.slack >= -tolerance;
    report.bounds[name] = verdict;
  }
}

BoundCatalog build_catalog(const TabularInstance& instance, const Score& score,
                           const BregmanLoss& loss) {
  const double excess = excess_risk(loss, score, instance);
  const GroupStats stats = tabular_group_stats(instance);
  const SufCalUpper uppers = suf_cal_upper(excess, loss.kappa, &stats.p_a);

  BoundCatalog catalog;
  catalog["suf_cal_upper"] = {uppers.average, false};
  for (std::size_t a = 0; a < stats.p_a.size(); ++a) {
    catalog["per_group_upper(" + std::to_string(a) + ")"] = {uppers.per_group[a], false};
    catalog["single_group_upper(" + std::to_string(a) + ")"] = {uppers.single_group[a], false};
  }
  const SeparationConstants constants = separation_constants(instance);
  catalog["sep_lower"] = {constants.sep_lower_at(excess, loss.kappa), true};
  catalog["ind_lower"] = {constants.ind_lower_at(excess, loss.kappa), true};
  return catalog;
}

TabularInstance random_instance(Rng& rng, int min_x, int max_x, int min_k, int max_k) {
  const int num_x = min_x + rng.uniform_int(max_x - min_x + 1);
  const int num_a = min_k + rng.uniform_int(max_k - min_k + 1);

  // Dirichlet-uniform masses over the full grid via normalized Exp(1) draws.
  std::vector<TabularCell> cells;
  cells.reserve(static_cast<std::size_t>(num_x) * num_a);
  double total = 0.0;
  for (int x = 0; x < num_x; ++x) {
    for (int a = 0; a < num_a; ++a) {
      TabularCell cell;
      cell.x = x;
      cell.a = a;
      cell.mass = -std::log(1.0 - rng.uniform());
      cell.p_y1 = rng.uniform(0.05, 0.95);
      total += cell.mass;
      cells.push_back(cell);
    }
  }
  double running = 0.0;
  for (std::size_t c = 0; c + 1 < cells.size(); ++c) {
    cells[c].mass /= total;
    running += cells[c].mass;
  }
  cells.back().mass = 1.0 - running;  // exact unit total despite rounding
  return TabularInstance::validated(std::move(cells));
}

TableScore random_table_score(Rng& rng, int num_x) {
  TableScore table;
  table.values.reserve(num_x);
  for (int x = 0; x < num_x; ++x) table.values.push_back(rng.uniform());
  return table;
}

}  // namespace fairgap
