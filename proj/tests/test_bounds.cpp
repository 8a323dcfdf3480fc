#include <doctest.h>

#include <cmath>

#include "fairgap/bounds.hpp"
#include "fairgap/errors.hpp"
#include "fairgap/gaps.hpp"
#include "fairgap/rng.hpp"

using namespace fairgap;

namespace {

TabularInstance constant_per_group_instance() {
  return TabularInstance::validated({{0, 0, 0.5, 0.3}, {1, 1, 0.5, 0.7}});
}

}  // namespace

TEST_CASE("average and per-group upper bound arithmetic") {
  CHECK(suf_cal_upper(0.04, 1.0).average == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(suf_cal_upper(0.0, 1.0).average == 0.0);

  const std::vector<double> p{0.25, 0.75};
  const SufCalUpper bounds = suf_cal_upper(0.01, 2.0 / std::log(2.0), &p);
  CHECK(bounds.per_group[0] == doctest::Approx(0.2355).epsilon(1e-3));

  CHECK_THROWS_AS(suf_cal_upper(0.1, 0.0), NonpositiveKappaError);
  const std::vector<double> zero_mass{0.0, 1.0};
  CHECK_THROWS_AS(suf_cal_upper(0.1, 1.0, &zero_mass), GroupWithZeroMassError);
}

TEST_CASE("separation constants on the reference instance") {
  const TabularInstance instance = constant_per_group_instance();
  const SeparationConstants constants = separation_constants(instance);
  CHECK(constants.q_gap == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(constants.noise == doctest::Approx(0.84).epsilon(1e-12));

  // The bound is tight here: the Bayes score's separation gap equals C * Q.
  const GapReport bayes = exact_gaps_tabular(instance, Score{BayesScore{}});
  CHECK(bayes.sep == doctest::Approx(0.168).epsilon(1e-12));
  CHECK(constants.sep_lower_at(0.0, 1.0) == doctest::Approx(0.168).epsilon(1e-12));
}

TEST_CASE("separation constants degenerate cases") {
  // Deterministic labels: zero noise level, vacuous bound.
  const TabularInstance deterministic =
      TabularInstance::validated({{0, 0, 0.5, 0.0}, {1, 1, 0.5, 1.0}});
  CHECK(separation_constants(deterministic).noise == 0.0);

  // Equal base rates: Q_A = 0, both lower bounds nonpositive.
  const TabularInstance equal =
      TabularInstance::validated({{0, 0, 0.5, 0.4}, {1, 1, 0.5, 0.4}});
  const SeparationConstants constants = separation_constants(equal);
  CHECK(constants.q_gap == 0.0);
  CHECK(constants.sep_lower_at(0.01, 1.0) <= 0.0);

  const TabularInstance degenerate =
      TabularInstance::validated({{0, 0, 0.5, 1.0}, {1, 1, 0.5, 1.0}});
  CHECK_THROWS_AS(separation_constants(degenerate), DegenerateLabelError);
}

TEST_CASE("conditional mutual information bound") {
  // Y independent of A given X: zero information, zero bound, zero gap.
  const TabularInstance independent = TabularInstance::validated(
      {{0, 0, 0.25, 0.2}, {0, 1, 0.25, 0.2}, {1, 0, 0.25, 0.8}, {1, 1, 0.25, 0.8}});
  CHECK(conditional_mutual_information(independent) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(tao_suf_upper(independent) == doctest::Approx(0.0).epsilon(1e-12));
  const GapReport gap =
      exact_gaps_tabular(independent, Score{independent.uncalibrated_bayes()});
  CHECK(gap.suf <= 1e-12);

  // A a deterministic function of X also carries no extra information.
  const TabularInstance functional =
      TabularInstance::validated({{0, 0, 0.5, 0.3}, {1, 1, 0.5, 0.8}});
  CHECK(conditional_mutual_information(functional) == doctest::Approx(0.0).epsilon(1e-15));

  // Generic 2x2: the bound dominates the attribute-blind score's gap, and the
  // bit convention yields the larger bound value.
  Rng rng(71);
  for (int i = 0; i < 50; ++i) {
    const TabularInstance instance = random_instance(rng, 2, 2, 2, 2);
    const GapReport fu = exact_gaps_tabular(instance, Score{instance.uncalibrated_bayes()});
    CHECK(fu.suf <= tao_suf_upper(instance, LogBase::Nat) + 1e-9);
    CHECK(tao_suf_upper(instance, LogBase::Bit) >= tao_suf_upper(instance, LogBase::Nat));
  }
}

TEST_CASE("square-loss decomposition") {
  Rng rng(83);
  const BregmanLoss square = BregmanLoss::square();
  for (int i = 0; i < 50; ++i) {
    const TabularInstance instance = random_instance(rng, 3, 3, 2, 2);
    const Score f_u{instance.uncalibrated_bayes()};
    const double l_fu = tabular_risk(square, f_u, instance);
    const Decomposition parts = decomposition(instance, f_u, l_fu);
    CHECK(parts.term_i == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(parts.term_ii == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(parts.sum_check < 1e-10);
    CHECK(std::abs(parts.term_iii - excess_risk(square, f_u, instance)) < 1e-10);
  }

  // Full information (A is a function of X): the information term vanishes.
  const TabularInstance functional =
      TabularInstance::validated({{0, 0, 0.5, 0.3}, {1, 1, 0.5, 0.8}});
  const Score f_u{functional.uncalibrated_bayes()};
  CHECK(decomposition(functional, f_u, tabular_risk(square, f_u, functional)).term_iii ==
        doctest::Approx(0.0).epsilon(1e-15));

  CHECK_THROWS_AS(
      decomposition(functional, f_u, 0.0, BregmanLoss::logistic()), NotSquareLossError);
}

TEST_CASE("Bayes conditional means match the closed forms") {
  const TabularInstance instance = constant_per_group_instance();
  const BayesConditionalMeans means = bayes_conditional_means(instance);
  // Z_A = q_A^2 when f^B is constant per group.
  CHECK(means.given_y1_a[0] == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(means.given_y1 == doctest::Approx(0.58).epsilon(1e-12));
  CHECK(means.given_y0 == doctest::Approx(0.42).epsilon(1e-12));

  // Against direct conditional-expectation enumeration on random instances.
  Rng rng(97);
  for (int i = 0; i < 30; ++i) {
    const TabularInstance random = random_instance(rng);
    const BayesConditionalMeans closed = bayes_conditional_means(random);
    const int k = random.num_groups();
    std::vector<double> fw(2 * k, 0.0), w(2 * k, 0.0);
    for (const TabularCell& cell : random.cells()) {
      fw[k + cell.a] += cell.mass * cell.p_y1 * cell.p_y1;
      w[k + cell.a] += cell.mass * cell.p_y1;
      fw[cell.a] += cell.mass * (1.0 - cell.p_y1) * cell.p_y1;
      w[cell.a] += cell.mass * (1.0 - cell.p_y1);
    }
    for (int a = 0; a < k; ++a) {
      CHECK(std::abs(closed.given_y1_a[a] - fw[k + a] / w[k + a]) < 1e-12);
      CHECK(std::abs(closed.given_y0_a[a] - fw[a] / w[a]) < 1e-12);
    }
  }

  const TabularInstance degenerate =
      TabularInstance::validated({{0, 0, 0.5, 0.0}, {1, 1, 0.5, 0.5}});
  CHECK_THROWS_AS(bayes_conditional_means(degenerate), DegenerateGroupLabelError);
}

TEST_CASE("attach_verdicts fills slacks and flags violations") {
  GapReport report;
  report.suf = 0.1;
  report.cal = 0.05;
  report.sep = 0.1;
  report.excess_risk = 0.04;

  BoundCatalog catalog;
  catalog["suf_cal_upper"] = {0.8, false};
  catalog["sep_lower"] = {0.168, true};
  attach_verdicts(report, catalog, 1e-9);

  CHECK(report.bounds.at("suf_cal_upper").satisfied);
  CHECK(report.bounds.at("suf_cal_upper").slack == doctest::Approx(0.7).epsilon(1e-12));
  CHECK_FALSE(report.bounds.at("sep_lower").satisfied);

  GapReport no_excess;
  no_excess.suf = 0.1;
  CHECK_THROWS_AS(attach_verdicts(no_excess, catalog, 1e-9), MissingExcessRiskError);
}

TEST_CASE("theorem soundness sweep (reduced)") {
  Rng rng(123);
  for (int i = 0; i < 100; ++i) {
    const TabularInstance instance = random_instance(rng);
    const Score score{random_table_score(rng, instance.num_x())};
    const GapReport gaps = exact_gaps_tabular(instance, score);
    const GroupStats stats = tabular_group_stats(instance);

    for (const BregmanLoss& loss : {BregmanLoss::square(), BregmanLoss::logistic()}) {
      const double excess = excess_risk(loss, score, instance);
      const SufCalUpper bound = suf_cal_upper(excess, loss.kappa, &stats.p_a);
      CHECK(std::max(gaps.suf, gaps.cal) <= bound.average + 1e-9);
      for (std::size_t a = 0; a < stats.p_a.size(); ++a) {
        CHECK(std::max(gaps.per_group_suf[a], gaps.per_group_cal[a]) <=
              bound.per_group[a] + 1e-9);
        CHECK(gaps.single_group_cal[a] <= bound.single_group[a] + 1e-9);
      }

      const SeparationConstants constants = separation_constants(instance);
      CHECK(gaps.sep >= constants.sep_lower_at(excess, loss.kappa) - 1e-9);
      CHECK(gaps.ind >= constants.ind_lower_at(excess, loss.kappa) - 1e-9);
    }
  }
}

TEST_CASE("catalog construction covers every named bound") {
  Rng rng(131);
  const TabularInstance instance = random_instance(rng, 3, 3, 2, 2);
  const Score score{random_table_score(rng, instance.num_x())};
  const BregmanLoss loss = BregmanLoss::square();

  GapReport report = exact_gaps_tabular(instance, score);
  report.excess_risk = excess_risk(loss, score, instance);
  attach_verdicts(report, build_catalog(instance, score, loss), 1e-9);

  CHECK(report.bounds.contains("suf_cal_upper"));
  CHECK(report.bounds.contains("per_group_upper(0)"));
  CHECK(report.bounds.contains("single_group_upper(1)"));
  CHECK(report.bounds.contains("sep_lower"));
  CHECK(report.bounds.contains("ind_lower"));
  for (const auto& [name, verdict] : report.bounds) CHECK(verdict.satisfied);
}
