#include <doctest.h>

#include "fairgap/bounds.hpp"
#include "fairgap/dataset.hpp"
#include "fairgap/errors.hpp"
#include "fairgap/gaps.hpp"
#include "fairgap/instance.hpp"
#include "fairgap/rng.hpp"
#include "fairgap/score.hpp"

using namespace fairgap;

namespace {

RawSample row(std::vector<double> x, double y, std::string a) {
  return {std::move(x), y, std::move(a)};
}

TabularInstance two_cell_instance() {
  return TabularInstance::validated({{0, 0, 0.5, 0.3}, {0, 1, 0.5, 0.7}});
}

}  // namespace

TEST_CASE("validate_dataset densifies attributes by first appearance") {
  const LabeledDataset ds = validate_dataset(
      {row({1.0}, 1, "M"), row({2.0}, 0, "F"), row({3.0}, 1, "M"), row({4.0}, 1, "F")});
  CHECK(ds.num_groups() == 2);
  CHECK(ds.dim() == 1);
  CHECK(ds.attribute(0) == 0);  // M seen first
  CHECK(ds.attribute(1) == 1);
  CHECK(ds.group_names() == std::vector<std::string>{"M", "F"});
}

TEST_CASE("validate_dataset rejects bad input") {
  CHECK_THROWS_AS(validate_dataset({}), EmptyDatasetError);
  CHECK_THROWS_AS(
      validate_dataset({row({1.0}, 0, "a"), row({1.0, 2.0}, 0, "a")}),
      DimensionMismatchError);
  try {
    validate_dataset({row({1.0}, 0, "a"), row({1.0}, 1, "a"), row({1.0}, 0, "a"),
                      row({1.0}, 2, "a")});
    FAIL("expected NonBinaryLabelError");
  } catch (const NonBinaryLabelError& e) {
    CHECK(e.row == 3);
  }
}

TEST_CASE("group_stats counts masses and base rates") {
  const LabeledDataset ds = validate_dataset(
      {row({0.0}, 1, "0"), row({0.0}, 0, "0"), row({0.0}, 1, "1"), row({0.0}, 1, "1")});
  const GroupStats stats = group_stats(ds);
  CHECK(stats.p_a == std::vector<double>{0.5, 0.5});
  CHECK(stats.q_a == std::vector<double>{0.5, 1.0});
  CHECK(stats.q_bar == doctest::Approx(0.75).epsilon(1e-15));
}

TEST_CASE("group_stats degenerate cases") {
  const LabeledDataset zeros =
      validate_dataset({row({0.0}, 0, "a"), row({0.0}, 0, "b")});
  const GroupStats s0 = group_stats(zeros);
  CHECK(s0.q_a == std::vector<double>{0.0, 0.0});
  CHECK(s0.q_bar == 0.0);

  const LabeledDataset single = validate_dataset({row({0.0}, 1, "a"), row({0.0}, 0, "a")});
  const GroupStats s1 = group_stats(single);
  CHECK(s1.p_a == std::vector<double>{1.0});
  CHECK(s1.q_bar == s1.q_a[0]);
}

TEST_CASE("tabular_group_stats enumerates exactly") {
  const GroupStats stats = tabular_group_stats(two_cell_instance());
  CHECK(stats.p_a == std::vector<double>{0.5, 0.5});
  CHECK(stats.q_a[0] == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(stats.q_a[1] == doctest::Approx(0.7).epsilon(1e-15));
  CHECK(stats.q_bar == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("tabular_group_stats rejects empty groups and keeps symmetry") {
  CHECK_THROWS_AS(
      tabular_group_stats(TabularInstance::validated({{0, 0, 1.0, 0.5}, {1, 1, 0.0, 0.5}})),
      GroupWithZeroMassError);

  const TabularInstance uniform = TabularInstance::validated(
      {{0, 0, 0.25, 0.4}, {0, 1, 0.25, 0.4}, {1, 0, 0.25, 0.4}, {1, 1, 0.25, 0.4}});
  const GroupStats stats = tabular_group_stats(uniform);
  CHECK(stats.q_a[0] == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(stats.q_a[1] == doctest::Approx(0.4).epsilon(1e-15));
}

TEST_CASE("q_bar equals the p-weighted mean of q for random instances") {
  Rng rng(7);
  for (int i = 0; i < 50; ++i) {
    const TabularInstance instance = random_instance(rng);
    const GroupStats stats = tabular_group_stats(instance);
    double weighted = 0.0;
    for (std::size_t a = 0; a < stats.p_a.size(); ++a) weighted += stats.p_a[a] * stats.q_a[a];
    CHECK(std::abs(weighted - stats.q_bar) < 1e-12);
  }
}

TEST_CASE("sampled group stats converge to the exact ones") {
  Rng rng(11);
  const TabularInstance instance = random_instance(rng);
  const GroupStats exact = tabular_group_stats(instance);
  const GroupStats sampled = group_stats(instance.sample(100000, 13));
  for (std::size_t a = 0; a < exact.p_a.size(); ++a) {
    CHECK(std::abs(exact.p_a[a] - sampled.p_a[a]) < 0.01);
    CHECK(std::abs(exact.q_a[a] - sampled.q_a[a]) < 0.01);
  }
}

TEST_CASE("relabeling groups leaves downstream gaps unchanged") {
  // Swap group ids 0 and 1 of a two-group instance; every gap must agree.
  Rng rng(23);
  for (int i = 0; i < 20; ++i) {
    const TabularInstance instance = random_instance(rng, 2, 4, 2, 2);
    std::vector<TabularCell> swapped = instance.cells();
    for (TabularCell& cell : swapped) cell.a = 1 - cell.a;
    const TabularInstance permuted = TabularInstance::validated(std::move(swapped));
    const TableScore score = random_table_score(rng, instance.num_x());

    const GapReport a = exact_gaps_tabular(instance, Score{score});
    const GapReport b = exact_gaps_tabular(permuted, Score{score});
    CHECK(a.suf == doctest::Approx(b.suf).epsilon(1e-14));
    CHECK(a.cal == doctest::Approx(b.cal).epsilon(1e-14));
    CHECK(a.sep == doctest::Approx(b.sep).epsilon(1e-14));
    CHECK(a.ind == doctest::Approx(b.ind).epsilon(1e-14));
    CHECK(a.per_group_suf[0] == doctest::Approx(b.per_group_suf[1]).epsilon(1e-14));
  }
}

TEST_CASE("score evaluation per variant") {
  const std::vector<double> x2{1.0, 0.0};
  CHECK(eval_score(Score{ConstantScore{0.4}}, x2) == 0.4);
  CHECK(eval_score(Score{LinearCircleScore{{2.0, 0.0}}}, x2) == doctest::Approx(1.0));
  CHECK(eval_score(Score{LogisticScore{{0.0, 0.0}, 0.0}}, x2) == doctest::Approx(0.5));

  const std::vector<double> one_hot{0.0, 1.0, 0.0};
  CHECK(eval_score(Score{TableScore{{0.1, 0.6, 0.9}}}, one_hot) == 0.6);
  CHECK_THROWS_AS(eval_score(Score{BayesScore{}}, x2), UnsupportedScoreVariantError);
}

TEST_CASE("instance validation") {
  CHECK_THROWS_AS(TabularInstance::validated({}), InvalidInstanceError);
  CHECK_THROWS_AS(TabularInstance::validated({{0, 0, 0.5, 0.5}, {0, 0, 0.5, 0.5}}),
                  InvalidInstanceError);
  CHECK_THROWS_AS(TabularInstance::validated({{0, 0, 0.9, 0.5}}), InvalidInstanceError);
  CHECK_THROWS_AS(TabularInstance::validated({{0, 0, 1.0, 1.5}}), InvalidInstanceError);
}
