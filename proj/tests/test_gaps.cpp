#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fairgap/bounds.hpp"
#include "fairgap/errors.hpp"
#include "fairgap/gaps.hpp"
#include "fairgap/rng.hpp"

using namespace fairgap;

namespace {

// Four samples (f, y, a): (0.2,0,0), (0.2,1,1), (0.8,1,0), (0.8,1,1) with the
// score level encoded one-hot so a TableScore reproduces f.
LabeledDataset four_sample_fixture() {
  return LabeledDataset::from_dense({1, 0, 1, 0, 0, 1, 0, 1}, 2, {0, 1, 1, 1}, {0, 1, 0, 1}, 2);
}

TabularInstance constant_per_group_instance() {
  // f^B is constant per group: q = (0.3, 0.7), equal group mass.
  return TabularInstance::validated({{0, 0, 0.5, 0.3}, {1, 1, 0.5, 0.7}});
}

}  // namespace

TEST_CASE("equal-width bucket assignment") {
  BinningConfig config;
  config.num_buckets = 10;
  const std::vector<double> values{0.05, 0.15, 0.95, 1.0};
  CHECK(assign_buckets(values, config) == std::vector<int>{0, 1, 9, 9});

  const std::vector<double> bad{0.5, 1.2};
  CHECK_THROWS_AS(assign_buckets(bad, config), ValueOutOfRangeError);
}

TEST_CASE("quantile bucket assignment sends boundary values down") {
  BinningConfig config;
  config.num_buckets = 2;
  config.mode = BinningMode::Quantile;
  // Median boundary interpolates to 0.25; 0.1 and 0.2 stay below it.
  const std::vector<double> values{0.1, 0.2, 0.3, 0.4};
  CHECK(assign_buckets(values, config) == std::vector<int>{0, 0, 1, 1});
}

TEST_CASE("binning estimator on the four-sample fixture") {
  const LabeledDataset ds = four_sample_fixture();
  BinningConfig config;
  config.num_buckets = 2;
  const GapReport report = estimate_gaps(ds, Score{TableScore{{0.2, 0.8}}}, config);
  // Bucket 0: g = 1/2, per-group means 0 and 1; bucket 1: g = 1.
  CHECK(report.suf == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(report.cal == doctest::Approx(0.35).epsilon(1e-15));
  CHECK(report.n == 4);
  CHECK(report.binning_mode == "equal_width");
}

TEST_CASE("constant score on equal base rates has zero suf and ind") {
  // Both groups have base rate 1/2.
  const LabeledDataset ds =
      LabeledDataset::from_dense({0, 0, 0, 0}, 1, {1, 0, 1, 0}, {0, 0, 1, 1}, 2);
  BinningConfig config;
  const GapReport report = estimate_gaps(ds, Score{ConstantScore{0.5}}, config);
  CHECK(report.suf == 0.0);
  CHECK(report.ind == 0.0);
}

TEST_CASE("perfect predictor has zero separation gap") {
  const LabeledDataset ds =
      LabeledDataset::from_dense({1, 0, 0, 1, 1, 0, 0, 1}, 2, {0, 1, 0, 1}, {0, 0, 1, 1}, 2);
  BinningConfig config;
  const GapReport report = estimate_gaps(ds, Score{TableScore{{0.0, 1.0}}}, config);
  CHECK(report.sep == 0.0);
}

TEST_CASE("sample order never changes the estimates") {
  Rng rng(3);
  const TabularInstance instance = random_instance(rng);
  const TableScore table = random_table_score(rng, instance.num_x());
  const LabeledDataset ds = instance.sample(500, 17);

  // Reverse the sample order.
  std::vector<double> flat;
  std::vector<int> labels, attrs;
  for (std::size_t i = ds.size(); i-- > 0;) {
    const auto features = ds.features(i);
    flat.insert(flat.end(), features.begin(), features.end());
    labels.push_back(ds.label(i));
    attrs.push_back(ds.attribute(i));
  }
  const LabeledDataset reversed = LabeledDataset::from_dense(
      std::move(flat), ds.dim(), std::move(labels), std::move(attrs), ds.num_groups());

  for (const BinningMode mode : {BinningMode::EqualWidth, BinningMode::Quantile}) {
    BinningConfig config;
    config.mode = mode;
    const GapReport a = estimate_gaps(ds, Score{table}, config);
    const GapReport b = estimate_gaps(reversed, Score{table}, config);
    CHECK(a.suf == b.suf);
    CHECK(a.cal == b.cal);
    CHECK(a.sep == b.sep);
    CHECK(a.ind == b.ind);
  }
}

TEST_CASE("exact gaps: calibrated Bayes score is sufficient and calibrated") {
  Rng rng(5);
  for (int i = 0; i < 50; ++i) {
    const TabularInstance instance = random_instance(rng);
    const GapReport report = exact_gaps_tabular(instance, Score{BayesScore{}});
    CHECK(report.suf <= 1e-12);
    CHECK(report.cal <= 1e-12);
  }
}

TEST_CASE("exact gaps: constant score collapses to base-rate deviations") {
  const TabularInstance instance = constant_per_group_instance();
  const GapReport constant = exact_gaps_tabular(instance, Score{ConstantScore{0.5}});
  CHECK(constant.suf == doctest::Approx(0.2).epsilon(1e-15));

  const GapReport bayes = exact_gaps_tabular(instance, Score{BayesScore{}});
  CHECK(bayes.ind == doctest::Approx(0.2).epsilon(1e-15));
}

TEST_CASE("estimator converges to the exact oracle") {
  Rng rng(29);
  for (int i = 0; i < 5; ++i) {
    const TabularInstance instance = random_instance(rng);
    const TableScore table = random_table_score(rng, instance.num_x());
    const GapReport exact = exact_gaps_tabular(instance, Score{table});
    BinningConfig config;
    const GapReport est =
        estimate_gaps(instance.sample(20000, derive_seed(31, i)), Score{table}, config);
    CHECK(std::abs(est.sep - exact.sep) < 0.04);
    CHECK(std::abs(est.ind - exact.ind) < 0.04);
  }
}

TEST_CASE("calibration plot rows use the Wald interval") {
  // One bucket/group cell with k = 3 of m = 10.
  std::vector<double> flat(10, 0.0);
  const LabeledDataset ds = LabeledDataset::from_dense(
      std::move(flat), 1, {1, 1, 1, 0, 0, 0, 0, 0, 0, 0}, std::vector<int>(10, 0), 1);
  BinningConfig config;
  const std::vector<PlotRow> rows =
      calibration_plot_data(ds, Score{ConstantScore{0.55}}, config);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].bucket == 5);
  CHECK(rows[0].rate == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(rows[0].ci_low == doctest::Approx(0.015968).epsilon(1e-3));
  CHECK(rows[0].ci_high == doctest::Approx(0.584032).epsilon(1e-3));
}

TEST_CASE("plot rows: degenerate and undersized cells") {
  // k = 0 of m = 5 collapses to [0, 0]; a lone sample in another group is
  // dropped by the min_cell rule.
  const LabeledDataset ds = LabeledDataset::from_dense(
      {0, 0, 0, 0, 0, 0}, 1, {0, 0, 0, 0, 0, 1}, {0, 0, 0, 0, 0, 1}, 2);
  BinningConfig config;
  const std::vector<PlotRow> rows = calibration_plot_data(ds, Score{ConstantScore{0.1}}, config);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].group == 0);
  CHECK(rows[0].rate == 0.0);
  CHECK(rows[0].ci_low == 0.0);
  CHECK(rows[0].ci_high == 0.0);
}

TEST_CASE("plot CSV serialization") {
  std::ostringstream out;
  write_plot_csv(out, {{0, 1, 10, 3, 0.3, 0.016, 0.584}});
  CHECK(out.str() ==
        "bucket,group,count,positives,rate,ci_low,ci_high\n"
        "0,1,10,3,0.29999999999999999,0.016,0.58399999999999996\n");
}

TEST_CASE("gap estimates stay inside the unit interval") {
  Rng rng(57);
  for (int i = 0; i < 10; ++i) {
    const TabularInstance instance = random_instance(rng);
    const TableScore table = random_table_score(rng, instance.num_x());
    BinningConfig config;
    config.num_buckets = 4;
    config.mode = i % 2 == 0 ? BinningMode::EqualWidth : BinningMode::Quantile;
    const GapReport report = estimate_gaps(instance.sample(512, i), Score{table}, config);
    for (double v : {report.suf, report.cal, report.sep, report.ind}) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
  }
}
