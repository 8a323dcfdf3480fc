#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "fairgap/dataset.hpp"
#include "fairgap/gaps.hpp"
#include "fairgap/losses.hpp"
#include "fairgap/score.hpp"
#include "fairgap/synth.hpp"

namespace fairgap {

struct TrainConfig {
  LossKind loss = LossKind::Logistic;
  double learning_rate = 0.1;
  int max_iters = 5000;
  double grad_tol = 1e-7;
  double l1_lambda = 0.0;
  std::vector<int> feature_subset;  // empty = all features
  std::uint64_t seed = 0;
};

struct TrainResult {
  LogisticScore score;
  double final_loss = 0.0;
  int iterations = 0;
};

// Full-batch proximal gradient descent on the mean logistic loss with
// soft-threshold step for L1 (bias never penalized). Weights start at 0;
// terminates when the smooth gradient's max-norm drops below grad_tol or at
// max_iters. Deterministic given (dataset order, config).
// Throws NonFiniteFeatureError and DivergenceDetectedError (objective
// increases for 50 consecutive steps).
TrainResult train_logistic(const LabeledDataset& dataset, const TrainConfig& config);

// Least squares for the circle score class f_u(x) = 1/2 + <u,x>/4:
// u = 4 pinv(sum x_i x_i^T) sum x_i (y_i - 1/2), min-norm via pseudo-inverse
// when the Gram matrix is singular. Throws EmptySampleError.
Vec2 fit_linear_circle(const LabeledDataset& dataset);

// Same normal equations for arbitrary feature dimension (used by the 4-dim
// product construction).
std::vector<double> fit_linear_score(const LabeledDataset& dataset);

// Learning-curve harness: for each (n, trial) sample a train set of size n,
// train, and estimate gaps and test loss on one shared test set of size
// test_n. Sources: a TabularInstance (logistic training on one-hot features)
// or a circle distribution with attribute direction w (least-squares fit).
struct CircleSource {
  CircleInstance instance;
  Vec2 w{0.0, 1.0};
};
using CurveSource = std::variant<TabularInstance, CircleSource>;

struct CurveRow {
  std::size_t n = 0;
  int trial = 0;
  double suf = 0.0;
  double cal = 0.0;
  double sep = 0.0;
  double ind = 0.0;
  double test_loss = 0.0;
};

std::vector<CurveRow> learning_curve(const CurveSource& source,
                                     const std::vector<std::size_t>& n_grid, int trials,
                                     const TrainConfig& config, std::size_t test_n,
                                     const BinningConfig& binning = {});

}  // namespace fairgap
