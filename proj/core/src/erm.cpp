#include "fairgap/erm.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <cmath>
#include <limits>
#include <type_traits>

#include "fairgap/errors.hpp"
#include "fairgap/parallel.hpp"
#include "fairgap/rng.hpp"

namespace fairgap {

namespace {

constexpr double kLn2 = 0.6931471805599453;

double soft_threshold(double v, double threshold) {
  if (v > threshold) return v - threshold;
  if (v < -threshold) return v + threshold;
  return 0.0;
}

// Design matrix (optionally restricted to a feature subset) and label vector.
void build_design(const LabeledDataset& dataset, const std::vector<int>& subset,
                  Eigen::MatrixXd& x, Eigen::VectorXd& y) {
  const std::size_t n = dataset.size();
  std::vector<int> cols = subset;
  if (cols.empty()) {
    cols.resize(dataset.dim());
    for (int j = 0; j < dataset.dim(); ++j) cols[j] = j;
  }
  x.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(cols.size()));
  y.resize(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const auto features = dataset.features(i);
    for (std::size_t j = 0; j < cols.size(); ++j) {
      const double v = features[cols[j]];
      if (!std::isfinite(v)) throw NonFiniteFeatureError(i);
      x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
    }
    y(static_cast<Eigen::Index>(i)) = dataset.label(i);
  }
}

// Mean logistic loss in bits (matches the shipped logistic BregmanLoss).
double mean_logistic_loss(const Eigen::VectorXd& margin, const Eigen::VectorXd& y) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < margin.size(); ++i) {
    // log(1 + exp(-s*z)) with s = ±1, stable form.
    const double z = y(i) > 0.5 ? margin(i) : -margin(i);
    total += z > 0.0 ? std::log1p(std::exp(-z)) : -z + std::log1p(std::exp(z));
  }
  return total / (static_cast<double>(margin.size()) * kLn2);
}

}  // namespace

TrainResult train_logistic(const LabeledDataset& dataset, const TrainConfig& config) {
  Eigen::MatrixXd x;
  Eigen::VectorXd y;
  build_design(dataset, config.feature_subset, x, y);
  const double n = static_cast<double>(x.rows());
  const double eta = config.learning_rate;
  const double lambda = config.l1_lambda;

  Eigen::VectorXd w = Eigen::VectorXd::Zero(x.cols());
  double bias = 0.0;
  double prev_objective = std::numeric_limits<double>::infinity();
  int rising_steps = 0;
  int iter = 0;

  for (; iter < config.max_iters; ++iter) {
    const Eigen::VectorXd margin = (x * w).array() + bias;
    const Eigen::VectorXd prob = (1.0 + (-margin.array()).exp()).inverse();
    // Gradient of the mean loss in bits: (1/(n ln 2)) X^T (p - y).
    const Eigen::VectorXd residual = (prob - y) / (n * kLn2);
    const Eigen::VectorXd grad_w = x.transpose() * residual;
    const double grad_b = residual.sum();

    // Proximal step; bias is never penalized.
    Eigen::VectorXd w_next(w.size());
    for (Eigen::Index j = 0; j < w.size(); ++j) {
      w_next(j) = soft_threshold(w(j) - eta * grad_w(j), eta * lambda);
    }
    const double bias_next = bias - eta * grad_b;

    // Convergence: smooth gradient for the unpenalized problem, otherwise the
    // proximal gradient mapping (they coincide when lambda = 0).
    double residual_norm;
    if (lambda == 0.0) {
      residual_norm = std::max(grad_w.lpNorm<Eigen::Infinity>(), std::abs(grad_b));
    } else {
      residual_norm = std::max((w - w_next).lpNorm<Eigen::Infinity>() / eta, std::abs(grad_b));
    }
    if (residual_norm < config.grad_tol) break;

    w = w_next;
    bias = bias_next;

    const double objective =
        mean_logistic_loss((x * w).array() + bias, y) + lambda * w.lpNorm<1>();
    if (objective > prev_objective) {
      if (++rising_steps >= 50) throw DivergenceDetectedError();
    } else {
      rising_steps = 0;
    }
    prev_objective = objective;
  }

  TrainResult result;
  result.score.weights.assign(w.data(), w.data() + w.size());
  result.score.bias = bias;
  result.final_loss = mean_logistic_loss((x * w).array() + bias, y);
  result.iterations = iter;
  return result;
}

std::vector<double> fit_linear_score(const LabeledDataset& dataset) {
  if (dataset.size() == 0) throw EmptySampleError();
  const int d = dataset.dim();
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(d, d);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(d);
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const auto features = dataset.features(i);
    Eigen::Map<const Eigen::VectorXd> xi(features.data(), d);
    gram.noalias() += xi * xi.transpose();
    rhs.noalias() += xi * (dataset.label(i) - 0.5);
  }
  // u = 4 pinv(Gram) rhs; the SVD solve is the min-norm least-squares
  // solution, which degrades gracefully when the Gram matrix is singular.
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(gram, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(1e-12);
  const Eigen::VectorXd u = 4.0 * svd.solve(rhs);
  return std::vector<double>(u.data(), u.data() + u.size());
}

Vec2 fit_linear_circle(const LabeledDataset& dataset) {
  if (dataset.dim() != 2) throw DimensionMismatchError(0);
  const std::vector<double> u = fit_linear_score(dataset);
  return Vec2{u[0], u[1]};
}

std::vector<CurveRow> learning_curve(const CurveSource& source,
                                     const std::vector<std::size_t>& n_grid, int trials,
                                     const TrainConfig& config, std::size_t test_n,
                                     const BinningConfig& binning) {
  const BregmanLoss loss =
      config.loss == LossKind::Square ? BregmanLoss::square() : BregmanLoss::logistic();

  // One shared test set for all (n, trial) runs.
  const std::uint64_t test_seed = derive_seed(config.seed, 0x7e57, 0);
  const LabeledDataset test = std::visit(
      [&](const auto& src) -> LabeledDataset {
        using T = std::decay_t<decltype(src)>;
        if constexpr (std::is_same_v<T, TabularInstance>) {
          return src.sample(test_n, test_seed);
        } else {
          return sample_circle(src.instance, src.w, test_n, test_seed);
        }
      },
      source);

  std::vector<CurveRow> rows(n_grid.size() * static_cast<std::size_t>(trials));
  parallel_for(rows.size(), [&](std::size_t idx) {
    const std::size_t gi = idx / static_cast<std::size_t>(trials);
    const int trial = static_cast<int>(idx % static_cast<std::size_t>(trials));
    const std::size_t n = n_grid[gi];
    const std::uint64_t seed = derive_seed(config.seed, n, static_cast<std::uint64_t>(trial));

    Score score = std::visit(
        [&](const auto& src) -> Score {
          using T = std::decay_t<decltype(src)>;
          if constexpr (std::is_same_v<T, TabularInstance>) {
            const LabeledDataset train = src.sample(n, seed);
            return train_logistic(train, config).score;
          } else {
            const LabeledDataset train = sample_circle(src.instance, src.w, n, seed);
            return LinearCircleScore{fit_linear_circle(train)};
          }
        },
        source);

    const GapReport report = estimate_gaps(test, score, binning);
    CurveRow& row = rows[idx];
    row.n = n;
    row.trial = trial;
    row.suf = report.suf;
    row.cal = report.cal;
    row.sep = report.sep;
    row.ind = report.ind;
    row.test_loss = empirical_risk(loss, score, test);
  });
  return rows;
}

}  // namespace fairgap
