#pragma once

#include <array>
#include <span>
#include <variant>
#include <vector>

namespace fairgap {

// Score variants. All map features to [0,1]; only BayesScore is
// attribute-aware (it reads P(Y=1|x,a) off a TabularInstance and therefore
// cannot be evaluated on bare feature vectors).
struct ConstantScore {
  double value = 0.5;
};

// f(x) = 1/2 + <theta, x>/4 on the unit circle; ||theta|| <= 2 keeps the range
// inside [0,1] for unit-norm inputs.
struct LinearCircleScore {
  std::array<double, 2> theta{0.0, 0.0};
};

struct LogisticScore {
  std::vector<double> weights;
  double bias = 0.0;
};

// Value per feature-support id. On feature vectors the id is recovered from a
// one-hot encoding (index of the largest component).
struct TableScore {
  std::vector<double> values;
};

struct BayesScore {};

using Score = std::variant<ConstantScore, LinearCircleScore, LogisticScore, TableScore, BayesScore>;

// Evaluates a score on a feature vector, clamped to [0,1].
// Throws UnsupportedScoreVariantError for BayesScore (needs an instance) and
// UnknownSupportPointError when a TableScore id is out of range.
double eval_score(const Score& score, std::span<const double> x);

}  // namespace fairgap
