#include "fairgap/score.hpp"

#include <algorithm>
#include <cmath>

#include "fairgap/errors.hpp"

namespace fairgap {

namespace {

double clamp01(double v) { return std::min(1.0, std::max(0.0, v)); }

// Recovers the support id from a one-hot feature vector (index of the largest
// component); this is how TableScores evaluate on sampled instance data.
int one_hot_index(std::span<const double> x) {
  std::size_t best = 0;
  for (std::size_t j = 1; j < x.size(); ++j) {
    if (x[j] > x[best]) best = j;
  }
  return static_cast<int>(best);
}

}  // namespace

double eval_score(const Score& score, std::span<const double> x) {
  struct Visitor {
    std::span<const double> x;

    double operator()(const ConstantScore& s) const { return clamp01(s.value); }

    double operator()(const LinearCircleScore& s) const {
      if (x.size() != 2) throw DimensionMismatchError(0);
      return clamp01(0.5 + (s.theta[0] * x[0] + s.theta[1] * x[1]) / 4.0);
    }

    double operator()(const LogisticScore& s) const {
      if (x.size() != s.weights.size()) throw DimensionMismatchError(0);
      double z = s.bias;
      for (std::size_t j = 0; j < x.size(); ++j) z += s.weights[j] * x[j];
      return 1.0 / (1.0 + std::exp(-z));
    }

    double operator()(const TableScore& s) const {
      const int id = one_hot_index(x);
      if (id < 0 || static_cast<std::size_t>(id) >= s.values.size())
        throw UnknownSupportPointError(id);
      return clamp01(s.values[id]);
    }

    double operator()(const BayesScore&) const {
      throw UnsupportedScoreVariantError("Bayes score needs a tabular instance, not features");
    }
  };
  return std::visit(Visitor{x}, score);
}

}  // namespace fairgap
