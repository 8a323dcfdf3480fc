#pragma once

#include <string>
#include <string_view>

#include "fairgap/dataset.hpp"
#include "fairgap/instance.hpp"
#include "fairgap/score.hpp"

namespace fairgap {

enum class LossKind { Square, Logistic };

// A Bregman loss l(z, y) = g(y) - g(z) - g'(z)(y - z) together with its
// strong-convexity constant kappa (l(z,y) >= kappa (z-y)^2).
//
// The logistic loss is taken in log base 2: g(z) = z log2 z + (1-z) log2(1-z),
// so l(z, y) = KL(Bern(y) || Bern(z)) in bits and Pinsker's inequality gives
// kappa = 2/log 2. (In nats the constant would be 2; the bits convention is
// the one under which kappa = 2/log 2 certifies.)
struct BregmanLoss {
  LossKind kind = LossKind::Square;
  double kappa = 1.0;
  double clamp_eps = 1e-12;

  static BregmanLoss square();
  static BregmanLoss logistic();
  // Accepts "square" | "logistic". Throws Error otherwise.
  static BregmanLoss from_name(std::string_view name);
  const char* name() const;
};

// l(z, y); z is clamped to [clamp_eps, 1-clamp_eps] for the logistic kind.
// y may be fractional (the Bregman divergence extension), enabling
// l(f, f') checks.
double loss_eval(const BregmanLoss& loss, double z, double y);

// Potential g and its derivative, exposed for the Bregman-identity check.
double loss_potential(const BregmanLoss& loss, double z);
double loss_potential_grad(const BregmanLoss& loss, double z);

// Mean loss of the score over the dataset.
double empirical_risk(const BregmanLoss& loss, const Score& score, const LabeledDataset& dataset);

// Exact population risk L(f) on a TabularInstance; with BayesScore this is the
// Bayes risk L*.
double tabular_risk(const BregmanLoss& loss, const Score& score, const TabularInstance& instance);

// L(f) - L*. Tiny negative values (numerical noise) are floored at 0; values
// below -1e-10 throw NegativeExcessError (caller bug).
double excess_risk(const BregmanLoss& loss, const Score& score, const TabularInstance& instance);

// Minimum over a (z, y') grid of l(z, y') - kappa_override (z - y')^2; a
// nonnegative value certifies the strong-convexity assumption numerically.
// Grid spans [1e-4, 1 - 1e-4] with grid_resolution points per axis.
double strong_convexity_margin(const BregmanLoss& loss, int grid_resolution);
double strong_convexity_margin(const BregmanLoss& loss, int grid_resolution,
                               double kappa_override);

}  // namespace fairgap
