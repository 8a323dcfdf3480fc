#include "fairgap/losses.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fairgap/errors.hpp"

namespace fairgap {

namespace {

constexpr double kLn2 = 0.6931471805599453;

double clamp(double z, double eps) { return std::min(1.0 - eps, std::max(eps, z)); }

// x log2(x) with the continuous extension 0 at x = 0.
double xlog2x(double x) { return x > 0.0 ? x * std::log2(x) : 0.0; }

}  // namespace

BregmanLoss BregmanLoss::square() { return {LossKind::Square, 1.0, 1e-12}; }

BregmanLoss BregmanLoss::logistic() { return {LossKind::Logistic, 2.0 / kLn2, 1e-12}; }

BregmanLoss BregmanLoss::from_name(std::string_view name) {
  if (name == "square") return square();
  if (name == "logistic") return logistic();
  throw Error("unknown loss: " + std::string(name));
}

const char* BregmanLoss::name() const {
  return kind == LossKind::Square ? "square" : "logistic";
}

double loss_eval(const BregmanLoss& loss, double z, double y) {
  if (loss.kind == LossKind::Square) {
    const double d = z - y;
    return d * d;
  }
  // Bregman divergence of the base-2 entropy potential:
  // KL(Bern(y) || Bern(z)) in bits; reduces to -log2(z) at y = 1.
  const double zc = clamp(z, loss.clamp_eps);
  double out = -(y * std::log2(zc) + (1.0 - y) * std::log2(1.0 - zc));
  out += xlog2x(y) + xlog2x(1.0 - y);  // -H2(y), zero for binary y
  return std::max(0.0, out);
}

double loss_potential(const BregmanLoss& loss, double z) {
  if (loss.kind == LossKind::Square) return z * z;
  return xlog2x(z) + xlog2x(1.0 - z);
}

double loss_potential_grad(const BregmanLoss& loss, double z) {
  if (loss.kind == LossKind::Square) return 2.0 * z;
  const double zc = clamp(z, loss.clamp_eps);
  return (std::log(zc) - std::log(1.0 - zc)) / kLn2;
}

double empirical_risk(const BregmanLoss& loss, const Score& score,
                      const LabeledDataset& dataset) {
  double total = 0.0;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    total += loss_eval(loss, eval_score(score, dataset.features(i)), dataset.label(i));
  }
  return total / static_cast<double>(dataset.size());
}

double tabular_risk(const BregmanLoss& loss, const Score& score,
                    const TabularInstance& instance) {
  double total = 0.0;
  for (const TabularCell& cell : instance.cells()) {
    const double f = instance.cell_score(score, cell);
    total += cell.mass *
             (cell.p_y1 * loss_eval(loss, f, 1.0) + (1.0 - cell.p_y1) * loss_eval(loss, f, 0.0));
  }
  return total;
}

double excess_risk(const BregmanLoss& loss, const Score& score,
                   const TabularInstance& instance) {
  const double excess =
      tabular_risk(loss, score, instance) - tabular_risk(loss, BayesScore{}, instance);
  if (excess < -1e-10) throw NegativeExcessError(excess);
  return std::max(0.0, excess);
}

double strong_convexity_margin(const BregmanLoss& loss, int grid_resolution) {
  return strong_convexity_margin(loss, grid_resolution, loss.kappa);
}

double strong_convexity_margin(const BregmanLoss& loss, int grid_resolution,
                               double kappa_override) {
  if (kappa_override <= 0.0) throw NonpositiveKappaError();
  constexpr double kGridEps = 1e-4;  // keeps the logistic divergence finite
  double margin = std::numeric_limits<double>::infinity();
  for (int i = 0; i < grid_resolution; ++i) {
    const double z =
        kGridEps + (1.0 - 2.0 * kGridEps) * i / static_cast<double>(grid_resolution - 1);
    for (int j = 0; j < grid_resolution; ++j) {
      const double y =
          kGridEps + (1.0 - 2.0 * kGridEps) * j / static_cast<double>(grid_resolution - 1);
      const double d = z - y;
      margin = std::min(margin, loss_eval(loss, z, y) - kappa_override * d * d);
    }
  }
  return margin;
}

}  // namespace fairgap
