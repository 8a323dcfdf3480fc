#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "fairgap/dataset.hpp"

namespace fairgap {

using Vec2 = std::array<double, 2>;

inline double dot2(const Vec2& a, const Vec2& b) { return a[0] * b[0] + a[1] * b[1]; }
double norm2(const Vec2& a);

// Distribution on the unit circle: X uniform on S^1, Y | X ~ Bernoulli(f_theta(X))
// with f_u(x) = 1/2 + <u, x>/4. Groups are the half-circles cut by a direction w.
struct CircleInstance {
  Vec2 theta{1.0, 0.0};
  // Throws NonUnitThetaError unless ||theta|| = 1 within 1e-12.
  static CircleInstance make(Vec2 theta);
};

// Samples n points; attribute = (1 + sign<w, X>)/2, with sign 0 mapped to
// group 1. d = 2, K = 2 (a group may be empty for tiny n).
LabeledDataset sample_circle(const CircleInstance& instance, const Vec2& w, std::size_t n,
                             std::uint64_t seed);

// Phi(theta_hat; theta) = 1 - <theta, theta_hat/||theta_hat||>^2, or 1 when
// theta_hat = 0 (norm below 1e-14). The squared sine of the estimation angle.
double phi(const Vec2& theta_hat, const Vec2& theta);

// Closed-form sufficiency gap, calibration gap and square-loss excess risk of
// the linear score f_theta_hat on the circle distribution D_theta:
//   suf = sqrt(Phi)/(2 pi), cal = ||theta_hat - theta||/(2 pi) (theta_hat != 0,
//   else 1/(2 pi)), excess = ||theta_hat - theta||^2 / 32.
// The suf/cal forms assume the attribute direction resolves every score fiber
// (w not in span(theta_hat)); see quadrature_circle_gaps.
struct CircleQuantities {
  double suf = 0.0;
  double cal = 0.0;
  double excess = 0.0;
};
CircleQuantities exact_circle_quantities(const Vec2& theta_hat, const Vec2& theta);

// Independent quadrature oracle: discretizes the circle into `resolution`
// angles grouped into score fibers (pairs of angles reflected across
// theta_hat), conditions on (f-level, attribute) cells — the attribute
// resolves each fiber into its two points under the span condition — and
// integrates the gap integrands. Throws SpanViolationError when w lies in
// span(theta_hat). For theta_hat = 0 the score is constant and the cells are
// the two attribute half-circles.
struct CircleGapQuadrature {
  double suf = 0.0;
  double cal = 0.0;
};
CircleGapQuadrature quadrature_circle_gaps(const Vec2& theta_hat, const Vec2& theta, const Vec2& w,
                                           std::size_t resolution);

// Scaling-law experiment: per (n, trial) draw theta and w uniformly, sample n
// points, fit least squares, evaluate the closed forms.
struct ScalingRow {
  std::size_t n = 0;
  int trial = 0;
  double suf = 0.0;
  double cal = 0.0;
  double excess = 0.0;
};
struct ScalingStat {
  std::size_t n = 0;
  double mean_suf = 0.0, sd_suf = 0.0;
  double mean_cal = 0.0, sd_cal = 0.0;
  double mean_excess = 0.0, sd_excess = 0.0;
};
struct ScalingSummary {
  std::vector<ScalingRow> rows;     // (n, trial) order
  std::vector<ScalingStat> stats;   // per n
  double suf_slope = 0.0;           // log-log least-squares slopes of the means
  double cal_slope = 0.0;
  double excess_slope = 0.0;
};
ScalingSummary lb_experiment(const std::vector<std::size_t>& n_grid, int trials,
                             std::uint64_t seed);

// Product construction for group imbalance: Z ~ Bernoulli(p) selects the
// minority plane (coords 0,1) or majority plane (coords 2,3); the active
// component follows its own circle law and the inactive coordinates are 0.
// Attribute id = (1 + sign<w, X>)/2 + 2(1 - Z) in {0..3}; groups 0 and 1 are
// the minority halves with mass p/2 each.
struct ProductInstance {
  Vec2 theta_alpha{1.0, 0.0};
  Vec2 theta_beta{1.0, 0.0};
  double p = 0.25;  // minority mass, in (0, 1/2)
  static ProductInstance make(Vec2 theta_alpha, Vec2 theta_beta, double p);
};
LabeledDataset sample_product(const ProductInstance& instance, const Vec2& w_alpha,
                              const Vec2& w_beta, std::size_t n, std::uint64_t seed);

// Per-p mean (over trials) of the minority-group closed-form gaps of a 4-dim
// least-squares fit, evaluated on the minority circle component.
struct ImbalanceRow {
  double p = 0.0;
  double mean_minority_suf = 0.0;
  double mean_minority_cal = 0.0;
};
std::vector<ImbalanceRow> imbalance_experiment(const std::vector<double>& p_grid, std::size_t n,
                                               int trials, std::uint64_t seed);

// Per-sample KL(D_theta1 || D_theta2) by circle quadrature (Bernoulli KL in
// nats) against the derived bound ||theta1 - theta2||^2 / 12.
struct KlCheck {
  double kl_per_sample = 0.0;
  double bound = 0.0;
  bool satisfied = false;
};
KlCheck kl_bound_check(const Vec2& theta1, const Vec2& theta2, std::size_t resolution);

}  // namespace fairgap
