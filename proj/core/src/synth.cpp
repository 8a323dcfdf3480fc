#include "fairgap/synth.hpp"

#include <cmath>
#include <numbers>

#include "fairgap/erm.hpp"
#include "fairgap/errors.hpp"
#include "fairgap/parallel.hpp"
#include "fairgap/rng.hpp"

namespace fairgap {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kZeroNorm = 1e-14;  // below this, theta-hat counts as 0

Vec2 sub2(const Vec2& a, const Vec2& b) { return {a[0] - b[0], a[1] - b[1]}; }

Vec2 random_unit(Rng& rng) {
  const double angle = rng.uniform() * kTwoPi;
  return {std::cos(angle), std::sin(angle)};
}

int half_circle_group(const Vec2& w, const Vec2& x) {
  // attribute = (1 + sign<w, x>)/2; sign 0 maps to group 1.
  return dot2(w, x) < 0.0 ? 0 : 1;
}

// Least-squares slope of y against x.
double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double cov = 0.0, var = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    cov += (x[i] - mx) * (y[i] - my);
    var += (x[i] - mx) * (x[i] - mx);
  }
  return cov / var;
}

struct MeanSd {
  double mean = 0.0;
  double sd = 0.0;
};

MeanSd mean_sd(const std::vector<double>& values) {
  MeanSd out;
  for (double v : values) out.mean += v;
  out.mean /= static_cast<double>(values.size());
  for (double v : values) out.sd += (v - out.mean) * (v - out.mean);
  out.sd = std::sqrt(out.sd / static_cast<double>(values.size()));
  return out;
}

}  // namespace

double norm2(const Vec2& a) { return std::sqrt(dot2(a, a)); }

CircleInstance CircleInstance::make(Vec2 theta) {
  if (std::abs(norm2(theta) - 1.0) > 1e-12) throw NonUnitThetaError();
  return CircleInstance{theta};
}

LabeledDataset sample_circle(const CircleInstance& instance, const Vec2& w, std::size_t n,
                             std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> flat(2 * n);
  std::vector<int> labels(n), attributes(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double angle = rng.uniform() * kTwoPi;
    const Vec2 x{std::cos(angle), std::sin(angle)};
    flat[2 * i] = x[0];
    flat[2 * i + 1] = x[1];
    labels[i] = rng.bernoulli(0.5 + dot2(instance.theta, x) / 4.0) ? 1 : 0;
    attributes[i] = half_circle_group(w, x);
  }
  return LabeledDataset::from_dense(std::move(flat), 2, std::move(labels), std::move(attributes),
                                    2);
}

double phi(const Vec2& theta_hat, const Vec2& theta) {
  const double norm = norm2(theta_hat);
  if (norm < kZeroNorm) return 1.0;
  const double cosine = dot2(theta, theta_hat) / norm;
  return std::max(0.0, 1.0 - cosine * cosine);
}

CircleQuantities exact_circle_quantities(const Vec2& theta_hat, const Vec2& theta) {
  if (std::abs(norm2(theta) - 1.0) > 1e-12) throw NonUnitThetaError();
  CircleQuantities out;
  const double diff = norm2(sub2(theta_hat, theta));
  out.suf = std::sqrt(phi(theta_hat, theta)) / kTwoPi;
  out.cal = norm2(theta_hat) < kZeroNorm ? 1.0 / kTwoPi : diff / kTwoPi;
  // Excess scale 1/32: the (1/16)-scaled design norm times E[XX^T] = I/2.
  out.excess = diff * diff / 32.0;
  return out;
}

CircleGapQuadrature quadrature_circle_gaps(const Vec2& theta_hat, const Vec2& theta, const Vec2& w,
                                           std::size_t resolution) {
  if (std::abs(norm2(theta) - 1.0) > 1e-12) throw NonUnitThetaError();
  CircleGapQuadrature out;

  const double norm_hat = norm2(theta_hat);
  if (norm_hat < kZeroNorm) {
    // Constant score: cells are the attribute half-circles; E[Y | f] = 1/2.
    const double wn = norm2(w);
    if (wn < kZeroNorm) throw SpanViolationError();
    double mean_y[2] = {0.0, 0.0};
    double mass[2] = {0.0, 0.0};
    for (std::size_t j = 0; j < resolution; ++j) {
      const double angle = kTwoPi * (static_cast<double>(j) + 0.5) / resolution;
      const Vec2 x{std::cos(angle), std::sin(angle)};
      const int a = half_circle_group(w, x);
      mean_y[a] += 0.5 + dot2(theta, x) / 4.0;
      mass[a] += 1.0;
    }
    for (int a = 0; a < 2; ++a) {
      if (mass[a] == 0.0) continue;
      const double deviation = std::abs(mean_y[a] / mass[a] - 0.5);
      out.suf += mass[a] / resolution * deviation;
      out.cal += mass[a] / resolution * deviation;  // f = 1/2 identically
    }
    return out;
  }

  // Basis aligned with theta-hat; each score fiber is the pair of angles
  // reflected across e1, and the attribute resolves it into its two points
  // (the span condition), so the cell means are f_theta at the points.
  const Vec2 e1{theta_hat[0] / norm_hat, theta_hat[1] / norm_hat};
  const Vec2 e2{-e1[1], e1[0]};
  if (std::abs(dot2(w, e2)) <= 1e-12 * norm2(w)) throw SpanViolationError();

  const std::size_t fibers = resolution / 2;
  const double t1 = dot2(theta, e1), t2 = dot2(theta, e2);
  double suf_sum = 0.0, cal_sum = 0.0;
  for (std::size_t j = 0; j < fibers; ++j) {
    const double alpha = std::numbers::pi * (static_cast<double>(j) + 0.5) / fibers;
    const double c = std::cos(alpha), s = std::sin(alpha);
    const double level = 0.5 + norm_hat * c / 4.0;           // f_theta-hat on the fiber
    const double y_plus = 0.5 + (t1 * c + t2 * s) / 4.0;     // f_theta at the two points
    const double y_minus = 0.5 + (t1 * c - t2 * s) / 4.0;
    const double fiber_mean = 0.5 * (y_plus + y_minus);      // E[Y | f = level]
    suf_sum += 0.5 * (std::abs(y_plus - fiber_mean) + std::abs(y_minus - fiber_mean));
    cal_sum += 0.5 * (std::abs(level - y_plus) + std::abs(level - y_minus));
  }
  out.suf = suf_sum / static_cast<double>(fibers);
  out.cal = cal_sum / static_cast<double>(fibers);
  return out;
}

ScalingSummary lb_experiment(const std::vector<std::size_t>& n_grid, int trials,
                             std::uint64_t seed) {
  ScalingSummary summary;
  summary.rows.resize(n_grid.size() * static_cast<std::size_t>(trials));

  parallel_for(summary.rows.size(), [&](std::size_t idx) {
    const std::size_t gi = idx / static_cast<std::size_t>(trials);
    const int trial = static_cast<int>(idx % static_cast<std::size_t>(trials));
    const std::size_t n = n_grid[gi];
    Rng rng(derive_seed(seed, n, static_cast<std::uint64_t>(trial)));
    const Vec2 theta = random_unit(rng);
    const Vec2 w = random_unit(rng);
    const LabeledDataset data =
        sample_circle(CircleInstance::make(theta), w, n, rng.next_u64());
    const Vec2 theta_hat = fit_linear_circle(data);
    const CircleQuantities q = exact_circle_quantities(theta_hat, theta);
    summary.rows[idx] = {n, trial, q.suf, q.cal, q.excess};
  });

  std::vector<double> log_n, log_suf, log_cal, log_excess;
  for (std::size_t gi = 0; gi < n_grid.size(); ++gi) {
    std::vector<double> sufs(trials), cals(trials), excesses(trials);
    for (int t = 0; t < trials; ++t) {
      const ScalingRow& row = summary.rows[gi * trials + t];
      sufs[t] = row.suf;
      cals[t] = row.cal;
      excesses[t] = row.excess;
    }
    ScalingStat stat;
    stat.n = n_grid[gi];
    const MeanSd ms = mean_sd(sufs), mc = mean_sd(cals), me = mean_sd(excesses);
    stat.mean_suf = ms.mean;
    stat.sd_suf = ms.sd;
    stat.mean_cal = mc.mean;
    stat.sd_cal = mc.sd;
    stat.mean_excess = me.mean;
    stat.sd_excess = me.sd;
    summary.stats.push_back(stat);

    log_n.push_back(std::log(static_cast<double>(stat.n)));
    log_suf.push_back(std::log(stat.mean_suf));
    log_cal.push_back(std::log(stat.mean_cal));
    log_excess.push_back(std::log(stat.mean_excess));
  }
  summary.suf_slope = fit_slope(log_n, log_suf);
  summary.cal_slope = fit_slope(log_n, log_cal);
  summary.excess_slope = fit_slope(log_n, log_excess);
  return summary;
}

ProductInstance ProductInstance::make(Vec2 theta_alpha, Vec2 theta_beta, double p) {
  if (std::abs(norm2(theta_alpha) - 1.0) > 1e-12 || std::abs(norm2(theta_beta) - 1.0) > 1e-12)
    throw NonUnitThetaError();
  if (!(p > 0.0 && p < 0.5)) throw Error("minority mass p must lie in (0, 1/2)");
  return ProductInstance{theta_alpha, theta_beta, p};
}

LabeledDataset sample_product(const ProductInstance& instance, const Vec2& w_alpha,
                              const Vec2& w_beta, std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> flat(4 * n, 0.0);
  std::vector<int> labels(n), attributes(n);
  for (std::size_t i = 0; i < n; ++i) {
    const bool minority = rng.bernoulli(instance.p);  // Z = 1 selects coords (0,1)
    const double angle = rng.uniform() * kTwoPi;
    const Vec2 x{std::cos(angle), std::sin(angle)};
    const Vec2& theta = minority ? instance.theta_alpha : instance.theta_beta;
    const Vec2& w = minority ? w_alpha : w_beta;
    const std::size_t offset = minority ? 0 : 2;
    flat[4 * i + offset] = x[0];
    flat[4 * i + offset + 1] = x[1];
    labels[i] = rng.bernoulli(0.5 + dot2(theta, x) / 4.0) ? 1 : 0;
    // id = (1 + sign<w, x>)/2 + 2(1 - Z): minority halves are groups {0,1}.
    attributes[i] = half_circle_group(w, x) + (minority ? 0 : 2);
  }
  return LabeledDataset::from_dense(std::move(flat), 4, std::move(labels), std::move(attributes),
                                    4);
}

std::vector<ImbalanceRow> imbalance_experiment(const std::vector<double>& p_grid, std::size_t n,
                                               int trials, std::uint64_t seed) {
  std::vector<ImbalanceRow> rows(p_grid.size());
  std::vector<std::vector<double>> sufs(p_grid.size(), std::vector<double>(trials));
  std::vector<std::vector<double>> cals(p_grid.size(), std::vector<double>(trials));

  parallel_for(p_grid.size() * static_cast<std::size_t>(trials), [&](std::size_t idx) {
    const std::size_t pi = idx / static_cast<std::size_t>(trials);
    const int trial = static_cast<int>(idx % static_cast<std::size_t>(trials));
    Rng rng(derive_seed(seed, pi + 1, static_cast<std::uint64_t>(trial)));
    const ProductInstance instance =
        ProductInstance::make(random_unit(rng), random_unit(rng), p_grid[pi]);
    const Vec2 w_alpha = random_unit(rng), w_beta = random_unit(rng);
    const LabeledDataset data = sample_product(instance, w_alpha, w_beta, n, rng.next_u64());
    const std::vector<double> u = fit_linear_score(data);
    // Minority groups {0,1} live on the alpha component; their per-group gaps
    // reduce to the circle closed forms of the alpha block of the fit.
    const Vec2 theta_hat_alpha{u[0], u[1]};
    const CircleQuantities q = exact_circle_quantities(theta_hat_alpha, instance.theta_alpha);
    sufs[pi][trial] = q.suf;
    cals[pi][trial] = q.cal;
  });

  for (std::size_t pi = 0; pi < p_grid.size(); ++pi) {
    rows[pi].p = p_grid[pi];
    rows[pi].mean_minority_suf = mean_sd(sufs[pi]).mean;
    rows[pi].mean_minority_cal = mean_sd(cals[pi]).mean;
  }
  return rows;
}

KlCheck kl_bound_check(const Vec2& theta1, const Vec2& theta2, std::size_t resolution) {
  if (std::abs(norm2(theta1) - 1.0) > 1e-12 || std::abs(norm2(theta2) - 1.0) > 1e-12)
    throw NonUnitThetaError();

  double kl_sum = 0.0;
  for (std::size_t j = 0; j < resolution; ++j) {
    const double angle = kTwoPi * (static_cast<double>(j) + 0.5) / resolution;
    const Vec2 x{std::cos(angle), std::sin(angle)};
    const double p = 0.5 + dot2(theta1, x) / 4.0;  // both lie in [1/4, 3/4]
    const double q = 0.5 + dot2(theta2, x) / 4.0;
    kl_sum += p * std::log(p / q) + (1.0 - p) * std::log((1.0 - p) / (1.0 - q));
  }

  KlCheck out;
  out.kl_per_sample = kl_sum / static_cast<double>(resolution);
  const double diff = norm2(sub2(theta1, theta2));
  out.bound = diff * diff / 12.0;
  out.satisfied = out.kl_per_sample <= out.bound + 1e-9;
  return out;
}

}  // namespace fairgap
