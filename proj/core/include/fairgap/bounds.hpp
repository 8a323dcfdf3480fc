#pragma once

#include <map>
#include <string>
#include <vector>

#include "fairgap/gaps.hpp"
#include "fairgap/instance.hpp"
#include "fairgap/losses.hpp"
#include "fairgap/rng.hpp"
#include "fairgap/score.hpp"

namespace fairgap {

// A named bound value; is_lower distinguishes lower bounds (gap must be >=
// value) from upper bounds.
struct BoundEntry {
  double value = 0.0;
  bool is_lower = false;
};

using BoundCatalog = std::map<std::string, BoundEntry>;

// Average upper bound 4 sqrt(excess/kappa) plus per-group and single-group
// variants when group masses are supplied.
struct SufCalUpper {
  double average = 0.0;
  std::vector<double> per_group;     // 2 sqrt(excess/(p_a kappa))
  std::vector<double> single_group;  // (4/sqrt(kappa)) sqrt(excess)/p_a
};
SufCalUpper suf_cal_upper(double excess, double kappa, const std::vector<double>* p_a = nullptr);

// Q_A = E_A|q_bar - q_A| and C_fB = E Var[Y|X,A] / Var[Y], with the derived
// lower bounds on separation and independence gaps.
struct SeparationConstants {
  double q_gap = 0.0;   // Q_A
  double noise = 0.0;   // C_fB
  double sep_lower_at(double excess, double kappa) const;
  double ind_lower_at(double excess, double kappa) const;
};
SeparationConstants separation_constants(const TabularInstance& instance);

enum class LogBase { Nat, Bit };

// Conditional mutual information I(Y; A | X) by exact enumeration.
double conditional_mutual_information(const TabularInstance& instance, LogBase base = LogBase::Nat);

// sqrt(2 log 2 * I(Y; A | X)), an upper bound on the sufficiency gap of the
// attribute-blind Bayes score.
double tao_suf_upper(const TabularInstance& instance, LogBase base = LogBase::Nat);

// Square-loss excess-risk decomposition:
//   (i)  L(score) - class_min_risk        (estimation)
//   (ii) class_min_risk - L(f^U)          (approximation)
//   (iii) E_X Var_A[f^B | X]              (information)
struct Decomposition {
  double term_i = 0.0;
  double term_ii = 0.0;
  double term_iii = 0.0;
  double sum_check = 0.0;  // |(i)+(ii)+(iii) - excess|
};
Decomposition decomposition(const TabularInstance& instance, const Score& score,
                            double class_min_risk, const BregmanLoss& loss = BregmanLoss::square());

// Conditional means of the calibrated Bayes score via the closed forms
// E[f^B|Y=1,A] = Z_A/q_A etc., where Z_A = E[(f^B)^2 | A].
struct BayesConditionalMeans {
  std::vector<double> given_y1_a;
  std::vector<double> given_y0_a;
  double given_y1 = 0.0;
  double given_y0 = 0.0;
};
BayesConditionalMeans bayes_conditional_means(const TabularInstance& instance);

// Fills report.bounds with verdicts: upper bounds compare against the matching
// gap (gap <= value + tolerance), lower bounds against gap >= value -
// tolerance. Recognized names: suf_cal_upper, per_group_upper(a),
// single_group_upper(a), sep_lower, ind_lower, tao_suf_upper.
// Throws MissingExcessRiskError if an upper bound is requested without excess.
void attach_verdicts(GapReport& report, const BoundCatalog& catalog, double tolerance);

// Convenience: full catalog for (instance, score, loss) — excess-risk upper
// bounds plus separation/independence lower bounds.
BoundCatalog build_catalog(const TabularInstance& instance, const Score& score,
                           const BregmanLoss& loss);

// Random instance/score generators for soundness sweeps: support sizes in
// {min_x..max_x} x {min_k..max_k}, Dirichlet-uniform masses, p_y1 uniform on
// [0.05, 0.95].
TabularInstance random_instance(Rng& rng, int min_x = 2, int max_x = 6, int min_k = 2,
                                int max_k = 3);
TableScore random_table_score(Rng& rng, int num_x);

}  // namespace fairgap
