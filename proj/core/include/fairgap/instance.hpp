#pragma once

#include <cstdint>
#include <vector>

#include "fairgap/dataset.hpp"
#include "fairgap/score.hpp"

namespace fairgap {

// One support cell of an exact finite joint distribution over (X, A):
// mass = P(X=x, A=a), p_y1 = P(Y=1 | X=x, A=a).
struct TabularCell {
  int x = 0;
  int a = 0;
  double mass = 0.0;
  double p_y1 = 0.0;
};

// An exact finite world. Serves as the brute-force oracle: every gap, risk and
// bound can be enumerated over its cells. Immutable after construction.
class TabularInstance {
 public:
  // Validates masses (nonnegative, sum to 1 within 1e-12), probabilities in
  // [0,1] and uniqueness of (x, a) pairs. Throws InvalidInstanceError.
  static TabularInstance validated(std::vector<TabularCell> cells);

  const std::vector<TabularCell>& cells() const { return cells_; }
  int num_x() const { return num_x_; }
  int num_groups() const { return num_groups_; }

  // Evaluates a score on a cell. BayesScore yields p_y1; LinearCircle and
  // Logistic variants are feature-space scores and are rejected here.
  double cell_score(const Score& score, const TabularCell& cell) const;

  // Uncalibrated Bayes score f^U(x) = E[Y | X=x] as a table over x ids.
  TableScore uncalibrated_bayes() const;

  // Draws n i.i.d. samples; features are the one-hot encoding of x (dimension
  // num_x), so TableScore evaluation on the sampled features recovers x.
  LabeledDataset sample(std::size_t n, std::uint64_t seed) const;

 private:
  std::vector<TabularCell> cells_;
  int num_x_ = 0;
  int num_groups_ = 0;
};

// Exact group masses and base rates. Throws GroupWithZeroMassError.
GroupStats tabular_group_stats(const TabularInstance& instance);

}  // namespace fairgap
