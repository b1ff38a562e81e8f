#pragma once

#include <Eigen/Dense>
#include <vector>

#include "hdl/dataset.hpp"
#include "hdl/linalg.hpp"

namespace hdl {

/// Estimated causal ordering: order[r] is the variable index at causal rank r.
struct CausalOrder {
  std::vector<int> order;

  int p() const { return static_cast<int>(order.size()); }
  /// ranks()[v] = causal rank of variable v.
  std::vector<int> ranks() const;
  /// True iff order is a permutation of 0..p-1.
  bool valid() const;
};

/// Nonlinear-correlation dependence score of a candidate residual against a
/// set of residuals: sum over the set of
///   |corr(tanh(c), r)| + |corr(c, tanh(r))|.
/// Lower means more independent. Vectors whose variance falls below 1e-12
/// contribute zero (counted in `degenerate` when given).
double independence_score(const Eigen::VectorXd& candidate,
                          const std::vector<Eigen::VectorXd>& others,
                          int* degenerate = nullptr);

/// One search round: for every remaining candidate j, ridge-residualize j on
/// the ordered set and every other remaining i on [j, ordered set], then pick
/// the candidate whose residuals look most independent. Ties break toward the
/// lower variable index. data must be centered.
int find_exogenous(const Dataset& data, const std::vector<int>& ordered,
                   const RidgeConfig& cfg, int jobs = 1);

/// Full ordering: p - 1 rounds of find_exogenous, last variable appended.
CausalOrder estimate_order(const Dataset& data, const RidgeConfig& cfg,
                           int jobs = 1);

namespace detail {
/// Dependence scores of every remaining candidate for one round, in the order
/// of `remaining`. Shared by find_exogenous and the kernel benchmark.
std::vector<double> exogenous_scores(const Eigen::MatrixXd& centered,
                                     const std::vector<int>& ordered,
                                     const std::vector<int>& remaining,
                                     double tau, int jobs);
}  // namespace detail

}  // namespace hdl
