#pragma once

#include <Eigen/Dense>

#include "hdl/dataset.hpp"
#include "hdl/linalg.hpp"
#include "hdl/ordering.hpp"

namespace hdl {

/// Direct effects b_ij (row i regressed on its causal predecessors) together
/// with the ordering that certifies acyclicity: permuting rows and columns by
/// `order` makes B strictly lower triangular.
struct DirectEffects {
  Eigen::MatrixXd B;
  CausalOrder order;
};

struct TotalEffects {
  Eigen::MatrixXd A;  // (I - B)^{-1} with zero diagonal
};

/// Topological order of the nonzero pattern of B (edge j -> i when
/// B(i,j) != 0). Throws Error on a cycle. Prefers lower indices first.
std::vector<int> topological_order(const Eigen::MatrixXd& B);

/// Step 4: per-variable ISIS -> lasso -> adaptive lasso on the causal
/// predecessors. Rows never carry more than n - 1 nonzeros.
DirectEffects estimate_direct(const Dataset& data, const CausalOrder& order,
                              const RidgeConfig& cfg, int jobs = 1,
                              int path_len = 100);

/// A = (I - B)^{-1}, diagonal zeroed, via triangular solve in causal order.
TotalEffects total_from_direct(const DirectEffects& direct);
/// Same, for a bare matrix: topologically sorts first; cycles are an error.
TotalEffects total_from_direct(const Eigen::MatrixXd& B);

/// Step 5: back-door estimate of every a_ij with k(j) < k(i) by the
/// ISIS/lasso/adaptive-lasso cascade of x_i on {x_j} union parents(j).
/// Pairs against the causal order are structural zeros.
TotalEffects estimate_total(const Dataset& data, const DirectEffects& direct,
                            const RidgeConfig& cfg, int jobs = 1,
                            int path_len = 100);

namespace detail {
/// ISIS -> plain lasso -> adaptive lasso of y on the candidate rows of X.
/// Returns a coefficient vector of length X.rows() with zeros outside
/// `candidates`. Screening only engages when |candidates| > n - 1.
Eigen::VectorXd cascade_fit(const Eigen::VectorXd& y, const Eigen::MatrixXd& X,
                            const std::vector<int>& candidates,
                            const RidgeConfig& cfg, int path_len);
}  // namespace detail

}  // namespace hdl
