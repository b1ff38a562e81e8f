#pragma once

#include <Eigen/Dense>
#include <string>

#include "hdl/dataset.hpp"
#include "hdl/rng.hpp"

namespace hdl {

struct BaselineEstimate {
  std::string method;
  Eigen::MatrixXd B_hat;
  Eigen::MatrixXd A_hat;
};

/// Lasso (ridge_share = 0) or elastic net (ridge_share = 0.5) of every
/// variable on all the others, BIC-selected. The same matrix stands in for
/// both direct and total effects; it need not be acyclic.
BaselineEstimate lasso_baseline(const Dataset& data, double ridge_share,
                                int path_len = 100, int jobs = 1);

/// Random acyclic guess matching the reference nonzero counts of B and A
/// independently: a uniform random ordering, then nonzero cells placed
/// uniformly among the order-consistent positions.
BaselineEstimate random_guess(const Eigen::MatrixXd& B_ref,
                              const Eigen::MatrixXd& A_ref, Philox& rng);

}  // namespace hdl
