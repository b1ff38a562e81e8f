#pragma once

#include <Eigen/Dense>
#include <vector>

namespace hdl::ref {

/// Plain normal-equation ridge solve, (X X^T + tau I) beta = X y, by full-pivot
/// LU. Kept deliberately independent of the production solver (no dual form,
/// no factorization reuse) so tests can cross-check against it.
Eigen::VectorXd ridge_fit(const Eigen::VectorXd& y, const Eigen::MatrixXd& X,
                          double tau);

Eigen::VectorXd ridge_residual(const Eigen::VectorXd& y,
                               const Eigen::MatrixXd& X, double tau);

/// Serial one-round exogenous-candidate scores, recomputing every ridge
/// regression from scratch. Same contract as hdl::detail::exogenous_scores.
std::vector<double> exogenous_scores(const Eigen::MatrixXd& centered,
                                     const std::vector<int>& ordered,
                                     const std::vector<int>& remaining,
                                     double tau);

}  // namespace hdl::ref
