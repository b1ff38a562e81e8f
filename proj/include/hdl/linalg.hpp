#pragma once

#include <Eigen/Dense>

#include "hdl/dataset.hpp"

namespace hdl {

struct RidgeConfig {
  double tau = 0.01;  // penalty on ||beta||^2 in raw units
};

/// Subtracts the sample mean from every row.
Eigen::MatrixXd center_rows(const Eigen::MatrixXd& m);
Dataset center_rows(const Dataset& data);

/// Ridge fit of y (length n) on the rows of X (k x n):
/// argmin ||y - X^T beta||^2 + tau ||beta||^2.
/// Solves the k x k normal equations when k <= n and the n x n dual system
/// otherwise. Throws Error when tau = 0 and the normal matrix is singular
/// (reciprocal condition below 1e-12).
Eigen::VectorXd ridge_fit(const Eigen::VectorXd& y, const Eigen::MatrixXd& X,
                          const RidgeConfig& cfg);

/// y - X^T ridge_fit(y, X, cfg). An empty X returns y unchanged.
Eigen::VectorXd ridge_residual(const Eigen::VectorXd& y,
                               const Eigen::MatrixXd& X,
                               const RidgeConfig& cfg);

/// Factorizes one ridge predictor set and serves many targets. Residuals for
/// all remaining variables against the same basis reuse the factorization, so
/// the per-target cost is a solve instead of a decomposition.
class RidgeBasis {
 public:
  RidgeBasis(const Eigen::MatrixXd& X, double tau);

  Eigen::VectorXd fit(const Eigen::VectorXd& y) const;
  Eigen::VectorXd residual(const Eigen::VectorXd& y) const;

  int predictors() const { return static_cast<int>(X_.rows()); }

 private:
  Eigen::MatrixXd X_;  // k x n
  double tau_;
  bool dual_;  // true: factorized X^T X + tau I (n x n)
  Eigen::LDLT<Eigen::MatrixXd> ldlt_;
};

}  // namespace hdl
