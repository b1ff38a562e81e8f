#pragma once

#include <Eigen/Dense>
#include <vector>

#include "hdl/linalg.hpp"

namespace hdl {

/// Weighted lasso / elastic-net problem on centered data.
/// Objective, in the units of (y, X) as given:
///   (1/2n) ||y - X^T beta||^2
///     + lambda * sum_j w_j [ (1 - ridge_share) |beta_j| + ridge_share beta_j^2 ]
struct LassoProblem {
  Eigen::VectorXd y;        // length n, centered
  Eigen::MatrixXd X;        // k x n, rows = predictors, centered
  Eigen::VectorXd weights;  // length k, finite and > 0
  double ridge_share = 0.0;

  int n() const { return static_cast<int>(y.size()); }
  int k() const { return static_cast<int>(X.rows()); }
  void validate() const;
};

struct CdSettings {
  int max_sweeps = 100000;
  double coef_tol = 1e-7;  // max coefficient change per sweep, standardized units
  double kkt_tol = 1e-7;   // relative stationarity residual at exit
};

struct CdResult {
  Eigen::VectorXd beta;
  bool converged = false;
  int sweeps = 0;
  double kkt = 0.0;  // relative KKT violation of the returned iterate
};

double objective(const LassoProblem& problem, double lambda,
                 const Eigen::VectorXd& beta);

/// Cyclic coordinate descent with internal predictor standardization
/// (coefficients are rescaled back, the objective above is what is minimized).
/// Non-convergence is reported through the flag; the best iterate is kept.
CdResult coordinate_descent(const LassoProblem& problem, double lambda,
                            const Eigen::VectorXd& warm_start,
                            const CdSettings& settings = {});

/// Smallest lambda with an all-zero solution of the l1 part:
/// max_j |<x_j, y>| / (n (1 - ridge_share) w_j). Returns a machine-epsilon
/// scaled floor when every predictor is orthogonal to y.
double lambda_max(const LassoProblem& problem);

struct RegPath {
  Eigen::VectorXd lambdas;             // strictly decreasing, lambdas[0] = lambda_max
  std::vector<Eigen::VectorXd> coefs;  // coefs[0] is exactly zero
  Eigen::VectorXd bic;
  bool converged = true;
};

/// Log-spaced path from lambda_max down to lambda_max * 1e-3 with warm starts.
/// BIC(lambda) = n log(RSS/n) + df log(n), df = nonzero count.
RegPath fit_path(const LassoProblem& problem, int path_len = 100);

struct PathSelection {
  double lambda = 0.0;
  Eigen::VectorXd coefs;
  int index = 0;
};

/// Minimal-BIC entry; ties go to the larger lambda (sparser model).
PathSelection select_bic(const RegPath& path);

/// Adaptive lasso: ridge pilot with cfg.tau, weights 1/|pilot|, weighted
/// lasso path, BIC selection. Pilot coefficients below 1e-12 in magnitude
/// exclude the predictor outright. Requires k <= n - 1 (screen first).
Eigen::VectorXd adaptive_lasso(const Eigen::VectorXd& y,
                               const Eigen::MatrixXd& X,
                               const RidgeConfig& cfg, int path_len = 100);

/// Largest relative KKT violation seen by any coordinate_descent call in this
/// process since the last reset. Used by the acceptance suite to certify every
/// solve at once.
double kkt_worst_violation();
void kkt_reset_tracking();

}  // namespace hdl
