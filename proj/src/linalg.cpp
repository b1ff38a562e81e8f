#include "hdl/linalg.hpp"

#include <cmath>

namespace hdl {

namespace {
constexpr double kRcondFloor = 1e-12;

void check_rcond(const Eigen::LDLT<Eigen::MatrixXd>& ldlt, double tau) {
  if (tau > 0.0) {
    return;  // positive definite by construction
  }
  const Eigen::VectorXd d = ldlt.vectorD().cwiseAbs();
  if (d.size() == 0) {
    return;
  }
  const double dmax = d.maxCoeff();
  if (dmax <= 0.0 || d.minCoeff() < kRcondFloor * dmax) {
    throw Error(
        "singular ridge system with tau = 0; use a positive ridge penalty");
  }
}
}  // namespace

Eigen::MatrixXd center_rows(const Eigen::MatrixXd& m) {
  return m.colwise() - m.rowwise().mean();
}

Dataset center_rows(const Dataset& data) {
  return Dataset{center_rows(data.values), data.var_ids};
}

void Dataset::validate() const {
  if (p() < 1) {
    throw Error("dataset needs at least one variable");
  }
  if (n() < 2) {
    throw Error("dataset needs at least two observations");
  }
  if (static_cast<int>(var_ids.size()) != p()) {
    throw Error("variable id count does not match the row count");
  }
  if (!values.allFinite()) {
    throw Error("dataset contains NaN or infinite entries");
  }
  for (int i = 0; i < p(); ++i) {
    const Eigen::RowVectorXd row = values.row(i);
    const double mean = row.mean();
    const double var = (row.array() - mean).square().sum() / n();
    if (!(var > 0.0)) {
      throw ConstantRowError(i, var_ids[i]);
    }
  }
}

std::vector<std::string> default_var_ids(int p) {
  std::vector<std::string> ids;
  ids.reserve(p);
  for (int i = 0; i < p; ++i) {
    ids.push_back("g" + std::to_string(i + 1));
  }
  return ids;
}

RidgeBasis::RidgeBasis(const Eigen::MatrixXd& X, double tau)
    : X_(X), tau_(tau), dual_(X.rows() > X.cols()) {
  if (tau < 0.0) {
    throw Error("ridge penalty must be nonnegative");
  }
  const int k = static_cast<int>(X_.rows());
  const int n = static_cast<int>(X_.cols());
  if (k == 0) {
    return;
  }
  if (dual_ && tau_ <= 0.0) {
    throw Error(
        "singular ridge system with tau = 0; use a positive ridge penalty");
  }
  if (dual_) {
    Eigen::MatrixXd gram = X_.transpose() * X_;  // n x n
    gram.diagonal().array() += tau_;
    ldlt_.compute(gram);
  } else {
    Eigen::MatrixXd gram = X_ * X_.transpose();  // k x k
    gram.diagonal().array() += tau_;
    ldlt_.compute(gram);
    check_rcond(ldlt_, tau_);
  }
  (void)n;
}

Eigen::VectorXd RidgeBasis::fit(const Eigen::VectorXd& y) const {
  if (X_.rows() == 0) {
    return Eigen::VectorXd(0);
  }
  if (y.size() != X_.cols()) {
    throw Error("ridge target length does not match the sample count");
  }
  if (dual_) {
    return X_ * ldlt_.solve(y);
  }
  return ldlt_.solve(X_ * y);
}

Eigen::VectorXd RidgeBasis::residual(const Eigen::VectorXd& y) const {
  if (X_.rows() == 0) {
    return y;
  }
  if (dual_) {
    return tau_ * ldlt_.solve(y);
  }
  return y - X_.transpose() * fit(y);
}

Eigen::VectorXd ridge_fit(const Eigen::VectorXd& y, const Eigen::MatrixXd& X,
                          const RidgeConfig& cfg) {
  return RidgeBasis(X, cfg.tau).fit(y);
}

Eigen::VectorXd ridge_residual(const Eigen::VectorXd& y,
                               const Eigen::MatrixXd& X,
                               const RidgeConfig& cfg) {
  return RidgeBasis(X, cfg.tau).residual(y);
}

}  // namespace hdl
