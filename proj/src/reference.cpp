#include "hdl/reference.hpp"

#include <cmath>
#include <stdexcept>

namespace hdl::ref {

namespace {

double abs_corr(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const double n = static_cast<double>(a.size());
  const Eigen::ArrayXd ac = a.array() - a.mean();
  const Eigen::ArrayXd bc = b.array() - b.mean();
  const double va = ac.square().sum() / n;
  const double vb = bc.square().sum() / n;
  if (va < 1e-12 || vb < 1e-12) {
    return 0.0;
  }
  return std::abs((ac * bc).sum() / n / std::sqrt(va * vb));
}

Eigen::VectorXd centered(const Eigen::VectorXd& v) {
  return v.array() - v.mean();
}

}  // namespace

Eigen::VectorXd ridge_fit(const Eigen::VectorXd& y, const Eigen::MatrixXd& X,
                          double tau) {
  const int k = static_cast<int>(X.rows());
  if (k == 0) {
    return Eigen::VectorXd(0);
  }
  Eigen::MatrixXd normal = X * X.transpose();
  normal.diagonal().array() += tau;
  const Eigen::FullPivLU<Eigen::MatrixXd> lu(normal);
  if (!lu.isInvertible()) {
    throw std::runtime_error("reference ridge: singular normal matrix");
  }
  return lu.solve(X * y);
}

Eigen::VectorXd ridge_residual(const Eigen::VectorXd& y,
                               const Eigen::MatrixXd& X, double tau) {
  if (X.rows() == 0) {
    return y;
  }
  return y - X.transpose() * ridge_fit(y, X, tau);
}

std::vector<double> exogenous_scores(const Eigen::MatrixXd& centered_data,
                                     const std::vector<int>& ordered,
                                     const std::vector<int>& remaining,
                                     double tau) {
  const int n = static_cast<int>(centered_data.cols());
  const int m = static_cast<int>(remaining.size());
  const int nk = static_cast<int>(ordered.size());

  Eigen::MatrixXd xk(nk, n);
  for (int a = 0; a < nk; ++a) {
    xk.row(a) = centered_data.row(ordered[a]);
  }

  std::vector<double> scores(m, 0.0);
  for (int jj = 0; jj < m; ++jj) {
    const int j = remaining[jj];
    const Eigen::VectorXd cand = centered(
        ridge_residual(centered_data.row(j).transpose(), xk, tau));
    const double cand_var = cand.squaredNorm() / n;
    if (cand_var < 1e-12) {
      continue;
    }
    const Eigen::VectorXd tanh_cand = cand.array().tanh();

    Eigen::MatrixXd basis(nk + 1, n);
    basis.row(0) = centered_data.row(j);
    for (int a = 0; a < nk; ++a) {
      basis.row(a + 1) = centered_data.row(ordered[a]);
    }

    double total = 0.0;
    for (int ii = 0; ii < m; ++ii) {
      if (ii == jj) {
        continue;
      }
      const int i = remaining[ii];
      const Eigen::VectorXd r = centered(
          ridge_residual(centered_data.row(i).transpose(), basis, tau));
      if (r.squaredNorm() / n < 1e-12) {
        continue;
      }
      const Eigen::VectorXd tanh_r = r.array().tanh();
      total += abs_corr(tanh_cand, r) + abs_corr(cand, tanh_r);
    }
    scores[jj] = total;
  }
  return scores;
}

}  // namespace hdl::ref
