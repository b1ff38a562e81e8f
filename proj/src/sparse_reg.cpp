#include "hdl/sparse_reg.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>

namespace hdl {

namespace {

constexpr double kPilotFloor = 1e-12;  // adaptive-lasso exclusion threshold
constexpr double kLambdaRatio = 1e-3;  // lambda_min / lambda_max on a path
constexpr double kRssFloor = 1e-300;   // keeps log(RSS) finite

std::atomic<double> g_worst_kkt{0.0};

void track_kkt(double v) {
  double cur = g_worst_kkt.load(std::memory_order_relaxed);
  while (v > cur &&
         !g_worst_kkt.compare_exchange_weak(cur, v, std::memory_order_relaxed)) {
  }
}

double soft_threshold(double z, double t) {
  if (z > t) {
    return z - t;
  }
  if (z < -t) {
    return z + t;
  }
  return 0.0;
}

// Predictors rescaled to unit 1/n-variance; the objective is unchanged
// because the penalty weights absorb the scales. Zero-variance predictors are
// pinned at zero.
struct Standardized {
  Eigen::MatrixXd Zt;     // n x k, column j = x_j / s_j
  Eigen::VectorXd scale;  // s_j; 0 marks a degenerate predictor
  Eigen::VectorXd w_l1;   // w_j / s_j
  Eigen::VectorXd w_l2;   // w_j / s_j^2
  double grad_scale = 1.0;
};

Standardized standardize(const LassoProblem& problem) {
  const int k = problem.k();
  const int n = problem.n();
  Standardized st;
  st.Zt.resize(n, k);
  st.scale.resize(k);
  st.w_l1.resize(k);
  st.w_l2.resize(k);
  for (int j = 0; j < k; ++j) {
    const double s = std::sqrt(problem.X.row(j).squaredNorm() / n);
    if (s < kPilotFloor) {
      st.scale(j) = 0.0;
      st.Zt.col(j).setZero();
      st.w_l1(j) = st.w_l2(j) = 1.0;
      continue;
    }
    st.scale(j) = s;
    st.Zt.col(j) = problem.X.row(j).transpose() / s;
    st.w_l1(j) = problem.weights(j) / s;
    st.w_l2(j) = problem.weights(j) / (s * s);
  }
  double g0 = 0.0;
  for (int j = 0; j < k; ++j) {
    if (st.scale(j) > 0.0) {
      g0 = std::max(g0, std::abs(st.Zt.col(j).dot(problem.y)) / n);
    }
  }
  st.grad_scale = std::max(1.0, g0);
  return st;
}

// Worst stationarity residual of the current iterate, relative to the
// gradient scale at zero.
double kkt_violation(const Standardized& st, const Eigen::VectorXd& r,
                     const Eigen::VectorXd& gamma, double lambda, double rs,
                     int n) {
  double worst = 0.0;
  for (int j = 0; j < gamma.size(); ++j) {
    if (st.scale(j) == 0.0) {
      continue;
    }
    const double g = st.Zt.col(j).dot(r) / n;
    double v;
    if (gamma(j) != 0.0) {
      const double sgn = gamma(j) > 0.0 ? 1.0 : -1.0;
      v = std::abs(g - lambda * (1.0 - rs) * st.w_l1(j) * sgn -
                   2.0 * lambda * rs * st.w_l2(j) * gamma(j));
    } else {
      v = std::max(0.0, std::abs(g) - lambda * (1.0 - rs) * st.w_l1(j));
    }
    worst = std::max(worst, v);
  }
  return worst / st.grad_scale;
}

}  // namespace

void LassoProblem::validate() const {
  if (k() < 0 || X.cols() != y.size()) {
    throw Error("lasso predictor matrix does not match the response length");
  }
  if (weights.size() != k()) {
    throw Error("lasso weight vector does not match the predictor count");
  }
  if (n() < 2) {
    throw Error("lasso problem needs at least two observations");
  }
  for (int j = 0; j < k(); ++j) {
    if (!std::isfinite(weights(j)) || weights(j) <= 0.0) {
      throw Error("lasso weights must be finite and positive");
    }
  }
  if (!(ridge_share >= 0.0 && ridge_share <= 1.0)) {
    throw Error("ridge_share must lie in [0, 1]");
  }
  if (!y.allFinite() || !X.allFinite()) {
    throw Error("lasso problem contains NaN or infinite entries");
  }
}

double objective(const LassoProblem& problem, double lambda,
                 const Eigen::VectorXd& beta) {
  const Eigen::VectorXd r = problem.y - problem.X.transpose() * beta;
  double pen = 0.0;
  for (int j = 0; j < beta.size(); ++j) {
    pen += problem.weights(j) *
           ((1.0 - problem.ridge_share) * std::abs(beta(j)) +
            problem.ridge_share * beta(j) * beta(j));
  }
  return r.squaredNorm() / (2.0 * problem.n()) + lambda * pen;
}

CdResult coordinate_descent(const LassoProblem& problem, double lambda,
                            const Eigen::VectorXd& warm_start,
                            const CdSettings& settings) {
  problem.validate();
  if (lambda < 0.0 || !std::isfinite(lambda)) {
    throw Error("lambda must be finite and nonnegative");
  }
  const int k = problem.k();
  const int n = problem.n();
  if (warm_start.size() != k) {
    throw Error("warm start length does not match the predictor count");
  }

  CdResult result;
  if (k == 0) {
    result.beta = Eigen::VectorXd(0);
    result.converged = true;
    return result;
  }

  const double rs = problem.ridge_share;
  const Standardized st = standardize(problem);

  Eigen::VectorXd gamma(k);
  for (int j = 0; j < k; ++j) {
    gamma(j) = st.scale(j) == 0.0 ? 0.0 : warm_start(j) * st.scale(j);
  }
  Eigen::VectorXd r = problem.y - st.Zt * gamma;

  bool converged = false;
  int sweeps = 0;
  double kkt = std::numeric_limits<double>::infinity();
  while (sweeps < settings.max_sweeps) {
    double max_delta = 0.0;
    for (int j = 0; j < k; ++j) {
      if (st.scale(j) == 0.0) {
        continue;
      }
      // (1/n)||z_j||^2 == 1, so the partial residual correlation is rho.
      const double rho = st.Zt.col(j).dot(r) / n + gamma(j);
      const double next =
          soft_threshold(rho, lambda * (1.0 - rs) * st.w_l1(j)) /
          (1.0 + 2.0 * lambda * rs * st.w_l2(j));
      const double delta = next - gamma(j);
      if (delta != 0.0) {
        r -= st.Zt.col(j) * delta;
        gamma(j) = next;
        max_delta = std::max(max_delta, std::abs(delta));
      }
    }
    ++sweeps;
    if (max_delta < settings.coef_tol) {
      kkt = kkt_violation(st, r, gamma, lambda, rs, n);
      if (kkt <= settings.kkt_tol) {
        converged = true;
        break;
      }
    }
  }
  if (!std::isfinite(kkt)) {
    kkt = kkt_violation(st, r, gamma, lambda, rs, n);
  }
  track_kkt(kkt);

  result.beta.resize(k);
  for (int j = 0; j < k; ++j) {
    result.beta(j) = st.scale(j) == 0.0 ? 0.0 : gamma(j) / st.scale(j);
  }
  result.converged = converged;
  result.sweeps = sweeps;
  result.kkt = kkt;
  return result;
}

double lambda_max(const LassoProblem& problem) {
  problem.validate();
  const int n = problem.n();
  const double one_minus_rs = std::max(1.0 - problem.ridge_share, 1e-12);
  double best = 0.0;
  for (int j = 0; j < problem.k(); ++j) {
    const double s2 = problem.X.row(j).squaredNorm() / n;
    if (s2 < kPilotFloor * kPilotFloor) {
      continue;
    }
    const double corr = std::abs(problem.X.row(j).dot(problem.y)) / n;
    best = std::max(best, corr / (one_minus_rs * problem.weights(j)));
  }
  if (best <= 0.0) {
    best = std::numeric_limits<double>::epsilon() *
           std::max(1.0, problem.y.squaredNorm() / n);
  }
  return best;
}

RegPath fit_path(const LassoProblem& problem, int path_len) {
  if (path_len < 2) {
    throw Error("path length must be at least 2");
  }
  problem.validate();
  const int k = problem.k();
  const int n = problem.n();
  const double lmax = lambda_max(problem);

  RegPath path;
  path.lambdas.resize(path_len);
  path.bic.resize(path_len);
  path.coefs.reserve(path_len);
  for (int t = 0; t < path_len; ++t) {
    path.lambdas(t) =
        lmax * std::pow(kLambdaRatio, static_cast<double>(t) / (path_len - 1));
  }

  Eigen::VectorXd beta = Eigen::VectorXd::Zero(k);
  const double logn = std::log(static_cast<double>(n));
  for (int t = 0; t < path_len; ++t) {
    if (t > 0) {
      const CdResult res = coordinate_descent(problem, path.lambdas(t), beta);
      path.converged = path.converged && res.converged;
      beta = res.beta;
    }
    path.coefs.push_back(beta);
    const double rss = (problem.y - problem.X.transpose() * beta).squaredNorm();
    int df = 0;
    for (int j = 0; j < k; ++j) {
      if (beta(j) != 0.0) {
        ++df;
      }
    }
    path.bic(t) = n * std::log(std::max(rss, kRssFloor) / n) + df * logn;
  }
  return path;
}

PathSelection select_bic(const RegPath& path) {
  if (path.coefs.empty()) {
    throw Error("cannot select from an empty path");
  }
  int best = 0;
  for (int t = 1; t < static_cast<int>(path.coefs.size()); ++t) {
    if (path.bic(t) < path.bic(best)) {
      best = t;  // strict: ties stay with the larger lambda
    }
  }
  return PathSelection{path.lambdas(best), path.coefs[best], best};
}

Eigen::VectorXd adaptive_lasso(const Eigen::VectorXd& y,
                               const Eigen::MatrixXd& X, const RidgeConfig& cfg,
                               int path_len) {
  const int k = static_cast<int>(X.rows());
  const int n = static_cast<int>(y.size());
  if (k == 0) {
    return Eigen::VectorXd(0);
  }
  if (k > n - 1) {
    throw Error("adaptive lasso requires k <= n - 1; screen predictors first");
  }

  const Eigen::VectorXd pilot = ridge_fit(y, X, cfg);
  std::vector<int> keep;
  for (int j = 0; j < k; ++j) {
    if (std::abs(pilot(j)) >= kPilotFloor) {
      keep.push_back(j);
    }
  }
  Eigen::VectorXd out = Eigen::VectorXd::Zero(k);
  if (keep.empty()) {
    return out;
  }

  LassoProblem sub;
  sub.y = y;
  sub.X.resize(keep.size(), n);
  sub.weights.resize(keep.size());
  for (std::size_t idx = 0; idx < keep.size(); ++idx) {
    sub.X.row(idx) = X.row(keep[idx]);
    sub.weights(idx) = 1.0 / std::abs(pilot(keep[idx]));
  }
  const PathSelection sel = select_bic(fit_path(sub, path_len));
  for (std::size_t idx = 0; idx < keep.size(); ++idx) {
    out(keep[idx]) = sel.coefs(idx);
  }
  return out;
}

double kkt_worst_violation() {
  return g_worst_kkt.load(std::memory_order_relaxed);
}

void kkt_reset_tracking() { g_worst_kkt.store(0.0, std::memory_order_relaxed); }

}  // namespace hdl
