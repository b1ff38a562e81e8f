#include "hdl/ordering.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace hdl {

namespace {

constexpr double kDegenerateVar = 1e-12;

int resolve_jobs(int jobs) {
#ifdef _OPENMP
  return jobs > 0 ? jobs : omp_get_max_threads();
#else
  (void)jobs;
  return 1;
#endif
}

double abs_corr(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const double n = static_cast<double>(a.size());
  const Eigen::ArrayXd ac = a.array() - a.mean();
  const Eigen::ArrayXd bc = b.array() - b.mean();
  const double va = ac.square().sum() / n;
  const double vb = bc.square().sum() / n;
  if (va < kDegenerateVar || vb < kDegenerateVar) {
    return 0.0;
  }
  return std::abs((ac * bc).sum() / n / std::sqrt(va * vb));
}

}  // namespace

std::vector<int> CausalOrder::ranks() const {
  std::vector<int> r(order.size(), -1);
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    r[order[pos]] = static_cast<int>(pos);
  }
  return r;
}

bool CausalOrder::valid() const {
  std::vector<bool> seen(order.size(), false);
  for (int v : order) {
    if (v < 0 || v >= static_cast<int>(order.size()) || seen[v]) {
      return false;
    }
    seen[v] = true;
  }
  return true;
}

double independence_score(const Eigen::VectorXd& candidate,
                          const std::vector<Eigen::VectorXd>& others,
                          int* degenerate) {
  const int n = static_cast<int>(candidate.size());
  if (n < 3) {
    throw Error("independence score needs at least three observations");
  }
  const double cand_var =
      (candidate.array() - candidate.mean()).square().sum() / n;
  if (cand_var < kDegenerateVar) {
    if (degenerate != nullptr) {
      *degenerate += static_cast<int>(others.size());
    }
    return 0.0;
  }
  const Eigen::VectorXd tanh_cand = candidate.array().tanh();

  double total = 0.0;
  for (const Eigen::VectorXd& r : others) {
    if (r.size() != n) {
      throw Error("independence score residual length mismatch");
    }
    const double r_var = (r.array() - r.mean()).square().sum() / n;
    if (r_var < kDegenerateVar) {
      if (degenerate != nullptr) {
        ++*degenerate;
      }
      continue;
    }
    const Eigen::VectorXd tanh_r = r.array().tanh();
    total += abs_corr(tanh_cand, r) + abs_corr(candidate, tanh_r);
  }
  return total;
}

namespace detail {

std::vector<double> exogenous_scores(const Eigen::MatrixXd& centered,
                                     const std::vector<int>& ordered,
                                     const std::vector<int>& remaining,
                                     double tau, int jobs) {
  const int n = static_cast<int>(centered.cols());
  const int m = static_cast<int>(remaining.size());
  const int nk = static_cast<int>(ordered.size());
  const int basis_size = nk + 1;  // each r-regression conditions on [x_j, x_K]
  const bool dual = basis_size > n;
  if (dual && tau <= 0.0) {
    throw Error(
        "singular ridge system with tau = 0; use a positive ridge penalty");
  }

  // Targets as columns for multi-RHS solves.
  Eigen::MatrixXd targets(n, m);
  for (int c = 0; c < m; ++c) {
    targets.col(c) = centered.row(remaining[c]).transpose();
  }

  Eigen::MatrixXd gram_vars;  // p x p variable Gram, primal mode only
  Eigen::MatrixXd gram_k;     // n x n sample Gram of x_K, dual mode only
  if (dual) {
    gram_k.setZero(n, n);
    for (int v : ordered) {
      gram_k.noalias() +=
          centered.row(v).transpose() * centered.row(v);
    }
  } else {
    gram_vars = centered * centered.transpose();
  }

  // Residuals of every remaining variable on x_K (step 2a), shared basis.
  Eigen::MatrixXd cand(n, m);
  if (nk == 0) {
    cand = targets;
  } else if (dual) {
    Eigen::MatrixXd mk = gram_k;
    mk.diagonal().array() += tau;
    cand = tau * Eigen::LDLT<Eigen::MatrixXd>(mk).solve(targets);
  } else {
    Eigen::MatrixXd xk(nk, n);
    Eigen::MatrixXd rhs(nk, m);
    Eigen::MatrixXd gkk(nk, nk);
    for (int a = 0; a < nk; ++a) {
      xk.row(a) = centered.row(ordered[a]);
      for (int b = 0; b < nk; ++b) {
        gkk(a, b) = gram_vars(ordered[a], ordered[b]);
      }
      for (int c = 0; c < m; ++c) {
        rhs(a, c) = gram_vars(ordered[a], remaining[c]);
      }
    }
    gkk.diagonal().array() += tau;
    cand = targets - xk.transpose() * Eigen::LDLT<Eigen::MatrixXd>(gkk).solve(rhs);
  }

  // Residuals are recentered before any correlation is taken.
  Eigen::MatrixXd tanh_cand(n, m);
  Eigen::VectorXd cand_norm(m), tanh_norm(m);
  for (int c = 0; c < m; ++c) {
    cand.col(c).array() -= cand.col(c).mean();
    cand_norm(c) = cand.col(c).norm();
    Eigen::VectorXd t = cand.col(c).array().tanh();
    t.array() -= t.mean();
    tanh_cand.col(c) = t;
    tanh_norm(c) = t.norm();
  }

  std::vector<double> scores(m, 0.0);
  const int threads = resolve_jobs(jobs);
  (void)threads;

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(threads)
#endif
  for (int jj = 0; jj < m; ++jj) {
    const int j = remaining[jj];

    // Residual matrix R^{(j)}: every other remaining i on [x_j, x_K].
    Eigen::MatrixXd resid(n, m);
    if (dual) {
      Eigen::MatrixXd mj = gram_k;
      mj.noalias() += centered.row(j).transpose() * centered.row(j);
      mj.diagonal().array() += tau;
      resid = tau * Eigen::LDLT<Eigen::MatrixXd>(mj).solve(targets);
    } else {
      std::vector<int> basis;
      basis.reserve(basis_size);
      basis.push_back(j);
      basis.insert(basis.end(), ordered.begin(), ordered.end());
      Eigen::MatrixXd xs(basis_size, n);
      Eigen::MatrixXd gss(basis_size, basis_size);
      Eigen::MatrixXd rhs(basis_size, m);
      for (int a = 0; a < basis_size; ++a) {
        xs.row(a) = centered.row(basis[a]);
        for (int b = 0; b < basis_size; ++b) {
          gss(a, b) = gram_vars(basis[a], basis[b]);
        }
        for (int c = 0; c < m; ++c) {
          rhs(a, c) = gram_vars(basis[a], remaining[c]);
        }
      }
      gss.diagonal().array() += tau;
      resid =
          targets - xs.transpose() * Eigen::LDLT<Eigen::MatrixXd>(gss).solve(rhs);
    }

    const double cand_var_j = cand_norm(jj) * cand_norm(jj) / n;
    if (cand_var_j < kDegenerateVar) {
      scores[jj] = 0.0;
      continue;
    }

    double total = 0.0;
    for (int ii = 0; ii < m; ++ii) {
      if (ii == jj) {
        continue;
      }
      Eigen::VectorXd r = resid.col(ii);
      r.array() -= r.mean();
      const double r_norm = r.norm();
      if (r_norm * r_norm / n < kDegenerateVar) {
        continue;
      }
      // corr(tanh(cand), r): tanh side precentered, r centered.
      if (tanh_norm(jj) * tanh_norm(jj) / n >= kDegenerateVar) {
        total += std::abs(tanh_cand.col(jj).dot(r)) / (tanh_norm(jj) * r_norm);
      }
      // corr(cand, tanh(r))
      Eigen::VectorXd tr = r.array().tanh();
      tr.array() -= tr.mean();
      const double tr_norm = tr.norm();
      if (tr_norm * tr_norm / n >= kDegenerateVar) {
        total += std::abs(cand.col(jj).dot(tr)) / (cand_norm(jj) * tr_norm);
      }
    }
    scores[jj] = total;
  }
  return scores;
}

}  // namespace detail

int find_exogenous(const Dataset& data, const std::vector<int>& ordered,
                   const RidgeConfig& cfg, int jobs) {
  const int p = data.p();
  if (static_cast<int>(ordered.size()) >= p - 1) {
    throw Error("find_exogenous requires at least two remaining variables");
  }
  std::vector<bool> used(p, false);
  for (int v : ordered) {
    used[v] = true;
  }
  std::vector<int> remaining;
  for (int v = 0; v < p; ++v) {
    if (!used[v]) {
      remaining.push_back(v);
    }
  }

  const Eigen::MatrixXd centered = center_rows(data.values);
  const std::vector<double> scores =
      detail::exogenous_scores(centered, ordered, remaining, cfg.tau, jobs);

  int best = 0;
  for (int c = 1; c < static_cast<int>(remaining.size()); ++c) {
    if (scores[c] < scores[best]) {  // strict keeps the lower index on ties
      best = c;
    }
  }
  return remaining[best];
}

CausalOrder estimate_order(const Dataset& data, const RidgeConfig& cfg,
                           int jobs) {
  data.validate();
  const int p = data.p();
  const Eigen::MatrixXd centered = center_rows(data.values);

  CausalOrder result;
  result.order.reserve(p);
  std::vector<bool> used(p, false);
  while (static_cast<int>(result.order.size()) < p - 1) {
    std::vector<int> remaining;
    for (int v = 0; v < p; ++v) {
      if (!used[v]) {
        remaining.push_back(v);
      }
    }
    if (remaining.size() == 1) {
      break;
    }
    const std::vector<double> scores = detail::exogenous_scores(
        centered, result.order, remaining, cfg.tau, jobs);
    int best = 0;
    for (int c = 1; c < static_cast<int>(remaining.size()); ++c) {
      if (scores[c] < scores[best]) {
        best = c;
      }
    }
    result.order.push_back(remaining[best]);
    used[remaining[best]] = true;
  }
  for (int v = 0; v < p; ++v) {
    if (!used[v]) {
      result.order.push_back(v);
    }
  }
  if (!result.valid()) {
    throw Error("internal: estimated order is not a permutation");
  }
  return result;
}

}  // namespace hdl
