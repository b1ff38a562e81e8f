#include "hdl/effects.hpp"

#include <algorithm>
#include <cmath>

#include "hdl/screening.hpp"
#include "hdl/sparse_reg.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace hdl {

namespace {

constexpr double kNonzero = 1e-12;

int resolve_jobs(int jobs) {
#ifdef _OPENMP
  return jobs > 0 ? jobs : omp_get_max_threads();
#else
  (void)jobs;
  return 1;
#endif
}

Eigen::MatrixXd rows_of(const Eigen::MatrixXd& X, const std::vector<int>& idx) {
  Eigen::MatrixXd out(idx.size(), X.cols());
  for (std::size_t r = 0; r < idx.size(); ++r) {
    out.row(r) = X.row(idx[r]);
  }
  return out;
}

}  // namespace

std::vector<int> topological_order(const Eigen::MatrixXd& B) {
  const int p = static_cast<int>(B.rows());
  if (B.cols() != p) {
    throw Error("effect matrix must be square");
  }
  std::vector<int> indegree(p, 0);
  for (int i = 0; i < p; ++i) {
    for (int j = 0; j < p; ++j) {
      if (i != j && std::abs(B(i, j)) > kNonzero) {
        ++indegree[i];  // edge j -> i
      }
    }
  }
  std::vector<int> order;
  order.reserve(p);
  std::vector<bool> placed(p, false);
  for (int step = 0; step < p; ++step) {
    int pick = -1;
    for (int v = 0; v < p; ++v) {
      if (!placed[v] && indegree[v] == 0) {
        pick = v;
        break;
      }
    }
    if (pick < 0) {
      throw Error("effect matrix contains a cycle; cannot order it");
    }
    placed[pick] = true;
    order.push_back(pick);
    for (int i = 0; i < p; ++i) {
      if (!placed[i] && std::abs(B(i, pick)) > kNonzero) {
        --indegree[i];
      }
    }
  }
  return order;
}

namespace detail {

Eigen::VectorXd cascade_fit(const Eigen::VectorXd& y, const Eigen::MatrixXd& X,
                            const std::vector<int>& candidates,
                            const RidgeConfig& cfg, int path_len) {
  const int p = static_cast<int>(X.rows());
  const int n = static_cast<int>(y.size());
  Eigen::VectorXd out = Eigen::VectorXd::Zero(p);
  if (candidates.empty()) {
    return out;
  }

  std::vector<int> survivors = candidates;
  if (static_cast<int>(survivors.size()) > n - 1) {
    // Reduce below the sample size, then prune once more with a plain lasso.
    const Eigen::MatrixXd sub = rows_of(X, survivors);
    const ScreenResult screened = isis(y, sub, n - 1, cfg, path_len);
    std::vector<int> kept;
    kept.reserve(screened.selected.size());
    for (int local : screened.selected) {
      kept.push_back(survivors[local]);
    }
    survivors = std::move(kept);
    if (survivors.empty()) {
      return out;
    }

    LassoProblem prune;
    prune.y = y;
    prune.X = rows_of(X, survivors);
    prune.weights = Eigen::VectorXd::Ones(survivors.size());
    const PathSelection sel = select_bic(fit_path(prune, path_len));
    std::vector<int> nonzero;
    for (std::size_t idx = 0; idx < survivors.size(); ++idx) {
      if (sel.coefs(idx) != 0.0) {
        nonzero.push_back(survivors[idx]);
      }
    }
    survivors = std::move(nonzero);
    if (survivors.empty()) {
      return out;
    }
  }

  const Eigen::VectorXd coefs =
      adaptive_lasso(y, rows_of(X, survivors), cfg, path_len);
  for (std::size_t idx = 0; idx < survivors.size(); ++idx) {
    out(survivors[idx]) = coefs(idx);
  }
  return out;
}

}  // namespace detail

DirectEffects estimate_direct(const Dataset& data, const CausalOrder& order,
                              const RidgeConfig& cfg, int jobs, int path_len) {
  data.validate();
  const int p = data.p();
  if (!order.valid() || order.p() != p) {
    throw Error("causal order does not match the dataset");
  }
  const Eigen::MatrixXd centered = center_rows(data.values);

  DirectEffects result;
  result.B = Eigen::MatrixXd::Zero(p, p);
  result.order = order;

  const int threads = resolve_jobs(jobs);
  (void)threads;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(threads)
#endif
  for (int pos = 0; pos < p; ++pos) {
    const int var = order.order[pos];
    std::vector<int> predecessors(order.order.begin(),
                                  order.order.begin() + pos);
    std::sort(predecessors.begin(), predecessors.end());
    const Eigen::VectorXd row = detail::cascade_fit(
        centered.row(var).transpose(), centered, predecessors, cfg, path_len);
    result.B.row(var) = row.transpose();
  }

  // Certify acyclicity against the given order on every run.
  const std::vector<int> rank = order.ranks();
  for (int i = 0; i < p; ++i) {
    for (int j = 0; j < p; ++j) {
      if (result.B(i, j) != 0.0 && rank[j] >= rank[i]) {
        throw Error("internal: direct effects violate the causal order");
      }
    }
  }
  return result;
}

TotalEffects total_from_direct(const DirectEffects& direct) {
  const int p = static_cast<int>(direct.B.rows());
  if (!direct.order.valid() || direct.order.p() != p) {
    throw Error("direct effects carry an invalid order");
  }
  const std::vector<int>& ord = direct.order.order;

  // Unit lower-triangular system in causal coordinates; invert by forward
  // substitution, column by column.
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(p, p);
  for (int r = 0; r < p; ++r) {
    for (int c = 0; c < r; ++c) {
      L(r, c) = direct.B(ord[r], ord[c]);
    }
  }
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(p, p);
  for (int c = 0; c < p; ++c) {
    M(c, c) = 1.0;
    for (int r = c + 1; r < p; ++r) {
      double sum = 0.0;
      for (int s = c; s < r; ++s) {
        sum += L(r, s) * M(s, c);
      }
      M(r, c) = sum;
    }
  }

  TotalEffects total;
  total.A = Eigen::MatrixXd::Zero(p, p);
  for (int r = 0; r < p; ++r) {
    for (int c = 0; c < p; ++c) {
      if (r != c) {
        total.A(ord[r], ord[c]) = M(r, c);
      }
    }
  }
  return total;
}

TotalEffects total_from_direct(const Eigen::MatrixXd& B) {
  DirectEffects direct;
  direct.B = B;
  direct.order.order = topological_order(B);
  return total_from_direct(direct);
}

TotalEffects estimate_total(const Dataset& data, const DirectEffects& direct,
                            const RidgeConfig& cfg, int jobs, int path_len) {
  data.validate();
  const int p = data.p();
  if (!direct.order.valid() || direct.order.p() != p ||
      direct.B.rows() != p || direct.B.cols() != p) {
    throw Error("direct effects do not match the dataset");
  }
  const Eigen::MatrixXd centered = center_rows(data.values);
  const std::vector<int> rank = direct.order.ranks();

  // Parent sets from the estimated B: parents(j) = nonzeros of row j.
  std::vector<std::vector<int>> parents(p);
  for (int j = 0; j < p; ++j) {
    for (int c = 0; c < p; ++c) {
      if (std::abs(direct.B(j, c)) > kNonzero) {
        parents[j].push_back(c);
      }
    }
  }

  // Only pairs with k(j) < k(i) are estimated; the rest are structural zeros.
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(p * (p - 1) / 2);
  for (int i = 0; i < p; ++i) {
    for (int j = 0; j < p; ++j) {
      if (i != j && rank[j] < rank[i]) {
        pairs.emplace_back(i, j);
      }
    }
  }

  TotalEffects total;
  total.A = Eigen::MatrixXd::Zero(p, p);

  const int threads = resolve_jobs(jobs);
  (void)threads;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(threads)
#endif
  for (std::size_t t = 0; t < pairs.size(); ++t) {
    const int i = pairs[t].first;
    const int j = pairs[t].second;
    std::vector<int> adjustment;
    adjustment.reserve(parents[j].size() + 1);
    adjustment.push_back(j);
    for (int q : parents[j]) {
      if (q != i && q != j) {
        adjustment.push_back(q);
      }
    }
    const Eigen::VectorXd coefs = detail::cascade_fit(
        centered.row(i).transpose(), centered, adjustment, cfg, path_len);
    total.A(i, j) = coefs(j);
  }
  return total;
}

}  // namespace hdl
