#include "hdl/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hdl/linalg.hpp"
#include "hdl/sparse_reg.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace hdl {

namespace {

constexpr double kNonzero = 1e-12;

int count_offdiag_nonzeros(const Eigen::MatrixXd& m) {
  int count = 0;
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) {
      if (i != j && std::abs(m(i, j)) > kNonzero) {
        ++count;
      }
    }
  }
  return count;
}

// `count` distinct order-consistent cells, uniformly, written as 1.0.
Eigen::MatrixXd place_random_cells(const std::vector<int>& order, int count,
                                   Philox& rng) {
  const int p = static_cast<int>(order.size());
  std::vector<std::pair<int, int>> cells;  // (later, earlier) in causal rank
  cells.reserve(p * (p - 1) / 2);
  for (int r = 1; r < p; ++r) {
    for (int c = 0; c < r; ++c) {
      cells.emplace_back(order[r], order[c]);
    }
  }
  const int capacity = static_cast<int>(cells.size());
  const int take = std::min(count, capacity);
  for (int t = 0; t < take; ++t) {  // partial Fisher-Yates
    const int pick = t + rng.uniform_index(capacity - t);
    std::swap(cells[t], cells[pick]);
  }
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(p, p);
  for (int t = 0; t < take; ++t) {
    out(cells[t].first, cells[t].second) = 1.0;
  }
  return out;
}

}  // namespace

BaselineEstimate lasso_baseline(const Dataset& data, double ridge_share,
                                int path_len, int jobs) {
  data.validate();
  const int p = data.p();
  const int n = data.n();
  const Eigen::MatrixXd centered = center_rows(data.values);

  BaselineEstimate est;
  est.method = ridge_share == 0.0 ? "lasso" : "enet";
  est.B_hat = Eigen::MatrixXd::Zero(p, p);

#ifdef _OPENMP
  const int threads = jobs > 0 ? jobs : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
#endif
  for (int i = 0; i < p; ++i) {
    LassoProblem problem;
    problem.y = centered.row(i).transpose();
    problem.X.resize(p - 1, n);
    problem.ridge_share = ridge_share;
    std::vector<int> cols;
    cols.reserve(p - 1);
    for (int j = 0; j < p; ++j) {
      if (j != i) {
        problem.X.row(cols.size()) = centered.row(j);
        cols.push_back(j);
      }
    }
    problem.weights = Eigen::VectorXd::Ones(p - 1);
    const PathSelection sel = select_bic(fit_path(problem, path_len));
    for (std::size_t idx = 0; idx < cols.size(); ++idx) {
      est.B_hat(i, cols[idx]) = sel.coefs(idx);
    }
  }
  est.A_hat = est.B_hat;  // same nonzero pattern stands in for total effects
  return est;
}

BaselineEstimate random_guess(const Eigen::MatrixXd& B_ref,
                              const Eigen::MatrixXd& A_ref, Philox& rng) {
  const int p = static_cast<int>(B_ref.rows());
  if (B_ref.cols() != p || A_ref.rows() != p || A_ref.cols() != p) {
    throw Error("reference effect matrices must be square and equal-sized");
  }
  std::vector<int> order(p);
  std::iota(order.begin(), order.end(), 0);
  for (int i = p - 1; i >= 1; --i) {
    const int j = rng.uniform_index(i + 1);
    std::swap(order[i], order[j]);
  }
  BaselineEstimate est;
  est.method = "random";
  est.B_hat = place_random_cells(order, count_offdiag_nonzeros(B_ref), rng);
  est.A_hat = place_random_cells(order, count_offdiag_nonzeros(A_ref), rng);
  return est;
}

}  // namespace hdl
