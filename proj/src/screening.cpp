#include "hdl/screening.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "hdl/sparse_reg.hpp"

namespace hdl {

namespace {

constexpr int kMaxRounds = 10;
constexpr double kDegenerateNorm = 1e-12;

double abs_correlation(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const double an = a.size();
  const Eigen::VectorXd ac = a.array() - a.mean();
  const Eigen::VectorXd bc = b.array() - b.mean();
  const double va = ac.squaredNorm() / an;
  const double vb = bc.squaredNorm() / an;
  if (va < kDegenerateNorm || vb < kDegenerateNorm) {
    return 0.0;
  }
  return std::abs(ac.dot(bc) / an / std::sqrt(va * vb));
}

// Top-count |correlation| ranks among `candidates`; ties to the lower index.
std::vector<int> rank_by_correlation(const Eigen::VectorXd& y,
                                     const Eigen::MatrixXd& X,
                                     const std::vector<int>& candidates,
                                     int count) {
  std::vector<std::pair<double, int>> scored;
  scored.reserve(candidates.size());
  for (int j : candidates) {
    scored.emplace_back(abs_correlation(y, X.row(j).transpose()), j);
  }
  std::stable_sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) {
      return a.first > b.first;
    }
    return a.second < b.second;
  });
  const int take = std::min<int>(count, static_cast<int>(scored.size()));
  std::vector<int> out;
  out.reserve(take);
  for (int t = 0; t < take; ++t) {
    out.push_back(scored[t].second);
  }
  return out;
}

// BIC-selected plain lasso of y on the pooled predictors; survivors keep the
// pool order.
std::vector<int> lasso_survivors(const Eigen::VectorXd& y,
                                 const Eigen::MatrixXd& X,
                                 const std::vector<int>& pool, int path_len) {
  LassoProblem problem;
  problem.y = y;
  problem.X.resize(pool.size(), y.size());
  for (std::size_t idx = 0; idx < pool.size(); ++idx) {
    problem.X.row(idx) = X.row(pool[idx]);
  }
  problem.weights = Eigen::VectorXd::Ones(pool.size());
  const PathSelection sel = select_bic(fit_path(problem, path_len));
  std::vector<int> out;
  for (std::size_t idx = 0; idx < pool.size(); ++idx) {
    if (sel.coefs(idx) != 0.0) {
      out.push_back(pool[idx]);
    }
  }
  return out;
}

}  // namespace

int sis_round_size(int n) {
  const int size = static_cast<int>(std::floor(n / std::log(static_cast<double>(n))));
  return std::max(1, size);
}

std::vector<int> sis_round(const Eigen::VectorXd& y, const Eigen::MatrixXd& X,
                           int count) {
  if (count < 1) {
    throw Error("sis_round needs count >= 1");
  }
  std::vector<int> all(X.rows());
  std::iota(all.begin(), all.end(), 0);
  return rank_by_correlation(y, X, all, count);
}

ScreenResult isis(const Eigen::VectorXd& y, const Eigen::MatrixXd& X,
                  int target_dim, const RidgeConfig& cfg, int path_len) {
  const int k = static_cast<int>(X.rows());
  const int n = static_cast<int>(y.size());
  if (target_dim > n - 1) {
    throw Error("isis target dimension must stay below the sample size");
  }
  ScreenResult result;
  if (k <= target_dim) {  // nothing to reduce
    result.selected.resize(k);
    std::iota(result.selected.begin(), result.selected.end(), 0);
    return result;
  }

  const int round_size = sis_round_size(n);
  std::vector<int> selected;
  Eigen::VectorXd residual = y;
  for (int round = 0; round < kMaxRounds; ++round) {
    if (static_cast<int>(selected.size()) >= target_dim) {
      break;
    }
    std::unordered_set<int> in_selected(selected.begin(), selected.end());
    std::vector<int> candidates;
    candidates.reserve(k);
    for (int j = 0; j < k; ++j) {
      if (in_selected.find(j) == in_selected.end()) {
        candidates.push_back(j);
      }
    }
    if (candidates.empty()) {
      break;
    }
    const std::vector<int> fresh =
        rank_by_correlation(residual, X, candidates, round_size);

    std::vector<int> pool = selected;  // prior survivors first
    pool.insert(pool.end(), fresh.begin(), fresh.end());
    const std::vector<int> survivors = lasso_survivors(y, X, pool, path_len);

    result.per_round.push_back({fresh, survivors});

    bool entered = false;
    for (int j : survivors) {
      if (in_selected.find(j) == in_selected.end()) {
        entered = true;
        break;
      }
    }
    selected = survivors;
    if (!entered) {
      break;
    }

    Eigen::MatrixXd sub(selected.size(), n);
    for (std::size_t idx = 0; idx < selected.size(); ++idx) {
      sub.row(idx) = X.row(selected[idx]);
    }
    residual = ridge_residual(y, sub, cfg);
    residual.array() -= residual.mean();
    if (residual.norm() < kDegenerateNorm) {
      break;
    }
  }

  if (static_cast<int>(selected.size()) > target_dim) {
    selected.resize(target_dim);  // pool order: earlier survivors, then rank
  }
  result.selected = selected;
  return result;
}

}  // namespace hdl
