#pragma once

#include <Eigen/Dense>
#include <vector>

#include "hdl/linalg.hpp"

namespace hdl {

struct ScreenResult {
  std::vector<int> selected;  // <= target_dim distinct predictor indices
  struct Round {
    std::vector<int> corr_selected;
    std::vector<int> lasso_survivors;
  };
  std::vector<Round> per_round;
};

/// Per-round pick count floor(n / ln n), at least 1.
int sis_round_size(int n);

/// Indices of the `count` predictors with the largest |Pearson correlation|
/// with y; ties break toward the lower index.
std::vector<int> sis_round(const Eigen::VectorXd& y, const Eigen::MatrixXd& X,
                           int count);

/// Iterative sure independence screening: correlation-rank a batch of new
/// predictors against the current residual, run a BIC-selected lasso on the
/// accumulated set, residualize y on the survivors, repeat. Stops when the
/// selected set reaches target_dim, when no new variable enters, or after ten
/// rounds. With k <= target_dim screening is bypassed and all predictors are
/// returned.
ScreenResult isis(const Eigen::VectorXd& y, const Eigen::MatrixXd& X,
                  int target_dim, const RidgeConfig& cfg, int path_len = 100);

}  // namespace hdl
