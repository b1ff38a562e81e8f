#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "hdl/datagen.hpp"
#include "hdl/effects.hpp"
#include "hdl/rng.hpp"
#include "hdl/sparse_reg.hpp"
#include "oracles.hpp"

using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

hdl::Dataset make_dataset(const MatrixXd& values) {
  return hdl::Dataset{values,
                      hdl::default_var_ids(static_cast<int>(values.rows()))};
}

// Random acyclic B: lower-triangular support under a random permutation.
MatrixXd random_dag(int p, double density, hdl::Philox& rng) {
  std::vector<int> order(p);
  for (int i = 0; i < p; ++i) {
    order[i] = i;
  }
  for (int i = p - 1; i >= 1; --i) {
    std::swap(order[i], order[rng.uniform_index(i + 1)]);
  }
  MatrixXd B = MatrixXd::Zero(p, p);
  for (int r = 1; r < p; ++r) {
    for (int c = 0; c < r; ++c) {
      if (rng.uniform01() < density) {
        const double sign = rng.coin() ? 1.0 : -1.0;
        B(order[r], order[c]) = sign * rng.uniform(0.5, 1.5);
      }
    }
  }
  return B;
}

MatrixXd chain3(double b21, double b32) {
  MatrixXd B = MatrixXd::Zero(3, 3);
  B(1, 0) = b21;
  B(2, 1) = b32;
  return B;
}

}  // namespace

TEST_CASE("topological order detects cycles") {
  MatrixXd B = MatrixXd::Zero(3, 3);
  B(1, 0) = 1.0;
  B(2, 1) = 1.0;
  CHECK(hdl::topological_order(B) == std::vector<int>{0, 1, 2});
  B(0, 2) = 1.0;  // close the loop
  CHECK_THROWS_AS((void)hdl::topological_order(B), hdl::Error);
}

TEST_CASE("total effects of hand-computed graphs") {
  SUBCASE("zero direct effects give zero total effects") {
    const hdl::TotalEffects total = hdl::total_from_direct(MatrixXd::Zero(4, 4));
    CHECK(total.A.cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("chain multiplies along the path") {
    const hdl::TotalEffects total = hdl::total_from_direct(chain3(2.0, 2.0));
    CHECK(total.A(1, 0) == doctest::Approx(2.0));
    CHECK(total.A(2, 1) == doctest::Approx(2.0));
    CHECK(total.A(2, 0) == doctest::Approx(4.0));
    CHECK(total.A(0, 1) == 0.0);
    CHECK(total.A.diagonal().cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("diamond sums over paths") {
    MatrixXd B = MatrixXd::Zero(4, 4);
    B(1, 0) = 1.0;  // 1 -> 2
    B(2, 0) = 1.0;  // 1 -> 3
    B(3, 1) = 1.0;  // 2 -> 4
    B(3, 2) = 1.0;  // 3 -> 4
    const hdl::TotalEffects total = hdl::total_from_direct(B);
    CHECK(total.A(3, 0) == doctest::Approx(2.0));
  }
}

TEST_CASE("total effects match path-sum enumeration") {
  hdl::Philox rng(151, 0);
  for (int rep = 0; rep < 25; ++rep) {
    const int p = 3 + rep % 6;  // up to 8
    const MatrixXd B = random_dag(p, 0.4, rng);
    const hdl::TotalEffects total = hdl::total_from_direct(B);
    const MatrixXd expected = oracle::total_effects_path_sum(B);
    CHECK((total.A - expected).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("total effects invert exactly") {
  hdl::Philox rng(157, 0);
  for (int rep = 0; rep < 10; ++rep) {
    const int p = 4 + rep % 4;
    const MatrixXd B = random_dag(p, 0.5, rng);
    MatrixXd M = hdl::total_from_direct(B).A;
    M.diagonal().setOnes();
    const MatrixXd I = MatrixXd::Identity(p, p);
    CHECK(((I - B) * M - I).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("first variable in the order gets a zero row") {
  hdl::Philox rng(163, 0);
  MatrixXd X(3, 60);
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 60; ++c) {
      X(r, c) = rng.laplace();
    }
  }
  hdl::CausalOrder order;
  order.order = {1, 0, 2};
  const hdl::DirectEffects direct =
      hdl::estimate_direct(make_dataset(X), order, {0.01});
  CHECK(direct.B.row(1).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("direct effects recover a known chain") {
  int good = 0;
  const int reps = 25;
  for (int rep = 0; rep < reps; ++rep) {
    hdl::Philox rng(6400 + rep, 0);
    const int n = 2000;
    MatrixXd B = MatrixXd::Zero(5, 5);
    B(1, 0) = 1.1;
    B(2, 1) = -0.8;
    B(3, 2) = 0.9;
    B(4, 3) = 1.3;
    MatrixXd X(5, n);
    for (int i = 0; i < 5; ++i) {
      for (int c = 0; c < n; ++c) {
        X(i, c) = rng.laplace();
      }
      for (int j = 0; j < i; ++j) {
        if (B(i, j) != 0.0) {
          X.row(i) += B(i, j) * X.row(j);
        }
      }
    }
    hdl::CausalOrder order;
    order.order = {0, 1, 2, 3, 4};
    const hdl::DirectEffects direct =
        hdl::estimate_direct(make_dataset(X), order, {0.01});
    bool ok = true;
    for (int i = 0; i < 5; ++i) {
      for (int j = 0; j < 5; ++j) {
        const bool truth = B(i, j) != 0.0;
        const bool est = direct.B(i, j) != 0.0;
        ok = ok && truth == est;
        ok = ok && std::abs(direct.B(i, j) - B(i, j)) < 0.1;
      }
    }
    if (ok) {
      ++good;
    }
  }
  CHECK(good >= 22);  // >= 90%
}

TEST_CASE("high-dimensional rows respect the screening cap") {
  hdl::GeneratorConfig cfg;
  cfg.p = 100;
  cfg.n = 30;
  cfg.expected_degree = 2.0;
  cfg.seed = 987;
  const auto [data, truth] = hdl::synthesize(cfg, 0);
  hdl::CausalOrder order;
  order.order = hdl::topological_order(truth.B_true);
  const hdl::DirectEffects direct = hdl::estimate_direct(data, order, {0.01});
  const std::vector<int> rank = order.ranks();
  for (int i = 0; i < 100; ++i) {
    int nonzeros = 0;
    for (int j = 0; j < 100; ++j) {
      if (direct.B(i, j) != 0.0) {
        ++nonzeros;
        CHECK(rank[j] < rank[i]);  // strictly lower triangular under the order
      }
    }
    CHECK(nonzeros <= 29);
  }
}

TEST_CASE("exogenous source with no parents uses a plain adaptive lasso") {
  hdl::Philox rng(167, 0);
  const int n = 500;
  MatrixXd X(2, n);
  for (int c = 0; c < n; ++c) {
    X(0, c) = rng.laplace();
  }
  X.row(1) = 1.4 * X.row(0);
  for (int c = 0; c < n; ++c) {
    X(1, c) += 0.3 * rng.laplace();
  }
  hdl::DirectEffects direct;
  direct.B = MatrixXd::Zero(2, 2);
  direct.B(1, 0) = 1.4;
  direct.order.order = {0, 1};
  const hdl::Dataset data = make_dataset(X);
  const hdl::TotalEffects total = hdl::estimate_total(data, direct, {0.01});

  const MatrixXd centered = hdl::center_rows(X);
  const VectorXd expected = hdl::adaptive_lasso(
      centered.row(1).transpose(), centered.topRows(1), {0.01});
  CHECK(total.A(1, 0) == doctest::Approx(expected(0)).epsilon(1e-12));
  CHECK(total.A(0, 1) == 0.0);  // against the order: structural zero
}

TEST_CASE("back-door adjustment removes a confounded association") {
  int good = 0;
  const int reps = 30;
  for (int rep = 0; rep < reps; ++rep) {
    hdl::Philox rng(7500 + rep, 0);
    const int n = 2000;
    MatrixXd X(3, n);  // 0 = z, 1 = x, 2 = y ; z -> x, z -> y, no x -> y
    for (int c = 0; c < n; ++c) {
      X(0, c) = rng.laplace();
      X(1, c) = X(0, c) + rng.laplace();
      X(2, c) = X(0, c) + rng.laplace();
    }
    hdl::DirectEffects direct;
    direct.B = MatrixXd::Zero(3, 3);
    direct.B(1, 0) = 1.0;
    direct.B(2, 0) = 1.0;
    direct.order.order = {0, 1, 2};
    const hdl::TotalEffects total =
        hdl::estimate_total(make_dataset(X), direct, {0.01});

    // unadjusted single-predictor regression stays badly confounded
    const MatrixXd centered = hdl::center_rows(X);
    const double unadjusted = centered.row(1).dot(centered.row(2)) /
                              centered.row(1).squaredNorm();
    if (std::abs(total.A(2, 1)) < 0.1 && std::abs(unadjusted) > 0.3) {
      ++good;
    }
  }
  CHECK(good >= 27);  // >= 90%
}

TEST_CASE("chain total effect accumulates to one") {
  int good = 0;
  const int reps = 30;
  for (int rep = 0; rep < reps; ++rep) {
    hdl::Philox rng(8600 + rep, 0);
    const int n = 2000;
    MatrixXd X(3, n);
    for (int c = 0; c < n; ++c) {
      X(0, c) = rng.laplace();
      X(1, c) = X(0, c) + rng.laplace();
      X(2, c) = X(1, c) + rng.laplace();
    }
    hdl::DirectEffects direct;
    direct.B = chain3(1.0, 1.0);
    direct.order.order = {0, 1, 2};
    const hdl::TotalEffects total =
        hdl::estimate_total(make_dataset(X), direct, {0.01});
    if (std::abs(total.A(2, 0) - 1.0) < 0.15) {
      ++good;
    }
  }
  CHECK(good >= 27);  // >= 90%
}

TEST_CASE("total estimates never oppose the certified order") {
  hdl::Philox rng(173, 0);
  MatrixXd X(4, 100);
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 100; ++c) {
      X(r, c) = rng.laplace();
    }
  }
  X.row(2) += 0.9 * X.row(0);
  X.row(3) += 0.7 * X.row(2);
  const hdl::Dataset data = make_dataset(X);
  const hdl::CausalOrder order = hdl::estimate_order(data, {0.01});
  const hdl::DirectEffects direct = hdl::estimate_direct(data, order, {0.01});
  const hdl::TotalEffects total = hdl::estimate_total(data, direct, {0.01});
  const std::vector<int> rank = order.ranks();
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      if (i != j && rank[j] >= rank[i]) {
        CHECK(total.A(i, j) == 0.0);
      }
    }
  }
}
