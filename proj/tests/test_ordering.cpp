#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <vector>

#include "hdl/ordering.hpp"
#include "hdl/reference.hpp"
#include "hdl/rng.hpp"

using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

VectorXd centered_uniform(int n, hdl::Philox& rng) {
  VectorXd v(n);
  for (int i = 0; i < n; ++i) {
    v(i) = rng.uniform(-1.732, 1.732);  // roughly unit variance
  }
  v.array() -= v.mean();
  return v;
}

hdl::Dataset make_dataset(const MatrixXd& values) {
  return hdl::Dataset{values, hdl::default_var_ids(static_cast<int>(values.rows()))};
}

double pearson_abs(const VectorXd& a, const VectorXd& b) {
  const Eigen::ArrayXd ac = a.array() - a.mean();
  const Eigen::ArrayXd bc = b.array() - b.mean();
  return std::abs((ac * bc).sum() /
                  std::sqrt(ac.square().sum() * bc.square().sum()));
}

}  // namespace

TEST_CASE("independence score of an empty set is zero") {
  hdl::Philox rng(103, 0);
  const VectorXd c = centered_uniform(50, rng);
  CHECK(hdl::independence_score(c, {}) == 0.0);
}

TEST_CASE("independent samples score near zero") {
  hdl::Philox rng(107, 0);
  const int n = 10000;
  const VectorXd c = centered_uniform(n, rng);
  std::vector<VectorXd> others;
  for (int r = 0; r < 4; ++r) {
    VectorXd v(n);
    for (int i = 0; i < n; ++i) {
      v(i) = rng.laplace();
    }
    v.array() -= v.mean();
    others.push_back(v);
  }
  CHECK(hdl::independence_score(c, others) < 0.05 * others.size());
}

TEST_CASE("a dependent residual scores strictly positive") {
  hdl::Philox rng(109, 0);
  const VectorXd c = centered_uniform(2000, rng);
  // corr(tanh(x), x) is large for a nondegenerate sample
  CHECK(hdl::independence_score(c, {c}) > 1.0);
}

TEST_CASE("score is additive over disjoint residual sets") {
  hdl::Philox rng(113, 0);
  const VectorXd c = centered_uniform(200, rng);
  std::vector<VectorXd> s1, s2, all;
  for (int r = 0; r < 3; ++r) {
    s1.push_back(centered_uniform(200, rng));
    all.push_back(s1.back());
  }
  for (int r = 0; r < 2; ++r) {
    s2.push_back(centered_uniform(200, rng));
    all.push_back(s2.back());
  }
  const double split =
      hdl::independence_score(c, s1) + hdl::independence_score(c, s2);
  CHECK(hdl::independence_score(c, all) == doctest::Approx(split).epsilon(1e-12));

  // permutation invariance: it is a plain sum
  std::vector<VectorXd> shuffled = {all[4], all[1], all[3], all[0], all[2]};
  CHECK(hdl::independence_score(c, shuffled) ==
        doctest::Approx(hdl::independence_score(c, all)).epsilon(1e-12));
}

TEST_CASE("degenerate residuals contribute zero and are flagged") {
  hdl::Philox rng(127, 0);
  const VectorXd c = centered_uniform(100, rng);
  const VectorXd flat = VectorXd::Zero(100);
  int flagged = 0;
  const double with_flat = hdl::independence_score(c, {flat}, &flagged);
  CHECK(with_flat == 0.0);
  CHECK(flagged == 1);
}

TEST_CASE("rescaling changes tanh terms but not plain correlations") {
  hdl::Philox rng(131, 0);
  const VectorXd c = centered_uniform(500, rng);
  const VectorXd other = (0.6 * c + 0.8 * centered_uniform(500, rng)).eval();
  // Pearson magnitude is scale-free...
  CHECK(pearson_abs(c, other) ==
        doctest::Approx(pearson_abs((4.0 * c).eval(), other)).epsilon(1e-12));
  // ...the tanh-correlation score is not; this is documented behavior.
  const double base = hdl::independence_score(c, {other});
  const double scaled = hdl::independence_score((4.0 * c).eval(), {other});
  CHECK(std::abs(base - scaled) > 1e-6);
}

TEST_CASE("kernel scores agree with the serial reference") {
  hdl::Philox rng(137, 0);
  SUBCASE("primal regime, empty and small conditioning sets") {
    MatrixXd X(8, 40);
    for (int r = 0; r < 8; ++r) {
      X.row(r) = centered_uniform(40, rng).transpose();
    }
    // chain a few dependencies in
    X.row(3) += 1.5 * X.row(0);
    X.row(5) -= 0.8 * X.row(3);
    const MatrixXd centered = hdl::center_rows(X);
    for (const std::vector<int>& ordered :
         {std::vector<int>{}, std::vector<int>{0}, std::vector<int>{0, 3}}) {
      std::vector<int> remaining;
      for (int v = 0; v < 8; ++v) {
        if (std::find(ordered.begin(), ordered.end(), v) == ordered.end()) {
          remaining.push_back(v);
        }
      }
      const auto fast =
          hdl::detail::exogenous_scores(centered, ordered, remaining, 0.01, 2);
      const auto ref =
          hdl::ref::exogenous_scores(centered, ordered, remaining, 0.01);
      REQUIRE(fast.size() == ref.size());
      for (std::size_t i = 0; i < fast.size(); ++i) {
        CHECK(fast[i] == doctest::Approx(ref[i]).epsilon(1e-8));
      }
    }
  }
  SUBCASE("dual regime, conditioning set larger than the sample count") {
    const int p = 30, n = 12;
    MatrixXd X(p, n);
    for (int r = 0; r < p; ++r) {
      X.row(r) = centered_uniform(n, rng).transpose();
    }
    const MatrixXd centered = hdl::center_rows(X);
    std::vector<int> ordered;
    for (int v = 0; v < 15; ++v) {
      ordered.push_back(v);  // basis size 16 > n = 12
    }
    std::vector<int> remaining;
    for (int v = 15; v < p; ++v) {
      remaining.push_back(v);
    }
    const auto fast =
        hdl::detail::exogenous_scores(centered, ordered, remaining, 0.01, 2);
    const auto ref =
        hdl::ref::exogenous_scores(centered, ordered, remaining, 0.01);
    for (std::size_t i = 0; i < fast.size(); ++i) {
      CHECK(fast[i] == doctest::Approx(ref[i]).epsilon(1e-8));
    }
  }
}

TEST_CASE("two-variable direction is identified") {
  int hits = 0;
  const int reps = 40;
  for (int rep = 0; rep < reps; ++rep) {
    hdl::Philox rng(3100 + rep, 0);
    const int n = 2000;
    MatrixXd X(2, n);
    X.row(0) = centered_uniform(n, rng).transpose();
    X.row(1) = (2.0 * X.row(0)) +
               centered_uniform(n, rng).transpose();
    const int found = hdl::find_exogenous(make_dataset(X), {}, {0.01}, 1);
    if (found == 0) {
      ++hits;
    }
  }
  CHECK(hits >= 38);  // >= 95%
}

TEST_CASE("mutually independent variables give a deterministic winner") {
  hdl::Philox rng(139, 0);
  MatrixXd X(4, 500);
  for (int r = 0; r < 4; ++r) {
    X.row(r) = centered_uniform(500, rng).transpose();
  }
  const hdl::Dataset data = make_dataset(X);
  const int first = hdl::find_exogenous(data, {}, {0.01}, 1);
  const int second = hdl::find_exogenous(data, {}, {0.01}, 2);
  CHECK(first == second);
}

TEST_CASE("trivial single-variable order") {
  MatrixXd X(1, 5);
  X << 1, 2, 3, 4, 5;
  const hdl::CausalOrder order = hdl::estimate_order(make_dataset(X), {0.01});
  REQUIRE(order.order.size() == 1);
  CHECK(order.order[0] == 0);
}

TEST_CASE("chain order is recovered with laplace noise") {
  int hits = 0;
  const int reps = 30;
  for (int rep = 0; rep < reps; ++rep) {
    hdl::Philox rng(4200 + rep, 0);
    const int n = 5000;
    MatrixXd X(3, n);
    for (int i = 0; i < n; ++i) {
      X(0, i) = rng.laplace();
    }
    for (int i = 0; i < n; ++i) {
      X(1, i) = X(0, i) + rng.laplace();
    }
    for (int i = 0; i < n; ++i) {
      X(2, i) = X(1, i) + rng.laplace();
    }
    const hdl::CausalOrder order = hdl::estimate_order(make_dataset(X), {0.01});
    REQUIRE(order.valid());
    if (order.order == std::vector<int>{0, 1, 2}) {
      ++hits;
    }
  }
  CHECK(hits >= 27);  // >= 90%
}

TEST_CASE("ordering is equivariant under relabeling") {
  hdl::Philox rng(149, 0);
  const int n = 2000;
  MatrixXd X(4, n);
  for (int i = 0; i < n; ++i) {
    X(0, i) = rng.laplace();
  }
  for (int i = 0; i < n; ++i) {
    X(1, i) = 1.2 * X(0, i) + rng.laplace();
  }
  for (int i = 0; i < n; ++i) {
    X(2, i) = -0.9 * X(1, i) + rng.laplace();
  }
  for (int i = 0; i < n; ++i) {
    X(3, i) = 0.7 * X(0, i) + 0.8 * X(2, i) + rng.laplace();
  }
  const hdl::CausalOrder base = hdl::estimate_order(make_dataset(X), {0.01});

  const std::vector<int> relabel = {2, 0, 3, 1};  // new index of old variable
  MatrixXd Y(4, n);
  for (int v = 0; v < 4; ++v) {
    Y.row(relabel[v]) = X.row(v);
  }
  const hdl::CausalOrder permuted = hdl::estimate_order(make_dataset(Y), {0.01});
  REQUIRE(permuted.valid());
  for (int pos = 0; pos < 4; ++pos) {
    CHECK(permuted.order[pos] == relabel[base.order[pos]]);
  }
}

TEST_CASE("estimated orders are always permutations") {
  for (int rep = 0; rep < 5; ++rep) {
    hdl::Philox rng(5300 + rep, 0);
    MatrixXd X(6, 50);
    for (int r = 0; r < 6; ++r) {
      X.row(r) = centered_uniform(50, rng).transpose();
    }
    const hdl::CausalOrder order = hdl::estimate_order(make_dataset(X), {0.01});
    CHECK(order.valid());
  }
}
