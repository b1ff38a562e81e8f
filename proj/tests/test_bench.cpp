#include <doctest.h>

#include <Eigen/Dense>
#include <sstream>

#include "hdl/bench.hpp"

using Eigen::MatrixXd;

namespace {

std::string records_csv(const hdl::BenchResult& result) {
  std::ostringstream out;
  hdl::write_records_csv(out, result.records);
  return out.str();
}

}  // namespace

TEST_CASE("support metrics from hand-counted matrices") {
  SUBCASE("perfect match") {
    MatrixXd truth = MatrixXd::Zero(3, 3);
    truth(1, 0) = 2.0;
    truth(2, 0) = -1.0;
    const hdl::Metrics m = hdl::score(truth, truth);
    CHECK(m.accuracy.value() == doctest::Approx(1.0));
    CHECK(m.coverage.value() == doctest::Approx(1.0));
  }
  SUBCASE("disjoint supports") {
    MatrixXd truth = MatrixXd::Zero(3, 3);
    truth(1, 0) = 1.0;
    MatrixXd est = MatrixXd::Zero(3, 3);
    est(2, 0) = 1.0;
    const hdl::Metrics m = hdl::score(est, truth);
    CHECK(m.accuracy.value() == doctest::Approx(0.0));
    CHECK(m.coverage.value() == doctest::Approx(0.0));
  }
  SUBCASE("four true, five estimated, two hits") {
    MatrixXd truth = MatrixXd::Zero(4, 4);
    truth(1, 0) = truth(2, 0) = truth(3, 1) = truth(3, 2) = 1.0;
    MatrixXd est = MatrixXd::Zero(4, 4);
    est(1, 0) = est(2, 0) = 1.0;               // two hits
    est(0, 1) = est(0, 2) = est(2, 3) = 1.0;   // three misses
    const hdl::Metrics m = hdl::score(est, truth);
    CHECK(m.accuracy.value() == doctest::Approx(0.4));
    CHECK(m.coverage.value() == doctest::Approx(0.5));
  }
  SUBCASE("undefined cases") {
    const MatrixXd zero = MatrixXd::Zero(3, 3);
    MatrixXd truth = MatrixXd::Zero(3, 3);
    truth(1, 0) = 1.0;
    CHECK(!hdl::score(zero, truth).accuracy.has_value());
    CHECK(hdl::score(zero, truth).coverage.value() == doctest::Approx(0.0));
    CHECK(!hdl::score(truth, zero).coverage.has_value());
    // the diagonal never counts
    MatrixXd diag = MatrixXd::Identity(3, 3);
    CHECK(!hdl::score(diag, diag).accuracy.has_value());
  }
  SUBCASE("swapping estimate and truth swaps the metrics") {
    MatrixXd a = MatrixXd::Zero(4, 4);
    a(1, 0) = a(2, 1) = a(3, 0) = 1.0;
    MatrixXd b = MatrixXd::Zero(4, 4);
    b(1, 0) = b(3, 2) = 1.0;
    const hdl::Metrics ab = hdl::score(a, b);
    const hdl::Metrics ba = hdl::score(b, a);
    CHECK(ab.accuracy.value() == doctest::Approx(ba.coverage.value()));
    CHECK(ab.coverage.value() == doctest::Approx(ba.accuracy.value()));
  }
}

TEST_CASE("quantile summaries") {
  std::vector<hdl::MetricsRecord> records;
  for (double v : {0.1, 0.2, 0.3, 0.4}) {
    records.push_back({0, "lasso", "direct", v, v, 0.0, false});
  }
  records.push_back({4, "lasso", "direct", {}, {}, 0.0, true});  // failure
  const auto summaries = hdl::summarize(records, "accuracy");
  REQUIRE(summaries.size() == 1);
  CHECK(summaries[0].defined == 4);
  CHECK(summaries[0].failures == 1);
  CHECK(summaries[0].median == doctest::Approx(0.25));
  CHECK(summaries[0].q1 == doctest::Approx(0.175));
  CHECK(summaries[0].q3 == doctest::Approx(0.325));
  CHECK(summaries[0].min == doctest::Approx(0.1));
  CHECK(summaries[0].max == doctest::Approx(0.4));
}

TEST_CASE("a single seeded trial reproduces") {
  hdl::BenchConfig cfg;
  cfg.gen.p = 10;
  cfg.gen.n = 8;
  cfg.gen.seed = 7;
  cfg.trials = 1;
  cfg.methods = {"random", "lingam"};
  const hdl::BenchResult a = hdl::run_trials(cfg);
  const hdl::BenchResult b = hdl::run_trials(cfg);
  CHECK(records_csv(a) == records_csv(b));
  REQUIRE(a.records.size() == 4);  // two methods, two targets
  CHECK(a.records[0].method == "random");
  CHECK(a.records[0].target == "direct");
  CHECK(!a.records[0].failed);
}

TEST_CASE("job count never changes the records") {
  hdl::BenchConfig cfg;
  cfg.gen.p = 12;
  cfg.gen.n = 10;
  cfg.gen.seed = 99;
  cfg.trials = 6;
  cfg.methods = {"random", "lasso", "enet", "lingam"};
  cfg.jobs = 1;
  const hdl::BenchResult serial = hdl::run_trials(cfg);
  cfg.jobs = 4;
  const hdl::BenchResult parallel = hdl::run_trials(cfg);
  CHECK(records_csv(serial) == records_csv(parallel));

  std::ostringstream s1, s2;
  hdl::write_summary_json(s1, cfg, serial.records);
  hdl::write_summary_json(s2, cfg, parallel.records);
  CHECK(s1.str() == s2.str());
}

TEST_CASE("csv layout") {
  std::vector<hdl::MetricsRecord> records;
  records.push_back({3, "enet", "total", 0.5, {}, 0.0, false});
  std::ostringstream out;
  hdl::write_records_csv(out, records);
  CHECK(out.str() ==
        "trial,method,target,accuracy,coverage,seconds\n"
        "3,enet,total,0.5,,0\n");
}

TEST_CASE("unknown methods are rejected") {
  hdl::BenchConfig cfg;
  cfg.methods = {"pc"};
  CHECK_THROWS_AS((void)hdl::run_trials(cfg), hdl::Error);
}
