#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "hdl/datagen.hpp"

namespace hdl {

/// Support-recovery metrics on off-diagonal cells, nonzero = |entry| > 1e-12.
/// accuracy = |est ∩ true| / |est| (undefined when the estimate is empty),
/// coverage = |est ∩ true| / |true| (undefined when the truth is empty).
struct Metrics {
  std::optional<double> accuracy;
  std::optional<double> coverage;
};

Metrics score(const Eigen::MatrixXd& estimate, const Eigen::MatrixXd& truth);

struct MetricsRecord {
  int trial = 0;
  std::string method;  // random | lasso | enet | lingam
  std::string target;  // direct | total
  std::optional<double> accuracy;
  std::optional<double> coverage;
  double seconds = 0.0;
  bool failed = false;
};

struct BenchConfig {
  GeneratorConfig gen;
  int trials = 101;
  std::vector<std::string> methods = {"random", "lasso", "enet", "lingam"};
  double tau = 0.01;
  int path_len = 100;
  int jobs = 1;
  /// Record wall-clock seconds per method. Off by default so that outputs are
  /// byte-reproducible across runs and job counts.
  bool timing = false;
};

struct MethodSummary {
  std::string method;
  std::string target;
  int defined = 0;
  int failures = 0;
  double median = 0.0, q1 = 0.0, q3 = 0.0, min = 0.0, max = 0.0;
};

struct BenchResult {
  std::vector<MetricsRecord> records;  // ordered by (trial, method, target)
};

/// Per trial: synthesize -> run each method -> score against the ground
/// truth. Trials run in parallel on disjoint RNG streams; output is
/// independent of the job count.
BenchResult run_trials(const BenchConfig& cfg);

/// Linear-interpolation quantile of the defined values of one metric.
std::vector<MethodSummary> summarize(const std::vector<MetricsRecord>& records,
                                     const std::string& metric);

void write_records_csv(std::ostream& out, const std::vector<MetricsRecord>& records);
void write_summary_json(std::ostream& out, const BenchConfig& cfg,
                        const std::vector<MetricsRecord>& records);

}  // namespace hdl
