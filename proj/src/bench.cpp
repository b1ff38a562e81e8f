#include "hdl/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "hdl/baselines.hpp"
#include "hdl/effects.hpp"
#include "hdl/io.hpp"
#include "hdl/ordering.hpp"
#include "hdl/version.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace hdl {

namespace {

constexpr double kNonzero = 1e-12;

double elapsed(const std::chrono::steady_clock::time_point& start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

bool contains(const std::vector<std::string>& methods, const std::string& m) {
  return std::find(methods.begin(), methods.end(), m) != methods.end();
}

// Linear-interpolation quantile of a sorted vector.
double quantile(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) {
    return 0.0;
  }
  const double pos = q * (sorted.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = static_cast<std::size_t>(std::ceil(pos));
  const double frac = pos - lo;
  return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

struct TrialOutput {
  std::vector<MetricsRecord> records;
};

void push_scores(std::vector<MetricsRecord>& out, int trial,
                 const std::string& method, const Eigen::MatrixXd& B_hat,
                 const Eigen::MatrixXd& A_hat, const GroundTruth& truth,
                 double seconds) {
  const Metrics direct = score(B_hat, truth.B_true);
  const Metrics total = score(A_hat, truth.A_true);
  out.push_back({trial, method, "direct", direct.accuracy, direct.coverage,
                 seconds, false});
  out.push_back(
      {trial, method, "total", total.accuracy, total.coverage, seconds, false});
}

void push_failure(std::vector<MetricsRecord>& out, int trial,
                  const std::string& method) {
  out.push_back({trial, method, "direct", {}, {}, 0.0, true});
  out.push_back({trial, method, "total", {}, {}, 0.0, true});
}

TrialOutput run_one_trial(const BenchConfig& cfg, int trial, int inner_jobs) {
  auto [data, truth] = synthesize(cfg.gen, 2 * static_cast<std::uint64_t>(trial));
  const RidgeConfig ridge{cfg.tau};

  const bool need_lingam =
      contains(cfg.methods, "lingam") || contains(cfg.methods, "random");

  Eigen::MatrixXd lingam_B, lingam_A;
  bool lingam_ok = false;
  double lingam_seconds = 0.0;
  if (need_lingam) {
    const auto start = std::chrono::steady_clock::now();
    try {
      const CausalOrder order = estimate_order(data, ridge, inner_jobs);
      const DirectEffects direct =
          estimate_direct(data, order, ridge, inner_jobs, cfg.path_len);
      const TotalEffects total =
          estimate_total(data, direct, ridge, inner_jobs, cfg.path_len);
      lingam_B = direct.B;
      lingam_A = total.A;
      lingam_ok = true;
    } catch (const std::exception&) {
      lingam_ok = false;
    }
    lingam_seconds = cfg.timing ? elapsed(start) : 0.0;
  }

  TrialOutput out;
  for (const std::string& method : cfg.methods) {
    if (method == "lingam") {
      if (lingam_ok) {
        push_scores(out.records, trial, method, lingam_B, lingam_A, truth,
                    lingam_seconds);
      } else {
        push_failure(out.records, trial, method);
      }
    } else if (method == "lasso" || method == "enet") {
      const auto start = std::chrono::steady_clock::now();
      try {
        const BaselineEstimate est = lasso_baseline(
            data, method == "lasso" ? 0.0 : 0.5, cfg.path_len, inner_jobs);
        push_scores(out.records, trial, method, est.B_hat, est.A_hat, truth,
                    cfg.timing ? elapsed(start) : 0.0);
      } catch (const std::exception&) {
        push_failure(out.records, trial, method);
      }
    } else if (method == "random") {
      Philox rng(cfg.gen.seed, 2 * static_cast<std::uint64_t>(trial) + 1);
      if (lingam_ok) {
        const auto start = std::chrono::steady_clock::now();
        const BaselineEstimate est = random_guess(lingam_B, lingam_A, rng);
        push_scores(out.records, trial, method, est.B_hat, est.A_hat, truth,
                    cfg.timing ? elapsed(start) : 0.0);
      } else {
        push_failure(out.records, trial, method);  // no reference counts
      }
    } else {
      throw Error("unknown method '" + method + "'");
    }
  }
  return out;
}

}  // namespace

Metrics score(const Eigen::MatrixXd& estimate, const Eigen::MatrixXd& truth) {
  if (estimate.rows() != truth.rows() || estimate.cols() != truth.cols() ||
      estimate.rows() != estimate.cols()) {
    throw Error("score needs square matrices of matching shape");
  }
  int hits = 0, in_estimate = 0, in_truth = 0;
  for (int i = 0; i < estimate.rows(); ++i) {
    for (int j = 0; j < estimate.cols(); ++j) {
      if (i == j) {
        continue;
      }
      const bool e = std::abs(estimate(i, j)) > kNonzero;
      const bool t = std::abs(truth(i, j)) > kNonzero;
      in_estimate += e;
      in_truth += t;
      hits += (e && t);
    }
  }
  Metrics m;
  if (in_estimate > 0) {
    m.accuracy = static_cast<double>(hits) / in_estimate;
  }
  if (in_truth > 0) {
    m.coverage = static_cast<double>(hits) / in_truth;
  }
  return m;
}

BenchResult run_trials(const BenchConfig& cfg) {
  if (cfg.trials < 1) {
    throw Error("bench needs at least one trial");
  }
  if (cfg.methods.empty()) {
    throw Error("bench needs at least one method");
  }
  for (const std::string& m : cfg.methods) {
    if (m != "random" && m != "lasso" && m != "enet" && m != "lingam") {
      throw Error("unknown method '" + m + "'");
    }
  }
  cfg.gen.validate();

  std::vector<TrialOutput> per_trial(cfg.trials);
#ifdef _OPENMP
  const int threads = cfg.jobs > 0 ? cfg.jobs : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
#endif
  for (int t = 0; t < cfg.trials; ++t) {
    per_trial[t] = run_one_trial(cfg, t, 1);
  }

  BenchResult result;
  result.records.reserve(cfg.trials * cfg.methods.size() * 2);
  for (const TrialOutput& t : per_trial) {
    result.records.insert(result.records.end(), t.records.begin(),
                          t.records.end());
  }
  return result;
}

std::vector<MethodSummary> summarize(const std::vector<MetricsRecord>& records,
                                     const std::string& metric) {
  std::vector<MethodSummary> out;
  std::vector<std::vector<double>> values;
  auto index_of = [&](const std::string& method, const std::string& target) {
    for (std::size_t i = 0; i < out.size(); ++i) {
      if (out[i].method == method && out[i].target == target) {
        return i;
      }
    }
    out.push_back(MethodSummary{method, target, 0, 0, 0, 0, 0, 0, 0});
    values.emplace_back();
    return out.size() - 1;
  };

  for (const MetricsRecord& r : records) {
    const std::size_t i = index_of(r.method, r.target);
    if (r.failed) {
      ++out[i].failures;
      continue;
    }
    const std::optional<double>& v =
        metric == "accuracy" ? r.accuracy : r.coverage;
    if (v.has_value()) {
      values[i].push_back(*v);
    }
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    std::sort(values[i].begin(), values[i].end());
    out[i].defined = static_cast<int>(values[i].size());
    if (!values[i].empty()) {
      out[i].median = quantile(values[i], 0.5);
      out[i].q1 = quantile(values[i], 0.25);
      out[i].q3 = quantile(values[i], 0.75);
      out[i].min = values[i].front();
      out[i].max = values[i].back();
    }
  }
  return out;
}

void write_records_csv(std::ostream& out,
                       const std::vector<MetricsRecord>& records) {
  out << "trial,method,target,accuracy,coverage,seconds\n";
  for (const MetricsRecord& r : records) {
    out << r.trial << ',' << r.method << ',' << r.target << ',';
    if (r.accuracy.has_value()) {
      out << format_double(*r.accuracy);
    }
    out << ',';
    if (r.coverage.has_value()) {
      out << format_double(*r.coverage);
    }
    out << ',' << format_double(r.seconds) << '\n';
  }
}

void write_summary_json(std::ostream& out, const BenchConfig& cfg,
                        const std::vector<MetricsRecord>& records) {
  using json = nlohmann::ordered_json;
  json root;
  root["tool"] = "hdlingam";
  root["version"] = kVersion;

  json config;
  config["p"] = cfg.gen.p;
  config["n"] = cfg.gen.n;
  config["trials"] = cfg.trials;
  config["seed"] = cfg.gen.seed;
  // Negative means the generator flips a fair coin between 2 and 5 per trial.
  config["expected_degree"] = cfg.gen.expected_degree;
  config["tau"] = cfg.tau;
  config["path_len"] = cfg.path_len;
  config["methods"] = cfg.methods;
  config["timing"] = cfg.timing;
  root["config"] = config;

  json methods = json::object();
  for (const std::string& metric : {std::string("accuracy"), std::string("coverage")}) {
    for (const MethodSummary& s : summarize(records, metric)) {
      json& slot = methods[s.method][s.target][metric];
      slot["median"] = s.median;
      slot["q1"] = s.q1;
      slot["q3"] = s.q3;
      slot["min"] = s.min;
      slot["max"] = s.max;
      slot["defined"] = s.defined;
      methods[s.method]["failures"] = s.failures;
    }
  }
  root["summary"] = methods;
  out << root.dump(2) << '\n';
}

}  // namespace hdl
