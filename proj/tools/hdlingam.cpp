#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hdl/bench.hpp"
#include "hdl/datagen.hpp"
#include "hdl/effects.hpp"
#include "hdl/io.hpp"
#include "hdl/ordering.hpp"
#include "hdl/version.hpp"

namespace {

constexpr int kExitInternal = 1;
constexpr int kExitBadCsv = 2;
constexpr int kExitConstantRow = 3;

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw hdl::Error("cannot open '" + path + "' for writing");
  }
  return out;
}

int run_discover(const std::string& input, const std::string& output,
                 double tau, int path_len, int jobs, bool transpose) {
  const hdl::Dataset data = hdl::load_dataset_csv(input, transpose);
  const hdl::RidgeConfig cfg{tau};
  const hdl::CausalOrder order = hdl::estimate_order(data, cfg, jobs);
  const hdl::DirectEffects direct =
      hdl::estimate_direct(data, order, cfg, jobs, path_len);
  const hdl::TotalEffects total =
      hdl::estimate_total(data, direct, cfg, jobs, path_len);
  if (output.empty()) {
    hdl::write_discovery_json(std::cout, data, direct, total, cfg, path_len);
  } else {
    auto out = open_out(output);
    hdl::write_discovery_json(out, data, direct, total, cfg, path_len);
  }
  return 0;
}

int run_simulate(const hdl::GeneratorConfig& cfg, const std::string& data_path,
                 const std::string& truth_path) {
  const auto [data, truth] = hdl::synthesize(cfg, 0);
  {
    auto out = open_out(data_path);
    hdl::save_dataset_csv(out, data);
  }
  {
    auto out = open_out(truth_path);
    hdl::write_ground_truth_json(out, cfg, truth);
  }
  return 0;
}

int run_bench(const hdl::BenchConfig& cfg, const std::string& records_path,
              const std::string& summary_path) {
  const hdl::BenchResult result = hdl::run_trials(cfg);
  {
    auto out = open_out(records_path);
    hdl::write_records_csv(out, result.records);
  }
  {
    auto out = open_out(summary_path);
    hdl::write_summary_json(out, cfg, result.records);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "hdlingam: causal network discovery for steady-state data with more "
      "variables than observations"};
  app.set_version_flag("--version", std::string(hdl::kVersion));
  app.require_subcommand(1);

  // discover
  std::string in_path, out_path;
  double tau = 0.01;
  int path_len = 100;
  int jobs = 0;
  bool transpose = false;
  auto* discover = app.add_subcommand(
      "discover", "Estimate causal order, direct and total effects from CSV");
  discover->add_option("-i,--input", in_path, "Input CSV, rows = variables")
      ->required();
  discover->add_option("-o,--output", out_path,
                       "Output JSON path (default: stdout)");
  discover->add_option("--tau", tau, "Ridge penalty")->check(CLI::NonNegativeNumber);
  discover->add_option("--path-len", path_len, "Regularization path length")
      ->check(CLI::Range(2, 10000));
  discover->add_option("-j,--jobs", jobs,
                       "Worker threads, 0 = all available cores");
  discover->add_flag("--transpose", transpose,
                     "Input holds samples as rows and variables as columns");

  // simulate
  hdl::GeneratorConfig gen;
  std::string data_path, truth_path;
  auto* simulate =
      app.add_subcommand("simulate", "Generate one synthetic dataset");
  simulate->add_option("--p", gen.p, "Number of variables")
      ->check(CLI::PositiveNumber);
  simulate->add_option("--n", gen.n, "Number of observations")
      ->check(CLI::Range(2, 1 << 26));
  simulate->add_option("--seed", gen.seed, "RNG seed");
  simulate->add_option(
      "--expected-degree", gen.expected_degree,
      "Expected adjacent variables per node; negative = fair coin between 2 and 5");
  simulate->add_option("--data", data_path, "Output dataset CSV")->required();
  simulate->add_option("--truth", truth_path, "Output ground-truth JSON")
      ->required();

  // bench
  hdl::BenchConfig bench;
  std::string records_path, summary_path;
  auto* bench_cmd = app.add_subcommand(
      "bench", "Run seeded trials comparing discovery methods");
  bench_cmd->add_option("--p", bench.gen.p, "Number of variables")
      ->check(CLI::PositiveNumber);
  bench_cmd->add_option("--n", bench.gen.n, "Number of observations")
      ->check(CLI::Range(2, 1 << 26));
  bench_cmd->add_option("--trials", bench.trials, "Number of trials")
      ->check(CLI::PositiveNumber);
  bench_cmd->add_option("--seed", bench.gen.seed, "RNG seed");
  bench_cmd->add_option(
      "--expected-degree", bench.gen.expected_degree,
      "Expected adjacent variables per node; negative = fair coin between 2 and 5");
  bench_cmd
      ->add_option("--methods", bench.methods,
                   "Methods to run (random, lasso, enet, lingam)")
      ->delimiter(',');
  bench_cmd->add_option("--tau", bench.tau, "Ridge penalty")
      ->check(CLI::NonNegativeNumber);
  bench_cmd->add_option("--path-len", bench.path_len, "Path length")
      ->check(CLI::Range(2, 10000));
  bench_cmd->add_option("-j,--jobs", bench.jobs,
                        "Worker threads, 0 = all available cores");
  bench_cmd->add_flag(
      "--timing", bench.timing,
      "Record wall-clock seconds (makes outputs non-reproducible)");
  bench_cmd->add_option("--records", records_path, "Output per-trial CSV")
      ->required();
  bench_cmd->add_option("--summary", summary_path, "Output summary JSON")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (discover->parsed()) {
      return run_discover(in_path, out_path, tau, path_len, jobs, transpose);
    }
    if (simulate->parsed()) {
      return run_simulate(gen, data_path, truth_path);
    }
    if (bench_cmd->parsed()) {
      return run_bench(bench, records_path, summary_path);
    }
  } catch (const hdl::CsvError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitBadCsv;
  } catch (const hdl::ConstantRowError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConstantRow;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInternal;
  }
  return 0;
}
