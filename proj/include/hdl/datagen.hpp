#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "hdl/dataset.hpp"
#include "hdl/rng.hpp"

namespace hdl {

enum class NoiseFamily { kGaussMixAsym = 0, kGaussMixSym = 1, kLaplace = 2 };

const char* noise_family_name(NoiseFamily family);

struct GeneratorConfig {
  int p = 100;
  int n = 30;
  /// Expected number of adjacent variables; negative picks 2 or 5 by a fair
  /// coin per dataset, 0 gives an empty graph.
  double expected_degree = -1.0;
  std::uint64_t seed = 0;
  /// Families the per-variable noise distribution is drawn from.
  std::vector<NoiseFamily> families = {NoiseFamily::kGaussMixAsym,
                                       NoiseFamily::kGaussMixSym,
                                       NoiseFamily::kLaplace};
  /// Disable the final random variable relabeling (round-trip tests).
  bool permute = true;

  double coef_min = 0.5, coef_max = 1.5;       // |b_ij| range
  double var_min = 1.0, var_max = 3.0;         // noise variance range
  double mean_sd = 2.0;                        // noise means ~ N(0, mean_sd^2)

  double sparseness(double degree) const { return degree / (p - 1); }
  void validate() const;
};

struct NoiseDraw {
  Eigen::VectorXd values;
  NoiseFamily family;
  double variance = 0.0;
  double mean = 0.0;
};

struct GroundTruth {
  Eigen::MatrixXd B_true;  // in observed (permuted) labels
  Eigen::MatrixXd A_true;  // (I - B_true)^{-1}, zero diagonal
  std::vector<int> permutation;  // observed row r came from generated var permutation[r]
  std::vector<NoiseFamily> noise_family;  // per observed variable
  std::vector<double> noise_variance;
  std::vector<double> noise_mean;
  double expected_degree_used = 0.0;
};

/// Strictly lower-triangular support ~ Bernoulli(degree/(p-1)); nonzero
/// magnitudes uniform on [coef_min, coef_max] with a fair sign coin.
Eigen::MatrixXd sample_structure(const GeneratorConfig& cfg, double degree,
                                 Philox& rng);

/// n draws from one noise family, scaled to a target variance drawn uniform
/// from [var_min, var_max], shifted by a mean ~ N(0, mean_sd^2).
NoiseDraw sample_noise(const GeneratorConfig& cfg, Philox& rng);

/// Full dataset: structure, noises, forward propagation x = (I-B)^{-1} e,
/// then a uniform random relabeling of the variables.
std::pair<Dataset, GroundTruth> synthesize(const GeneratorConfig& cfg,
                                           std::uint64_t stream = 0);

}  // namespace hdl
