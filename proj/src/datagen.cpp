#include "hdl/datagen.hpp"

#include <cmath>

#include "hdl/effects.hpp"
#include "hdl/linalg.hpp"

namespace hdl {

namespace {

// Mixture components. The asymmetric mixture must actually be skewed, so the
// component weights are unequal; both mixtures are standardized analytically
// to zero mean, unit variance before scaling to the target variance.
constexpr double kAsymWeight0 = 0.75;   // N(0,1), remainder N(3,1)
constexpr double kAsymMean1 = 3.0;
constexpr double kSymMean = 2.0;        // 0.5 N(-2,1) + 0.5 N(2,1)

double sample_standardized(NoiseFamily family, Philox& rng) {
  switch (family) {
    case NoiseFamily::kGaussMixAsym: {
      const bool first = rng.uniform01() < kAsymWeight0;
      const double x = first ? rng.normal() : rng.normal(kAsymMean1, 1.0);
      const double mean = (1.0 - kAsymWeight0) * kAsymMean1;
      const double var =
          1.0 + kAsymWeight0 * mean * mean +
          (1.0 - kAsymWeight0) * (kAsymMean1 - mean) * (kAsymMean1 - mean);
      return (x - mean) / std::sqrt(var);
    }
    case NoiseFamily::kGaussMixSym: {
      const double center = rng.uniform01() < 0.5 ? -kSymMean : kSymMean;
      const double x = rng.normal(center, 1.0);
      return x / std::sqrt(1.0 + kSymMean * kSymMean);
    }
    case NoiseFamily::kLaplace:
      return rng.laplace();
  }
  throw Error("unknown noise family");
}

}  // namespace

const char* noise_family_name(NoiseFamily family) {
  switch (family) {
    case NoiseFamily::kGaussMixAsym:
      return "gauss_mix_asym";
    case NoiseFamily::kGaussMixSym:
      return "gauss_mix_sym";
    case NoiseFamily::kLaplace:
      return "laplace";
  }
  return "unknown";
}

void GeneratorConfig::validate() const {
  if (p < 1) {
    throw Error("generator needs p >= 1");
  }
  if (n < 2) {
    throw Error("generator needs n >= 2");
  }
  if (expected_degree >= 0.0 && p > 1 &&
      expected_degree > static_cast<double>(p - 1)) {
    throw Error("expected degree must lie in [0, p-1]");
  }
  if (families.empty()) {
    throw Error("at least one noise family is required");
  }
  if (!(coef_min > 0.0 && coef_max >= coef_min)) {
    throw Error("coefficient magnitude range is invalid");
  }
  if (!(var_min > 0.0 && var_max >= var_min)) {
    throw Error("noise variance range is invalid");
  }
}

Eigen::MatrixXd sample_structure(const GeneratorConfig& cfg, double degree,
                                 Philox& rng) {
  cfg.validate();
  if (degree < 0.0) {
    throw Error("sample_structure needs a resolved (nonnegative) degree");
  }
  const int p = cfg.p;
  const double s = p > 1 ? cfg.sparseness(degree) : 0.0;
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(p, p);
  for (int i = 1; i < p; ++i) {
    for (int j = 0; j < i; ++j) {
      if (rng.uniform01() < s) {
        const double sign = rng.coin() ? 1.0 : -1.0;
        B(i, j) = sign * rng.uniform(cfg.coef_min, cfg.coef_max);
      }
    }
  }
  return B;
}

NoiseDraw sample_noise(const GeneratorConfig& cfg, Philox& rng) {
  cfg.validate();
  NoiseDraw draw;
  const int pick = rng.uniform_index(static_cast<int>(cfg.families.size()));
  draw.family = cfg.families[pick];
  draw.variance = rng.uniform(cfg.var_min, cfg.var_max);
  draw.mean = rng.normal(0.0, cfg.mean_sd);
  draw.values.resize(cfg.n);
  const double scale = std::sqrt(draw.variance);
  for (int t = 0; t < cfg.n; ++t) {
    draw.values(t) = draw.mean + scale * sample_standardized(draw.family, rng);
  }
  return draw;
}

std::pair<Dataset, GroundTruth> synthesize(const GeneratorConfig& cfg,
                                           std::uint64_t stream) {
  cfg.validate();
  Philox rng(cfg.seed, stream);
  const int p = cfg.p;
  const int n = cfg.n;

  double degree = cfg.expected_degree;
  if (degree < 0.0) {
    degree = rng.coin() ? 2.0 : 5.0;
  }
  if (p > 1) {
    degree = std::min(degree, static_cast<double>(p - 1));
  }

  const Eigen::MatrixXd B = sample_structure(cfg, degree, rng);

  Eigen::MatrixXd noise(p, n);
  std::vector<NoiseFamily> families(p);
  std::vector<double> variances(p), means(p);
  for (int i = 0; i < p; ++i) {
    const NoiseDraw draw = sample_noise(cfg, rng);
    noise.row(i) = draw.values.transpose();
    families[i] = draw.family;
    variances[i] = draw.variance;
    means[i] = draw.mean;
  }

  // x = (I - B)^{-1} e by forward substitution in generation order.
  Eigen::MatrixXd X = noise;
  for (int i = 1; i < p; ++i) {
    for (int j = 0; j < i; ++j) {
      if (B(i, j) != 0.0) {
        X.row(i) += B(i, j) * X.row(j);
      }
    }
  }

  std::vector<int> perm(p);
  for (int i = 0; i < p; ++i) {
    perm[i] = i;
  }
  if (cfg.permute) {
    for (int i = p - 1; i >= 1; --i) {
      const int j = rng.uniform_index(i + 1);
      std::swap(perm[i], perm[j]);
    }
  }

  Dataset data;
  data.values.resize(p, n);
  data.var_ids = default_var_ids(p);
  GroundTruth truth;
  truth.B_true.resize(p, p);
  truth.permutation = perm;
  truth.noise_family.resize(p);
  truth.noise_variance.resize(p);
  truth.noise_mean.resize(p);
  truth.expected_degree_used = degree;
  for (int r = 0; r < p; ++r) {
    data.values.row(r) = X.row(perm[r]);
    truth.noise_family[r] = families[perm[r]];
    truth.noise_variance[r] = variances[perm[r]];
    truth.noise_mean[r] = means[perm[r]];
    for (int c = 0; c < p; ++c) {
      truth.B_true(r, c) = B(perm[r], perm[c]);
    }
  }
  truth.A_true = total_from_direct(truth.B_true).A;
  return {std::move(data), std::move(truth)};
}

}  // namespace hdl
