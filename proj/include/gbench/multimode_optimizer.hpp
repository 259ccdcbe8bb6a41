#pragma once

// Multimode Gaussian communication: water-filling over the noise spectrum,
// the determinant form of the Gaussian mutual information, and the
// entangled-vs-separable additivity experiment.

#include "gbench/channel.hpp"
#include "gbench/gaussian_core.hpp"

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace gbench {

struct WaterfillAllocation {
  std::vector<double> lambdas;  ///< noise eigenvalues, ascending
  double budget = 0.0;
  double nu = 0.0;              ///< water level
  std::vector<double> powers;   ///< p_j = max(nu - lambda_j, 0), aligned with lambdas
  std::size_t k_active = 0;     ///< number of p_j > 0 (always a prefix)
  double mutual_info_bits = 0.0;
};

/// Optimal power allocation over independent Gaussian sub-channels with noise
/// variances `lambdas` (any order; sorted stably in the result). A zero budget
/// gives k_active = 0, nu = lambda_1. Throws std::invalid_argument on a
/// non-positive lambda or a negative budget.
WaterfillAllocation waterfill(std::span<const double> lambdas, double budget);

/// f(lambda_1..lambda_k) = 1/2 sum_j log2(nu / lambda_j) with
/// nu = (budget + sum lambda) / k: the water-filled information when exactly
/// the given (ascending) noise values are active.
double waterfill_objective(std::span<const double> active, double budget);

/// Information 1/2 sum log2(1 + p_j / lambda_j) of an arbitrary allocation.
double allocation_information(std::span<const double> lambdas, std::span<const double> powers);

/// 1/2 log2 det(P + N) / det(N). Throws std::invalid_argument on dimension
/// mismatch or a non-symmetric signal covariance.
double mutual_information_gaussian(const Matrix& p_out, const CovMatrix& noise);

/// Fixed encoding/decoding configuration for N modes through N copies of a
/// channel, with an average energy constraint of n_bar photons per mode.
struct MultimodeScenario {
  SqueezingSpectrum input;          ///< r_j of the input state
  SqueezingSpectrum measurement;    ///< s_j of the measurement, each <= 5
  PassiveSymplectic input_basis;    ///< S_{U_0}
  PassiveSymplectic measurement_basis;  ///< S_{U_M}
  PhaseInsensitiveChannel channel;
  double n_bar = 0.0;

  std::size_t n_modes() const { return input.size(); }
  /// Photons spent on the input state itself, sum_j sinh^2 r_j.
  double input_photons() const;
  /// Throws std::invalid_argument on inconsistent sizes, s_j > 5 or an
  /// unsatisfiable energy constraint n_0 > N n_bar.
  void validate() const;
};

inline constexpr double kMaxMeasurementSqueezing = 5.0;

/// gamma_out + gamma_M for the scenario.
CovMatrix scenario_noise(const MultimodeScenario& sc);

struct ScenarioResult {
  double bits = 0.0;
  WaterfillAllocation allocation;
};

/// Water-fills the ordinary eigenvalues of gamma_out + gamma_M with the
/// signal budget tr P_out = 2 tau (N n_bar - n_0).
ScenarioResult scenario_capacity(const MultimodeScenario& sc);

/// The same scenario with both passive bases replaced by the identity.
MultimodeScenario separable_counterpart(const MultimodeScenario& sc);

/// Separable-basis information minus entangled-basis information.
double additivity_gap(const MultimodeScenario& sc);

struct ScenarioSampling {
  std::size_t max_modes = 4;
  double max_squeezing = 2.0;
  double tau_min = 0.1;
  double tau_max = 3.0;
  double excess_noise_max = 2.0;  ///< m drawn from [|tau-1|, |tau-1| + this]
  double n_bar_max = 5.0;
};

/// Random scenario: N uniform in [1, max_modes]; r_j, s_j uniform in
/// [0, max_squeezing]; Haar bases; tau uniform; n_bar uniform in
/// [n_0/N + 0.01, n_bar_max]. Squeezing spectra whose n_0/N + 0.01 exceeds
/// n_bar_max are redrawn.
MultimodeScenario random_scenario(const ScenarioSampling& sampling, std::mt19937_64& rng);

struct AdditivitySummary {
  std::size_t trials = 0;
  std::size_t violations = 0;    ///< gap < -tolerance
  double min_gap = 0.0;
  double max_gap = 0.0;
  double tolerance = 1e-9;
  std::uint64_t seed = 0;
};

/// Runs `trials` independent random scenarios, trial t seeded from
/// (seed, t). The summary does not depend on thread count.
AdditivitySummary run_additivity_suite(std::size_t trials, const ScenarioSampling& sampling,
                                       std::uint64_t seed, double tolerance = 1e-9);

}  // namespace gbench
