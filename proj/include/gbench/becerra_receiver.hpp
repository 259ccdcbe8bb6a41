#pragma once

// Adaptive multi-stage discrimination receiver for coherent-state
// constellations: the received pulse is split into L equal sub-pulses; each is
// displaced so that the currently most likely symbol is nulled to vacuum and
// then hits an on/off detector. The posterior over symbols is updated after
// every stage and the final guess is the MAP symbol.

#include "gbench/capacity_single.hpp"
#include "gbench/constellation.hpp"

#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <vector>

namespace gbench {

struct DetectorModel {
  double efficiency = 1.0;       ///< in (0, 1]
  double dark_count_prob = 0.0;  ///< in [0, 1)
};

struct ReceiverConfig {
  std::size_t stages = 1;  ///< L
  Constellation constellation;  ///< received (post-channel) amplitudes and prior
  DetectorModel detector;

  void validate() const;
};

struct DetectionRecord {
  std::vector<bool> outcomes;           ///< click = true, one per stage
  std::vector<std::size_t> hypotheses;  ///< symbol nulled at each stage
  std::size_t guess = 0;
  double probability = std::numeric_limits<double>::quiet_NaN();  ///< exact mode only
};

/// Row-stochastic P(guess = b | input = a).
struct ConfusionMatrix {
  std::size_t size = 0;
  std::vector<double> prob;              ///< row-major size x size
  std::vector<std::uint64_t> row_trials;  ///< Monte-Carlo only; empty when exact

  double operator()(std::size_t a, std::size_t b) const { return prob[a * size + b]; }
  /// Binomial standard error of an entry, sqrt(p (1 - p) / n). Zero for exact
  /// matrices. If `p_ref` is given it replaces the entry's own estimate.
  double standard_error(std::size_t a, std::size_t b, double p_ref = -1.0) const;
};

/// Poisson zero-count probability of one stage:
/// exp(-eff |beta - h|^2 / L) (1 - p_dark).
double stage_no_click_prob(Complex true_amp, Complex hyp_amp, std::size_t stages, const DetectorModel& det);

/// Index of the largest entry; entries within a relative 1e-12 of the maximum
/// count as tied and the lowest index wins.
std::size_t argmax_lowest(std::span<const double> v);

/// One Bayesian step: posterior_i *= P(outcome | symbol i, hypothesis hyp),
/// then renormalize. If the whole posterior underflows below 1e-300 every
/// entry is floored at 1e-300 first.
std::vector<double> bayesian_update(std::span<const double> posterior, std::size_t hyp, bool click,
                                    const ReceiverConfig& config);

/// Simulates one transmission of symbol `input`.
DetectionRecord run_trial(std::size_t input, const ReceiverConfig& config, std::mt19937_64& rng);

inline constexpr std::size_t kMaxExactStages = 16;

struct ExactRecord {
  DetectionRecord record;           ///< probability = P(record) under the prior
  std::vector<double> given_input;  ///< P(record | input = a)
};

/// Every outcome string with nonzero probability, in lexicographic order
/// (no-click before click). Throws std::invalid_argument for L > 16.
std::vector<ExactRecord> exact_records(const ReceiverConfig& config);

struct ExactJoint {
  ConfusionMatrix confusion;
  double record_information_bits = 0.0;  ///< I(input; full outcome record)
};

/// Exact confusion matrix by enumerating all 2^L outcome strings. Throws
/// std::invalid_argument for L > 16.
ExactJoint exact_joint(const ReceiverConfig& config);

struct MonteCarloOptions {
  std::uint64_t trials_per_symbol = 200000;
  std::uint64_t seed = 0;
  std::size_t blocks = 16;  ///< jackknife groups; fixes the seeding layout
};

struct MonteCarloResult {
  ConfusionMatrix confusion;
  std::vector<double> prior;
  double mutual_info_bits = 0.0;  ///< plug-in estimate
  double jackknife_bias = 0.0;    ///< estimated bias of the plug-in value
  double jackknife_stderr = 0.0;  ///< delete-one-block standard error
};

/// Frequency estimate of the confusion matrix. Trials of symbol a, block g run
/// on a generator seeded from (seed, a, g); the result is independent of the
/// thread count. Throws std::invalid_argument for fewer than 1000 trials.
MonteCarloResult monte_carlo_confusion(const ReceiverConfig& config, const MonteCarloOptions& options);

/// I(A; B) = sum_a sum_b p_a P(b|a) log2(P(b|a) / P(b)); 0 log 0 = 0.
double discrete_mutual_information(std::span<const double> prior, const ConfusionMatrix& confusion);

enum class SigmaPolicy { Uniform, Fixed, Optimize };

struct BecerraCurveSpec {
  int order = 4;
  double eta = 0.7;
  std::size_t stages = 16;
  std::vector<double> n_bar;
  SigmaPolicy policy = SigmaPolicy::Uniform;
  double sigma = kUniformSigma;  ///< used by SigmaPolicy::Fixed (input-side)
  std::uint64_t trials_per_symbol = 200000;
  std::uint64_t search_trials_per_symbol = 5000;
  std::uint64_t seed = 0;
  DetectorModel detector;
};

struct BecerraCurvePoint {
  double n_bar = 0.0;
  double delta = 0.0;  ///< input-side spacing
  double sigma = kUniformSigma;  ///< input-side deviation
  double bits = 0.0;
  double stderr_bits = 0.0;
  double c_coh = 0.0;
  double c_sq = 0.0;
  double c_holevo = 0.0;
  bool beats_gaussian = false;  ///< bits - 2 stderr > max(c_coh, c_sq)
};

/// Sigma grid scanned by SigmaPolicy::Optimize before golden-section refinement.
std::vector<double> sigma_scan_grid();

/// Receiver information of a constellation at input energy n_bar after pure
/// loss eta, for the given input-side sigma.
MonteCarloResult becerra_point(int order, double sigma, double n_bar, double eta, std::size_t stages,
                               const DetectorModel& det, std::uint64_t trials_per_symbol, std::uint64_t seed,
                               double* delta_out = nullptr);

std::vector<BecerraCurvePoint> becerra_capacity_curve(const BecerraCurveSpec& spec);

}  // namespace gbench
