#pragma once

// Closed-form single-channel capacities in bits per channel use.

#include "gbench/channel.hpp"

#include <cstddef>
#include <vector>

namespace gbench {

/// Entropy (bits) of a thermal state with mean photon number x:
/// g(x) = (1 + x) log2(1 + x) - x log2 x, with g(0) = 0.
double thermal_entropy_bits(double x);

/// Coherent-state encoding with heterodyne detection.
double coherent_capacity(const PhaseInsensitiveChannel& ch, double n_bar);

struct SqueezedCapacity {
  double bits = 0.0;
  double optimal_r = 0.0;  ///< squeezing of the input state at the optimum
};

/// Squeezed-state encoding of one quadrature with homodyne detection, at the
/// optimal input squeezing. m -> 0 is handled by its analytic limit
/// exp(2r) = 1 + 2 n_bar.
SqueezedCapacity squeezed_capacity(const PhaseInsensitiveChannel& ch, double n_bar);

/// Ultimate (Holevo) capacity of the channel under mean energy n_bar.
double holevo_capacity(const PhaseInsensitiveChannel& ch, double n_bar);

/// Input energy above which coherent encoding beats squeezed encoding:
/// (1 + 2m + tau) / (2 m tau); +infinity for m = 0.
double crossover_energy(const PhaseInsensitiveChannel& ch);

enum class GaussianScheme { Coherent, Squeezed };

const char* to_string(GaussianScheme s);

struct CapacityReport {
  double c_coh = 0.0;
  double c_sq = 0.0;
  double c_holevo = 0.0;
  double c_gauss = 0.0;
  GaussianScheme optimal_scheme = GaussianScheme::Coherent;
  double optimal_squeezing_r = 0.0;  ///< 0 when the coherent scheme is optimal
  double efficiency = 1.0;           ///< c_gauss / c_holevo, 1 when c_holevo = 0
};

/// Evaluates all three capacities. Throws InvariantViolation if the Gaussian
/// capacity exceeds the Holevo bound by more than 1e-9.
CapacityReport capacity_report(const PhaseInsensitiveChannel& ch, double n_bar);

enum class ChannelFamily { Loss, Amplifier };

struct GridAxis {
  double min = 0.0;
  double max = 0.0;
  std::size_t count = 0;
  bool log_spaced = true;

  std::vector<double> values() const;
};

struct EfficiencyGridSpec {
  ChannelFamily family = ChannelFamily::Loss;
  double tau = 0.7;  ///< transmittance (Loss) or gain (Amplifier)
  GridAxis n_bar;
  GridAxis n_th;
};

struct CrossoverPoint {
  double n_th = 0.0;
  double n_bar_c = 0.0;
};

struct EfficiencyGrid {
  std::vector<double> n_bar;
  std::vector<double> n_th;
  /// Row-major: cells[i * n_bar.size() + j] is (n_th[i], n_bar[j]).
  std::vector<CapacityReport> cells;
  /// The boundary between the squeezed-optimal and coherent-optimal regions.
  std::vector<CrossoverPoint> crossover;

  const CapacityReport& at(std::size_t i_th, std::size_t j_bar) const {
    return cells[i_th * n_bar.size() + j_bar];
  }
};

PhaseInsensitiveChannel channel_for(ChannelFamily family, double tau, double n_th);

/// Sweeps (n_th, n_bar) for a fixed gain/transmittance. Cells are computed in
/// parallel; ordering is row-major regardless of thread count.
EfficiencyGrid efficiency_grid(const EfficiencyGridSpec& spec);

/// Smallest x = tau * n_bar at which the pure-loss coherent capacity reaches
/// `target_efficiency` of the Holevo bound, i.e. log2(1+x) / g(x) = target.
/// Solved by bisection on [1e-6, 1e9] after checking the ratio is increasing
/// there. Throws std::invalid_argument for a target outside (0, 1) and
/// NumericalError when the target is not bracketed.
double threshold_energy(double target_efficiency);

}  // namespace gbench
