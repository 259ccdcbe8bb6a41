#pragma once

// Square QAM constellations of coherent-state amplitudes with uniform or
// Gaussian-weighted priors.

#include <complex>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "json.hpp"

namespace gbench {

using Complex = std::complex<double>;

/// A finite alphabet of coherent amplitudes with prior probabilities.
struct Constellation {
  std::vector<Complex> points;
  std::vector<double> prior;

  std::size_t size() const { return points.size(); }
  /// Throws std::invalid_argument if empty, sizes disagree, any prior entry
  /// is negative or the prior does not sum to 1 within 1e-12.
  void validate() const;
};

inline constexpr double kUniformSigma = std::numeric_limits<double>::infinity();

struct QamConstellation {
  int order = 4;         ///< M, one of 4, 16, 64
  double delta = 1.0;    ///< lattice spacing in amplitude units
  double sigma = kUniformSigma;  ///< prior deviation; infinity means uniform
  /// Points sorted by (|alpha|, arg alpha in [0, 2 pi)); this order is the
  /// receiver's tie-break order.
  Constellation symbols;
};

/// Centered square lattice with coordinates (+-delta/2, +-3 delta/2, ...) and
/// prior proportional to exp(-|alpha|^2 / sigma^2). Throws
/// std::invalid_argument for an unsupported order, delta <= 0 or sigma <= 0.
QamConstellation build_qam(int order, double delta, double sigma = kUniformSigma);

/// Sum_i p_i |alpha_i|^2.
double mean_photon_number(const Constellation& c);

/// Spacing delta at which build_qam(order, delta, sigma) has mean photon
/// number n_bar_target (to 1e-9). Returns the smallest such delta: the energy
/// is located by a log-spaced scan and refined by bisection on the first
/// crossing. Throws NumericalError if no crossing exists.
double solve_delta_for_energy(int order, double sigma, double n_bar_target);

/// Pure loss: amplitudes, delta and sigma all scale by sqrt(eta); the prior
/// is unchanged.
QamConstellation propagate(const QamConstellation& c, double eta);

nlohmann::json to_json(const QamConstellation& c);
QamConstellation qam_from_json(const nlohmann::json& j);

}  // namespace gbench
