#pragma once

// Mutual information of a discrete coherent-state alphabet read out by
// balanced heterodyne detection after pure loss. The output is a Gaussian
// mixture in the (x, p) plane whose entropy is integrated numerically.

#include "gbench/constellation.hpp"

#include <cstddef>
#include <vector>

namespace gbench {

struct HeterodyneModel {
  Constellation received;  ///< post-channel amplitudes and prior
  double variance = 1.0;   ///< per-quadrature output variance (state + measurement)

  void validate() const;
};

struct QuadratureOptions {
  double rel_tol = 1e-6;     ///< on successive entropy estimates
  double box_sigmas = 8.0;   ///< integration box margin in component std-devs
  int gl_order = 8;          ///< Gauss-Legendre nodes per panel
  double initial_panel = 1.0;  ///< panel width in component std-devs
  int max_refinements = 6;
};

struct HeterodyneResult {
  double bits = 0.0;
  double output_entropy_bits = 0.0;
  double refinement_change_bits = 0.0;  ///< |I_h - I_{h/2}| at acceptance
  double panel_width = 0.0;             ///< accepted panel width (quadrature units)
};

/// I = H(B) - log2(2 pi e v). H(B) is computed with composite tensor-product
/// Gauss-Legendre quadrature over the components' bounding box, halving the
/// panel width until two successive estimates agree. Throws NumericalError if
/// that does not happen within max_refinements.
HeterodyneResult heterodyne_mi(const HeterodyneModel& model, const QuadratureOptions& opts = {});

struct HeterodyneRow {
  int order = 16;
  double eta = 1.0;
  double sigma = kUniformSigma;  ///< input-side
  double delta = 0.0;            ///< input-side
  double n_bar = 0.0;
  double bits = 0.0;
  double c_coh_bits = 0.0;
};

struct HeterodyneSweep {
  std::vector<HeterodyneRow> rows;
  /// For each finite sigma, the energy n_bar = sigma'^2 / eta = sigma^2 at
  /// which eta n_bar crosses sigma'^2.
  std::vector<std::pair<double, double>> knees;
};

/// One row per (sigma, n_bar), sigma-major. A sigma of infinity is the
/// uniform prior.
HeterodyneSweep heterodyne_curve(int order, double eta, const std::vector<double>& sigmas,
                                 const std::vector<double>& n_bars, const QuadratureOptions& opts = {});

}  // namespace gbench
