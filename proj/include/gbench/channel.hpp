#pragma once

#include "gbench/gaussian_core.hpp"

namespace gbench {

/// Phase-insensitive Gaussian channel gamma -> tau gamma + m I, acting
/// identically and independently on every mode.
class PhaseInsensitiveChannel {
 public:
  /// Throws std::invalid_argument unless tau > 0 and m >= |tau - 1|/2 (complete
  /// positivity, checked with a 1e-12 slack).
  PhaseInsensitiveChannel(double tau, double m);

  /// Loss channel with transmittance eta in (0, 1] and n_th thermal photons.
  static PhaseInsensitiveChannel from_loss(double eta, double n_th);
  /// Amplifier with gain g >= 1 and n_th thermal photons.
  static PhaseInsensitiveChannel from_amplifier(double gain, double n_th);
  static PhaseInsensitiveChannel identity() { return {1.0, 0.0}; }

  double tau() const { return tau_; }
  double m() const { return m_; }

  /// The channel equivalent to applying *this and then `next`.
  PhaseInsensitiveChannel then(const PhaseInsensitiveChannel& next) const;

 private:
  double tau_;
  double m_;
};

CovMatrix apply_to_cm(const PhaseInsensitiveChannel& ch, const CovMatrix& cm);

/// Signal covariance after the channel: amplitudes scale by sqrt(tau), so
/// P_out = tau P_in. Throws on a non-symmetric input.
Matrix apply_to_signal(const PhaseInsensitiveChannel& ch, const Matrix& p_in);

}  // namespace gbench
