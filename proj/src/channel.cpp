#include "gbench/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace gbench {

namespace {
constexpr double kCpTol = 1e-12;
}

PhaseInsensitiveChannel::PhaseInsensitiveChannel(double tau, double m) : tau_(tau), m_(m) {
  if (!std::isfinite(tau) || !std::isfinite(m) || tau <= 0.0) {
    throw std::invalid_argument("PhaseInsensitiveChannel: tau must be finite and > 0");
  }
  // Vacuum variance is 1/2, so complete positivity reads m >= |tau - 1| / 2.
  if (m < 0.5 * std::abs(tau - 1.0) - kCpTol) {
    throw std::invalid_argument("PhaseInsensitiveChannel: m < |tau - 1|/2 is not completely positive");
  }
  if (m_ < 0.0) m_ = 0.0;
}

PhaseInsensitiveChannel PhaseInsensitiveChannel::from_loss(double eta, double n_th) {
  if (!(eta > 0.0 && eta <= 1.0)) throw std::invalid_argument("from_loss: eta must lie in (0, 1]");
  if (!(n_th >= 0.0)) throw std::invalid_argument("from_loss: n_th must be >= 0");
  return {eta, (1.0 - eta) * (n_th + 0.5)};
}

PhaseInsensitiveChannel PhaseInsensitiveChannel::from_amplifier(double gain, double n_th) {
  if (!(gain >= 1.0) || !std::isfinite(gain)) throw std::invalid_argument("from_amplifier: gain must be >= 1");
  if (!(n_th >= 0.0)) throw std::invalid_argument("from_amplifier: n_th must be >= 0");
  return {gain, (gain - 1.0) * (n_th + 0.5)};
}

PhaseInsensitiveChannel PhaseInsensitiveChannel::then(const PhaseInsensitiveChannel& next) const {
  return {tau_ * next.tau_, next.tau_ * m_ + next.m_};
}

CovMatrix apply_to_cm(const PhaseInsensitiveChannel& ch, const CovMatrix& cm) {
  const auto d = static_cast<Eigen::Index>(cm.dim());
  return CovMatrix(ch.tau() * cm.data() + ch.m() * Matrix::Identity(d, d));
}

Matrix apply_to_signal(const PhaseInsensitiveChannel& ch, const Matrix& p_in) {
  if (p_in.rows() != p_in.cols() || p_in.rows() % 2 != 0) {
    throw std::invalid_argument("apply_to_signal: expected a 2N x 2N matrix");
  }
  if ((p_in - p_in.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, p_in.cwiseAbs().maxCoeff())) {
    throw std::invalid_argument("apply_to_signal: signal covariance must be symmetric");
  }
  return ch.tau() * p_in;
}

}  // namespace gbench
