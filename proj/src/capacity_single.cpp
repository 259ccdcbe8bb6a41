#include "gbench/capacity_single.hpp"

#include "gbench/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace gbench {

namespace {

constexpr double kZeroNoise = 1e-12;

void require_energy(double n_bar) {
  if (!(n_bar >= 0.0) || !std::isfinite(n_bar)) {
    throw std::invalid_argument("capacity: n_bar must be finite and >= 0");
  }
}

}  // namespace

double thermal_entropy_bits(double x) {
  if (x <= 0.0) return 0.0;
  const double xlogx = x < 1e-300 ? 0.0 : x * std::log(x);
  return ((1.0 + x) * std::log1p(x) - xlogx) / std::numbers::ln2;
}

double coherent_capacity(const PhaseInsensitiveChannel& ch, double n_bar) {
  require_energy(n_bar);
  const double snr = 2.0 * ch.tau() * n_bar / (1.0 + ch.tau() + 2.0 * ch.m());
  return std::log1p(snr) / std::numbers::ln2;
}

SqueezedCapacity squeezed_capacity(const PhaseInsensitiveChannel& ch, double n_bar) {
  require_energy(n_bar);
  const double tau = ch.tau();
  const double m = ch.m();
  double e2r = 0.0;
  if (m < kZeroNoise) {
    e2r = 1.0 + 2.0 * n_bar;
  } else {
    // (-tau + sqrt(8 tau m n + (tau + 2m)^2)) / (2m), rationalized so the
    // small-m regime does not cancel.
    const double root = std::sqrt(8.0 * tau * m * n_bar + (tau + 2.0 * m) * (tau + 2.0 * m));
    e2r = 2.0 * (2.0 * tau * n_bar + tau + m) / (root + tau);
  }
  return {std::log2(e2r), 0.5 * std::log(e2r)};
}

double holevo_capacity(const PhaseInsensitiveChannel& ch, double n_bar) {
  require_energy(n_bar);
  double floor_noise = ch.m() + 0.5 * (ch.tau() - 1.0);
  if (floor_noise < -1e-12) throw std::invalid_argument("holevo_capacity: unphysical channel");
  floor_noise = std::max(floor_noise, 0.0);
  return thermal_entropy_bits(ch.tau() * n_bar + floor_noise) - thermal_entropy_bits(floor_noise);
}

double crossover_energy(const PhaseInsensitiveChannel& ch) {
  if (ch.m() == 0.0) return std::numeric_limits<double>::infinity();
  return (1.0 + 2.0 * ch.m() + ch.tau()) / (2.0 * ch.m() * ch.tau());
}

const char* to_string(GaussianScheme s) {
  return s == GaussianScheme::Coherent ? "coherent" : "squeezed";
}

CapacityReport capacity_report(const PhaseInsensitiveChannel& ch, double n_bar) {
  CapacityReport rep;
  rep.c_coh = coherent_capacity(ch, n_bar);
  const auto sq = squeezed_capacity(ch, n_bar);
  rep.c_sq = sq.bits;
  rep.c_holevo = holevo_capacity(ch, n_bar);
  if (rep.c_sq > rep.c_coh) {
    rep.optimal_scheme = GaussianScheme::Squeezed;
    rep.c_gauss = rep.c_sq;
    rep.optimal_squeezing_r = sq.optimal_r;
  } else {
    rep.optimal_scheme = GaussianScheme::Coherent;
    rep.c_gauss = rep.c_coh;
  }
  if (rep.c_gauss > rep.c_holevo + 1e-9) {
    throw InvariantViolation("capacity_report: Gaussian capacity exceeds the Holevo bound");
  }
  rep.efficiency = rep.c_holevo > 0.0 ? rep.c_gauss / rep.c_holevo : 1.0;
  return rep;
}

std::vector<double> GridAxis::values() const {
  if (count < 2) throw std::invalid_argument("GridAxis: resolution must be >= 2");
  if (!(min > 0.0) || !(max > min)) throw std::invalid_argument("GridAxis: need 0 < min < max");
  std::vector<double> v(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(count - 1);
    v[i] = log_spaced ? std::exp(std::log(min) + t * (std::log(max) - std::log(min)))
                      : min + t * (max - min);
  }
  v.back() = max;
  return v;
}

PhaseInsensitiveChannel channel_for(ChannelFamily family, double tau, double n_th) {
  return family == ChannelFamily::Loss ? PhaseInsensitiveChannel::from_loss(tau, n_th)
                                       : PhaseInsensitiveChannel::from_amplifier(tau, n_th);
}

EfficiencyGrid efficiency_grid(const EfficiencyGridSpec& spec) {
  EfficiencyGrid grid;
  grid.n_bar = spec.n_bar.values();
  grid.n_th = spec.n_th.values();
  const std::size_t rows = grid.n_th.size();
  const std::size_t cols = grid.n_bar.size();
  grid.cells.resize(rows * cols);

  std::vector<PhaseInsensitiveChannel> channels;
  channels.reserve(rows);
  for (double n_th : grid.n_th) channels.push_back(channel_for(spec.family, spec.tau, n_th));

  const auto total = static_cast<long long>(rows * cols);
#pragma omp parallel for schedule(static)
  for (long long idx = 0; idx < total; ++idx) {
    const auto i = static_cast<std::size_t>(idx) / cols;
    const auto j = static_cast<std::size_t>(idx) % cols;
    grid.cells[static_cast<std::size_t>(idx)] = capacity_report(channels[i], grid.n_bar[j]);
  }

  grid.crossover.reserve(rows);
  for (std::size_t i = 0; i < rows; ++i) {
    grid.crossover.push_back({grid.n_th[i], crossover_energy(channels[i])});
  }
  return grid;
}

double threshold_energy(double target_efficiency) {
  if (!(target_efficiency > 0.0 && target_efficiency < 1.0)) {
    throw std::invalid_argument("threshold_energy: target must lie in (0, 1)");
  }
  const auto ratio = [](double x) { return std::log1p(x) / std::numbers::ln2 / thermal_entropy_bits(x); };
  constexpr double lo0 = 1e-6;
  constexpr double hi0 = 1e9;

  // Monotonicity on the bracket, sampled log-uniformly.
  double prev = ratio(lo0);
  for (int i = 1; i <= 400; ++i) {
    const double x = std::exp(std::log(lo0) + (std::log(hi0) - std::log(lo0)) * i / 400.0);
    const double cur = ratio(x);
    if (cur < prev) throw NumericalError("threshold_energy: efficiency ratio is not increasing on the bracket");
    prev = cur;
  }
  if (target_efficiency < ratio(lo0) || target_efficiency > ratio(hi0)) {
    throw NumericalError("threshold_energy: target efficiency not bracketed by [1e-6, 1e9]");
  }

  // Bisect in log(x); the bracket spans 15 decades.
  double lo = std::log(lo0);
  double hi = std::log(hi0);
  for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
    const double mid = 0.5 * (lo + hi);
    (ratio(std::exp(mid)) < target_efficiency ? lo : hi) = mid;
  }
  return std::exp(0.5 * (lo + hi));
}

}  // namespace gbench
