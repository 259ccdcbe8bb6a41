#include "gbench/constellation.hpp"

#include "gbench/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace gbench {

namespace {

int side_length(int order) {
  switch (order) {
    case 4: return 2;
    case 16: return 4;
    case 64: return 8;
    default: throw std::invalid_argument("QAM order must be 4, 16 or 64");
  }
}

double phase_0_2pi(int u, int v) {
  const double a = std::atan2(static_cast<double>(v), static_cast<double>(u));
  return a < 0.0 ? a + 2.0 * std::numbers::pi : a;
}

}  // namespace

void Constellation::validate() const {
  if (points.empty()) throw std::invalid_argument("Constellation: no points");
  if (points.size() != prior.size()) throw std::invalid_argument("Constellation: points/prior size mismatch");
  double total = 0.0;
  for (double p : prior) {
    if (!(p >= 0.0)) throw std::invalid_argument("Constellation: negative prior entry");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("Constellation: prior does not sum to 1");
}

QamConstellation build_qam(int order, double delta, double sigma) {
  const int k = side_length(order);
  if (!(delta > 0.0) || !std::isfinite(delta)) throw std::invalid_argument("build_qam: delta must be > 0");
  if (!(sigma > 0.0)) throw std::invalid_argument("build_qam: sigma must be > 0 (or infinity)");

  // Integer lattice in units of delta/2: odd coordinates -(k-1) .. (k-1).
  struct Site {
    int u, v;
  };
  std::vector<Site> sites;
  sites.reserve(static_cast<std::size_t>(order));
  for (int a = 0; a < k; ++a) {
    for (int b = 0; b < k; ++b) sites.push_back({2 * a - (k - 1), 2 * b - (k - 1)});
  }
  std::sort(sites.begin(), sites.end(), [](const Site& s, const Site& t) {
    const int rs = s.u * s.u + s.v * s.v;
    const int rt = t.u * t.u + t.v * t.v;
    if (rs != rt) return rs < rt;
    return phase_0_2pi(s.u, s.v) < phase_0_2pi(t.u, t.v);
  });

  QamConstellation c;
  c.order = order;
  c.delta = delta;
  c.sigma = sigma;
  c.symbols.points.reserve(sites.size());
  for (const auto& s : sites) c.symbols.points.emplace_back(0.5 * delta * s.u, 0.5 * delta * s.v);

  c.symbols.prior.assign(sites.size(), 1.0);
  if (std::isfinite(sigma)) {
    // Offset by the innermost energy so sigma -> 0 does not underflow to 0/0.
    const double e0 = std::norm(c.symbols.points.front());
    for (std::size_t i = 0; i < sites.size(); ++i) {
      c.symbols.prior[i] = std::exp(-(std::norm(c.symbols.points[i]) - e0) / (sigma * sigma));
    }
  }
  const double z = std::accumulate(c.symbols.prior.begin(), c.symbols.prior.end(), 0.0);
  for (auto& p : c.symbols.prior) p /= z;
  return c;
}

double mean_photon_number(const Constellation& c) {
  double n = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) n += c.prior[i] * std::norm(c.points[i]);
  return n;
}

double solve_delta_for_energy(int order, double sigma, double n_bar_target) {
  if (!(n_bar_target > 0.0) || !std::isfinite(n_bar_target)) {
    throw std::invalid_argument("solve_delta_for_energy: target must be > 0");
  }
  const auto energy = [&](double delta) { return mean_photon_number(build_qam(order, delta, sigma).symbols); };

  if (!std::isfinite(sigma)) {
    // Uniform prior: energy is exactly quadratic in delta.
    return std::sqrt(n_bar_target / energy(1.0));
  }

  double hi = 1.0;
  while (energy(hi) < n_bar_target) {
    hi *= 2.0;
    if (hi > 1e12) throw NumericalError("solve_delta_for_energy: could not bracket the target energy");
  }
  const double lo = hi * 1e-9;
  constexpr int kScan = 800;
  double a = lo;
  double b = hi;
  for (int i = 1; i <= kScan; ++i) {
    const double d = std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * i / kScan);
    if (energy(d) >= n_bar_target) {
      b = d;
      break;
    }
    a = d;
  }
  for (int it = 0; it < 200 && b - a > 1e-15 * b; ++it) {
    const double mid = 0.5 * (a + b);
    (energy(mid) < n_bar_target ? a : b) = mid;
  }
  const double delta = 0.5 * (a + b);
  if (std::abs(energy(delta) - n_bar_target) > 1e-9 * std::max(1.0, n_bar_target)) {
    throw NumericalError("solve_delta_for_energy: bisection did not reach the target energy");
  }
  return delta;
}

QamConstellation propagate(const QamConstellation& c, double eta) {
  if (!(eta > 0.0 && eta <= 1.0)) throw std::invalid_argument("propagate: eta must lie in (0, 1]");
  const double s = std::sqrt(eta);
  QamConstellation out = c;
  out.delta *= s;
  if (std::isfinite(out.sigma)) out.sigma *= s;
  for (auto& p : out.symbols.points) p *= s;
  return out;
}

nlohmann::json to_json(const QamConstellation& c) {
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& p : c.symbols.points) pts.push_back({p.real(), p.imag()});
  return {
      {"order", c.order},
      {"delta", c.delta},
      {"sigma", std::isfinite(c.sigma) ? nlohmann::json(c.sigma) : nlohmann::json("inf")},
      {"points", pts},
      {"prior", c.symbols.prior},
  };
}

QamConstellation qam_from_json(const nlohmann::json& j) {
  const auto& s = j.at("sigma");
  const double sigma = s.is_string() ? kUniformSigma : s.get<double>();
  QamConstellation c = build_qam(j.at("order").get<int>(), j.at("delta").get<double>(), sigma);
  if (j.contains("prior")) {
    const auto prior = j.at("prior").get<std::vector<double>>();
    if (prior.size() != c.symbols.size()) throw std::invalid_argument("qam_from_json: prior size mismatch");
    c.symbols.prior = prior;
    c.symbols.validate();
  }
  return c;
}

}  // namespace gbench
