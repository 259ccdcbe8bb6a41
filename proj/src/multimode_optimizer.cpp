#include "gbench/multimode_optimizer.hpp"

#include "gbench/seeding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace gbench {

WaterfillAllocation waterfill(std::span<const double> lambdas, double budget) {
  if (lambdas.empty()) throw std::invalid_argument("waterfill: empty noise vector");
  if (!(budget >= 0.0) || !std::isfinite(budget)) throw std::invalid_argument("waterfill: budget must be >= 0");
  for (double l : lambdas) {
    if (!(l > 0.0) || !std::isfinite(l)) throw std::invalid_argument("waterfill: noise eigenvalues must be > 0");
  }

  WaterfillAllocation out;
  out.lambdas.assign(lambdas.begin(), lambdas.end());
  std::stable_sort(out.lambdas.begin(), out.lambdas.end());
  out.budget = budget;
  const std::size_t d = out.lambdas.size();

  out.nu = out.lambdas.front();
  double prefix = 0.0;
  for (std::size_t k = 1; k <= d; ++k) {
    prefix += out.lambdas[k - 1];
    const double nu_k = (budget + prefix) / static_cast<double>(k);
    if (nu_k > out.lambdas[k - 1] && (k == d || nu_k <= out.lambdas[k])) {
      out.nu = nu_k;
      out.k_active = k;
      break;
    }
  }

  out.powers.assign(d, 0.0);
  for (std::size_t j = 0; j < out.k_active; ++j) out.powers[j] = out.nu - out.lambdas[j];
  out.mutual_info_bits = out.k_active == 0
                             ? 0.0
                             : waterfill_objective(std::span(out.lambdas).first(out.k_active), budget);
  return out;
}

double waterfill_objective(std::span<const double> active, double budget) {
  if (active.empty()) return 0.0;
  const double nu = (budget + std::accumulate(active.begin(), active.end(), 0.0)) /
                    static_cast<double>(active.size());
  double bits = 0.0;
  for (double l : active) bits += std::log2(nu / l);
  return 0.5 * bits;
}

double allocation_information(std::span<const double> lambdas, std::span<const double> powers) {
  if (lambdas.size() != powers.size()) throw std::invalid_argument("allocation_information: size mismatch");
  double bits = 0.0;
  for (std::size_t j = 0; j < lambdas.size(); ++j) bits += std::log1p(powers[j] / lambdas[j]);
  return 0.5 * bits / std::log(2.0);
}

double mutual_information_gaussian(const Matrix& p_out, const CovMatrix& noise) {
  if (p_out.rows() != p_out.cols() || static_cast<std::size_t>(p_out.rows()) != noise.dim()) {
    throw std::invalid_argument("mutual_information_gaussian: dimension mismatch");
  }
  const double scale = std::max(1.0, p_out.cwiseAbs().maxCoeff());
  if ((p_out - p_out.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw std::invalid_argument("mutual_information_gaussian: signal covariance must be symmetric");
  }
  const Matrix total = 0.5 * (p_out + p_out.transpose()) + noise.data();
  Eigen::LLT<Matrix> llt_total(total);
  Eigen::LLT<Matrix> llt_noise(noise.data());
  if (llt_total.info() != Eigen::Success || llt_noise.info() != Eigen::Success) {
    throw std::invalid_argument("mutual_information_gaussian: singular or indefinite covariance");
  }
  // log det from the Cholesky diagonal: log det A = 2 sum log L_ii.
  const double logdet_total = 2.0 * llt_total.matrixLLT().diagonal().array().log().sum();
  const double logdet_noise = 2.0 * llt_noise.matrixLLT().diagonal().array().log().sum();
  return std::max(0.0, 0.5 * (logdet_total - logdet_noise) / std::log(2.0));
}

double MultimodeScenario::input_photons() const {
  double n0 = 0.0;
  for (double r : input.values()) n0 += std::sinh(r) * std::sinh(r);
  return n0;
}

void MultimodeScenario::validate() const {
  const std::size_t n = n_modes();
  if (measurement.size() != n || input_basis.n_modes() != n || measurement_basis.n_modes() != n) {
    throw std::invalid_argument("MultimodeScenario: mode counts disagree");
  }
  if (measurement[0] > kMaxMeasurementSqueezing) {
    throw std::invalid_argument("MultimodeScenario: measurement squeezing above 5 is not supported");
  }
  if (!(n_bar >= 0.0) || input_photons() > static_cast<double>(n) * n_bar + 1e-12) {
    throw std::invalid_argument("MultimodeScenario: energy constraint n_0 <= N n_bar violated");
  }
}

CovMatrix scenario_noise(const MultimodeScenario& sc) {
  sc.validate();
  const CovMatrix gamma_in = apply_passive(squeezed_diag_cm(sc.input), sc.input_basis);
  const CovMatrix gamma_out = apply_to_cm(sc.channel, gamma_in);
  const CovMatrix gamma_m = apply_passive(squeezed_diag_cm(sc.measurement), sc.measurement_basis);
  return gamma_out + gamma_m;
}

ScenarioResult scenario_capacity(const MultimodeScenario& sc) {
  const CovMatrix noise = scenario_noise(sc);
  const Vector ev = noise.eigenvalues();
  const std::vector<double> lambdas(ev.data(), ev.data() + ev.size());
  const double n_s = std::max(0.0, static_cast<double>(sc.n_modes()) * sc.n_bar - sc.input_photons());
  ScenarioResult res;
  res.allocation = waterfill(lambdas, 2.0 * sc.channel.tau() * n_s);
  res.bits = res.allocation.mutual_info_bits;
  return res;
}

MultimodeScenario separable_counterpart(const MultimodeScenario& sc) {
  MultimodeScenario sep = sc;
  sep.input_basis = PassiveSymplectic::identity(sc.n_modes());
  sep.measurement_basis = PassiveSymplectic::identity(sc.n_modes());
  return sep;
}

double additivity_gap(const MultimodeScenario& sc) {
  return scenario_capacity(separable_counterpart(sc)).bits - scenario_capacity(sc).bits;
}

MultimodeScenario random_scenario(const ScenarioSampling& s, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> modes(1, s.max_modes);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::size_t n = modes(rng);

  std::vector<double> r(n), sm(n);
  double n0 = 0.0;
  do {
    n0 = 0.0;
    for (auto& x : r) {
      x = s.max_squeezing * unit(rng);
      n0 += std::sinh(x) * std::sinh(x);
    }
  } while (n0 / static_cast<double>(n) + 0.01 > s.n_bar_max);
  for (auto& x : sm) x = s.max_squeezing * unit(rng);

  const double tau = s.tau_min + (s.tau_max - s.tau_min) * unit(rng);
  const double m = std::abs(tau - 1.0) + s.excess_noise_max * unit(rng);
  const double lo = n0 / static_cast<double>(n) + 0.01;
  const double n_bar = lo + (s.n_bar_max - lo) * unit(rng);

  const std::uint64_t basis_seed = rng();
  return MultimodeScenario{
      SqueezingSpectrum(std::move(r)),
      SqueezingSpectrum(std::move(sm)),
      random_passive_symplectic(n, derive_seed(basis_seed, {0})),
      random_passive_symplectic(n, derive_seed(basis_seed, {1})),
      PhaseInsensitiveChannel(tau, m),
      n_bar,
  };
}

AdditivitySummary run_additivity_suite(std::size_t trials, const ScenarioSampling& sampling,
                                       std::uint64_t seed, double tolerance) {
  std::vector<double> gaps(trials);
  const auto total = static_cast<long long>(trials);
#pragma omp parallel for schedule(dynamic, 64)
  for (long long t = 0; t < total; ++t) {
    std::mt19937_64 rng(derive_seed(seed, {static_cast<std::uint64_t>(t)}));
    gaps[static_cast<std::size_t>(t)] = additivity_gap(random_scenario(sampling, rng));
  }

  AdditivitySummary sum;
  sum.trials = trials;
  sum.seed = seed;
  sum.tolerance = tolerance;
  if (trials == 0) return sum;
  sum.min_gap = *std::min_element(gaps.begin(), gaps.end());
  sum.max_gap = *std::max_element(gaps.begin(), gaps.end());
  sum.violations = static_cast<std::size_t>(
      std::count_if(gaps.begin(), gaps.end(), [&](double g) { return g < -tolerance; }));
  return sum;
}

}  // namespace gbench
