// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria (0 when everything passes).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "../oracles.hpp"
#include "gbench/becerra_receiver.hpp"
#include "gbench/capacity_single.hpp"
#include "gbench/majorization.hpp"
#include "gbench/multimode_optimizer.hpp"
#include "gbench/qam_heterodyne.hpp"
#include "gbench/seeding.hpp"

using namespace gbench;

namespace {

constexpr std::uint64_t kSeed = 20160301;

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double time_limit_s;
  std::function<Outcome()> body;
};

void note(Outcome& o, bool ok, const std::string& what) {
  if (!ok) o.pass = false;
  if (!o.detail.empty()) o.detail += "; ";
  o.detail += (ok ? "" : "FAILED ") + what;
}

// 1 ---------------------------------------------------------------------------
Outcome thresholds() {
  Outcome o;
  const double x8 = threshold_energy(0.8);
  const double x9 = threshold_energy(0.9);
  note(o, x8 >= 51.0 && x8 <= 53.0, fmt::format("x(0.8)={:.3f} in [51,53]", x8));
  note(o, x9 >= 7900.0 && x9 <= 8300.0, fmt::format("x(0.9)={:.1f} in [7900,8300]", x9));
  return o;
}

// 2 ---------------------------------------------------------------------------
Outcome crossover_identity() {
  Outcome o;
  std::mt19937_64 rng(derive_seed(kSeed, {2}));
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const double tau = 0.1 + 2.9 * u(rng);
    const double m_lo = std::max(1e-3, std::abs(tau - 1.0));
    const double m = m_lo + (5.0 - m_lo) * u(rng);
    const PhaseInsensitiveChannel ch(tau, m);
    const double nc = crossover_energy(ch);
    worst = std::max(worst, std::abs(coherent_capacity(ch, nc) - squeezed_capacity(ch, nc).bits));
  }
  note(o, worst < 1e-9, fmt::format("max |C_coh - C_sq| at n_c = {:.2e} over 1000 channels", worst));
  return o;
}

// 3 ---------------------------------------------------------------------------
Outcome single_mode_reduction() {
  Outcome o;
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    // Channels alternate between lossy and amplifying, with varying excess noise.
    const double tau = (i % 2 == 0) ? 0.05 + 0.045 * i : 1.0 + 0.1 * i;
    const double m = 0.5 * std::abs(tau - 1.0) + 0.1 * (i % 5);
    const PhaseInsensitiveChannel ch(tau, m);
    for (int j = 0; j < 20; ++j) {
      const double n = std::pow(10.0, -2.0 + 4.0 * j / 19.0);
      const MultimodeScenario sc{SqueezingSpectrum::zeros(1), SqueezingSpectrum::zeros(1),
                                 PassiveSymplectic::identity(1), PassiveSymplectic::identity(1), ch, n};
      worst = std::max(worst, std::abs(scenario_capacity(sc).bits - coherent_capacity(ch, n)));
    }
  }
  note(o, worst < 1e-10, fmt::format("pipeline vs C_coh max dev {:.2e} on 20x20 grid", worst));
  double cont = 0.0;
  for (double n : {0.1, 1.0, 10.0}) {
    cont = std::max(cont, std::abs(squeezed_capacity(PhaseInsensitiveChannel(1.0, 1e-8), n).bits -
                                   std::log2(1.0 + 2.0 * n)));
  }
  note(o, cont < 1e-5, fmt::format("|C_sq(m=1e-8) - log2(1+2n)| max {:.2e}", cont));
  return o;
}

// 4 ---------------------------------------------------------------------------
Outcome additivity() {
  Outcome o;
  const ScenarioSampling sampling;
  const auto s = run_additivity_suite(10000, sampling, derive_seed(kSeed, {4}));
  note(o, s.violations == 0 && s.min_gap >= -1e-9,
       fmt::format("{} scenarios, violations={}, min gap={:.3e}, max gap={:.3e}", s.trials, s.violations, s.min_gap,
                   s.max_gap));
  return o;
}

// 5 ---------------------------------------------------------------------------
Outcome waterfilling() {
  Outcome o;
  std::mt19937_64 rng(derive_seed(kSeed, {5}));
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst_oracle = 0.0;
  double worst_random = -1e300;
  for (int t = 0; t < 1000; ++t) {
    const std::size_t dim = 2 * (1 + static_cast<std::size_t>(u(rng) * 4));
    std::vector<double> l(dim);
    for (auto& x : l) x = 0.05 + 5.0 * u(rng);
    const double budget = 0.01 + 20.0 * u(rng);
    const auto a = waterfill(l, budget);
    worst_oracle = std::max(worst_oracle, std::abs(a.mutual_info_bits - oracle::waterfill_brute(l, budget)));
    std::exponential_distribution<double> e(1.0);
    std::vector<double> p(dim);
    for (int k = 0; k < 10000; ++k) {
      double s = 0.0;
      for (auto& x : p) s += (x = e(rng));
      for (auto& x : p) x *= budget / s;
      worst_random = std::max(worst_random, allocation_information(l, p) - a.mutual_info_bits);
    }
  }
  note(o, worst_oracle < 1e-6, fmt::format("max |water-fill - simplex oracle| = {:.2e} bits", worst_oracle));
  note(o, worst_random <= 1e-12, fmt::format("best random allocation minus water-fill = {:.2e} bits", worst_random));
  return o;
}

// 6 ---------------------------------------------------------------------------
Outcome majorization_suite() {
  Outcome o;
  std::mt19937_64 rng(derive_seed(kSeed, {6}));
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::size_t eig_fail = 0;
  for (int t = 0; t < 10000; ++t) {
    const int n = 2 + t % 7;
    Matrix a(n, n), b(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        a(i, j) = g(rng);
        b(i, j) = g(rng);
      }
    }
    if (!eigenvalue_sum_majorized(a + a.transpose(), b + b.transpose())) ++eig_fail;
  }
  note(o, eig_fail == 0, fmt::format("eigenvalue-sum majorization failures {}/10000", eig_fail));

  double schur = 0.0;
  for (std::size_t k = 2; k <= 8; ++k) schur = std::max(schur, schur_convexity_check(k, 4.0, 5000, derive_seed(kSeed, {6, k})));
  note(o, schur < 1e-7, fmt::format("Schur transfer max violation {:.2e}", schur));

  std::size_t fails = 0;
  std::size_t seen[3] = {0, 0, 0};
  for (int t = 0; t < 100000; ++t) {
    const std::size_t d = 2 + static_cast<std::size_t>(u(rng) * 7);
    const auto [lambda, mu] = random_majorized_pair(d, rng);
    const double budget = std::pow(10.0, -2.0 + 3.0 * u(rng));
    const auto r = case_inequality_check(lambda, mu, budget);
    if (!r.holds) ++fails;
    ++seen[static_cast<int>(r.active_case)];
  }
  note(o, fails == 0 && seen[0] > 0 && seen[1] > 0 && seen[2] > 0,
       fmt::format("case inequality failures {}/100000 (k_mu=k_lambda: {}, k_mu>k_lambda: {}, k_mu<k_lambda: {})",
                   fails, seen[0], seen[1], seen[2]));
  return o;
}

// 7 ---------------------------------------------------------------------------
Outcome becerra_oracle() {
  Outcome o;
  double worst_z = 0.0;
  double worst_mi = 0.0;
  std::size_t bad_entries = 0;
  std::uint64_t cfg_id = 0;
  for (std::size_t L : {1u, 2u, 4u, 8u}) {
    for (double eta : {0.2, 0.7}) {
      for (double n : {0.5, 2.0}) {
        ++cfg_id;
        const ReceiverConfig cfg{L, propagate(build_qam(4, std::sqrt(2.0 * n)), eta).symbols, {}};
        const auto ex = exact_joint(cfg);
        const auto mc = monte_carlo_confusion(cfg, {200000, derive_seed(kSeed, {7, cfg_id}), 16});
        for (std::size_t a = 0; a < 4; ++a) {
          for (std::size_t b = 0; b < 4; ++b) {
            const double p = ex.confusion(a, b);
            const double dev = std::abs(mc.confusion(a, b) - p);
            const double se = mc.confusion.standard_error(a, b, p);
            const double z = se > 0.0 ? dev / se : (dev > 0.0 ? INFINITY : 0.0);
            worst_z = std::max(worst_z, z);
            if (z > 3.0) ++bad_entries;
          }
        }
        const double exact_mi = discrete_mutual_information(cfg.constellation.prior, ex.confusion);
        worst_mi = std::max(worst_mi, std::abs(mc.mutual_info_bits - exact_mi));
      }
    }
  }
  note(o, bad_entries == 0,
       fmt::format("{} of 256 entries beyond 3 SE (max {:.2f} SE)", bad_entries, worst_z));
  note(o, worst_mi < 0.02, fmt::format("max |MI_mc - MI_exact| = {:.2e} bits", worst_mi));
  return o;
}

// 8 ---------------------------------------------------------------------------
std::vector<BecerraCurvePoint> curve(int order, std::size_t stages, SigmaPolicy policy, std::vector<double> n_bar,
                                     std::uint64_t tag) {
  BecerraCurveSpec spec;
  spec.order = order;
  spec.eta = 0.7;
  spec.stages = stages;
  spec.policy = policy;
  spec.n_bar = std::move(n_bar);
  spec.seed = derive_seed(kSeed, {8, tag});
  return becerra_capacity_curve(spec);
}

std::string describe(const std::vector<BecerraCurvePoint>& c, bool with_sq) {
  std::string s;
  for (const auto& p : c) {
    s += fmt::format(" n={}:I={:.4f}+-{:.4f}/C={:.4f}", p.n_bar, p.bits, p.stderr_bits,
                     with_sq ? std::max(p.c_coh, p.c_sq) : p.c_coh);
    if (std::isfinite(p.sigma)) s += fmt::format("(sigma={:.3f})", p.sigma);
  }
  return s;
}

Outcome becerra_figure() {
  Outcome o;
  const std::vector<double> small{0.1, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0};

  const auto a = curve(4, 4, SigmaPolicy::Uniform, small, 1);
  const bool a_ok = std::all_of(a.begin(), a.end(), [](const auto& p) { return p.bits + 2 * p.stderr_bits <= p.c_coh; });
  note(o, a_ok, "(a) 4-QAM L=4 below C_coh:" + describe(a, false));

  const auto b = curve(4, 64, SigmaPolicy::Uniform, small, 2);
  const bool b_ok = std::any_of(b.begin(), b.end(), [](const auto& p) { return p.bits - 2 * p.stderr_bits > p.c_coh; });
  note(o, b_ok, "(b) 4-QAM L=64 above C_coh somewhere:" + describe(b, false));

  const auto c = curve(16, 64, SigmaPolicy::Uniform, {0.5, 1.0, 2.0, 4.0, 6.0, 8.0, 10.0, 12.0, 16.0, 20.0}, 3);
  const bool c_ok = std::all_of(c.begin(), c.end(), [](const auto& p) {
    return p.bits + 2 * p.stderr_bits <= std::max(p.c_coh, p.c_sq);
  });
  note(o, c_ok, "(c) uniform 16-QAM L=64 below max(C_coh, C_sq):" + describe(c, true));

  const auto d = curve(16, 64, SigmaPolicy::Optimize, {8.0, 10.0, 12.0, 14.0}, 4);
  const bool d_ok = std::any_of(d.begin(), d.end(), [](const auto& p) {
    return p.bits - 2 * p.stderr_bits > std::max(p.c_coh, p.c_sq) && p.bits >= 3.0;
  });
  note(o, d_ok, "(d) weighted 16-QAM L=64 above max(C_coh, C_sq) with I>=3:" + describe(d, true));
  return o;
}

// 9 ---------------------------------------------------------------------------
double het_bits(int order, double delta, double sigma, double eta) {
  return heterodyne_mi({propagate(build_qam(order, delta, sigma), eta).symbols, 1.0}).bits;
}

Outcome heterodyne_qam() {
  Outcome o;
  const double eta = 0.7;
  const double sigma_p = 5.0;
  const double sigma = sigma_p / std::sqrt(eta);
  double worst = 0.0;
  double worst_at = 0.0;
  for (double x : {0.25, 0.5, 1.0, 2.0, 4.0, 6.0, 8.0, 10.0, 12.0, 14.0, 16.0, 18.0, 20.0}) {
    const double n = x / eta;
    const double dev = std::abs(het_bits(64, solve_delta_for_energy(64, sigma, n), sigma, eta) - std::log2(1.0 + x));
    if (dev > worst) {
      worst = dev;
      worst_at = x;
    }
  }
  note(o, worst < 0.05,
       fmt::format("64-QAM sigma'=5: max |I - log2(1+eta n)| = {:.4f} bits (at eta n = {}) for eta n <= 20", worst,
                   worst_at));

  const double x_big = 4.0 * sigma_p * sigma_p;
  const double n_big = x_big / eta;
  const double gap =
      std::log2(1.0 + x_big) - het_bits(64, solve_delta_for_energy(64, kUniformSigma, n_big), kUniformSigma, eta);
  note(o, gap > 0.3, fmt::format("uniform 64-QAM gap at eta n = {} is {:.4f} bits", x_big, gap));

  // 16-QAM at fixed sigma' = 3: once delta outgrows the prior, I falls back to 2 bits.
  const double s16 = 3.0 / std::sqrt(eta);
  std::string trace;
  double last = 0.0;
  for (double delta : {2.0, 4.0, 6.0, 8.0, 12.0, 16.0}) {
    last = het_bits(16, delta, s16, eta);
    trace += fmt::format(" d={}:{:.4f}", delta, last);
  }
  note(o, std::abs(last - 2.0) < 0.05, "16-QAM weighted I vs delta:" + trace);
  return o;
}

// 10 --------------------------------------------------------------------------
Outcome efficiency_grids() {
  Outcome o;
  struct G {
    ChannelFamily family;
    double tau;
  };
  for (const G g : {G{ChannelFamily::Loss, 0.5}, G{ChannelFamily::Loss, 0.7}, G{ChannelFamily::Amplifier, 1.5},
                    G{ChannelFamily::Amplifier, 2.0}}) {
    EfficiencyGridSpec spec;
    spec.family = g.family;
    spec.tau = g.tau;
    spec.n_bar = {0.01, 100.0, 41, true};
    spec.n_th = {0.01, 10.0, 31, true};
    const auto grid = efficiency_grid(spec);
    std::size_t breaks = 0, checked = 0, squeezed_high = 0;
    const auto coh = [&](std::size_t i, std::size_t j) {
      return grid.at(i, j).optimal_scheme == GaussianScheme::Coherent;
    };
    for (std::size_t i = 0; i < grid.n_th.size(); ++i) {
      for (std::size_t j = 0; j < grid.n_bar.size(); ++j) {
        const auto& c = grid.at(i, j);
        if (c.optimal_scheme == GaussianScheme::Squeezed && c.efficiency > 0.9) ++squeezed_high;
        if (!coh(i, j)) continue;
        if (j + 1 < grid.n_bar.size() && coh(i, j + 1)) {
          ++checked;
          if (grid.at(i, j + 1).efficiency < c.efficiency - 1e-12) ++breaks;
        }
        if (i + 1 < grid.n_th.size() && coh(i + 1, j)) {
          ++checked;
          if (grid.at(i + 1, j).efficiency < c.efficiency - 1e-12) ++breaks;
        }
      }
    }
    note(o, breaks == 0 && checked > 0,
         fmt::format("tau={}: {} monotonicity breaks in {} coherent-side neighbour pairs", g.tau, breaks, checked));
    if (g.family == ChannelFamily::Loss && g.tau == 0.7) {
      note(o, squeezed_high > 0, fmt::format("tau=0.7: {} squeezed-optimal cells with efficiency > 0.9", squeezed_high));
    }
  }
  return o;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "efficiency thresholds", 1.0, thresholds},
      {2, "crossover identity", 1.0, crossover_identity},
      {3, "single-mode reduction", 1.0, single_mode_reduction},
      {4, "additivity", 60.0, additivity},
      {5, "water-filling optimality", 30.0, waterfilling},
      {6, "majorization suite", 60.0, majorization_suite},
      {7, "receiver oracle agreement", 300.0, becerra_oracle},
      {8, "receiver vs Gaussian limit", 1800.0, becerra_figure},
      {9, "QAM heterodyne", 300.0, heterodyne_qam},
      {10, "efficiency grids", 30.0, efficiency_grids},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.body();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs < c.time_limit_s;
    note(o, in_time, fmt::format("runtime {:.2f}s < {}s", secs, c.time_limit_s));
    if (!o.pass) ++failed;
    std::printf("%s criterion %d (%s): %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed;
}
