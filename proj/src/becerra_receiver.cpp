#include "gbench/becerra_receiver.hpp"

#include "gbench/seeding.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>

namespace gbench {

namespace {

constexpr double kTieTol = 1e-12;
constexpr double kPosteriorFloor = 1e-300;

/// Per-configuration lookup of stage no-click probabilities, laid out so the
/// column for one hypothesis is contiguous: no_click[h * M + i].
class StageTable {
 public:
  explicit StageTable(const ReceiverConfig& c) : m_(c.constellation.size()), no_click_(m_ * m_) {
    for (std::size_t h = 0; h < m_; ++h) {
      for (std::size_t i = 0; i < m_; ++i) {
        no_click_[h * m_ + i] = stage_no_click_prob(c.constellation.points[i], c.constellation.points[h],
                                                    c.stages, c.detector);
      }
    }
  }

  std::size_t size() const { return m_; }
  double no_click(std::size_t h, std::size_t i) const { return no_click_[h * m_ + i]; }
  double likelihood(std::size_t h, std::size_t i, bool click) const {
    const double q = no_click(h, i);
    return click ? 1.0 - q : q;
  }

  void update(std::span<double> post, std::size_t h, bool click) const {
    double total = 0.0;
    for (std::size_t i = 0; i < m_; ++i) {
      post[i] *= likelihood(h, i, click);
      total += post[i];
    }
    if (total < kPosteriorFloor) {
      total = 0.0;
      for (auto& p : post) {
        p = std::max(p, kPosteriorFloor);
        total += p;
      }
    }
    for (auto& p : post) p /= total;
  }

 private:
  std::size_t m_;
  std::vector<double> no_click_;
};

inline double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

struct NullObserver {
  void operator()(std::size_t, bool) const {}
};

/// Runs the adaptive receiver for one transmitted symbol and returns the guess.
/// `post` is scratch space of size M.
template <class Observer>
std::size_t simulate(std::size_t input, const StageTable& table, std::span<const double> prior, std::size_t stages,
                     std::mt19937_64& rng, std::span<double> post, Observer&& observe) {
  std::copy(prior.begin(), prior.end(), post.begin());
  for (std::size_t k = 0; k < stages; ++k) {
    const std::size_t h = argmax_lowest(post);
    const bool click = uniform01(rng) >= table.no_click(h, input);
    observe(h, click);
    table.update(post, h, click);
  }
  return argmax_lowest(post);
}

double plugin_information(std::span<const double> prior, std::span<const std::uint64_t> counts,
                          std::span<const std::uint64_t> row_totals, std::size_t m) {
  ConfusionMatrix cm;
  cm.size = m;
  cm.prob.assign(m * m, 0.0);
  for (std::size_t a = 0; a < m; ++a) {
    if (row_totals[a] == 0) continue;
    for (std::size_t b = 0; b < m; ++b) {
      cm.prob[a * m + b] = static_cast<double>(counts[a * m + b]) / static_cast<double>(row_totals[a]);
    }
  }
  return discrete_mutual_information(prior, cm);
}

}  // namespace

void ReceiverConfig::validate() const {
  if (stages == 0) throw std::invalid_argument("ReceiverConfig: stages must be >= 1");
  constellation.validate();
  if (!(detector.efficiency > 0.0 && detector.efficiency <= 1.0)) {
    throw std::invalid_argument("ReceiverConfig: detector efficiency must lie in (0, 1]");
  }
  if (!(detector.dark_count_prob >= 0.0 && detector.dark_count_prob < 1.0)) {
    throw std::invalid_argument("ReceiverConfig: dark count probability must lie in [0, 1)");
  }
}

double ConfusionMatrix::standard_error(std::size_t a, std::size_t b, double p_ref) const {
  if (row_trials.empty() || row_trials[a] == 0) return 0.0;
  const double p = p_ref >= 0.0 ? p_ref : (*this)(a, b);
  return std::sqrt(p * (1.0 - p) / static_cast<double>(row_trials[a]));
}

double stage_no_click_prob(Complex true_amp, Complex hyp_amp, std::size_t stages, const DetectorModel& det) {
  if (stages == 0) throw std::invalid_argument("stage_no_click_prob: stages must be >= 1");
  const double mean_photons = det.efficiency * std::norm(true_amp - hyp_amp) / static_cast<double>(stages);
  return std::exp(-mean_photons) * (1.0 - det.dark_count_prob);
}

std::size_t argmax_lowest(std::span<const double> v) {
  if (v.empty()) throw std::invalid_argument("argmax_lowest: empty input");
  const double best = *std::max_element(v.begin(), v.end());
  const double cut = best - kTieTol * std::abs(best);
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] >= cut) return i;
  }
  return 0;
}

std::vector<double> bayesian_update(std::span<const double> posterior, std::size_t hyp, bool click,
                                    const ReceiverConfig& config) {
  const std::size_t m = config.constellation.size();
  if (posterior.size() != m || hyp >= m) throw std::invalid_argument("bayesian_update: index/size mismatch");
  std::vector<double> out(posterior.begin(), posterior.end());
  StageTable(config).update(out, hyp, click);
  return out;
}

DetectionRecord run_trial(std::size_t input, const ReceiverConfig& config, std::mt19937_64& rng) {
  config.validate();
  if (input >= config.constellation.size()) throw std::invalid_argument("run_trial: input index out of range");
  const StageTable table(config);
  std::vector<double> post(table.size());
  DetectionRecord rec;
  rec.outcomes.reserve(config.stages);
  rec.hypotheses.reserve(config.stages);
  rec.guess = simulate(input, table, config.constellation.prior, config.stages, rng, post,
                       [&](std::size_t h, bool click) {
                         rec.hypotheses.push_back(h);
                         rec.outcomes.push_back(click);
                       });
  return rec;
}

namespace {

struct Enumerator {
  const StageTable& table;
  std::span<const double> prior;
  std::size_t stages;
  std::size_t m;
  // Called at every leaf with the outcome path, hypotheses, guess and
  // P(path | input) for each input.
  std::function<void(const std::vector<bool>&, const std::vector<std::size_t>&, std::size_t,
                     const std::vector<double>&)>
      leaf;

  std::vector<bool> outcomes;
  std::vector<std::size_t> hyps;

  void run() {
    std::vector<double> post(prior.begin(), prior.end());
    std::vector<double> path(m, 1.0);
    descend(post, path);
  }

  void descend(const std::vector<double>& post, const std::vector<double>& path) {
    if (outcomes.size() == stages) {
      leaf(outcomes, hyps, argmax_lowest(post), path);
      return;
    }
    const std::size_t h = argmax_lowest(post);
    for (bool click : {false, true}) {
      std::vector<double> next_path(m);
      bool any = false;
      for (std::size_t i = 0; i < m; ++i) {
        next_path[i] = path[i] * table.likelihood(h, i, click);
        any = any || next_path[i] > 0.0;
      }
      if (!any) continue;
      std::vector<double> next_post = post;
      table.update(next_post, h, click);
      outcomes.push_back(click);
      hyps.push_back(h);
      descend(next_post, next_path);
      outcomes.pop_back();
      hyps.pop_back();
    }
  }
};

void require_exact_size(const ReceiverConfig& config) {
  config.validate();
  if (config.stages > kMaxExactStages) {
    throw std::invalid_argument("exact enumeration supports at most 16 stages");
  }
}

}  // namespace

std::vector<ExactRecord> exact_records(const ReceiverConfig& config) {
  require_exact_size(config);
  const StageTable table(config);
  const auto& prior = config.constellation.prior;
  std::vector<ExactRecord> out;
  Enumerator e{table, prior, config.stages, table.size(), {}, {}, {}};
  e.leaf = [&](const std::vector<bool>& o, const std::vector<std::size_t>& h, std::size_t guess,
               const std::vector<double>& path) {
    ExactRecord r;
    r.record.outcomes = o;
    r.record.hypotheses = h;
    r.record.guess = guess;
    r.record.probability = std::inner_product(prior.begin(), prior.end(), path.begin(), 0.0);
    r.given_input = path;
    out.push_back(std::move(r));
  };
  e.run();
  return out;
}

ExactJoint exact_joint(const ReceiverConfig& config) {
  require_exact_size(config);
  const StageTable table(config);
  const auto& prior = config.constellation.prior;
  const std::size_t m = table.size();

  ExactJoint res;
  res.confusion.size = m;
  res.confusion.prob.assign(m * m, 0.0);
  double info = 0.0;
  Enumerator e{table, prior, config.stages, m, {}, {}, {}};
  e.leaf = [&](const std::vector<bool>&, const std::vector<std::size_t>&, std::size_t guess,
               const std::vector<double>& path) {
    const double p_rec = std::inner_product(prior.begin(), prior.end(), path.begin(), 0.0);
    for (std::size_t a = 0; a < m; ++a) {
      res.confusion.prob[a * m + guess] += path[a];
      if (path[a] > 0.0 && prior[a] > 0.0) info += prior[a] * path[a] * std::log2(path[a] / p_rec);
    }
  };
  e.run();
  res.record_information_bits = std::max(0.0, info);
  return res;
}

MonteCarloResult monte_carlo_confusion(const ReceiverConfig& config, const MonteCarloOptions& opt) {
  config.validate();
  if (opt.trials_per_symbol < 1000) throw std::invalid_argument("monte_carlo_confusion: need >= 1000 trials");
  if (opt.blocks < 2 || opt.blocks > opt.trials_per_symbol) {
    throw std::invalid_argument("monte_carlo_confusion: invalid block count");
  }
  const StageTable table(config);
  const std::size_t m = table.size();
  const std::size_t g_count = opt.blocks;
  const auto& prior = config.constellation.prior;

  // counts[(a * G + g) * M + b]
  std::vector<std::uint64_t> counts(m * g_count * m, 0);
  std::vector<std::uint64_t> block_trials(g_count);
  for (std::size_t g = 0; g < g_count; ++g) {
    block_trials[g] = opt.trials_per_symbol / g_count + (g < opt.trials_per_symbol % g_count ? 1 : 0);
  }

  const auto tasks = static_cast<long long>(m * g_count);
#pragma omp parallel
  {
    std::vector<double> post(m);
#pragma omp for schedule(dynamic, 1)
    for (long long task = 0; task < tasks; ++task) {
      const std::size_t a = static_cast<std::size_t>(task) / g_count;
      const std::size_t g = static_cast<std::size_t>(task) % g_count;
      std::mt19937_64 rng(derive_seed(opt.seed, {a, g}));
      std::uint64_t* row = &counts[(a * g_count + g) * m];
      for (std::uint64_t t = 0; t < block_trials[g]; ++t) {
        ++row[simulate(a, table, prior, config.stages, rng, post, NullObserver{})];
      }
    }
  }

  MonteCarloResult res;
  res.prior = prior;
  std::vector<std::uint64_t> total(m * m, 0);
  std::vector<std::uint64_t> row_totals(m, opt.trials_per_symbol);
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t g = 0; g < g_count; ++g) {
      for (std::size_t b = 0; b < m; ++b) total[a * m + b] += counts[(a * g_count + g) * m + b];
    }
  }
  res.confusion.size = m;
  res.confusion.row_trials = row_totals;
  res.confusion.prob.resize(m * m);
  for (std::size_t i = 0; i < m * m; ++i) {
    res.confusion.prob[i] = static_cast<double>(total[i]) / static_cast<double>(opt.trials_per_symbol);
  }
  res.mutual_info_bits = discrete_mutual_information(prior, res.confusion);

  // Delete-one-block jackknife.
  std::vector<double> loo(g_count);
  for (std::size_t g = 0; g < g_count; ++g) {
    std::vector<std::uint64_t> c = total;
    std::vector<std::uint64_t> rt(m, opt.trials_per_symbol - block_trials[g]);
    for (std::size_t a = 0; a < m; ++a) {
      for (std::size_t b = 0; b < m; ++b) c[a * m + b] -= counts[(a * g_count + g) * m + b];
    }
    loo[g] = plugin_information(prior, c, rt, m);
  }
  const double gd = static_cast<double>(g_count);
  const double mean_loo = std::accumulate(loo.begin(), loo.end(), 0.0) / gd;
  double ss = 0.0;
  for (double v : loo) ss += (v - mean_loo) * (v - mean_loo);
  res.jackknife_bias = (gd - 1.0) * (mean_loo - res.mutual_info_bits);
  res.jackknife_stderr = std::sqrt((gd - 1.0) / gd * ss);
  return res;
}

double discrete_mutual_information(std::span<const double> prior, const ConfusionMatrix& confusion) {
  const std::size_t m = confusion.size;
  if (prior.size() != m || confusion.prob.size() != m * m) {
    throw std::invalid_argument("discrete_mutual_information: dimension mismatch");
  }
  std::vector<double> p_out(m, 0.0);
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < m; ++b) p_out[b] += prior[a] * confusion(a, b);
  }
  double info = 0.0;
  for (std::size_t a = 0; a < m; ++a) {
    if (prior[a] <= 0.0) continue;
    for (std::size_t b = 0; b < m; ++b) {
      const double p = confusion(a, b);
      if (p > 0.0 && p_out[b] > 0.0) info += prior[a] * p * std::log2(p / p_out[b]);
    }
  }
  return std::max(0.0, info);
}

std::vector<double> sigma_scan_grid() {
  std::vector<double> g;
  for (int i = 1; i <= 32; ++i) g.push_back(0.25 * i);
  return g;
}

MonteCarloResult becerra_point(int order, double sigma, double n_bar, double eta, std::size_t stages,
                               const DetectorModel& det, std::uint64_t trials_per_symbol, std::uint64_t seed,
                               double* delta_out) {
  const double delta = solve_delta_for_energy(order, sigma, n_bar);
  if (delta_out != nullptr) *delta_out = delta;
  const QamConstellation received = propagate(build_qam(order, delta, sigma), eta);
  ReceiverConfig cfg{stages, received.symbols, det};
  return monte_carlo_confusion(cfg, {trials_per_symbol, seed, 16});
}

std::vector<BecerraCurvePoint> becerra_capacity_curve(const BecerraCurveSpec& spec) {
  const auto channel = PhaseInsensitiveChannel::from_loss(spec.eta, 0.0);
  std::vector<BecerraCurvePoint> out;
  out.reserve(spec.n_bar.size());

  for (std::size_t k = 0; k < spec.n_bar.size(); ++k) {
    const double n_bar = spec.n_bar[k];
    double sigma = spec.policy == SigmaPolicy::Fixed ? spec.sigma : kUniformSigma;

    if (spec.policy == SigmaPolicy::Optimize) {
      // Common random numbers across sigma values keep the comparison smooth.
      const std::uint64_t search_seed = derive_seed(spec.seed, {k, 0});
      const auto score = [&](double s) {
        return becerra_point(spec.order, s, n_bar, spec.eta, spec.stages, spec.detector,
                             spec.search_trials_per_symbol, search_seed)
            .mutual_info_bits;
      };
      double best_sigma = 0.0;
      double best = -1.0;
      for (double s : sigma_scan_grid()) {
        const double v = score(s);
        if (v > best) {
          best = v;
          best_sigma = s;
        }
      }
      // Golden-section refinement inside the neighbouring grid cells.
      constexpr double kInvPhi = 0.6180339887498949;
      double a = std::max(0.05, best_sigma - 0.25);
      double b = best_sigma + 0.25;
      double c = b - kInvPhi * (b - a);
      double d = a + kInvPhi * (b - a);
      double fc = score(c);
      double fd = score(d);
      for (int it = 0; it < 8; ++it) {
        if (fc > fd) {
          b = d;
          d = c;
          fd = fc;
          c = b - kInvPhi * (b - a);
          fc = score(c);
        } else {
          a = c;
          c = d;
          fc = fd;
          d = a + kInvPhi * (b - a);
          fd = score(d);
        }
      }
      const double refined = fc > fd ? c : d;
      sigma = std::max(fc, fd) > best ? refined : best_sigma;
    }

    BecerraCurvePoint pt;
    pt.n_bar = n_bar;
    pt.sigma = sigma;
    const auto mc = becerra_point(spec.order, sigma, n_bar, spec.eta, spec.stages, spec.detector,
                                  spec.trials_per_symbol, derive_seed(spec.seed, {k, 1}), &pt.delta);
    pt.bits = mc.mutual_info_bits;
    pt.stderr_bits = mc.jackknife_stderr;
    pt.c_coh = coherent_capacity(channel, n_bar);
    pt.c_sq = squeezed_capacity(channel, n_bar).bits;
    pt.c_holevo = holevo_capacity(channel, n_bar);
    pt.beats_gaussian = pt.bits - 2.0 * pt.stderr_bits > std::max(pt.c_coh, pt.c_sq);
    out.push_back(pt);
  }
  return out;
}

}  // namespace gbench
