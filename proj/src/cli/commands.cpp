#include "gbench/cli.hpp"

#include "gbench/becerra_receiver.hpp"
#include "gbench/capacity_single.hpp"
#include "gbench/errors.hpp"
#include "gbench/multimode_optimizer.hpp"
#include "gbench/qam_heterodyne.hpp"

#include <omp.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <ostream>
#include <random>

#include "CLI11.hpp"

namespace gbench::cli {

namespace {

using nlohmann::json;

enum class Kind { Number, Integer, Text, NumberList, Flag };

struct OptionSpec {
  const char* name;
  Kind kind;
  const char* help;
};

struct Context {
  const json& cfg;
  std::uint64_t seed;
  std::ostream& out;
  std::ostream& err;
};

using Handler = std::function<int(const Context&)>;

struct CommandSpec {
  const char* name;
  const char* help;
  std::vector<OptionSpec> options;
  Handler handler;
};

// ---- config accessors --------------------------------------------------------

double get_number(const json& cfg, const char* key, std::optional<double> fallback = std::nullopt) {
  if (!cfg.contains(key)) {
    if (fallback) return *fallback;
    throw ConfigError(std::string("missing required parameter '") + key + "'");
  }
  const auto& v = cfg.at(key);
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) return parse_number(v.get<std::string>());
  throw ConfigError(std::string("parameter '") + key + "' must be a number");
}

std::int64_t get_integer(const json& cfg, const char* key, std::optional<std::int64_t> fallback = std::nullopt) {
  if (!cfg.contains(key)) {
    if (fallback) return *fallback;
    throw ConfigError(std::string("missing required parameter '") + key + "'");
  }
  const auto& v = cfg.at(key);
  if (v.is_number_integer()) return v.get<std::int64_t>();
  throw ConfigError(std::string("parameter '") + key + "' must be an integer");
}

std::vector<double> get_list(const json& cfg, const char* key,
                             std::optional<std::vector<double>> fallback = std::nullopt) {
  if (!cfg.contains(key)) {
    if (fallback) return *fallback;
    throw ConfigError(std::string("missing required parameter '") + key + "'");
  }
  const auto& v = cfg.at(key);
  if (v.is_number()) return {v.get<double>()};
  if (v.is_string()) return parse_number_list(v.get<std::string>());
  if (v.is_array()) {
    std::vector<double> out;
    for (const auto& e : v) out.push_back(e.is_string() ? parse_number(e.get<std::string>()) : e.get<double>());
    return out;
  }
  throw ConfigError(std::string("parameter '") + key + "' must be a list of numbers");
}

std::string get_text(const json& cfg, const char* key, const std::string& fallback) {
  if (!cfg.contains(key)) return fallback;
  const auto& v = cfg.at(key);
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number()) return format_number(v.get<double>());
  throw ConfigError(std::string("parameter '") + key + "' must be a string");
}

bool get_flag(const json& cfg, const char* key) {
  if (!cfg.contains(key)) return false;
  const auto& v = cfg.at(key);
  if (v.is_boolean()) return v.get<bool>();
  throw ConfigError(std::string("parameter '") + key + "' must be true or false");
}

/// Writes to the configured "out" file when present, otherwise to ctx.out.
class Sink {
 public:
  Sink(const Context& ctx, const char* key = "out") {
    if (ctx.cfg.contains(key)) {
      file_ = std::make_unique<std::ofstream>(ctx.cfg.at(key).get<std::string>());
      if (!*file_) throw ConfigError("cannot open output file " + ctx.cfg.at(key).get<std::string>());
      stream_ = file_.get();
    } else {
      stream_ = &ctx.out;
    }
  }
  std::ostream& operator*() { return *stream_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_;
};

/// Configuration that determines the numerical output (sink paths and thread
/// count do not).
json hashed_config(const json& cfg, std::uint64_t seed) {
  json h = cfg;
  for (const char* k : {"out", "crossover_out", "csv", "threads", "config"}) h.erase(k);
  h["seed"] = seed;
  return h;
}

void csv_header(std::ostream& os, const char* command, const Context& ctx) {
  write_csv_header(os, command, hashed_config(ctx.cfg, ctx.seed), ctx.seed);
}

// ---- commands ----------------------------------------------------------------

PhaseInsensitiveChannel channel_from(const json& cfg) {
  const double n_th = get_number(cfg, "nth", 0.0);
  const int given = static_cast<int>(cfg.contains("loss")) + static_cast<int>(cfg.contains("amp")) +
                    static_cast<int>(cfg.contains("tau"));
  if (given != 1) throw ConfigError("specify exactly one of --loss, --amp or --tau/--m");
  if (cfg.contains("loss")) return PhaseInsensitiveChannel::from_loss(get_number(cfg, "loss"), n_th);
  if (cfg.contains("amp")) return PhaseInsensitiveChannel::from_amplifier(get_number(cfg, "amp"), n_th);
  return PhaseInsensitiveChannel(get_number(cfg, "tau"), get_number(cfg, "m"));
}

int cmd_capacity(const Context& ctx) {
  const auto ch = channel_from(ctx.cfg);
  const double n_bar = get_number(ctx.cfg, "nbar");
  const CapacityReport rep = capacity_report(ch, n_bar);
  const double n_c = crossover_energy(ch);

  auto& o = ctx.out;
  o << "tau=" << format_number(ch.tau()) << '\n'
    << "m=" << format_number(ch.m()) << '\n'
    << "n_bar=" << format_number(n_bar) << '\n'
    << "c_coh=" << format_number(rep.c_coh) << '\n'
    << "c_sq=" << format_number(rep.c_sq) << '\n'
    << "c_holevo=" << format_number(rep.c_holevo) << '\n'
    << "c_gauss=" << format_number(rep.c_gauss) << '\n'
    << "optimal_scheme=" << to_string(rep.optimal_scheme) << '\n'
    << "optimal_squeezing_r=" << format_number(rep.optimal_squeezing_r) << '\n'
    << "efficiency=" << format_number(rep.efficiency) << '\n'
    << "n_bar_c=" << format_number(n_c) << '\n';

  if (ctx.cfg.contains("csv")) {
    std::ofstream f(ctx.cfg.at("csv").get<std::string>());
    if (!f) throw ConfigError("cannot open csv output");
    csv_header(f, "capacity", ctx);
    f << "tau,m,n_bar,c_coh,c_sq,c_holevo,c_gauss,scheme,r_opt,efficiency,n_bar_c\n";
    f << format_number(ch.tau()) << ',' << format_number(ch.m()) << ',' << format_number(n_bar) << ','
      << format_number(rep.c_coh) << ',' << format_number(rep.c_sq) << ',' << format_number(rep.c_holevo) << ','
      << format_number(rep.c_gauss) << ',' << to_string(rep.optimal_scheme) << ','
      << format_number(rep.optimal_squeezing_r) << ',' << format_number(rep.efficiency) << ','
      << format_number(n_c) << '\n';
  }
  return kExitOk;
}

int cmd_efficiency_grid(const Context& ctx) {
  const auto& c = ctx.cfg;
  EfficiencyGridSpec spec;
  const std::string family = get_text(c, "family", "loss");
  if (family == "loss") {
    spec.family = ChannelFamily::Loss;
  } else if (family == "amp" || family == "amplifier") {
    spec.family = ChannelFamily::Amplifier;
  } else {
    throw ConfigError("family must be 'loss' or 'amp'");
  }
  spec.tau = get_number(c, "tau");
  const bool linear = get_flag(c, "linear");
  spec.n_bar = {get_number(c, "nbar_min", 0.01), get_number(c, "nbar_max", 100.0),
                static_cast<std::size_t>(get_integer(c, "nbar_count", 41)), !linear};
  spec.n_th = {get_number(c, "nth_min", 0.01), get_number(c, "nth_max", 10.0),
               static_cast<std::size_t>(get_integer(c, "nth_count", 31)), !linear};

  const EfficiencyGrid grid = efficiency_grid(spec);
  Sink sink(ctx);
  auto& o = *sink;
  csv_header(o, "efficiency-grid", ctx);
  o << "n_th,n_bar,c_coh,c_sq,c_holevo,c_gauss,scheme,r_opt,efficiency,n_bar_c\n";
  for (std::size_t i = 0; i < grid.n_th.size(); ++i) {
    for (std::size_t j = 0; j < grid.n_bar.size(); ++j) {
      const auto& r = grid.at(i, j);
      o << format_number(grid.n_th[i]) << ',' << format_number(grid.n_bar[j]) << ',' << format_number(r.c_coh)
        << ',' << format_number(r.c_sq) << ',' << format_number(r.c_holevo) << ',' << format_number(r.c_gauss)
        << ',' << to_string(r.optimal_scheme) << ',' << format_number(r.optimal_squeezing_r) << ','
        << format_number(r.efficiency) << ',' << format_number(grid.crossover[i].n_bar_c) << '\n';
    }
  }
  if (c.contains("crossover_out")) {
    std::ofstream f(c.at("crossover_out").get<std::string>());
    if (!f) throw ConfigError("cannot open crossover output");
    csv_header(f, "efficiency-grid/crossover", ctx);
    f << "n_th,n_bar_c\n";
    for (const auto& p : grid.crossover) f << format_number(p.n_th) << ',' << format_number(p.n_bar_c) << '\n';
  }
  return kExitOk;
}

int cmd_waterfill(const Context& ctx) {
  const auto lambdas = get_list(ctx.cfg, "lambdas");
  const double budget = get_number(ctx.cfg, "budget");
  const auto a = waterfill(lambdas, budget);
  auto& o = ctx.out;
  o << "nu=" << format_number(a.nu) << '\n' << "k_active=" << a.k_active << '\n';
  o << "mutual_info_bits=" << format_number(a.mutual_info_bits) << '\n';
  o << "lambda,power\n";
  for (std::size_t j = 0; j < a.lambdas.size(); ++j) {
    o << format_number(a.lambdas[j]) << ',' << format_number(a.powers[j]) << '\n';
  }
  return kExitOk;
}

int cmd_additivity(const Context& ctx) {
  const auto trials = get_integer(ctx.cfg, "trials", 10000);
  const auto modes = get_integer(ctx.cfg, "modes", 4);
  if (trials < 1 || modes < 1) throw ConfigError("trials and modes must be >= 1");
  ScenarioSampling sampling;
  sampling.max_modes = static_cast<std::size_t>(modes);
  sampling.max_squeezing = get_number(ctx.cfg, "max_squeezing", 2.0);
  const auto sum = run_additivity_suite(static_cast<std::size_t>(trials), sampling, ctx.seed);
  auto& o = ctx.out;
  o << "trials=" << sum.trials << '\n'
    << "max_modes=" << modes << '\n'
    << "seed=" << sum.seed << '\n'
    << "min_gap=" << format_number(sum.min_gap) << '\n'
    << "max_gap=" << format_number(sum.max_gap) << '\n'
    << "tolerance=" << format_number(sum.tolerance) << '\n'
    << "violations=" << sum.violations << '\n';
  return sum.violations == 0 ? kExitOk : kExitInvariant;
}

int cmd_becerra(const Context& ctx) {
  const auto& c = ctx.cfg;
  BecerraCurveSpec spec;
  spec.order = static_cast<int>(get_integer(c, "order", 4));
  spec.eta = get_number(c, "eta", 0.7);
  spec.stages = static_cast<std::size_t>(get_integer(c, "stages", 16));
  spec.n_bar = get_list(c, "nbar");
  const std::string sigma = get_text(c, "sigma", "inf");
  if (sigma == "opt") {
    spec.policy = SigmaPolicy::Optimize;
  } else {
    spec.sigma = parse_number(sigma);
    spec.policy = std::isinf(spec.sigma) ? SigmaPolicy::Uniform : SigmaPolicy::Fixed;
  }
  spec.trials_per_symbol = static_cast<std::uint64_t>(get_integer(c, "trials", 200000));
  spec.search_trials_per_symbol = static_cast<std::uint64_t>(get_integer(c, "search_trials", 5000));
  spec.detector.efficiency = get_number(c, "efficiency", 1.0);
  spec.detector.dark_count_prob = get_number(c, "dark_count", 0.0);
  spec.seed = ctx.seed;

  const auto curve = becerra_capacity_curve(spec);
  Sink sink(ctx);
  auto& o = *sink;
  csv_header(o, "becerra", ctx);
  o << "n_bar,delta,sigma,I_becerra,I_stderr,C_coh,C_sq,C_holevo,beats_gaussian\n";
  for (const auto& p : curve) {
    o << format_number(p.n_bar) << ',' << format_number(p.delta) << ',' << format_number(p.sigma) << ','
      << format_number(p.bits) << ',' << format_number(p.stderr_bits) << ',' << format_number(p.c_coh) << ','
      << format_number(p.c_sq) << ',' << format_number(p.c_holevo) << ',' << (p.beats_gaussian ? 1 : 0) << '\n';
  }
  return kExitOk;
}

int cmd_qam_heterodyne(const Context& ctx) {
  const auto& c = ctx.cfg;
  const int order = static_cast<int>(get_integer(c, "order", 16));
  const double eta = get_number(c, "eta", 1.0);
  const auto sigmas = get_list(c, "sigma", std::vector<double>{std::numeric_limits<double>::infinity()});
  const auto n_bars = get_list(c, "nbar");
  QuadratureOptions q;
  q.rel_tol = get_number(c, "rel_tol", q.rel_tol);

  const auto sweep = heterodyne_curve(order, eta, sigmas, n_bars, q);
  Sink sink(ctx);
  auto& o = *sink;
  csv_header(o, "qam-heterodyne", ctx);
  for (const auto& [sigma, n_knee] : sweep.knees) {
    o << "# knee: sigma=" << format_number(sigma) << " eta*n_bar=sigma'^2 at n_bar=" << format_number(n_knee)
      << '\n';
  }
  o << "M,eta,sigma,delta,n_bar,I_bits,C_coh_bits\n";
  for (const auto& r : sweep.rows) {
    o << r.order << ',' << format_number(r.eta) << ',' << format_number(r.sigma) << ',' << format_number(r.delta)
      << ',' << format_number(r.n_bar) << ',' << format_number(r.bits) << ',' << format_number(r.c_coh_bits)
      << '\n';
  }
  return kExitOk;
}

int cmd_selftest(const Context& ctx) {
  auto& o = ctx.out;
  bool ok = true;
  const auto check = [&](const char* name, bool pass) {
    o << (pass ? "PASS " : "FAIL ") << name << '\n';
    ok = ok && pass;
  };

  const double t8 = threshold_energy(0.8);
  check("threshold_energy(0.8) in [51, 53]", t8 >= 51.0 && t8 <= 53.0);

  const PhaseInsensitiveChannel lossy(0.5, 0.25);
  const double n_c = crossover_energy(lossy);
  check("crossover (0.5, 0.25) = 8", std::abs(n_c - 8.0) < 1e-12);
  check("C_coh(n_c) = C_sq(n_c)",
        std::abs(coherent_capacity(lossy, n_c) - squeezed_capacity(lossy, n_c).bits) < 1e-9);

  const std::vector<double> lam{1.0, 2.0, 4.0};
  const auto wf = waterfill(lam, 4.0);
  check("waterfill (1,2,4; 4) nu = 3.5", std::abs(wf.nu - 3.5) < 1e-12 && wf.k_active == 2);

  ScenarioSampling sampling;
  const auto sum = run_additivity_suite(200, sampling, ctx.seed);
  check("additivity gap >= -1e-9 on 200 scenarios", sum.violations == 0);

  const auto qam = propagate(build_qam(4, 1.0), 0.7);
  ReceiverConfig cfg{2, qam.symbols, {}};
  const auto exact = exact_joint(cfg);
  const auto mc = monte_carlo_confusion(cfg, {20000, ctx.seed, 16});
  double worst = 0.0;
  for (std::size_t a = 0; a < 4; ++a) {
    for (std::size_t b = 0; b < 4; ++b) {
      const double se = mc.confusion.standard_error(a, b, exact.confusion(a, b));
      const double dev = std::abs(mc.confusion(a, b) - exact.confusion(a, b));
      worst = std::max(worst, se > 0 ? dev / se : (dev > 0 ? 1e9 : 0.0));
    }
  }
  check("Monte-Carlo confusion within 5 standard errors of exact (4-QAM, L=2)", worst < 5.0);
  return ok ? kExitOk : kExitInvariant;
}

// ---- registry ------------------------------------------------------------------

std::vector<CommandSpec> command_table() {
  return {
      {"capacity",
       "Coherent, squeezed and Holevo capacities of one channel",
       {{"loss", Kind::Number, "loss channel transmittance eta"},
        {"amp", Kind::Number, "amplifier gain g"},
        {"tau", Kind::Number, "general channel gain tau (with --m)"},
        {"m", Kind::Number, "general channel added noise m"},
        {"nth", Kind::Number, "thermal photons of the environment"},
        {"nbar", Kind::Number, "mean input photon number"},
        {"csv", Kind::Text, "also write a one-row CSV here"}},
       cmd_capacity},
      {"efficiency-grid",
       "Gaussian/Holevo efficiency over (n_th, n_bar) with the crossover locus",
       {{"family", Kind::Text, "loss | amp"},
        {"tau", Kind::Number, "transmittance or gain"},
        {"nbar_min", Kind::Number, "smallest n_bar"},
        {"nbar_max", Kind::Number, "largest n_bar"},
        {"nbar_count", Kind::Integer, "n_bar resolution"},
        {"nth_min", Kind::Number, "smallest n_th"},
        {"nth_max", Kind::Number, "largest n_th"},
        {"nth_count", Kind::Integer, "n_th resolution"},
        {"linear", Kind::Flag, "linear instead of log spacing"},
        {"out", Kind::Text, "CSV output path (stdout if omitted)"},
        {"crossover_out", Kind::Text, "crossover locus CSV path"}},
       cmd_efficiency_grid},
      {"waterfill",
       "Water-filling allocation for a noise spectrum",
       {{"lambdas", Kind::NumberList, "noise eigenvalues, comma separated"},
        {"budget", Kind::Number, "total signal power"}},
       cmd_waterfill},
      {"additivity-test",
       "Randomized check that separable bases are optimal",
       {{"trials", Kind::Integer, "number of random scenarios"},
        {"modes", Kind::Integer, "maximum number of modes N"},
        {"max_squeezing", Kind::Number, "upper bound of r_j and s_j"}},
       cmd_additivity},
      {"becerra",
       "Adaptive receiver information curve for QAM",
       {{"order", Kind::Integer, "QAM order (4, 16, 64)"},
        {"eta", Kind::Number, "channel transmittance"},
        {"stages", Kind::Integer, "number of receiver stages L"},
        {"nbar", Kind::NumberList, "input energies, comma separated"},
        {"sigma", Kind::Text, "prior deviation: number, inf or opt"},
        {"trials", Kind::Integer, "Monte-Carlo trials per symbol"},
        {"search_trials", Kind::Integer, "trials per symbol during the sigma search"},
        {"efficiency", Kind::Number, "detector efficiency"},
        {"dark_count", Kind::Number, "dark count probability per stage"},
        {"out", Kind::Text, "CSV output path (stdout if omitted)"}},
       cmd_becerra},
      {"qam-heterodyne",
       "QAM + heterodyne mutual information curve",
       {{"order", Kind::Integer, "QAM order (4, 16, 64)"},
        {"eta", Kind::Number, "channel transmittance"},
        {"sigma", Kind::NumberList, "prior deviations (inf = uniform), comma separated"},
        {"nbar", Kind::NumberList, "input energies, comma separated"},
        {"rel_tol", Kind::Number, "quadrature tolerance"},
        {"out", Kind::Text, "CSV output path (stdout if omitted)"}},
       cmd_qam_heterodyne},
      {"selftest", "Quick internal consistency checks", {}, cmd_selftest},
  };
}

json convert(const OptionSpec& spec, const std::string& raw) {
  switch (spec.kind) {
    case Kind::Number: {
      const double v = parse_number(raw);
      return std::isfinite(v) ? json(v) : json(raw);
    }
    case Kind::Integer: {
      std::int64_t v = 0;
      const auto [ptr, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), v);
      if (ec != std::errc() || ptr != raw.data() + raw.size()) {
        throw ConfigError(std::string("--") + spec.name + " expects an integer");
      }
      return v;
    }
    case Kind::NumberList:
      parse_number_list(raw);  // validate now so errors mention the flag
      return raw;
    case Kind::Text:
      return raw;
    case Kind::Flag:
      return true;
  }
  return raw;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Gaussian benchmark capacities and non-Gaussian receiver simulation", "gbench"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_path;
  int threads = 0;
  std::uint64_t seed_flag = 0;
  app.add_option("--config", config_path, "TOML or JSON config file");
  app.add_option("--threads", threads, "maximum worker threads (0 = runtime default)")->check(CLI::NonNegativeNumber);
  auto* seed_opt = app.add_option("--seed", seed_flag, "master seed (overrides config and GB_SEED)");

  const auto table = command_table();
  std::map<std::string, std::map<std::string, std::string>> raw;
  std::map<std::string, std::map<std::string, bool>> flags;
  std::vector<std::pair<const CommandSpec*, CLI::App*>> subs;
  for (const auto& cmd : table) {
    auto* sub = app.add_subcommand(cmd.name, cmd.help);
    for (const auto& opt : cmd.options) {
      const std::string flag = std::string("--") + opt.name;
      if (opt.kind == Kind::Flag) {
        sub->add_flag(flag, flags[cmd.name][opt.name], opt.help);
      } else {
        sub->add_option(flag, raw[cmd.name][opt.name], opt.help);
      }
    }
    subs.emplace_back(&cmd, sub);
  }

  std::vector<std::string> argv_rev(args.rbegin(), args.rend());
  if (!argv_rev.empty()) argv_rev.pop_back();  // program name
  try {
    app.parse(argv_rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kExitConfig;
  }

  try {
    for (const auto& [cmd, sub] : subs) {
      if (!sub->parsed()) continue;
      json cfg = json::object();
      if (!config_path.empty()) cfg = command_section(load_config_file(config_path), cmd->name);
      for (const auto& opt : cmd->options) {
        const auto* o = sub->get_option(std::string("--") + opt.name);
        if (o->count() == 0) continue;
        cfg[opt.name] = opt.kind == Kind::Flag ? json(flags[cmd->name][opt.name])
                                               : convert(opt, raw[cmd->name][opt.name]);
      }
      if (seed_opt->count() > 0) cfg["seed"] = seed_flag;
      if (threads > 0) omp_set_num_threads(threads);
      const Context ctx{cfg, resolve_seed(cfg), out, err};
      return cmd->handler(ctx);
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    err << "invalid parameter: " << e.what() << '\n';
    return kExitConfig;
  } catch (const nlohmann::json::exception& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const InvariantViolation& e) {
    err << "invariant violation: " << e.what() << '\n';
    return kExitInvariant;
  }
  return kExitConfig;
}

}  // namespace gbench::cli
