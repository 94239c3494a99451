#include "laserlab/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "laserlab/analytic.hpp"
#include "laserlab/dynamics.hpp"
#include "laserlab/errors.hpp"
#include "laserlab/rng.hpp"
#include "laserlab/spectral.hpp"
#include "laserlab/stochastic.hpp"

#ifndef LASERLAB_VERSION
#define LASERLAB_VERSION "0.0.0"
#endif
#ifndef LASERLAB_GIT_HASH
#define LASERLAB_GIT_HASH "unknown"
#endif

namespace laserlab::cli {

namespace {

using nlohmann::json;

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void validate_keys(const json& obj, std::initializer_list<const char*> allowed,
                   const std::string& context) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* key : allowed) {
      if (it.key() == key) {
        known = true;
        break;
      }
    }
    if (!known) {
      throw ConfigError("unknown key '" + it.key() + "' in " + context);
    }
  }
}

struct RunContext {
  json config;
  LaserParams params;
  std::optional<std::uint64_t> seed_flag;
  bool self_check = false;
};

std::uint64_t pick_seed(const RunContext& ctx, const json& block) {
  if (ctx.seed_flag) return *ctx.seed_flag;
  if (block.contains("seed")) return block.at("seed").get<std::uint64_t>();
  if (ctx.config.contains("seed")) return ctx.config.at("seed").get<std::uint64_t>();
  return 0;
}

const json& command_block(const RunContext& ctx, const char* name) {
  static const json empty = json::object();
  if (!ctx.config.contains(name)) return empty;
  const json& block = ctx.config.at(name);
  if (!block.is_object()) throw ConfigError(std::string("'") + name + "' must be an object");
  return block;
}

void write_csv_metadata(std::ostream& os, const RunContext& ctx, const char* command,
                        std::optional<std::uint64_t> seed, bool stochastic_run) {
  os << "# laserlab " << LASERLAB_VERSION << " (" << LASERLAB_GIT_HASH << ")\n";
  os << "# command=" << command << "\n";
  os << "# g=" << g17(ctx.params.g) << " kappa=" << g17(ctx.params.kappa)
     << " pump_rate=" << g17(ctx.params.pump_rate) << " n_atoms=" << ctx.params.n_atoms
     << "\n";
  os << "# gamma_c=" << g17(ctx.params.gamma_c) << " eta=" << g17(ctx.params.eta)
     << " mu=" << g17(ctx.params.mu) << "\n";
  if (seed) os << "# seed=" << *seed << "\n";
  if (stochastic_run) os << "# rng=" << rng::kGeneratorName << "\n";
}

json metadata_json(const RunContext& ctx, const char* command,
                   std::optional<std::uint64_t> seed, bool stochastic_run) {
  json meta;
  meta["tool"] = "laserlab";
  meta["version"] = LASERLAB_VERSION;
  meta["git_hash"] = LASERLAB_GIT_HASH;
  meta["command"] = command;
  meta["params"] = {{"g", ctx.params.g},
                    {"kappa", ctx.params.kappa},
                    {"pump_rate", ctx.params.pump_rate},
                    {"n_atoms", ctx.params.n_atoms},
                    {"gamma_c", ctx.params.gamma_c},
                    {"eta", ctx.params.eta},
                    {"mu", ctx.params.mu}};
  if (seed) meta["seed"] = *seed;
  if (stochastic_run) meta["rng"] = rng::kGeneratorName;
  return meta;
}

json estimate_json(const stochastic::EnsembleEstimate& est) {
  json record;
  record["estimator"] = est.name;
  if (est.complex_valued) {
    record["mean"] = {est.mean.real(), est.mean.imag()};
  } else {
    record["mean"] = est.mean.real();
  }
  record["std_error"] = est.std_error;
  record["n_samples"] = est.n_samples;
  record["effective_samples"] = est.effective_samples;
  return record;
}

// --- report ---------------------------------------------------------------

void cmd_report(const RunContext& ctx, std::ostream& out) {
  validate_keys(command_block(ctx, "report"), {}, "'report'");
  const analytic::StatisticsReport report = analytic::full_report(ctx.params);
  const double tol = ctx.config.value("threshold_tol", 1e-12);

  if (ctx.self_check) {
    const auto direct = dynamics::steady_state_solve(ctx.params);
    const double n = ctx.params.n_atoms;
    if (std::abs(direct.populations.na - report.populations.na) > 1e-12 * n ||
        std::abs(direct.populations.nc - report.populations.nc) > 1e-12 * n) {
      throw SelfCheckError("steady-state solve disagrees with closed-form populations");
    }
    if (report.squeezing_out != report.squeezing) {
      throw SelfCheckError("output squeezing differs from cavity squeezing");
    }
  }

  json doc;
  doc["metadata"] = metadata_json(ctx, "report", std::nullopt, false);
  doc["regime"] = to_string(classify_regime(ctx.params, tol));
  doc["report"] = {{"populations",
                    {{"na", report.populations.na},
                     {"nb", report.populations.nb},
                     {"nc", report.populations.nc}}},
                   {"mc", report.mc},
                   {"nbar", report.nbar},
                   {"nvar", report.nvar},
                   {"bbdag", report.bbdag},
                   {"b2", report.b2},
                   {"var_plus", report.var_plus},
                   {"var_minus", report.var_minus},
                   {"var_coherent", report.var_coherent},
                   {"squeezing", report.squeezing},
                   {"squeezing_out", report.squeezing_out},
                   {"commutator", report.commutator},
                   {"uncertainty_bound", report.uncertainty_bound}};
  out << doc.dump(2) << "\n";
}

// --- sweep ----------------------------------------------------------------

struct SweepRow {
  double eta, squeezing, nbar_over_n, nvar_ratio;
};

std::vector<SweepRow> sweep_rows(const LaserParams& base, const std::vector<double>& etas,
                                 Exec exec) {
  std::vector<SweepRow> rows(etas.size());
  for_index(etas.size(), exec, [&](std::size_t i) {
    const LaserParams p = params_for_eta(base.g, base.kappa, etas[i], base.n_atoms);
    const double nbar = analytic::mean_photon_number(p);
    rows[i] = {etas[i], analytic::quadrature_squeezing(p).first,
               nbar / static_cast<double>(p.n_atoms),
               analytic::photon_variance(p) / (nbar * nbar)};
  });
  return rows;
}

std::vector<double> grid_from_block(const json& block, const char* lo_key,
                                    const char* hi_key, double lo, double hi, int points,
                                    bool log_default) {
  lo = block.value(lo_key, lo);
  hi = block.value(hi_key, hi);
  points = block.value("points", points);
  const bool log_grid = block.value("log", log_default);
  if (points < 1) throw ConfigError("grid needs at least one point");
  if (!(lo > 0.0) && log_grid) throw ConfigError("log grid requires positive bounds");
  if (!(hi >= lo)) throw ConfigError("grid upper bound must be >= lower bound");
  std::vector<double> grid(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    const double f = points == 1 ? 0.0 : static_cast<double>(i) / (points - 1);
    grid[static_cast<std::size_t>(i)] =
        log_grid ? lo * std::pow(hi / lo, f) : lo + f * (hi - lo);
  }
  return grid;
}

void cmd_sweep(const RunContext& ctx, std::ostream& out) {
  const json& block = command_block(ctx, "sweep");
  validate_keys(block, {"eta_min", "eta_max", "points", "log"}, "'sweep'");
  const std::vector<double> etas =
      grid_from_block(block, "eta_min", "eta_max", 0.01, 100.0, 401, true);
  const std::vector<SweepRow> rows = sweep_rows(ctx.params, etas, Exec::parallel);

  if (ctx.self_check) {
    for (const SweepRow& row : rows) {
      if (row.squeezing > 0.5 + 1e-15) {
        throw SelfCheckError("sweep produced squeezing above the 0.5 ceiling");
      }
    }
  }

  write_csv_metadata(out, ctx, "sweep", std::nullopt, false);
  out << "eta,S,nbar_over_N,nvar_ratio\n";
  for (const SweepRow& row : rows) {
    out << g17(row.eta) << ',' << g17(row.squeezing) << ',' << g17(row.nbar_over_n) << ','
        << g17(row.nvar_ratio) << "\n";
  }
}

// --- dynamics ---------------------------------------------------------------

void cmd_dynamics(const RunContext& ctx, std::ostream& out) {
  const json& block = command_block(ctx, "dynamics");
  validate_keys(block, {"t_end", "dt", "samples"}, "'dynamics'");
  if (!block.contains("t_end")) throw ConfigError("'dynamics' requires 't_end'");
  const double t_end = block.at("t_end").get<double>();
  const double dt = block.value("dt", dynamics::default_dt(ctx.params));
  const auto samples = block.value("samples", std::size_t{2048});

  const dynamics::Trajectory traj = dynamics::evolve_moments(
      ctx.params, dynamics::MomentState::vacuum_bottom(ctx.params), t_end, dt, samples);

  if (ctx.self_check) {
    const double n = ctx.params.n_atoms;
    for (const auto& state : traj.states) {
      if (std::abs(state.na + state.nb + state.nc - n) > 1e-10 * n) {
        throw SelfCheckError("population conservation violated along trajectory");
      }
    }
  }

  write_csv_metadata(out, ctx, "dynamics", std::nullopt, false);
  out << "# dt=" << g17(traj.dt) << " method=" << traj.method << " params_hash="
      << traj.params_hash << "\n";
  traj.write_csv(out);
}

// --- gillespie --------------------------------------------------------------

void cmd_gillespie(const RunContext& ctx, std::ostream& out) {
  const json& block = command_block(ctx, "gillespie");
  validate_keys(block, {"t_end", "burn_in", "sample_stride", "seed", "n_atoms"},
                "'gillespie'");
  if (!block.contains("t_end")) throw ConfigError("'gillespie' requires 't_end'");
  stochastic::JumpConfig cfg;
  cfg.t_end = block.at("t_end").get<double>();
  cfg.burn_in = block.value("burn_in", 0.2 * cfg.t_end);
  cfg.sample_stride = block.value("sample_stride", (cfg.t_end - cfg.burn_in) / 200.0);
  cfg.n_atoms = block.value("n_atoms", 0);
  cfg.seed = pick_seed(ctx, block);

  const stochastic::GillespieResult result =
      stochastic::gillespie_populations(ctx.params, cfg);

  if (ctx.self_check) {
    const analytic::Populations expect = analytic::steady_populations(ctx.params);
    const double targets[3] = {expect.na, expect.nb, expect.nc};
    const int n_atoms = cfg.n_atoms > 0 ? cfg.n_atoms : ctx.params.n_atoms;
    const double scale = static_cast<double>(n_atoms) / ctx.params.n_atoms;
    for (int i = 0; i < 3; ++i) {
      const auto& est = result.levels[static_cast<std::size_t>(i)];
      if (std::abs(est.real() - targets[i] * scale) > 5.0 * est.std_error) {
        throw SelfCheckError("gillespie occupancy is >5 sigma from the steady state");
      }
    }
  }

  json doc;
  doc["metadata"] = metadata_json(ctx, "gillespie", cfg.seed, true);
  doc["config"] = {{"t_end", cfg.t_end},
                   {"burn_in", cfg.burn_in},
                   {"sample_stride", cfg.sample_stride},
                   {"n_atoms", cfg.n_atoms > 0 ? cfg.n_atoms : ctx.params.n_atoms}};
  doc["n_events"] = result.n_events;
  doc["n_batches"] = result.n_batches;
  doc["records"] = json::array();
  for (const auto& est : result.levels) doc["records"].push_back(estimate_json(est));
  out << doc.dump(2) << "\n";
}

// --- correlate ----------------------------------------------------------------

void cmd_correlate(const RunContext& ctx, std::ostream& out) {
  const json& block = command_block(ctx, "correlate");
  validate_keys(block, {"n_traj", "t_anchor", "tau_max", "tau_points", "dt", "seed"},
                "'correlate'");
  const auto n_traj = block.value("n_traj", std::int64_t{4000});
  const double slow = std::min(ctx.params.mu, ctx.params.kappa);
  const double t_anchor = block.value("t_anchor", 10.0 / slow);
  const double tau_max = block.value("tau_max", 8.0 / ctx.params.mu);
  const int tau_points = block.value("tau_points", 9);
  const double dt =
      block.value("dt", 0.05 * std::min(2.0 / ctx.params.mu, 2.0 / ctx.params.kappa));
  const std::uint64_t seed = pick_seed(ctx, block);
  if (tau_points < 2) throw ConfigError("'tau_points' must be >= 2");

  std::vector<double> taus(static_cast<std::size_t>(tau_points));
  for (int i = 0; i < tau_points; ++i) {
    taus[static_cast<std::size_t>(i)] = tau_max * static_cast<double>(i) / (tau_points - 1);
  }

  const stochastic::CorrelationResult result = stochastic::two_time_correlation(
      ctx.params, n_traj, t_anchor, taus, dt, seed);

  if (ctx.self_check) {
    if (std::abs(result.points.front().sigma) > 5.0) {
      throw SelfCheckError("zero-lag correlation is >5 sigma from the model");
    }
  }

  json doc;
  doc["metadata"] = metadata_json(ctx, "correlate", seed, true);
  doc["config"] = {{"n_traj", n_traj},
                   {"t_anchor", result.t_anchor},
                   {"dt", result.dt},
                   {"tau_max", tau_max},
                   {"tau_points", tau_points}};
  doc["model_amplitude"] = result.model_amplitude;
  doc["records"] = json::array();
  for (const auto& pt : result.points) {
    doc["records"].push_back({{"tau", pt.tau},
                              {"estimate_re", pt.estimate.real()},
                              {"estimate_im", pt.estimate.imag()},
                              {"std_error", pt.std_error},
                              {"model", pt.model},
                              {"sigma", pt.sigma}});
  }
  out << doc.dump(2) << "\n";
}

// --- band -----------------------------------------------------------------

void cmd_band(const RunContext& ctx, std::ostream& out) {
  const json& block = command_block(ctx, "band");
  validate_keys(block, {"lambdas", "lambda_min", "lambda_max", "points", "log", "spectrum"},
                "'band'");
  std::vector<double> lambdas;
  if (block.contains("lambdas")) {
    lambdas = block.at("lambdas").get<std::vector<double>>();
  } else {
    lambdas = grid_from_block(block, "lambda_min", "lambda_max", 0.01 * ctx.params.kappa,
                              10.0 * ctx.params.kappa, 41, true);
  }
  if (lambdas.empty()) throw ConfigError("'band' needs a non-empty lambda grid");

  if (ctx.self_check) {
    for (double lambda : lambdas) {
      if (lambda > 0.0) spectral::verify_band_by_quadrature(ctx.params, lambda, 1e-8);
    }
  }

  write_csv_metadata(out, ctx, "band", std::nullopt, false);
  out << "lambda,z,var_minus_band,squeezing_band\n";
  for (double lambda : lambdas) {
    const spectral::BandReport report = spectral::band_report(ctx.params, lambda);
    out << g17(report.lambda) << ',' << g17(report.z) << ',' << g17(report.var_minus_band)
        << ',' << g17(report.squeezing_band) << "\n";
  }

  if (block.contains("spectrum")) {
    const json& spec = block.at("spectrum");
    validate_keys(spec, {"omega_max", "points", "out"}, "'band.spectrum'");
    if (!spec.contains("out")) throw ConfigError("'band.spectrum' requires 'out'");
    const double omega_max = spec.value("omega_max", 5.0 * ctx.params.kappa);
    const int points = spec.value("points", 401);
    if (points < 2) throw ConfigError("'band.spectrum.points' must be >= 2");
    std::vector<double> grid(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) {
      grid[static_cast<std::size_t>(i)] =
          -omega_max + 2.0 * omega_max * static_cast<double>(i) / (points - 1);
    }
    const spectral::SpectrumCurve curve = spectral::quadrature_spectrum(ctx.params, grid);
    std::ofstream file(spec.at("out").get<std::string>());
    if (!file) throw ConfigError("cannot open spectrum output file");
    write_csv_metadata(file, ctx, "band.spectrum", std::nullopt, false);
    curve.write_csv(file);
  }
}

// --- dispatch ----------------------------------------------------------------

constexpr const char* kTopLevelKeys[] = {"g",      "kappa",     "pump_rate", "n_atoms",
                                         "seed",   "threshold_tol", "report", "sweep",
                                         "dynamics", "gillespie", "correlate", "band"};

RunContext load_context(const std::string& config_path,
                        std::optional<std::uint64_t> seed_flag, bool self_check) {
  std::ifstream file(config_path);
  if (!file) throw ConfigError("cannot open config file '" + config_path + "'");
  json config;
  try {
    config = json::parse(file);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!config.is_object()) throw ConfigError("config root must be a JSON object");
  for (auto it = config.begin(); it != config.end(); ++it) {
    bool known = false;
    for (const char* key : kTopLevelKeys) {
      if (it.key() == key) known = true;
    }
    if (!known) throw ConfigError("unknown key '" + it.key() + "' in config");
  }
  RunContext ctx;
  ctx.params = params_from_json(config);
  ctx.config = std::move(config);
  ctx.seed_flag = seed_flag;
  ctx.self_check = self_check;
  return ctx;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"cascade three-level laser statistics toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::uint64_t seed_value = 0;
  bool self_check = false;

  const char* command_names[] = {"report", "sweep", "dynamics", "gillespie", "correlate",
                                 "band"};
  const char* descriptions[] = {
      "steady-state statistics report (JSON)",
      "squeezing/photon statistics across an eta grid (CSV)",
      "moment-equation trajectory (CSV)",
      "jump-process occupancy estimates (JSON)",
      "two-time field correlation ensemble (JSON)",
      "band-limited variance and squeezing (CSV)"};

  for (std::size_t i = 0; i < 6; ++i) {
    CLI::App* sub = app.add_subcommand(command_names[i], descriptions[i]);
    sub->add_option("--config", config_path, "JSON run configuration")->required();
    sub->add_option("--out", out_path, "output path (default: stdout)");
    sub->add_option("--seed", seed_value, "override every configured seed");
    sub->add_flag("--self-check", self_check, "run oracle comparisons before emitting");
  }

  std::vector<const char*> argv;
  argv.push_back("laserlab");
  for (const std::string& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "argument error: " << e.what() << "\n";
    return 2;
  }

  try {
    const CLI::App* sub = app.get_subcommands().front();
    std::optional<std::uint64_t> seed_flag;
    if (sub->count("--seed") > 0) seed_flag = seed_value;
    const RunContext ctx = load_context(config_path, seed_flag, self_check);

    std::ofstream file;
    std::ostream* sink = &out;
    if (!out_path.empty()) {
      file.open(out_path);
      if (!file) throw ConfigError("cannot open output file '" + out_path + "'");
      sink = &file;
    }

    const std::string name = sub->get_name();
    if (name == "report") cmd_report(ctx, *sink);
    else if (name == "sweep") cmd_sweep(ctx, *sink);
    else if (name == "dynamics") cmd_dynamics(ctx, *sink);
    else if (name == "gillespie") cmd_gillespie(ctx, *sink);
    else if (name == "correlate") cmd_correlate(ctx, *sink);
    else if (name == "band") cmd_band(ctx, *sink);
    return 0;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return 2;
  } catch (const DivergenceError& e) {
    err << "numerical divergence: " << e.what() << "\n";
    return 3;
  } catch (const SelfCheckError& e) {
    err << "self-check failure: " << e.what() << "\n";
    return 4;
  }
}

}  // namespace laserlab::cli
