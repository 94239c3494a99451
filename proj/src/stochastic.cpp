#include "laserlab/stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "laserlab/errors.hpp"
#include "laserlab/rng.hpp"

namespace laserlab::stochastic {

namespace {

double atoms2(const LaserParams& p) {
  const double n = static_cast<double>(p.n_atoms);
  return n * n;
}

// dt must resolve both coherence and cavity relaxation.
void check_dt(const LaserParams& p, double dt) {
  const double cap = 0.05 * std::min(2.0 / p.mu, 2.0 / p.kappa);
  if (!(dt > 0.0) || dt > cap) {
    char msg[128];
    std::snprintf(msg, sizeof msg, "dt=%.6g violates dt <= 0.05*min(2/mu, 2/kappa) = %.6g",
                  dt, cap);
    throw ConfigError(msg);
  }
}

struct MeanStd {
  double mean = 0.0;
  double sd = 0.0;
};

// Two-pass reduction in slot order; identical for any execution schedule.
template <typename Get>
MeanStd reduce(std::size_t n, Get&& get) {
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += get(i);
  const double mean = sum / static_cast<double>(n);
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = get(i) - mean;
    ss += d * d;
  }
  const double var = n > 1 ? ss / static_cast<double>(n - 1) : 0.0;
  return {mean, std::sqrt(var)};
}

EnsembleEstimate scalar_estimate(std::string name, const MeanStd& ms, std::int64_t n_traj,
                                 std::int64_t n_samples) {
  EnsembleEstimate est;
  est.name = std::move(name);
  est.mean = ms.mean;
  est.std_error = ms.sd / std::sqrt(static_cast<double>(n_traj));
  est.n_samples = n_samples;
  est.effective_samples = static_cast<double>(n_traj);
  return est;
}

// Correlated complex increments: Cholesky 2x2 mix per real component.
struct IncrementMixer {
  double sigma_a, sigma_m, rho, rho_c;

  IncrementMixer(const NoiseModel& nm, double dt)
      : sigma_a(std::sqrt(0.5 * nm.d_aa * dt)),
        sigma_m(std::sqrt(0.5 * nm.d_mm * dt)) {
    const double denom = std::sqrt(nm.d_aa * nm.d_mm);
    rho = denom > 0.0 ? nm.d_am / denom : 0.0;
    if (std::abs(rho) > 1.0) throw ConfigError("noise model is not positive definite");
    rho_c = std::sqrt(1.0 - rho * rho);
  }

  void draw(rng::Stream& rng, std::complex<double>& dwa, std::complex<double>& dwm) const {
    const auto [ga_r, ga_i] = rng.normal_pair();
    const auto [gm_r, gm_i] = rng.normal_pair();
    dwa = {sigma_a * ga_r, sigma_a * ga_i};
    dwm = {sigma_m * (rho * ga_r + rho_c * gm_r), sigma_m * (rho * ga_i + rho_c * gm_i)};
  }
};

}  // namespace

NoiseModel NoiseModel::derive(const LaserParams& params) {
  NoiseModel nm;
  nm.d_aa = params.pump_rate * atoms2(params);
  nm.d_mm = nm.d_aa;
  nm.d_am = 0.5 * nm.d_aa;
  return nm;
}

// ---------------------------------------------------------------------------
// Gillespie
// ---------------------------------------------------------------------------

GillespieResult gillespie_populations(const LaserParams& params, const JumpConfig& cfg) {
  const int n_atoms = cfg.n_atoms > 0 ? cfg.n_atoms : params.n_atoms;
  if (n_atoms < 1) throw ConfigError("n_atoms must be >= 1");
  if (!(cfg.t_end > 0.0)) throw ConfigError("t_end must be > 0");
  if (!(cfg.burn_in >= 0.0) || !(cfg.burn_in < cfg.t_end)) {
    throw ConfigError("burn_in must satisfy 0 <= burn_in < t_end");
  }
  if (!(cfg.sample_stride > 0.0)) throw ConfigError("sample_stride must be > 0");

  const double window = cfg.t_end - cfg.burn_in;
  const int n_batches = static_cast<int>(
      std::clamp(window / cfg.sample_stride, 20.0, 100000.0));
  const double batch_len = window / n_batches;

  std::vector<std::array<double, 3>> batch_sums(
      static_cast<std::size_t>(n_batches), {0.0, 0.0, 0.0});

  long long na = 0, nb = 0, nc = n_atoms;
  rng::Stream rng(cfg.seed, 0);
  std::int64_t n_events = 0;
  double t = 0.0;

  const double gc = params.gamma_c;
  const double ra = params.pump_rate;

  while (t < cfg.t_end) {
    const double rate_a = gc * static_cast<double>(na);
    const double rate_b = gc * static_cast<double>(nb);
    const double rate_c = ra * static_cast<double>(nc);
    const double total = rate_a + rate_b + rate_c;
    const double wait = -std::log(rng.uniform_open()) / total;
    const double t_next = std::min(t + wait, cfg.t_end);

    // Accumulate the occupancy integral over [t, t_next), split exactly
    // across batch cells.
    double lo = std::max(t, cfg.burn_in);
    while (lo < t_next) {
      const auto cell = std::min<std::size_t>(
          static_cast<std::size_t>((lo - cfg.burn_in) / batch_len),
          static_cast<std::size_t>(n_batches - 1));
      const double cell_end = cfg.burn_in + batch_len * static_cast<double>(cell + 1);
      const double hi = std::min(t_next, cell_end);
      const double span = hi - lo;
      batch_sums[cell][0] += span * static_cast<double>(na);
      batch_sums[cell][1] += span * static_cast<double>(nb);
      batch_sums[cell][2] += span * static_cast<double>(nc);
      lo = hi;
    }

    if (t + wait >= cfg.t_end) break;
    t += wait;

    const double pick = rng.uniform() * total;
    if (pick < rate_a) {
      --na; ++nb;
    } else if (pick < rate_a + rate_b) {
      --nb; ++nc;
    } else {
      --nc; ++na;
    }
    ++n_events;
  }

  GillespieResult result;
  result.n_events = n_events;
  result.n_batches = n_batches;
  result.seed = cfg.seed;
  static const char* names[3] = {"na", "nb", "nc"};
  double means[3];
  for (int level = 0; level < 3; ++level) {
    const MeanStd ms = reduce(batch_sums.size(), [&](std::size_t i) {
      return batch_sums[i][static_cast<std::size_t>(level)] / batch_len;
    });
    means[level] = ms.mean;
    EnsembleEstimate est;
    est.name = names[level];
    est.mean = ms.mean;
    est.std_error = ms.sd / std::sqrt(static_cast<double>(n_batches));
    est.n_samples = n_events;
    est.effective_samples = n_batches;
    result.levels[static_cast<std::size_t>(level)] = est;
  }
  result.time_average = {means[0], means[1], means[2]};
  return result;
}

// ---------------------------------------------------------------------------
// Langevin ensemble
// ---------------------------------------------------------------------------

namespace {

struct TrajStats {
  double mm = 0.0, aa = 0.0;
  std::complex<double> m, ma;
};

void check_finite(const std::complex<double>& z, double t) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    char msg[96];
    std::snprintf(msg, sizeof msg, "stochastic trajectory diverged at t=%.17g", t);
    throw DivergenceError(msg);
  }
}

}  // namespace

LangevinResult langevin_ensemble(const LaserParams& params, const LangevinConfig& cfg) {
  if (cfg.n_traj < 2) throw ConfigError("n_traj must be >= 2");
  check_dt(params, cfg.dt);
  if (!(cfg.t_end >= cfg.dt)) throw ConfigError("t_end must be >= dt");
  const double burn_in = cfg.burn_in < 0.0 ? 0.5 * cfg.t_end : cfg.burn_in;
  if (burn_in >= cfg.t_end) throw ConfigError("burn_in must be < t_end");

  const NoiseModel nm = cfg.noise ? *cfg.noise : NoiseModel::derive(params);
  if (nm.phase_sensitive) {
    throw ConfigError(
        "phase-sensitive path simulation is not implemented; "
        "anomalous moments are evaluated analytically");
  }

  const double dt = cfg.dt;
  const auto n_steps = static_cast<std::int64_t>(std::llround(cfg.t_end / dt));
  const auto burn_steps =
      std::min<std::int64_t>(n_steps - 1, static_cast<std::int64_t>(std::floor(burn_in / dt)));
  const double half_mu = 0.5 * params.mu;
  const IncrementMixer mixer(nm, dt);

  std::vector<TrajStats> slots(static_cast<std::size_t>(cfg.n_traj));
  for_index(static_cast<std::size_t>(cfg.n_traj), cfg.exec, [&](std::size_t i) {
    rng::Stream rng(cfg.seed, static_cast<std::uint64_t>(i));
    std::complex<double> ma = cfg.init_ma;
    std::complex<double> m = cfg.init_m;
    TrajStats acc;
    std::int64_t n_avg = 0;
    std::complex<double> dwa, dwm;
    for (std::int64_t step = 0; step < n_steps; ++step) {
      mixer.draw(rng, dwa, dwm);
      m += (-half_mu * m + half_mu * ma) * dt + dwm;
      ma += -half_mu * ma * dt + dwa;
      if (step >= burn_steps) {
        acc.mm += std::norm(m);
        acc.aa += std::norm(ma);
        acc.m += m;
        acc.ma += ma;
        ++n_avg;
      }
    }
    check_finite(m, cfg.t_end);
    const double inv = 1.0 / static_cast<double>(n_avg);
    acc.mm *= inv;
    acc.aa *= inv;
    acc.m *= inv;
    acc.ma *= inv;
    slots[i] = acc;
  });

  const std::int64_t avg_steps = n_steps - burn_steps;
  const std::int64_t n_samples = cfg.n_traj * avg_steps;
  const auto n = static_cast<std::size_t>(cfg.n_traj);

  LangevinResult result;
  result.mdm = scalar_estimate("mdm", reduce(n, [&](std::size_t i) { return slots[i].mm; }),
                               cfg.n_traj, n_samples);
  result.madma = scalar_estimate(
      "madma", reduce(n, [&](std::size_t i) { return slots[i].aa; }), cfg.n_traj, n_samples);

  // b slaved through the stationary cavity response: |b|^2 = (gc/(kappa N)) |m|^2.
  const double slave = params.kappa_ratio() / static_cast<double>(params.n_atoms);
  result.btb = result.mdm;
  result.btb.name = "btb";
  result.btb.mean *= slave;
  result.btb.std_error *= slave;

  // Antinormal ordering restored analytically; paths carry a single |b|^2.
  const analytic::QuantumDiagnostics diag = analytic::quantum_diagnostics(params);
  result.bbdag_proxy = result.btb;
  result.bbdag_proxy.name = "bbdag_proxy";
  result.bbdag_proxy.mean += diag.commutator;

  for (auto [field, name, get] :
       {std::tuple{&LangevinResult::mean_m, "mean_m",
                   +[](const TrajStats& s) { return s.m; }},
        std::tuple{&LangevinResult::mean_ma, "mean_ma",
                   +[](const TrajStats& s) { return s.ma; }}}) {
    const MeanStd re = reduce(n, [&](std::size_t i) { return get(slots[i]).real(); });
    const MeanStd im = reduce(n, [&](std::size_t i) { return get(slots[i]).imag(); });
    EnsembleEstimate est;
    est.name = name;
    est.mean = {re.mean, im.mean};
    est.std_error = std::sqrt(re.sd * re.sd + im.sd * im.sd) /
                    std::sqrt(static_cast<double>(cfg.n_traj));
    est.n_samples = n_samples;
    est.effective_samples = static_cast<double>(cfg.n_traj);
    est.complex_valued = true;
    result.*field = est;
  }

  result.noise = nm;
  result.n_traj = cfg.n_traj;
  result.t_end = cfg.t_end;
  result.dt = dt;
  result.burn_in = burn_in;
  result.seed = cfg.seed;
  return result;
}

LangevinResult langevin_ensemble(const LaserParams& params, std::int64_t n_traj,
                                 double t_end, double dt, std::uint64_t seed) {
  LangevinConfig cfg;
  cfg.n_traj = n_traj;
  cfg.t_end = t_end;
  cfg.dt = dt;
  cfg.seed = seed;
  return langevin_ensemble(params, cfg);
}

DriftCheck verify_moment_drift(const LaserParams& params, std::int64_t n_traj, double dt,
                               std::uint64_t seed, Exec exec,
                               std::optional<NoiseModel> noise) {
  if (n_traj < 2) throw ConfigError("n_traj must be >= 2");
  check_dt(params, dt);
  const NoiseModel nm = noise ? *noise : NoiseModel::derive(params);
  const IncrementMixer mixer(nm, dt);
  const double half_mu = 0.5 * params.mu;
  const double source = params.pump_rate * atoms2(params);

  const auto burn_steps = static_cast<std::int64_t>(std::ceil(10.0 / params.mu / dt));
  const auto window_steps = static_cast<std::int64_t>(std::ceil(20.0 / params.mu / dt));
  const double window = static_cast<double>(window_steps) * dt;

  // Per-trajectory residual of d<m+m>/dt against the drift law; linearity
  // makes the ensemble-mean residual the mean of these.
  std::vector<double> slots(static_cast<std::size_t>(n_traj));
  for_index(static_cast<std::size_t>(n_traj), exec, [&](std::size_t i) {
    rng::Stream rng(seed, static_cast<std::uint64_t>(i));
    std::complex<double> ma{0.0, 0.0}, m{0.0, 0.0}, dwa, dwm;
    for (std::int64_t step = 0; step < burn_steps; ++step) {
      mixer.draw(rng, dwa, dwm);
      m += (-half_mu * m + half_mu * ma) * dt + dwm;
      ma += -half_mu * ma * dt + dwa;
    }
    const double mm_start = std::norm(m);
    double law_sum = 0.0;
    for (std::int64_t step = 0; step < window_steps; ++step) {
      law_sum += -params.mu * std::norm(m) + params.mu * std::norm(ma) + source;
      mixer.draw(rng, dwa, dwm);
      m += (-half_mu * m + half_mu * ma) * dt + dwm;
      ma += -half_mu * ma * dt + dwa;
    }
    check_finite(m, window);
    slots[i] = (std::norm(m) - mm_start) / window -
               law_sum / static_cast<double>(window_steps);
  });

  const MeanStd ms = reduce(slots.size(), [&](std::size_t i) { return slots[i]; });
  DriftCheck check;
  check.residual_mean = ms.mean;
  check.residual_se = ms.sd / std::sqrt(static_cast<double>(n_traj));
  check.sigma = check.residual_se > 0.0 ? check.residual_mean / check.residual_se : 0.0;
  check.n_traj = n_traj;
  return check;
}

// ---------------------------------------------------------------------------
// Two-time correlation
// ---------------------------------------------------------------------------

double biexponential_decay(const LaserParams& params, double tau) {
  const double kappa = params.kappa;
  const double mu = params.mu;
  if (std::abs(kappa - mu) <= 1e-9 * kappa) {
    return (1.0 + 0.5 * kappa * tau) * std::exp(-0.5 * kappa * tau);
  }
  const double d = kappa - mu;
  return kappa / d * std::exp(-0.5 * mu * tau) - mu / d * std::exp(-0.5 * kappa * tau);
}

CorrelationResult two_time_correlation(const LaserParams& params, std::int64_t n_traj,
                                       double t_anchor, const std::vector<double>& tau_grid,
                                       double dt, std::uint64_t seed, Exec exec) {
  if (n_traj < 2) throw ConfigError("n_traj must be >= 2");
  check_dt(params, dt);
  const double min_anchor = 10.0 / std::min(params.mu, params.kappa);
  if (!(t_anchor >= min_anchor)) {
    char msg[128];
    std::snprintf(msg, sizeof msg, "t_anchor=%.6g is before burn-in (need >= %.6g)",
                  t_anchor, min_anchor);
    throw ConfigError(msg);
  }
  if (tau_grid.empty()) throw ConfigError("tau grid must be non-empty");
  for (std::size_t i = 0; i < tau_grid.size(); ++i) {
    if (tau_grid[i] < 0.0 || (i > 0 && tau_grid[i] <= tau_grid[i - 1])) {
      throw ConfigError("tau grid must be non-negative and increasing");
    }
  }

  // Lags snapped to the step grid; model values use the actual lags.
  std::vector<std::int64_t> tau_steps(tau_grid.size());
  for (std::size_t i = 0; i < tau_grid.size(); ++i) {
    tau_steps[i] = static_cast<std::int64_t>(std::llround(tau_grid[i] / dt));
  }
  const auto anchor_steps = static_cast<std::int64_t>(std::llround(t_anchor / dt));

  const NoiseModel nm = NoiseModel::derive(params);
  const double noise_strength = nm.d_aa + nm.d_mm;
  const double sigma = std::sqrt(0.5 * noise_strength * dt);
  const double half_mu = 0.5 * params.mu;
  const double half_kappa = 0.5 * params.kappa;
  const double coupling = params.g / std::sqrt(static_cast<double>(params.n_atoms));

  const std::size_t n_tau = tau_grid.size();
  std::vector<std::complex<double>> slots(static_cast<std::size_t>(n_traj) * n_tau);

  for_index(static_cast<std::size_t>(n_traj), exec, [&](std::size_t i) {
    rng::Stream rng(seed, static_cast<std::uint64_t>(i));
    std::complex<double> m{0.0, 0.0}, b{0.0, 0.0};
    auto step_once = [&] {
      const auto [gr, gi] = rng.normal_pair();
      b += (-half_kappa * b + coupling * m) * dt;
      m += -half_mu * m * dt + std::complex<double>{sigma * gr, sigma * gi};
    };
    for (std::int64_t step = 0; step < anchor_steps; ++step) step_once();
    const std::complex<double> b_anchor = std::conj(b);
    std::int64_t done = 0;
    for (std::size_t j = 0; j < n_tau; ++j) {
      for (; done < tau_steps[j]; ++done) step_once();
      slots[i * n_tau + j] = b_anchor * b;
    }
    check_finite(b, t_anchor + static_cast<double>(done) * dt);
  });

  CorrelationResult result;
  result.model_amplitude = analytic::mean_photon_number(params);
  result.t_anchor = static_cast<double>(anchor_steps) * dt;
  result.dt = dt;
  result.n_traj = n_traj;
  result.seed = seed;
  result.points.resize(n_tau);
  for (std::size_t j = 0; j < n_tau; ++j) {
    const MeanStd re = reduce(static_cast<std::size_t>(n_traj),
                              [&](std::size_t i) { return slots[i * n_tau + j].real(); });
    const MeanStd im = reduce(static_cast<std::size_t>(n_traj),
                              [&](std::size_t i) { return slots[i * n_tau + j].imag(); });
    CorrelationPoint& pt = result.points[j];
    pt.tau = static_cast<double>(tau_steps[j]) * dt;
    pt.estimate = {re.mean, im.mean};
    pt.std_error = re.sd / std::sqrt(static_cast<double>(n_traj));
    pt.model = result.model_amplitude * biexponential_decay(params, pt.tau);
    pt.sigma = pt.std_error > 0.0 ? (re.mean - pt.model) / pt.std_error : 0.0;
  }
  return result;
}

}  // namespace laserlab::stochastic
