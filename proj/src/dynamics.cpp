#include "laserlab/dynamics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "laserlab/errors.hpp"

namespace laserlab::dynamics {

namespace {

// Flat state layout for the integrator.
enum : std::size_t {
  kNa, kNb, kNc, kMaRe, kMaIm, kMRe, kMIm, kBRe, kBIm, kMdm, kMadma, kDim
};

using Vec = std::array<double, kDim>;

Vec pack(const MomentState& s) {
  return {s.na, s.nb, s.nc, s.ma.real(), s.ma.imag(), s.m.real(), s.m.imag(),
          s.b.real(), s.b.imag(), s.mdm, s.madma};
}

MomentState unpack(const Vec& v) {
  MomentState s;
  s.na = v[kNa];
  s.nb = v[kNb];
  s.nc = v[kNc];
  s.ma = {v[kMaRe], v[kMaIm]};
  s.m = {v[kMRe], v[kMIm]};
  s.b = {v[kBRe], v[kBIm]};
  s.mdm = v[kMdm];
  s.madma = v[kMadma];
  return s;
}

struct Rates {
  double gc, ra, mu, half_kappa, coupling, source;

  explicit Rates(const LaserParams& p)
      : gc(p.gamma_c),
        ra(p.pump_rate),
        mu(p.mu),
        half_kappa(0.5 * p.kappa),
        coupling(p.g / std::sqrt(static_cast<double>(p.n_atoms))),
        source(p.pump_rate * static_cast<double>(p.n_atoms) *
               static_cast<double>(p.n_atoms)) {}

  Vec deriv(const Vec& s) const {
    Vec d;
    d[kNa] = -gc * s[kNa] + ra * s[kNc];
    d[kNb] = -gc * s[kNb] + gc * s[kNa];
    d[kNc] = gc * s[kNb] - ra * s[kNc];
    d[kMaRe] = -0.5 * mu * s[kMaRe];
    d[kMaIm] = -0.5 * mu * s[kMaIm];
    d[kMRe] = -0.5 * mu * s[kMRe] + 0.5 * mu * s[kMaRe];
    d[kMIm] = -0.5 * mu * s[kMIm] + 0.5 * mu * s[kMaIm];
    d[kBRe] = -half_kappa * s[kBRe] + coupling * s[kMRe];
    d[kBIm] = -half_kappa * s[kBIm] + coupling * s[kMIm];
    d[kMadma] = -mu * s[kMadma] + source;
    d[kMdm] = -mu * s[kMdm] + mu * s[kMadma] + source;
    return d;
  }
};

void rk4_step(const Rates& rates, Vec& s, double dt) {
  const Vec k1 = rates.deriv(s);
  Vec tmp;
  for (std::size_t i = 0; i < kDim; ++i) tmp[i] = s[i] + 0.5 * dt * k1[i];
  const Vec k2 = rates.deriv(tmp);
  for (std::size_t i = 0; i < kDim; ++i) tmp[i] = s[i] + 0.5 * dt * k2[i];
  const Vec k3 = rates.deriv(tmp);
  for (std::size_t i = 0; i < kDim; ++i) tmp[i] = s[i] + dt * k3[i];
  const Vec k4 = rates.deriv(tmp);
  for (std::size_t i = 0; i < kDim; ++i) {
    s[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
}

bool finite(const Vec& s) {
  for (double v : s) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

}  // namespace

MomentState MomentState::vacuum_bottom(const LaserParams& params) {
  MomentState s;
  s.nc = static_cast<double>(params.n_atoms);
  return s;
}

void Trajectory::write_csv(std::ostream& os) const {
  os << "t,na,nb,nc,re_ma,im_ma,re_m,im_m,re_b,im_b,mdm,madma\n";
  char line[512];
  for (std::size_t i = 0; i < times.size(); ++i) {
    const MomentState& s = states[i];
    std::snprintf(line, sizeof line,
                  "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                  times[i], s.na, s.nb, s.nc, s.ma.real(), s.ma.imag(), s.m.real(),
                  s.m.imag(), s.b.real(), s.b.imag(), s.mdm, s.madma);
    os << line;
  }
}

double default_dt(const LaserParams& params) {
  return 0.01 / std::max({params.kappa, params.mu, params.gamma_c, params.pump_rate});
}

Trajectory evolve_moments(const LaserParams& params, const MomentState& init,
                          double t_end, double dt, std::size_t max_samples) {
  if (!(dt > 0.0)) throw ConfigError("dt must be > 0");
  if (!(t_end >= dt)) throw ConfigError("t_end must be >= dt");
  if (max_samples < 2) throw ConfigError("max_samples must be >= 2");

  const Rates rates(params);
  const auto n_steps = static_cast<std::size_t>(std::llround(t_end / dt));
  const std::size_t stride = std::max<std::size_t>(1, n_steps / (max_samples - 1));

  Trajectory traj;
  traj.dt = dt;
  traj.params_hash = params.hash();
  traj.times.reserve(n_steps / stride + 2);
  traj.states.reserve(n_steps / stride + 2);

  Vec s = pack(init);
  traj.times.push_back(0.0);
  traj.states.push_back(init);
  for (std::size_t step = 1; step <= n_steps; ++step) {
    rk4_step(rates, s, dt);
    if (!finite(s)) {
      char msg[96];
      std::snprintf(msg, sizeof msg, "moment integration diverged at t=%.17g",
                    static_cast<double>(step) * dt);
      throw DivergenceError(msg);
    }
    if (step % stride == 0 || step == n_steps) {
      traj.times.push_back(static_cast<double>(step) * dt);
      traj.states.push_back(unpack(s));
    }
  }
  return traj;
}

SteadyRun evolve_to_steady(const LaserParams& params, const MomentState& init,
                           double dt, double t_cap) {
  const double relax =
      1.0 / std::min({params.gamma_c, params.pump_rate, params.mu, params.kappa});
  SteadyRun run;
  run.trajectory.dt = dt;
  run.trajectory.params_hash = params.hash();
  run.trajectory.times.push_back(0.0);
  run.trajectory.states.push_back(init);

  MomentState current = init;
  double t = 0.0;
  while (t < t_cap) {
    const double span = std::min(relax, t_cap - t);
    Trajectory chunk = evolve_moments(params, current, span, dt, 2);
    const MomentState next = chunk.final_state();
    t += chunk.times.back();
    run.trajectory.times.push_back(t);
    run.trajectory.states.push_back(next);

    const Vec a = pack(current);
    const Vec b = pack(next);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < kDim; ++i) {
      num += (a[i] - b[i]) * (a[i] - b[i]);
      den += b[i] * b[i];
    }
    current = next;
    if (num <= 1e-20 * std::max(den, 1.0)) {  // relative change < 1e-10
      run.converged = true;
      break;
    }
  }
  return run;
}

SteadyStateResult steady_state_solve(const LaserParams& params) {
  // Rows: dna/dt = 0, dnb/dt = 0, completeness.
  const double gc = params.gamma_c;
  const double ra = params.pump_rate;
  const double n = static_cast<double>(params.n_atoms);
  double a[3][4] = {
      {-gc, 0.0, ra, 0.0},
      {gc, -gc, 0.0, 0.0},
      {1.0, 1.0, 1.0, n},
  };

  // Gaussian elimination with partial pivoting.
  for (int col = 0; col < 3; ++col) {
    int pivot = col;
    for (int row = col + 1; row < 3; ++row) {
      if (std::abs(a[row][col]) > std::abs(a[pivot][col])) pivot = row;
    }
    if (std::abs(a[pivot][col]) < 1e-300) {
      throw DivergenceError("steady-state rate matrix is singular");
    }
    std::swap(a[col], a[pivot]);
    for (int row = col + 1; row < 3; ++row) {
      const double f = a[row][col] / a[col][col];
      for (int k = col; k < 4; ++k) a[row][k] -= f * a[col][k];
    }
  }
  double x[3];
  for (int row = 2; row >= 0; --row) {
    double acc = a[row][3];
    for (int k = row + 1; k < 3; ++k) acc -= a[row][k] * x[k];
    x[row] = acc / a[row][row];
  }

  SteadyStateResult result;
  result.populations = {x[0], x[1], x[2]};
  result.madma_ss = ra * n * n / params.mu;
  result.mdm_ss = 2.0 * ra * n * n / params.mu;
  return result;
}

Trajectory mean_field_trace(const LaserParams& params, std::complex<double> b0,
                            double t_end, double dt) {
  MomentState init = MomentState::vacuum_bottom(params);
  init.b = b0;
  return evolve_moments(params, init, t_end, dt);
}

}  // namespace laserlab::dynamics
