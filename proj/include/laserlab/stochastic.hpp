#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "laserlab/analytic.hpp"
#include "laserlab/parallel.hpp"
#include "laserlab/params.hpp"

namespace laserlab::stochastic {

/// Monte Carlo estimate with its standard error. `effective_samples` counts
/// statistically independent units (trajectories, or batch means for
/// time-averaged chains), which is what the error bar is computed from.
struct EnsembleEstimate {
  std::string name;
  std::complex<double> mean;
  double std_error = 0.0;
  std::int64_t n_samples = 0;
  double effective_samples = 0.0;
  bool complex_valued = false;

  double real() const { return mean.real(); }
};

/**
 * White-noise strengths for the collective-coherence Langevin pair.
 *
 * The auto strengths are r_a N^2 each. The cross covariance
 * E[conj(dW_a) dW_m] = d_am dt is fixed by requiring the simulated pair to
 * obey the second-moment drift law
 *
 *   d<m+ m>/dt = -mu <m+ m> + mu <m_a+ m_a> + r_a N^2
 *
 * at stationarity, which gives d_am = r_a N^2 / 2 (the symmetrized
 * two-ordering strength is r_a N^2). verify_moment_drift() regresses the
 * ensemble against the law; with independent noises <m+ m> settles low by
 * r_a N^2 / (2 mu), the signature of a wrong cross term.
 */
struct NoiseModel {
  double d_aa = 0.0;
  double d_mm = 0.0;
  double d_am = 0.0;
  bool phase_sensitive = false;

  static NoiseModel derive(const LaserParams& params);
};

// ---------------------------------------------------------------------------
// Gillespie jump process
// ---------------------------------------------------------------------------

struct JumpConfig {
  int n_atoms = 0;  ///< 0 = use params.n_atoms
  double t_end = 0.0;
  double burn_in = 0.0;
  std::uint64_t seed = 0;
  double sample_stride = 0.0;  ///< batching resolution for error bars
};

struct GillespieResult {
  analytic::Populations time_average;      ///< post-burn-in mean occupancies
  std::array<EnsembleEstimate, 3> levels;  ///< na, nb, nc with errors
  std::int64_t n_events = 0;
  int n_batches = 0;
  std::uint64_t seed = 0;
};

/**
 * Exact event-driven simulation of N independent three-state chains with
 * per-atom rates a->b: gamma_c, b->c: gamma_c, c->a: r_a, aggregated into
 * one jump process. Returns exact time-averaged occupancies over
 * (burn_in, t_end] with batch-means standard errors (>= 20 batches).
 */
GillespieResult gillespie_populations(const LaserParams& params, const JumpConfig& cfg);

// ---------------------------------------------------------------------------
// Langevin ensemble
// ---------------------------------------------------------------------------

struct LangevinConfig {
  std::int64_t n_traj = 0;
  double t_end = 0.0;
  double dt = 0.0;
  std::uint64_t seed = 0;
  double burn_in = -1.0;  ///< < 0: defaults to t_end / 2
  Exec exec = Exec::parallel;
  std::optional<NoiseModel> noise;  ///< default: NoiseModel::derive
  std::complex<double> init_ma{0.0, 0.0};
  std::complex<double> init_m{0.0, 0.0};
};

struct LangevinResult {
  EnsembleEstimate mdm;          ///< <m+ m>, converges to 2 r_a N^2 / mu
  EnsembleEstimate madma;        ///< <m_a+ m_a>, converges to r_a N^2 / mu
  EnsembleEstimate btb;          ///< <b+ b> with b slaved to m
  EnsembleEstimate bbdag_proxy;  ///< btb plus the analytic ordering shift
  EnsembleEstimate mean_m;       ///< <m>, stays at 0
  EnsembleEstimate mean_ma;      ///< <m_a>, stays at 0
  NoiseModel noise;
  std::int64_t n_traj = 0;
  double t_end = 0.0, dt = 0.0, burn_in = 0.0;
  std::uint64_t seed = 0;
};

/**
 * Euler-Maruyama ensemble of the coupled complex pair
 *
 *   dm_a = -(mu/2) m_a dt + dW_a
 *   dm   = -(mu/2) m dt + (mu/2) m_a dt + dW_m
 *
 * with increments built from independent real Gaussians through a 2x2
 * Cholesky mix of (d_aa, d_mm, d_am). The cavity moment is slaved,
 * b = (2g / kappa sqrt(N)) m, valid in the stationary regime. Requires
 * dt <= 0.05 min(2/mu, 2/kappa) and n_traj >= 2. Estimates are
 * time-averaged past burn-in and reduced across trajectories in index
 * order, so results are bit-identical for serial and parallel execution.
 */
LangevinResult langevin_ensemble(const LaserParams& params, const LangevinConfig& cfg);

/// Convenience overload matching the common call shape.
LangevinResult langevin_ensemble(const LaserParams& params, std::int64_t n_traj,
                                 double t_end, double dt, std::uint64_t seed);

/// Residual of the finite-difference <m+ m> drift against the drift law,
/// estimated per trajectory over an equilibrated window.
struct DriftCheck {
  double residual_mean = 0.0;
  double residual_se = 0.0;
  double sigma = 0.0;  ///< residual_mean / residual_se
  std::int64_t n_traj = 0;
};

DriftCheck verify_moment_drift(const LaserParams& params, std::int64_t n_traj,
                               double dt, std::uint64_t seed,
                               Exec exec = Exec::parallel,
                               std::optional<NoiseModel> noise = {});

// ---------------------------------------------------------------------------
// Two-time correlation
// ---------------------------------------------------------------------------

struct CorrelationPoint {
  double tau = 0.0;  ///< actual lag (an integer multiple of dt)
  std::complex<double> estimate;
  double std_error = 0.0;  ///< on the real part
  double model = 0.0;      ///< model_amplitude * biexponential_decay(tau)
  double sigma = 0.0;      ///< (Re estimate - model) / std_error
};

struct CorrelationResult {
  std::vector<CorrelationPoint> points;
  double model_amplitude = 0.0;  ///< analytic mean photon number
  double t_anchor = 0.0, dt = 0.0;
  std::int64_t n_traj = 0;
  std::uint64_t seed = 0;
};

/// Stationary decay factor of the field autocorrelation,
/// kappa/(kappa-mu) e^{-mu tau/2} - mu/(kappa-mu) e^{-kappa tau/2},
/// with the confluent limit (1 + kappa tau/2) e^{-kappa tau/2} at kappa = mu.
double biexponential_decay(const LaserParams& params, double tau);

/**
 * Estimates <b+(t) b(t+tau)> from an ensemble in which the cavity field is
 * co-integrated through db = -(kappa/2) b dt + (g/sqrt(N)) m dt alongside
 * the coherence m (slaving b would collapse the decay to a single
 * exponential). m carries the combined white-noise strength d_aa + d_mm,
 * which reproduces the stationary <m+ m> of the coupled pair together with
 * a pure e^{-mu tau/2} memory. Requires t_anchor >= 10 / min(mu, kappa)
 * and a non-negative increasing tau grid.
 */
CorrelationResult two_time_correlation(const LaserParams& params, std::int64_t n_traj,
                                       double t_anchor,
                                       const std::vector<double>& tau_grid, double dt,
                                       std::uint64_t seed, Exec exec = Exec::parallel);

}  // namespace laserlab::stochastic
