#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "laserlab/analytic.hpp"
#include "laserlab/params.hpp"

namespace laserlab::dynamics {

/// First and second collective moments tracked by the deterministic model.
struct MomentState {
  double na = 0.0;
  double nb = 0.0;
  double nc = 0.0;
  std::complex<double> ma;  ///< <m_a>
  std::complex<double> m;   ///< <m> = <m_a> + <m_b>
  std::complex<double> b;   ///< cavity-field mean <b>
  double mdm = 0.0;         ///< <m+ m>, >= 0
  double madma = 0.0;       ///< <m_a+ m_a>, >= 0

  /// All atoms in the bottom level, zero coherences, vacuum field.
  static MomentState vacuum_bottom(const LaserParams& params);
};

struct Trajectory {
  std::vector<double> times;        // strictly increasing
  std::vector<MomentState> states;  // one per instant
  double dt = 0.0;
  std::string method = "rk4";
  std::uint64_t params_hash = 0;

  const MomentState& final_state() const { return states.back(); }

  /// Columns: t,na,nb,nc,re_ma,im_ma,re_m,im_m,re_b,im_b,mdm,madma.
  void write_csv(std::ostream& os) const;
};

/// Conservative default: 0.01 / max(kappa, mu, gamma_c, pump_rate).
double default_dt(const LaserParams& params);

/**
 * Fixed-step classic 4th-order integration of the coupled linear moment
 * system:
 *
 *   na' = -gamma_c na + r_a nc        ma' = -(mu/2) ma
 *   nb' = -gamma_c nb + gamma_c na    m'  = -(mu/2) m + (mu/2) ma
 *   nc' =  gamma_c nb - r_a nc        b'  = -(kappa/2) b + (g/sqrt(N)) m
 *
 *   madma' = -mu madma + r_a N^2
 *   mdm'   = -mu mdm + mu madma + r_a N^2
 *
 * Populations are conserved exactly by the scheme (the rate matrix is
 * closed). At most max_samples states are retained, evenly strided, with
 * the initial and final instants always included.
 *
 * Throws DivergenceError (with the offending time) if the state goes
 * non-finite.
 */
Trajectory evolve_moments(const LaserParams& params, const MomentState& init,
                          double t_end, double dt, std::size_t max_samples = 2048);

/// Integrates until the relative state change over one relaxation time drops
/// below 1e-10, with hard cap t_cap. Returns the trajectory; `converged`
/// reports whether the criterion was met before the cap.
struct SteadyRun {
  Trajectory trajectory;
  bool converged = false;
};
SteadyRun evolve_to_steady(const LaserParams& params, const MomentState& init,
                           double dt, double t_cap);

struct SteadyStateResult {
  analytic::Populations populations;
  double mdm_ss = 0.0;    // 2 r_a N^2 / mu
  double madma_ss = 0.0;  // r_a N^2 / mu
};

/**
 * Direct steady state: solves the rate equations' null space under the
 * completeness constraint na + nb + nc = N (3x3 linear solve), plus the
 * closed-form second-moment fixed points. Independent of the closed-form
 * populations in `analytic`, which it cross-checks.
 */
SteadyStateResult steady_state_solve(const LaserParams& params);

/**
 * Field trace with all coherences zero: <b(t)> = b0 exp(-kappa t / 2).
 * Runs the full integrator; used to pin the integrator against the
 * closed-form exponential.
 */
Trajectory mean_field_trace(const LaserParams& params, std::complex<double> b0,
                            double t_end, double dt);

}  // namespace laserlab::dynamics
