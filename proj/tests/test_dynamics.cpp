#include <cmath>
#include <complex>
#include <sstream>

#include "doctest.h"
#include "laserlab/analytic.hpp"
#include "laserlab/dynamics.hpp"
#include "laserlab/errors.hpp"
#include "laserlab/params.hpp"

using namespace laserlab;
using namespace laserlab::dynamics;

namespace {
const LaserParams kCanonical = derive_params(1.0, 16.0, 0.0625, 100);
}

TEST_CASE("direct steady-state solve matches the closed forms") {
  // Linear-solve route vs closed-form populations: the two independent paths.
  for (double eta : {0.125, 0.25, 1.0, 4.0, 16.0, 300.0}) {
    const LaserParams p = params_for_eta(1.0, 16.0, eta, 100);
    const SteadyStateResult direct = steady_state_solve(p);
    const analytic::Populations closed = analytic::steady_populations(p);
    CHECK(direct.populations.na == doctest::Approx(closed.na).epsilon(1e-12));
    CHECK(direct.populations.nb == doctest::Approx(closed.nb).epsilon(1e-12));
    CHECK(direct.populations.nc == doctest::Approx(closed.nc).epsilon(1e-12));
    // m+m contraction: mdm_ss / N = na + nb.
    CHECK(direct.mdm_ss / 100.0 ==
          doctest::Approx(direct.populations.na + direct.populations.nb).epsilon(1e-12));
    CHECK(direct.mdm_ss == doctest::Approx(2.0 * direct.madma_ss).epsilon(1e-14));
  }

  const SteadyStateResult canonical = steady_state_solve(kCanonical);
  CHECK(canonical.mdm_ss == doctest::Approx(3333.3333333333335).epsilon(1e-13));
  CHECK(canonical.madma_ss == doctest::Approx(1666.6666666666667).epsilon(1e-13));

  const SteadyStateResult at = steady_state_solve(derive_params(10.0, 400.0, 1.0, 90));
  CHECK(at.populations.na == doctest::Approx(30.0).epsilon(1e-13));
  CHECK(at.populations.nb == doctest::Approx(30.0).epsilon(1e-13));
  CHECK(at.populations.nc == doctest::Approx(30.0).epsilon(1e-13));
}

TEST_CASE("long-time integration reaches the direct steady state") {
  const double t_end = 400.0 / std::min(kCanonical.gamma_c, kCanonical.pump_rate);
  const Trajectory traj =
      evolve_moments(kCanonical, MomentState::vacuum_bottom(kCanonical), t_end, 0.02);
  const MomentState& fin = traj.final_state();
  const SteadyStateResult direct = steady_state_solve(kCanonical);
  CHECK(fin.na == doctest::Approx(direct.populations.na).epsilon(1e-8));
  CHECK(fin.nb == doctest::Approx(direct.populations.nb).epsilon(1e-8));
  CHECK(fin.nc == doctest::Approx(direct.populations.nc).epsilon(1e-8));
  CHECK(fin.mdm == doctest::Approx(direct.mdm_ss).epsilon(1e-8));
  CHECK(fin.madma == doctest::Approx(direct.madma_ss).epsilon(1e-8));
}

TEST_CASE("vacuum start keeps the mean field at zero") {
  const Trajectory traj =
      evolve_moments(kCanonical, MomentState::vacuum_bottom(kCanonical), 50.0, 0.01);
  for (const MomentState& s : traj.states) {
    CHECK(std::abs(s.b) <= 1e-14);
    CHECK(std::abs(s.m) <= 1e-14);
  }
}

TEST_CASE("population conservation along trajectories") {
  MomentState init = MomentState::vacuum_bottom(kCanonical);
  init.na = 60.0;
  init.nb = 25.0;
  init.nc = 15.0;
  const Trajectory traj = evolve_moments(kCanonical, init, 200.0, 0.01);
  for (const MomentState& s : traj.states) {
    CHECK(std::abs(s.na + s.nb + s.nc - 100.0) <= 1e-10 * 100.0);
  }
}

TEST_CASE("population sector is linear in the initial condition") {
  MomentState a = MomentState::vacuum_bottom(kCanonical);
  a.na = 30.0;
  a.nc = 70.0;
  MomentState b = MomentState::vacuum_bottom(kCanonical);
  b.nb = 100.0;
  b.nc = 0.0;
  MomentState sum = MomentState::vacuum_bottom(kCanonical);
  sum.na = 30.0;
  sum.nb = 100.0;
  sum.nc = 70.0;

  const Trajectory ta = evolve_moments(kCanonical, a, 20.0, 0.01);
  const Trajectory tb = evolve_moments(kCanonical, b, 20.0, 0.01);
  const Trajectory ts = evolve_moments(kCanonical, sum, 20.0, 0.01);
  for (std::size_t i = 0; i < ts.states.size(); ++i) {
    CHECK(ts.states[i].na ==
          doctest::Approx(ta.states[i].na + tb.states[i].na).epsilon(1e-12));
    CHECK(ts.states[i].nc ==
          doctest::Approx(ta.states[i].nc + tb.states[i].nc).epsilon(1e-12));
  }
}

TEST_CASE("mean-field trace follows the closed-form exponential") {
  const LaserParams p = derive_params(1.0, 2.0, 1.0, 10);  // kappa = 2
  const Trajectory traj = mean_field_trace(p, {1.0, 0.0}, 1.0, 1e-3);
  CHECK(traj.final_state().b.real() == doctest::Approx(std::exp(-1.0)).epsilon(1e-10));
  CHECK(traj.final_state().b.imag() == 0.0);

  // Identically zero from a zero start.
  const Trajectory zero = mean_field_trace(p, {0.0, 0.0}, 1.0, 1e-3);
  for (const MomentState& s : zero.states) CHECK(std::abs(s.b) == 0.0);

  // |b|^2 halves every ln2 / kappa.
  const double half_life = std::log(2.0) / p.kappa;
  const Trajectory half = mean_field_trace(p, {1.0, 0.0}, half_life, half_life / 2048.0);
  CHECK(std::norm(half.final_state().b) == doctest::Approx(0.5).epsilon(1e-8));
}

TEST_CASE("integrator is fourth order in dt") {
  const LaserParams p = derive_params(1.0, 2.0, 1.0, 10);
  auto endpoint_error = [&](double dt) {
    const Trajectory traj = mean_field_trace(p, {1.0, 0.0}, 1.0, dt);
    return std::abs(traj.final_state().b.real() - std::exp(-1.0));
  };
  const double e1 = endpoint_error(0.05);
  const double e2 = endpoint_error(0.025);
  CHECK(e1 / e2 == doctest::Approx(16.0).epsilon(0.25));
}

TEST_CASE("steady-state detection stops early and agrees with the solve") {
  const SteadyRun run =
      evolve_to_steady(kCanonical, MomentState::vacuum_bottom(kCanonical), 0.02, 1e5);
  CHECK(run.converged);
  const SteadyStateResult direct = steady_state_solve(kCanonical);
  CHECK(run.trajectory.final_state().na ==
        doctest::Approx(direct.populations.na).epsilon(1e-9));
  CHECK(run.trajectory.times.back() < 1e5);
}

TEST_CASE("unstable step size raises a divergence error") {
  // The fast cavity mode must be excited for the instability to show.
  CHECK_THROWS_AS(mean_field_trace(kCanonical, {1.0, 0.0}, 1000.0, 1.0),
                  DivergenceError);
}

TEST_CASE("input validation") {
  const MomentState init = MomentState::vacuum_bottom(kCanonical);
  CHECK_THROWS_AS(evolve_moments(kCanonical, init, 10.0, 0.0), ConfigError);
  CHECK_THROWS_AS(evolve_moments(kCanonical, init, 0.001, 0.01), ConfigError);
  CHECK(default_dt(kCanonical) == doctest::Approx(0.01 / 16.0).epsilon(1e-15));
}

TEST_CASE("trajectory CSV export") {
  const Trajectory traj =
      evolve_moments(kCanonical, MomentState::vacuum_bottom(kCanonical), 1.0, 0.01, 16);
  std::ostringstream first, second;
  traj.write_csv(first);
  traj.write_csv(second);
  CHECK(first.str() == second.str());
  CHECK(first.str().rfind("t,na,nb,nc,re_ma,im_ma,re_m,im_m,re_b,im_b,mdm,madma\n", 0) ==
        0);
  CHECK(traj.times.size() == traj.states.size());
  for (std::size_t i = 1; i < traj.times.size(); ++i) {
    CHECK(traj.times[i] > traj.times[i - 1]);
  }
}
