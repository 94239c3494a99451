// Compares the serial reference path against the OpenMP path for the
// data-parallel kernels: Langevin ensemble, two-time correlation, spectrum
// grid, and the eta sweep over the analytic formulas.

#include <chrono>
#include <cstdio>
#include <vector>

#include "laserlab/analytic.hpp"
#include "laserlab/parallel.hpp"
#include "laserlab/params.hpp"
#include "laserlab/spectral.hpp"
#include "laserlab/stochastic.hpp"

using namespace laserlab;

namespace {

template <typename Fn>
double time_ms(Fn&& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  fn();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

void report(const char* name, double serial_ms, double parallel_ms) {
  std::printf("%-24s %10.1f ms %10.1f ms %8.2fx\n", name, serial_ms, parallel_ms,
              serial_ms / parallel_ms);
}

}  // namespace

int main() {
  const LaserParams params = derive_params(1.0, 16.0, 0.0625, 100);
  std::printf("threads available: %d\n", worker_threads());
  std::printf("%-24s %13s %13s %9s\n", "kernel", "serial", "openmp", "speedup");

  {
    stochastic::LangevinConfig cfg;
    cfg.n_traj = 2000;
    cfg.t_end = 60.0;
    cfg.dt = 0.00625;
    cfg.seed = 11;
    cfg.exec = Exec::serial;
    const double serial = time_ms([&] { stochastic::langevin_ensemble(params, cfg); });
    cfg.exec = Exec::parallel;
    const double parallel = time_ms([&] { stochastic::langevin_ensemble(params, cfg); });
    report("langevin_ensemble", serial, parallel);
  }

  {
    const std::vector<double> taus{0.0, 2.0, 4.0, 8.0, 12.0, 16.0};
    const double dt = 0.00625;
    const double anchor = 10.0 / params.mu;
    const double serial = time_ms([&] {
      stochastic::two_time_correlation(params, 1500, anchor, taus, dt, 12, Exec::serial);
    });
    const double parallel = time_ms([&] {
      stochastic::two_time_correlation(params, 1500, anchor, taus, dt, 12, Exec::parallel);
    });
    report("two_time_correlation", serial, parallel);
  }

  {
    std::vector<double> grid(200001);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      grid[i] = -40.0 + 80.0 * static_cast<double>(i) / (grid.size() - 1);
    }
    const double serial =
        time_ms([&] { spectral::quadrature_spectrum(params, grid, Exec::serial); });
    const double parallel =
        time_ms([&] { spectral::quadrature_spectrum(params, grid, Exec::parallel); });
    report("quadrature_spectrum", serial, parallel);
  }

  {
    std::vector<double> etas(200001);
    for (std::size_t i = 0; i < etas.size(); ++i) {
      etas[i] = 0.01 * std::pow(1e4, static_cast<double>(i) / (etas.size() - 1));
    }
    auto sweep = [&](Exec exec) {
      std::vector<double> s(etas.size());
      for_index(etas.size(), exec, [&](std::size_t i) {
        const LaserParams p = params_for_eta(params.g, params.kappa, etas[i], params.n_atoms);
        s[i] = analytic::quadrature_squeezing(p).first + analytic::photon_variance(p);
      });
      return s;
    };
    const double serial = time_ms([&] { sweep(Exec::serial); });
    const double parallel = time_ms([&] { sweep(Exec::parallel); });
    report("eta_sweep", serial, parallel);
  }

  return 0;
}
