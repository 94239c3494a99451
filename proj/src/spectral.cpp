#include "laserlab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <ostream>

#include "laserlab/analytic.hpp"
#include "laserlab/errors.hpp"

namespace laserlab::spectral {

namespace {

constexpr double kConfluentSwitch = 1e-9;
constexpr int kMaxDepth = 48;

double lorentzian(double half_width, double omega) {
  return (half_width / std::numbers::pi) / (omega * omega + half_width * half_width);
}

struct AdaptiveSimpson {
  const std::function<double(double)>& f;
  double error_acc = 0.0;
  bool converged = true;

  double segment(double a, double fa, double b, double fb, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return refine(a, fa, m, fm, b, fb, whole, tol, depth);
  }

  double refine(double a, double fa, double m, double fm, double b, double fb,
                double whole, double tol, int depth) {
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double err = (left + right - whole) / 15.0;
    if (std::abs(err) <= tol || depth >= kMaxDepth) {
      if (std::abs(err) > tol) converged = false;
      error_acc += std::abs(err);
      return left + right + err;
    }
    return refine(a, fa, lm, flm, m, fm, left, 0.5 * tol, depth + 1) +
           refine(m, fm, rm, frm, b, fb, right, 0.5 * tol, depth + 1);
  }
};

// Integrates an even function over [-upper, upper] as 2 * integral over
// [0, upper], split at the natural half-width scales so the adaptive rule
// starts from panels that resolve the narrow Lorentzian.
double integrate_even(const std::function<double(double)>& f, double upper,
                      const LaserParams& params, double abs_tol, double& error_out) {
  std::vector<double> cuts{0.0};
  for (double scale :
       {0.25 * params.mu, 0.5 * params.mu, 0.5 * params.kappa, 5.0 * params.kappa,
        100.0 * params.kappa}) {
    if (scale > 0.0 && scale < upper) cuts.push_back(scale);
  }
  cuts.push_back(upper);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  AdaptiveSimpson quad{f};
  double sum = 0.0;
  const double tol_per_panel = 0.5 * abs_tol / static_cast<double>(cuts.size() - 1);
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    sum += quad.segment(cuts[i], f(cuts[i]), cuts[i + 1], f(cuts[i + 1]), tol_per_panel, 0);
  }
  error_out = 2.0 * quad.error_acc;
  if (!quad.converged) {
    char msg[128];
    std::snprintf(msg, sizeof msg,
                  "spectrum quadrature did not converge: error estimate %.3g > %.3g",
                  error_out, abs_tol);
    throw DivergenceError(msg);
  }
  return 2.0 * sum;
}

}  // namespace

double spectrum_kernel(double kappa, double mu, double omega) {
  if (std::abs(kappa - mu) <= kConfluentSwitch * kappa) {
    const double hw = 0.5 * kappa;
    const double denom = omega * omega + hw * hw;
    return (kappa * kappa * kappa / (4.0 * std::numbers::pi)) / (denom * denom);
  }
  const double d = kappa - mu;
  return kappa / d * lorentzian(0.5 * mu, omega) - mu / d * lorentzian(0.5 * kappa, omega);
}

double quadrature_spectrum_at(const LaserParams& params, double omega) {
  return analytic::quadrature_variances(params).second *
         spectrum_kernel(params.kappa, params.mu, omega);
}

double plus_quadrature_spectrum_at(const LaserParams& params, double omega) {
  return analytic::quadrature_variances(params).first *
         spectrum_kernel(params.kappa, params.mu, omega);
}

SpectrumCurve quadrature_spectrum(const LaserParams& params,
                                  std::span<const double> omega_grid, Exec exec) {
  SpectrumCurve curve;
  curve.params = params;
  curve.omega.assign(omega_grid.begin(), omega_grid.end());
  curve.s_minus.resize(omega_grid.size());
  const double variance = analytic::quadrature_variances(params).second;
  for_index(omega_grid.size(), exec, [&](std::size_t i) {
    curve.s_minus[i] = variance * spectrum_kernel(params.kappa, params.mu, curve.omega[i]);
  });
  return curve;
}

void SpectrumCurve::write_csv(std::ostream& os) const {
  os << "omega,s_minus\n";
  char line[80];
  for (std::size_t i = 0; i < omega.size(); ++i) {
    std::snprintf(line, sizeof line, "%.17g,%.17g\n", omega[i], s_minus[i]);
    os << line;
  }
}

double z_kernel(double kappa, double mu, double lambda) {
  if (std::abs(kappa - mu) <= kConfluentSwitch * kappa) {
    const double x = 2.0 * lambda / kappa;
    return 2.0 / std::numbers::pi * (std::atan(x) + x / (1.0 + x * x));
  }
  return 2.0 / std::numbers::pi *
         (kappa * std::atan(2.0 * lambda / mu) - mu * std::atan(2.0 * lambda / kappa)) /
         (kappa - mu);
}

double z_factor(const LaserParams& params, double lambda) {
  if (!(lambda >= 0.0)) throw ConfigError("lambda must be >= 0");
  return z_kernel(params.kappa, params.mu, lambda);
}

BandReport band_report(const LaserParams& params, double lambda) {
  BandReport report;
  report.lambda = lambda;
  report.z = z_factor(params, lambda);
  report.var_minus_band = report.z * analytic::quadrature_variances(params).second;
  report.var_coherent_band = report.z * analytic::coherent_reference_variance(params);
  const auto [s, s_out] = analytic::quadrature_squeezing(params);
  report.squeezing_band = s;
  report.squeezing_band_out = s_out;
  return report;
}

QuadratureCheck verify_band_by_quadrature(const LaserParams& params, double lambda,
                                          double abs_tol) {
  if (!(lambda > 0.0)) throw ConfigError("lambda must be > 0");
  if (!(abs_tol > 0.0)) throw ConfigError("abs_tol must be > 0");

  const double variance = analytic::quadrature_variances(params).second;
  const std::function<double(double)> f = [&](double omega) {
    return variance * spectrum_kernel(params.kappa, params.mu, omega);
  };
  QuadratureCheck check;
  check.integral = integrate_even(f, lambda, params, abs_tol, check.error_estimate);
  check.reference = z_factor(params, lambda) * variance;
  check.difference = check.integral - check.reference;
  if (std::abs(check.difference) > abs_tol + 1e-9 * std::abs(check.reference)) {
    char msg[160];
    std::snprintf(msg, sizeof msg,
                  "band variance mismatch: quadrature=%.17g closed form=%.17g diff=%.3g",
                  check.integral, check.reference, check.difference);
    throw SelfCheckError(msg);
  }
  return check;
}

NormalizationCheck spectrum_normalization(const LaserParams& params, double window_mult,
                                          double abs_tol) {
  const double variance = analytic::quadrature_variances(params).second;
  const double window = window_mult * params.kappa;
  const std::function<double(double)> f = [&](double omega) {
    return variance * spectrum_kernel(params.kappa, params.mu, omega);
  };
  NormalizationCheck check;
  double err = 0.0;
  check.window_integral = integrate_even(f, window, params, abs_tol, err);
  check.tail = variance * (1.0 - z_kernel(params.kappa, params.mu, window));
  check.total = check.window_integral + check.tail;
  check.reference = variance;
  return check;
}

}  // namespace laserlab::spectral
