#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "laserlab/parallel.hpp"
#include "laserlab/params.hpp"

namespace laserlab::spectral {

/// Minus-quadrature fluctuation spectrum sampled on an offset grid
/// omega' = omega - omega_0 (only the offset ever enters numerically).
struct SpectrumCurve {
  std::vector<double> omega;
  std::vector<double> s_minus;
  LaserParams params;

  /// Columns: omega,s_minus.
  void write_csv(std::ostream& os) const;
};

struct BandReport {
  double lambda = 0.0;
  double z = 0.0;  ///< fraction of the total variance inside +/- lambda
  double var_minus_band = 0.0;
  double var_coherent_band = 0.0;
  double squeezing_band = 0.0;
  double squeezing_band_out = 0.0;
};

/**
 * Normalized spectral kernel: difference of two Lorentzians of half-widths
 * mu/2 and kappa/2 weighted kappa/(kappa-mu) and -mu/(kappa-mu). Integrates
 * to 1 over the whole axis and stays >= 0 for kappa, mu > 0. The removable
 * kappa = mu singularity is evaluated through its analytic limit,
 * (kappa^3/4pi) / (omega^2 + (kappa/2)^2)^2, switched at
 * |kappa - mu| <= 1e-9 kappa.
 */
double spectrum_kernel(double kappa, double mu, double omega);

/// S_-(omega') = (Delta b-)^2 * spectrum_kernel. The plus-quadrature
/// spectrum shares the kernel with (Delta b+)^2.
double quadrature_spectrum_at(const LaserParams& params, double omega);
double plus_quadrature_spectrum_at(const LaserParams& params, double omega);

/// Grid evaluation; points are independent work items.
SpectrumCurve quadrature_spectrum(const LaserParams& params,
                                  std::span<const double> omega_grid,
                                  Exec exec = Exec::parallel);

/**
 * Band fraction z(lambda) = (2/pi)[kappa atan(2 lambda/mu)
 * - mu atan(2 lambda/kappa)]/(kappa - mu); monotone from z(0) = 0 to
 * z(inf) = 1. Confluent limit at kappa = mu:
 * (2/pi)[atan(x) + x/(1+x^2)], x = 2 lambda / kappa.
 */
double z_kernel(double kappa, double mu, double lambda);
double z_factor(const LaserParams& params, double lambda);

/**
 * Band-limited variances and squeezing for the interval omega_0 +/- lambda.
 * Both band variances scale by the same z(lambda), so the band squeezing
 * equals the global S for every lambda; at lambda = 0 the 0/0 ratio is
 * reported as that same limit value.
 */
BandReport band_report(const LaserParams& params, double lambda);

struct QuadratureCheck {
  double integral = 0.0;        ///< adaptive quadrature of S_- over [-lambda, lambda]
  double reference = 0.0;       ///< z(lambda) * (Delta b-)^2
  double difference = 0.0;
  double error_estimate = 0.0;  ///< accumulated quadrature error bound
};

/**
 * Integrates the spectrum over [-lambda, lambda] with an adaptive composite
 * Simpson rule controlled to abs_tol and compares against the closed form.
 * Throws DivergenceError (carrying the achieved error estimate) if the
 * quadrature cannot reach abs_tol, and SelfCheckError if the two values
 * disagree beyond abs_tol + 1e-9 relative.
 */
QuadratureCheck verify_band_by_quadrature(const LaserParams& params, double lambda,
                                          double abs_tol);

struct NormalizationCheck {
  double window_integral = 0.0;  ///< quadrature over +/- window_mult * kappa
  double tail = 0.0;             ///< analytic remainder outside the window
  double total = 0.0;
  double reference = 0.0;  ///< (Delta b-)^2
};

/// Full-axis normalization check: adaptive quadrature over a wide window
/// plus the analytic Lorentzian tail.
NormalizationCheck spectrum_normalization(const LaserParams& params,
                                          double window_mult = 1e4,
                                          double abs_tol = 1e-10);

}  // namespace laserlab::spectral
