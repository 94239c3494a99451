#pragma once

#include <utility>

#include "laserlab/params.hpp"

namespace laserlab::analytic {

/// Steady-state mean atom numbers in the top (na), middle (nb) and bottom
/// (nc) levels. They satisfy na + nb + nc = N.
struct Populations {
  double na = 0.0;
  double nb = 0.0;
  double nc = 0.0;
  double total() const { return na + nb + nc; }
};

struct QuantumDiagnostics {
  double commutator = 0.0;  ///< <[b, b+]> = (gamma_c/kappa)(<Nc> - <Na>)
  double bound = 0.0;       ///< (gamma_c/kappa)|<Na> - <Nc>|
  double product = 0.0;     ///< Delta b+ * Delta b-, always >= bound
};

/// Every closed-form steady-state result in one record.
struct StatisticsReport {
  Populations populations;
  double mc = 0.0;             ///< collective coherence <m_c>
  double nbar = 0.0;           ///< mean photon number
  double nvar = 0.0;           ///< photon-number variance
  double bbdag = 0.0;          ///< antinormal moment <b b+>
  double b2 = 0.0;             ///< anomalous moment <b^2>
  double var_plus = 0.0;       ///< (Delta b+)^2
  double var_minus = 0.0;      ///< (Delta b-)^2
  double var_coherent = 0.0;   ///< coherent-state reference (gamma_c/kappa) N
  double squeezing = 0.0;      ///< S, fractional reduction below the reference
  double squeezing_out = 0.0;  ///< output-light squeezing, equals S
  double commutator = 0.0;
  double uncertainty_bound = 0.0;
};

// All formulas are evaluated in terms of eta and gamma_c/kappa; N enters
// linearly. This keeps related quantities cancellation-free.

/// na = N/(eta+2), nb = na, nc = eta*na.
Populations steady_populations(const LaserParams& params);

/// <m_c> = sqrt(eta) * na = sqrt(na * nc); real and non-negative.
double coherence_mc(const LaserParams& params);

/// nbar = (gamma_c/kappa)(na + nb).
double mean_photon_number(const LaserParams& params);

/// <b b+> = (gamma_c/kappa)(nb + nc).
double antinormal_moment(const LaserParams& params);

/// <b^2> = (gamma_c/kappa) sqrt(eta) na.
double anomalous_moment(const LaserParams& params);

/**
 * Photon-number variance, evaluated through two independent routes:
 * the Gaussian-moment assembly nbar*<b b+> + <b^2>^2 and the closed form
 * (1/4) nbar^2 (3 eta + 2). The routes must agree to 1e-12 relative or a
 * SelfCheckError is thrown; the assembly value is returned.
 */
double photon_variance(const LaserParams& params);

/// {(Delta b+)^2, (Delta b-)^2} = (gamma_c/kappa)(N + na +/- 2 sqrt(eta) na).
std::pair<double, double> quadrature_variances(const LaserParams& params);

/// Quadrature variance of the coherent reference light, (gamma_c/kappa) N.
double coherent_reference_variance(const LaserParams& params);

/**
 * Quadrature squeezing of the cavity light and of the output light.
 * S = (2 sqrt(eta) - 1)/(eta + 2); the output value equals the cavity one.
 * Positive iff eta > 1/4; maximum 1/2 at eta = 4.
 */
std::pair<double, double> quadrature_squeezing(const LaserParams& params);

/// Commutator expectation, uncertainty bound and quadrature-deviation
/// product; product >= bound holds for all valid parameters.
QuantumDiagnostics quantum_diagnostics(const LaserParams& params);

/// Assembles the complete report (runs the photon-variance dual-route check).
StatisticsReport full_report(const LaserParams& params);

}  // namespace laserlab::analytic
