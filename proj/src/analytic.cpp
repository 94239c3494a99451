#include "laserlab/analytic.hpp"

#include <cmath>
#include <cstdio>

#include "laserlab/errors.hpp"

namespace laserlab::analytic {

Populations steady_populations(const LaserParams& params) {
  Populations pops;
  pops.na = params.n_atoms / (params.eta + 2.0);
  pops.nb = pops.na;
  pops.nc = params.eta * pops.na;
  return pops;
}

double coherence_mc(const LaserParams& params) {
  return std::sqrt(params.eta) * steady_populations(params).na;
}

double mean_photon_number(const LaserParams& params) {
  const Populations pops = steady_populations(params);
  return params.kappa_ratio() * (pops.na + pops.nb);
}

double antinormal_moment(const LaserParams& params) {
  const Populations pops = steady_populations(params);
  return params.kappa_ratio() * (pops.nb + pops.nc);
}

double anomalous_moment(const LaserParams& params) {
  return params.kappa_ratio() * coherence_mc(params);
}

double photon_variance(const LaserParams& params) {
  const double nbar = mean_photon_number(params);
  const double assembly = nbar * antinormal_moment(params) +
                          anomalous_moment(params) * anomalous_moment(params);
  const double closed = 0.25 * nbar * nbar * (3.0 * params.eta + 2.0);
  const double rel = std::abs(assembly - closed) / std::abs(closed);
  if (!(rel <= 1e-12)) {
    char msg[160];
    std::snprintf(msg, sizeof msg,
                  "photon variance routes disagree: assembly=%.17g closed=%.17g rel=%.3g",
                  assembly, closed, rel);
    throw SelfCheckError(msg);
  }
  return assembly;
}

std::pair<double, double> quadrature_variances(const LaserParams& params) {
  const double na = steady_populations(params).na;
  const double cross = 2.0 * std::sqrt(params.eta) * na;
  const double base = params.n_atoms + na;
  return {params.kappa_ratio() * (base + cross), params.kappa_ratio() * (base - cross)};
}

double coherent_reference_variance(const LaserParams& params) {
  return params.kappa_ratio() * params.n_atoms;
}

std::pair<double, double> quadrature_squeezing(const LaserParams& params) {
  const double s = (2.0 * std::sqrt(params.eta) - 1.0) / (params.eta + 2.0);
  return {s, s};
}

QuantumDiagnostics quantum_diagnostics(const LaserParams& params) {
  const Populations pops = steady_populations(params);
  QuantumDiagnostics diag;
  diag.commutator = params.kappa_ratio() * (pops.nc - pops.na);
  diag.bound = std::abs(diag.commutator);
  const auto [vp, vm] = quadrature_variances(params);
  diag.product = std::sqrt(vp * vm);
  return diag;
}

StatisticsReport full_report(const LaserParams& params) {
  StatisticsReport report;
  report.populations = steady_populations(params);
  report.mc = coherence_mc(params);
  report.nbar = mean_photon_number(params);
  report.nvar = photon_variance(params);
  report.bbdag = antinormal_moment(params);
  report.b2 = anomalous_moment(params);
  std::tie(report.var_plus, report.var_minus) = quadrature_variances(params);
  report.var_coherent = coherent_reference_variance(params);
  std::tie(report.squeezing, report.squeezing_out) = quadrature_squeezing(params);
  const QuantumDiagnostics diag = quantum_diagnostics(params);
  report.commutator = diag.commutator;
  report.uncertainty_bound = diag.bound;
  return report;
}

}  // namespace laserlab::analytic
