#pragma once

#include <cstdint>
#include <string>

#include "json.hpp"

namespace laserlab {

/**
 * Physical inputs of the cascade three-level laser plus the derived
 * constants every other module consumes.
 *
 * All rates are in one consistent inverse-time unit; no unit conversion
 * is performed anywhere in the library.
 */
struct LaserParams {
  double g = 0.0;          ///< atom-cavity coupling constant
  double kappa = 0.0;      ///< cavity damping constant
  double pump_rate = 0.0;  ///< per-atom bottom->top pump rate r_a
  int n_atoms = 0;         ///< number of three-level atoms N

  // Derived once at construction; single source of truth downstream.
  double gamma_c = 0.0;  ///< stimulated emission decay constant, 4 g^2 / kappa
  double eta = 0.0;      ///< gamma_c / pump_rate
  double mu = 0.0;       ///< gamma_c + 2 pump_rate

  double kappa_ratio() const { return gamma_c / kappa; }

  /// FNV-1a hash of the four physical inputs; tags trajectories and output
  /// metadata so data files can be traced back to their parameter set.
  std::uint64_t hash() const;
};

/// Operating regime relative to the equal-top/bottom-population threshold.
enum class Regime { above_threshold, at_threshold, below_threshold };

const char* to_string(Regime regime);

/**
 * Validates the inputs and populates the derived constants.
 *
 * Throws ConfigError naming the offending field when any input is
 * non-positive (or n_atoms < 1).
 */
LaserParams derive_params(double g, double kappa, double pump_rate, int n_atoms);

/// Convenience: parameters with a target eta at given g, kappa
/// (pump_rate = gamma_c / eta).
LaserParams params_for_eta(double g, double kappa, double eta, int n_atoms);

/**
 * eta < 1 pumps the top level faster than stimulated decay empties it
 * (above threshold); eta > 1 is below threshold; |eta - 1| <= tol counts
 * as at threshold. The default band is 1e-12; widen it when eta comes
 * from a Monte Carlo estimate.
 */
Regime classify_regime(const LaserParams& params, double tol = 1e-12);

/**
 * Reads `g`, `kappa`, `pump_rate`, `n_atoms` from a JSON document.
 * Ignores unrelated keys (the CLI layer rejects unknown keys on the full
 * config document); missing or mistyped keys raise ConfigError.
 */
LaserParams params_from_json(const nlohmann::json& doc);

}  // namespace laserlab
