#include "laserlab/params.hpp"

#include <cmath>
#include <cstring>

#include "laserlab/errors.hpp"

namespace laserlab {

namespace {

void require_positive(double value, const char* field) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw ConfigError(std::string(field) + " must be a positive finite number");
  }
}

std::uint64_t fnv1a(const void* data, std::size_t len, std::uint64_t h) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace

std::uint64_t LaserParams::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ull;
  h = fnv1a(&g, sizeof g, h);
  h = fnv1a(&kappa, sizeof kappa, h);
  h = fnv1a(&pump_rate, sizeof pump_rate, h);
  h = fnv1a(&n_atoms, sizeof n_atoms, h);
  return h;
}

const char* to_string(Regime regime) {
  switch (regime) {
    case Regime::above_threshold: return "above_threshold";
    case Regime::at_threshold: return "at_threshold";
    case Regime::below_threshold: return "below_threshold";
  }
  return "unknown";
}

LaserParams derive_params(double g, double kappa, double pump_rate, int n_atoms) {
  require_positive(g, "g");
  require_positive(kappa, "kappa");
  require_positive(pump_rate, "pump_rate");
  if (n_atoms < 1) {
    throw ConfigError("n_atoms must be >= 1");
  }
  LaserParams p;
  p.g = g;
  p.kappa = kappa;
  p.pump_rate = pump_rate;
  p.n_atoms = n_atoms;
  p.gamma_c = 4.0 * g * g / kappa;
  p.eta = p.gamma_c / pump_rate;
  p.mu = p.gamma_c + 2.0 * pump_rate;
  return p;
}

LaserParams params_for_eta(double g, double kappa, double eta, int n_atoms) {
  require_positive(eta, "eta");
  const double gamma_c = 4.0 * g * g / kappa;
  return derive_params(g, kappa, gamma_c / eta, n_atoms);
}

Regime classify_regime(const LaserParams& params, double tol) {
  if (tol < 0.0) {
    throw ConfigError("threshold tolerance must be >= 0");
  }
  if (std::abs(params.eta - 1.0) <= tol) return Regime::at_threshold;
  return params.eta < 1.0 ? Regime::above_threshold : Regime::below_threshold;
}

LaserParams params_from_json(const nlohmann::json& doc) {
  for (const char* key : {"g", "kappa", "pump_rate", "n_atoms"}) {
    if (!doc.contains(key)) {
      throw ConfigError(std::string("config is missing required key '") + key + "'");
    }
  }
  for (const char* key : {"g", "kappa", "pump_rate"}) {
    if (!doc.at(key).is_number()) {
      throw ConfigError(std::string("config key '") + key + "' must be a number");
    }
  }
  if (!doc.at("n_atoms").is_number_integer()) {
    throw ConfigError("config key 'n_atoms' must be an integer");
  }
  return derive_params(doc.at("g").get<double>(), doc.at("kappa").get<double>(),
                       doc.at("pump_rate").get<double>(), doc.at("n_atoms").get<int>());
}

}  // namespace laserlab
