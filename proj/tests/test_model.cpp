#include <cmath>

#include "doctest.h"
#include "json.hpp"
#include "laserlab/errors.hpp"
#include "laserlab/params.hpp"

using namespace laserlab;

TEST_CASE("derived constants from physical inputs") {
  const LaserParams p = derive_params(1.0, 16.0, 0.0625, 100);
  CHECK(p.gamma_c == 0.25);
  CHECK(p.eta == 4.0);
  CHECK(p.mu == 0.375);

  const LaserParams q = derive_params(10.0, 400.0, 1.0, 50);
  CHECK(q.gamma_c == 1.0);
  CHECK(q.eta == 1.0);
  CHECK(q.mu == 3.0);
}

TEST_CASE("validation names the offending field") {
  CHECK_THROWS_WITH_AS(derive_params(0.0, 1.0, 1.0, 1),
                       "g must be a positive finite number", ConfigError);
  CHECK_THROWS_WITH_AS(derive_params(1.0, -2.0, 1.0, 1),
                       "kappa must be a positive finite number", ConfigError);
  CHECK_THROWS_WITH_AS(derive_params(1.0, 1.0, 0.0, 1),
                       "pump_rate must be a positive finite number", ConfigError);
  CHECK_THROWS_WITH_AS(derive_params(1.0, 1.0, 1.0, 0), "n_atoms must be >= 1",
                       ConfigError);
}

TEST_CASE("gamma_c round-trips to 4 g^2 / kappa") {
  for (double g : {0.3, 1.0, 7.5, 123.0}) {
    for (double kappa : {0.11, 2.0, 16.0, 4096.0}) {
      const LaserParams p = derive_params(g, kappa, 0.7, 10);
      CHECK(std::abs(p.gamma_c - 4.0 * g * g / kappa) <= 1e-15 * p.gamma_c);
      CHECK(std::abs(p.mu - (p.gamma_c + 2.0 * p.pump_rate)) <= 1e-15 * p.mu);
      CHECK(std::abs(p.eta - p.gamma_c / p.pump_rate) <= 1e-15 * p.eta);
    }
  }
}

TEST_CASE("derive_params is pure") {
  const LaserParams a = derive_params(2.0, 9.0, 0.5, 30);
  const LaserParams b = derive_params(2.0, 9.0, 0.5, 30);
  CHECK(a.gamma_c == b.gamma_c);
  CHECK(a.eta == b.eta);
  CHECK(a.mu == b.mu);
  CHECK(a.hash() == b.hash());
}

TEST_CASE("regime classification") {
  CHECK(classify_regime(params_for_eta(1.0, 16.0, 4.0, 10)) == Regime::below_threshold);
  CHECK(classify_regime(derive_params(10.0, 400.0, 1.0, 10)) == Regime::at_threshold);
  CHECK(classify_regime(params_for_eta(1.0, 16.0, 0.1, 10)) == Regime::above_threshold);

  // Tolerance band absorbs Monte Carlo jitter around threshold.
  const LaserParams near = params_for_eta(1.0, 16.0, 1.0 + 5e-4, 10);
  CHECK(classify_regime(near) == Regime::below_threshold);
  CHECK(classify_regime(near, 1e-3) == Regime::at_threshold);
  CHECK_THROWS_AS(classify_regime(near, -1.0), ConfigError);
}

TEST_CASE("classification is stable under double reciprocal of eta") {
  for (double eta : {0.01, 0.2, 0.999, 1.0, 1.001, 3.0, 42.0}) {
    const LaserParams p = params_for_eta(1.0, 16.0, eta, 10);
    const LaserParams q = params_for_eta(1.0, 16.0, 1.0 / (1.0 / p.eta), 10);
    CHECK(classify_regime(p) == classify_regime(q));
  }
}

TEST_CASE("params from JSON config") {
  const nlohmann::json doc = {
      {"g", 1.0}, {"kappa", 16.0}, {"pump_rate", 0.0625}, {"n_atoms", 100}};
  const LaserParams p = params_from_json(doc);
  CHECK(p.eta == 4.0);

  nlohmann::json missing = doc;
  missing.erase("kappa");
  CHECK_THROWS_AS(params_from_json(missing), ConfigError);

  nlohmann::json wrong_type = doc;
  wrong_type["n_atoms"] = 2.5;
  CHECK_THROWS_AS(params_from_json(wrong_type), ConfigError);

  nlohmann::json negative = doc;
  negative["pump_rate"] = -1.0;
  CHECK_THROWS_AS(params_from_json(negative), ConfigError);
}
