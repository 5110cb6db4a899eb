#include <doctest.h>

#include "l2f/errors.hpp"
#include "l2f/serialization.hpp"
#include "l2f/signal.hpp"

using namespace l2f;

TEST_SUITE("serialization") {

TEST_CASE("measure round trip preserves every field") {
  const SMZMeasure mu = restrict_to_window(gauss_measure(16), 6.0, 6.0);
  const nlohmann::json doc = to_json(mu);
  CHECK(doc["kind"] == "gauss");
  CHECK(doc["m"] == 16);
  const SMZMeasure back = measure_from_json(doc);
  CHECK(back.kind == mu.kind);
  CHECK(back.order == mu.order);
  CHECK((back.nodes - mu.nodes).cwiseAbs().maxCoeff() == 0.0);
  CHECK((back.weights - mu.weights).cwiseAbs().maxCoeff() == 0.0);
  REQUIRE(back.window.has_value());
  CHECK(back.window->first == 6.0);
}

TEST_CASE("expansion round trip preserves coefficients bitwise") {
  const SMZMeasure mu = gauss_measure(32);
  Eigen::VectorXd samples(mu.nodes.size());
  for (Eigen::Index i = 0; i < samples.size(); ++i)
    samples[i] = std::exp(-0.7 * mu.nodes[i] - 0.5 * mu.nodes[i] * mu.nodes[i]);
  const HermiteExpansion e = fit_expansion(samples, mu, 24);
  const HermiteExpansion back = expansion_from_json(to_json(e));
  CHECK(back.degree == 24);
  CHECK(back.quad_order == 32);
  CHECK(back.measure_kind == MeasureKind::gauss);
  CHECK((back.coeffs - e.coeffs).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("malformed documents are rejected") {
  nlohmann::json doc = to_json(gauss_measure(4));
  doc["weights"] = std::vector<double>{1.0};
  CHECK_THROWS_AS(measure_from_json(doc), shape_error);
  nlohmann::json bad_kind = to_json(gauss_measure(4));
  bad_kind["kind"] = "exotic";
  CHECK_THROWS_AS(measure_from_json(bad_kind), config_error);
}

TEST_CASE("batch stats serialize with all parameter blocks") {
  BatchStats stats;
  stats.per_param["t22"] = {60.1, 0.5, 0.6};
  stats.failure_count = 3;
  stats.used_count = 97;
  const nlohmann::json doc = to_json(stats);
  CHECK(doc["failure_count"] == 3);
  CHECK(doc["params"]["t22"]["mean"] == 60.1);
}

}  // TEST_SUITE
