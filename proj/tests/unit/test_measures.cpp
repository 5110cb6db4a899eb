#include <doctest.h>

#include <cmath>

#include "l2f/errors.hpp"
#include "l2f/measures.hpp"

using namespace l2f;

TEST_SUITE("measures") {

TEST_CASE("gauss measure spans roughly [-sqrt(2m), sqrt(2m)]") {
  const SMZMeasure mu = gauss_measure(32);
  CHECK(mu.kind == MeasureKind::gauss);
  CHECK(mu.order == 32);
  const double span = mu.nodes.cwiseAbs().maxCoeff();
  CHECK(span < std::sqrt(64.0) * 1.1);
  CHECK(span > std::sqrt(64.0) * 0.8);
}

TEST_CASE("gauss order one is a single node at the origin") {
  const SMZMeasure mu = gauss_measure(1);
  REQUIRE(mu.nodes.size() == 1);
  CHECK(mu.nodes[0] == 0.0);
}

TEST_CASE("gauss measure is exact on the span") {
  const SmzReport report = validate_smz(gauss_measure(32), 100);
  CHECK(report.ratio_lo == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(report.ratio_hi == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("equispaced measure: default spacing, mass, and sandwich") {
  const SMZMeasure mu = equispaced_measure(16, -8.0, 8.0, 1.0 / 16.0);
  CHECK(mu.kind == MeasureKind::equispaced);
  CHECK(mu.weights.sum() == doctest::Approx(16.0).epsilon(1e-12));
  CHECK(mu.weights.minCoeff() > 0.0);
  for (Eigen::Index i = 0; i + 1 < mu.nodes.size(); ++i) CHECK(mu.nodes[i] > mu.nodes[i + 1]);
  const SmzReport report = validate_smz(mu, 100);
  CHECK(report.ratio_lo >= 0.75);
  CHECK(report.ratio_hi <= 1.25);
}

TEST_CASE("equispaced measure rejects bad windows and spacings") {
  CHECK_THROWS_AS(equispaced_measure(4, -1.0, 1.0), config_error);
  CHECK_THROWS_AS(equispaced_measure(16, -8.0, 8.0, 2.0), config_error);
}

TEST_CASE("truncated Lebesgue discretization is a valid measure") {
  const SMZMeasure mu = truncated_lebesgue_measure(16, /*strict=*/true);
  CHECK(mu.kind == MeasureKind::truncated_lebesgue);
  const double edge = 2.0 * std::sqrt(16.0);
  CHECK(mu.nodes.maxCoeff() <= edge + 1e-12);
  CHECK(mu.nodes.minCoeff() >= -edge);
  CHECK(mu.weights.sum() == doctest::Approx(2.0 * edge).epsilon(1e-12));
}

TEST_CASE("window restriction certifies or rejects the support") {
  const SMZMeasure mu = gauss_measure(32);
  const SMZMeasure certified = restrict_to_window(mu, 8.1, 8.1);
  REQUIRE(certified.window.has_value());
  CHECK(certified.window->first == 8.1);
  CHECK_THROWS_AS(restrict_to_window(mu, 4.0, 4.0), support_error);

  SMZMeasure empty;
  empty.order = 1;
  CHECK_NOTHROW(restrict_to_window(empty, 1.0, 1.0));  // vacuous
}

TEST_CASE("validation report with a single trial is degenerate") {
  const SmzReport report = validate_smz(gauss_measure(8), 1);
  CHECK(report.ratio_lo == report.ratio_hi);
  CHECK_THROWS_AS(validate_smz(gauss_measure(8), 0), config_error);
}

TEST_CASE("strict construction validates automatically") {
  CHECK_NOTHROW(gauss_measure(32, /*strict=*/true));
  CHECK_NOTHROW(equispaced_measure(16, -8.0, 8.0, 0.0, /*strict=*/true));
}

TEST_CASE("total variation scaling is stable across orders") {
  for (auto kind_probe : {0, 1, 2}) {
    double reference = 0.0;
    for (int m : {16, 32, 64}) {
      const SMZMeasure mu =
          kind_probe == 0
              ? gauss_measure(m)
              : (kind_probe == 1 ? equispaced_measure(m, -std::sqrt(2.0 * m), std::sqrt(2.0 * m))
                                 : truncated_lebesgue_measure(m));
      const SmzReport report = validate_smz(mu, 10);
      if (reference == 0.0) reference = report.tv_over_sqrt_m;
      CHECK(std::abs(report.tv_over_sqrt_m - reference) / reference < 0.2);
    }
  }
}

}  // TEST_SUITE
