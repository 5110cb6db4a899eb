#include <doctest.h>

#include <cmath>
#include <limits>

#include "l2f/errors.hpp"
#include "l2f/simlab.hpp"

using namespace l2f;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST_SUITE("simlab") {

TEST_CASE("synthesized samples match hand arithmetic") {
  // step-5 grid so that t = 50 and t = 120 are sample points
  const SignalModel equal = make_model({0.5, 0.5}, {40.0, 60.0}, 315.0, 64);
  const Eigen::VectorXd values = synthesize(equal);
  CHECK(values[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(values[24] == doctest::Approx(0.5 * std::exp(-3.0) + 0.5 * std::exp(-2.0))
                          .epsilon(1e-14));  // t = 120
  CHECK(values[24] == doctest::Approx(0.0925611758).epsilon(1e-8));

  const SignalModel single = make_model({1.0}, {50.0}, 315.0, 64);
  CHECK(synthesize(single)[10] == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));  // t = 50
  CHECK(model_value(single, 50.0) == doctest::Approx(0.367879441).epsilon(1e-8));
}

TEST_CASE("model construction sorts components and validates") {
  const SignalModel model = make_model({0.3, 0.7}, {60.0, 40.0});
  CHECK(model.t2_ms[0] == 40.0);
  CHECK(model.amplitudes[0] == 0.7);
  CHECK(model.t2_ms[1] == 60.0);
  CHECK_THROWS_AS(make_model({0.5}, {10.0, 50.0}), config_error);
  CHECK_THROWS_AS(make_model({0.5, 0.5}, {10.0, -50.0}), config_error);
  CHECK_THROWS_AS(make_model({-0.5, 0.5}, {10.0, 50.0}), config_error);
}

TEST_CASE("infinite snr adds nothing; finite snr calibrates to the peak") {
  const SignalModel model = make_model({0.5, 0.5}, {40.0, 60.0});
  const Eigen::VectorXd clean = synthesize(model);
  const Eigen::VectorXd same = add_noise(clean, NoiseSpec{kInf, 5, 1}, 0);
  CHECK((same - clean).cwiseAbs().maxCoeff() == 0.0);

  // about 1e6 draws: empirical std within 2% of peak/snr = 1e-4
  const NoiseSpec spec{1e4, 11, 1};
  long double acc = 0.0L;
  long count = 0;
  for (int realization = 0; realization < 15625; ++realization) {
    const Eigen::VectorXd noisy = add_noise(clean, spec, realization);
    for (Eigen::Index i = 0; i < clean.size(); ++i) {
      const double d = noisy[i] - clean[i];
      acc += static_cast<long double>(d) * d;
      ++count;
    }
  }
  const double std_hat = std::sqrt(static_cast<double>(acc / count));
  CHECK(std_hat == doctest::Approx(1e-4).epsilon(0.02));

  const Eigen::VectorXd a = add_noise(clean, spec, 7);
  const Eigen::VectorXd b = add_noise(clean, spec, 7);
  CHECK((a - b).cwiseAbs().maxCoeff() == 0.0);
  const Eigen::VectorXd c = add_noise(clean, spec, 8);
  CHECK((a - c).cwiseAbs().maxCoeff() > 0.0);

  CHECK_THROWS_AS(add_noise(clean, NoiseSpec{-2.0, 5, 1}, 0), config_error);
}

TEST_CASE("single-realization batch reproduces the lone estimate") {
  const SignalModel model = make_model({0.5, 0.5}, {40.0, 60.0});
  const NoiseSpec spec{kInf, 9, 1};
  const BatchRun run = run_batch(model, spec, Method::l2f, L2FConfig{});
  REQUIRE(run.records.size() == 1);
  CHECK(run.stats.failure_count == 0);
  CHECK(run.stats.used_count == 1);
  CHECK(run.stats.per_param.at("t22").mean == run.records[0].t22_ms);
  CHECK(run.stats.per_param.at("t22").stdev == 0.0);
}

TEST_CASE("noiseless batches have exactly zero spread in the peak estimate") {
  const SignalModel model = make_model({0.5, 0.5}, {40.0, 60.0});
  const NoiseSpec spec{kInf, 2026, 100};
  const BatchRun run = run_batch(model, spec, Method::l2f, L2FConfig{});
  CHECK(run.stats.failure_count == 0);
  CHECK(run.stats.per_param.at("t22").stdev == 0.0);
}

TEST_CASE("parallel schedules do not change the results") {
  const SignalModel model = make_model({0.5, 0.5}, {40.0, 60.0});
  const NoiseSpec spec{1e5, 13, 16};
  const BatchRun serial = run_batch(model, spec, Method::l2f, L2FConfig{}, 1);
  const BatchRun parallel = run_batch(model, spec, Method::l2f, L2FConfig{}, 8);
  REQUIRE(serial.records.size() == parallel.records.size());
  for (size_t i = 0; i < serial.records.size(); ++i) {
    CHECK(serial.records[i].t22_ms == parallel.records[i].t22_ms);
    CHECK(serial.records[i].t21_ms == parallel.records[i].t21_ms);
  }
  CHECK(serial.stats.per_param.at("t22").mean == parallel.stats.per_param.at("t22").mean);
}

TEST_CASE("statistics identities hold per parameter") {
  const SignalModel model = make_model({0.5, 0.5}, {40.0, 60.0});
  const NoiseSpec spec{1e5, 21, 20};
  const BatchRun run = run_batch(model, spec, Method::l2f, L2FConfig{});
  const double m = run.stats.used_count;
  const std::map<std::string, double> truth{
      {"a1", 0.5}, {"a2", 0.5}, {"t21", 40.0}, {"t22", 60.0}};
  for (const auto& [name, ps] : run.stats.per_param) {
    const double bias = std::abs(ps.mean - truth.at(name));
    CHECK(ps.rmse >= bias - 1e-12 * std::max(1.0, ps.rmse));
    CHECK(ps.rmse >= ps.stdev * std::sqrt((m - 1.0) / m) - 1e-12 * std::max(1.0, ps.rmse));
    // rmse^2 = bias^2 + stdev^2 (M-1)/M
    const double lhs = ps.rmse * ps.rmse;
    const double rhs = bias * bias + ps.stdev * ps.stdev * (m - 1.0) / m;
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
  }
}

TEST_CASE("nlls batches tally but keep running") {
  const SignalModel model = make_model({0.5, 0.5}, {40.0, 60.0});
  const NoiseSpec spec{1e4, 31, 10};
  const BatchRun run = run_batch(model, spec, Method::nlls, L2FConfig{});
  CHECK(run.stats.used_count + run.stats.failure_count == 10);
  CHECK(run.stats.per_param.at("t22").mean == doctest::Approx(60.0).epsilon(0.05));
}

TEST_CASE("averaged pure-noise transform scales down with the batch size") {
  const auto medians = averaged_noise_functional(64, 16, 0.5, 99, {1, 100}, 50);
  REQUIRE(medians.size() == 2);
  const double ratio = medians[0] / medians[1];
  CHECK(ratio >= 6.0);
  CHECK(ratio <= 14.0);
}

TEST_CASE("averaged pure-noise transform scales down with the quadrature order") {
  const double at64 = averaged_noise_functional(64, 16, 0.5, 99, {1}, 50)[0];
  const double at256 = averaged_noise_functional(256, 16, 0.5, 99, {1}, 50)[0];
  const double ratio = at64 / at256;  // theory: (256/64)^{1/4} = sqrt(2)
  CHECK(ratio >= 1.2);
  CHECK(ratio <= 2.2);
}

TEST_CASE("zero noise bound yields identically zero functionals") {
  const auto medians = averaged_noise_functional(64, 16, 0.0, 99, {1, 10}, 5);
  CHECK(medians[0] == 0.0);
  CHECK(medians[1] == 0.0);
}

TEST_CASE("degree condition violations are configuration errors") {
  CHECK_THROWS_AS(averaged_noise_functional(9, 16, 0.5, 1, {1}, 5), config_error);
  CHECK_THROWS_AS(averaged_noise_functional(64, 1, 0.5, 1, {1}, 5), config_error);
  CHECK_THROWS_AS(averaged_noise_functional(64, 16, -1.0, 1, {1}, 5), config_error);
}

}  // TEST_SUITE
