#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "l2f/pipeline.hpp"
#include "l2f/signal.hpp"

namespace l2f {

/// Gaussian measurement noise calibrated to the signal's initial value:
/// std = values[0] / snr. snr = infinity means no noise.
struct NoiseSpec {
  double snr = std::numeric_limits<double>::infinity();
  uint64_t seed = 0;
  int realizations = 1;
};

/// Adds i.i.d. Gaussian noise, deterministic per (spec.seed, realization_index).
Eigen::VectorXd add_noise(const Eigen::VectorXd& samples, const NoiseSpec& spec,
                          int realization_index);

enum class Method { l2f, nlls };
std::string to_string(Method method);

struct ParamStats {
  double mean = 0.0;
  double stdev = 0.0;
  double rmse = 0.0;
};

struct BatchStats {
  std::map<std::string, ParamStats> per_param;  // keys a1, a2, t21, t22
  int failure_count = 0;
  int used_count = 0;  // realizations contributing to the moments
};

struct BatchRun {
  BatchStats stats;
  std::vector<EstimationResult> records;  // one per realization, in index order
};

/// M independent estimations with per-index seeding; failed realizations are
/// excluded from the moments and counted. jobs = 0 uses all hardware threads.
/// traces_out, when given, receives the per-shift trace of every L2F run.
BatchRun run_batch(const SignalModel& model, const NoiseSpec& spec, Method method,
                   const L2FConfig& cfg, int jobs = 0,
                   std::vector<L2FTrace>* traces_out = nullptr);

/// Sup-norm over omega in [-6, 6] of the Fourier transform of the expansion of
/// averaged bounded noise (uniform in [-S, S] at the quadrature nodes): for
/// each M in m_values, the median over `repetitions` independent experiments.
/// Requires the degree condition 4 sqrt(m) >= 2n >= log m.
std::vector<double> averaged_noise_functional(int quad_order, int degree, double noise_bound,
                                              uint64_t seed, const std::vector<int>& m_values,
                                              int repetitions = 50);

}  // namespace l2f
