#include "l2f/simlab.hpp"

#include <atomic>
#include <cmath>
#include <thread>

#include "l2f/errors.hpp"
#include "l2f/hermite.hpp"
#include "l2f/numeric.hpp"

namespace l2f {

std::string to_string(Method method) { return method == Method::l2f ? "l2f" : "nlls"; }

Eigen::VectorXd add_noise(const Eigen::VectorXd& samples, const NoiseSpec& spec,
                          int realization_index) {
  if (std::isinf(spec.snr)) return samples;
  if (!(spec.snr > 0.0)) throw config_error("add_noise: snr must be positive or infinite");
  if (samples.size() == 0) return samples;
  const double stdev = samples[0] / spec.snr;
  auto rng = rng_for(spec.seed, 0xA0D5E000ULL + static_cast<uint64_t>(realization_index));
  GaussianDraw draw;
  Eigen::VectorXd out = samples;
  for (Eigen::Index i = 0; i < out.size(); ++i) out[i] += stdev * draw(rng);
  return out;
}

namespace {

EstimationResult run_one(const SignalModel& model, const NoiseSpec& spec, Method method,
                         const L2FConfig& cfg, int index, L2FTrace* trace) {
  const uint64_t seed = spec.seed + static_cast<uint64_t>(index);
  EstimationResult result;
  try {
    if (std::isinf(spec.snr)) {
      const SyntheticSource src(model);
      result = (method == Method::l2f)
                   ? run_l2f(src, cfg, seed, trace)
                   : run_nlls_baseline(src.sample_times_ms(), src.sample_values(), seed);
    } else {
      const Eigen::VectorXd times = time_grid_ms(model);
      const Eigen::VectorXd noisy = add_noise(synthesize(model), spec, index);
      if (method == Method::l2f) {
        const SampledSource src(times, noisy);
        result = run_l2f(src, cfg, seed, trace);
      } else {
        result = run_nlls_baseline(times, noisy, seed);
      }
    }
  } catch (const std::exception& err) {
    result.failed = true;
    result.failure_reason = err.what();
    result.seed = seed;
  }
  result.realization_index = index;
  return result;
}

}  // namespace

BatchRun run_batch(const SignalModel& model, const NoiseSpec& spec, Method method,
                   const L2FConfig& cfg, int jobs, std::vector<L2FTrace>* traces_out) {
  const int m = spec.realizations;
  if (m < 1) throw config_error("run_batch: need at least one realization");
  BatchRun run;
  run.records.resize(static_cast<size_t>(m));
  if (traces_out) traces_out->assign(static_cast<size_t>(m), L2FTrace{});
  auto trace_slot = [&](int i) -> L2FTrace* {
    return traces_out && method == Method::l2f ? &(*traces_out)[static_cast<size_t>(i)] : nullptr;
  };

  int workers = jobs > 0 ? jobs : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::max(1, std::min(workers, m));
  if (workers == 1) {
    for (int i = 0; i < m; ++i)
      run.records[static_cast<size_t>(i)] = run_one(model, spec, method, cfg, i, trace_slot(i));
  } else {
    std::atomic<int> next{0};
    auto worker = [&]() {
      for (int i = next.fetch_add(1); i < m; i = next.fetch_add(1))
        run.records[static_cast<size_t>(i)] = run_one(model, spec, method, cfg, i, trace_slot(i));
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  // Ground truth in reporting convention (T2 ascending, T22 the larger).
  const double true_t21 = model.t2_ms[0];
  const double true_t22 = model.t2_ms[model.t2_ms.size() - 1];
  const double true_a1 = model.amplitudes[0];
  const double true_a2 = model.amplitudes[model.amplitudes.size() - 1];

  std::map<std::string, std::pair<std::vector<double>, double>> columns;
  columns["a1"] = {{}, true_a1};
  columns["a2"] = {{}, true_a2};
  columns["t21"] = {{}, true_t21};
  columns["t22"] = {{}, true_t22};
  for (const EstimationResult& rec : run.records) {
    if (rec.failed) {
      ++run.stats.failure_count;
      continue;
    }
    columns["a1"].first.push_back(rec.a1);
    columns["a2"].first.push_back(rec.a2);
    columns["t21"].first.push_back(rec.t21_ms);
    columns["t22"].first.push_back(rec.t22_ms);
    ++run.stats.used_count;
  }
  for (const auto& [name, data] : columns) {
    ParamStats ps;
    ps.mean = mean_of(data.first);
    ps.stdev = stdev_of(data.first);
    ps.rmse = rmse_of(data.first, data.second);
    run.stats.per_param[name] = ps;
  }
  return run;
}

std::vector<double> averaged_noise_functional(int quad_order, int degree, double noise_bound,
                                              uint64_t seed, const std::vector<int>& m_values,
                                              int repetitions) {
  if (noise_bound < 0.0) throw config_error("averaged_noise_functional: bound must be >= 0");
  if (repetitions < 1) throw config_error("averaged_noise_functional: repetitions must be >= 1");
  // Degree condition: 4 sqrt(m) >= 2n >= log m (empirical constants).
  if (4.0 * std::sqrt(static_cast<double>(quad_order)) < 2.0 * degree ||
      2.0 * degree < std::log(static_cast<double>(quad_order)))
    throw config_error("averaged_noise_functional: degree condition 4 sqrt(m) >= 2n >= log m violated");

  const SMZMeasure mu = gauss_measure(quad_order);
  const Eigen::MatrixXd psi = hermite_functions(degree, mu.nodes);  // n x m
  const Eigen::VectorXd omegas = Eigen::VectorXd::LinSpaced(481, -6.0, 6.0);
  const Eigen::MatrixXd psi_omega = hermite_functions(degree, omegas);

  auto sup_ft = [&](const Eigen::VectorXd& coeffs) {
    double sup = 0.0;
    for (Eigen::Index g = 0; g < omegas.size(); ++g) {
      double re = 0.0, im = 0.0;
      for (int k = 0; k < degree; ++k) {
        const double term = coeffs[k] * psi_omega(k, g);
        switch (k % 4) {
          case 0: re += term; break;
          case 1: im -= term; break;
          case 2: re -= term; break;
          case 3: im += term; break;
        }
      }
      sup = std::max(sup, std::hypot(re, im));
    }
    return sup;
  };

  std::vector<double> medians;
  medians.reserve(m_values.size());
  uint64_t stream = 0;
  for (const int m_count : m_values) {
    if (m_count < 1) throw config_error("averaged_noise_functional: M values must be >= 1");
    std::vector<double> sups;
    sups.reserve(static_cast<size_t>(repetitions));
    for (int rep = 0; rep < repetitions; ++rep) {
      Eigen::VectorXd mean_coeffs = Eigen::VectorXd::Zero(degree);
      for (int j = 0; j < m_count; ++j) {
        auto rng = rng_for(seed, 0xF0000000ULL + stream++);
        Eigen::VectorXd noise(mu.nodes.size());
        for (Eigen::Index i = 0; i < noise.size(); ++i)
          noise[i] = noise_bound * (2.0 * uniform01(rng) - 1.0);
        mean_coeffs += psi * mu.weights.cwiseProduct(noise).matrix();
      }
      mean_coeffs /= static_cast<double>(m_count);
      sups.push_back(sup_ft(mean_coeffs));
    }
    medians.push_back(median_of(std::move(sups)));
  }
  return medians;
}

}  // namespace l2f
