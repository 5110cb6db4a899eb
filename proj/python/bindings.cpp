#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "l2f/hermite.hpp"
#include "l2f/leastsq.hpp"
#include "l2f/measures.hpp"
#include "l2f/nlls.hpp"
#include "l2f/pipeline.hpp"
#include "l2f/signal.hpp"
#include "l2f/simlab.hpp"
#include "l2f/spectrum.hpp"

namespace py = pybind11;
using namespace l2f;

namespace {

NoiseSpec make_noise_spec(double snr, uint64_t seed, int realizations) {
  NoiseSpec spec;
  spec.snr = snr;
  spec.seed = seed;
  spec.realizations = realizations;
  return spec;
}

py::dict stats_to_dict(const BatchStats& stats) {
  py::dict out;
  for (const auto& [name, ps] : stats.per_param) {
    py::dict entry;
    entry["mean"] = ps.mean;
    entry["stdev"] = ps.stdev;
    entry["rmse"] = ps.rmse;
    out[name.c_str()] = entry;
  }
  out["failure_count"] = stats.failure_count;
  out["used_count"] = stats.used_count;
  return out;
}

}  // namespace

PYBIND11_MODULE(_l2f, m) {
  m.doc() = "multiexponential decay analysis via Hermite-function Fourier estimation";

  // hermite
  m.def("hermite_function", &hermite_function, py::arg("degree"), py::arg("x"));
  m.def("hermite_functions", &hermite_functions, py::arg("count"), py::arg("xs"));
  py::class_<GaussRule>(m, "GaussRule")
      .def_readonly("order", &GaussRule::order)
      .def_readonly("nodes", &GaussRule::nodes)
      .def_readonly("weights", &GaussRule::weights);
  m.def("gauss_hermite_rule", &gauss_hermite_rule, py::arg("order"));
  m.def("weighted_exp_coefficients", &weighted_exp_coefficients, py::arg("rate"),
        py::arg("count"));

  // measures
  py::enum_<MeasureKind>(m, "MeasureKind")
      .value("gauss", MeasureKind::gauss)
      .value("equispaced", MeasureKind::equispaced)
      .value("truncated_lebesgue", MeasureKind::truncated_lebesgue);
  py::class_<SMZMeasure>(m, "SMZMeasure")
      .def_readonly("kind", &SMZMeasure::kind)
      .def_readonly("order", &SMZMeasure::order)
      .def_readonly("nodes", &SMZMeasure::nodes)
      .def_readonly("weights", &SMZMeasure::weights);
  py::class_<SmzReport>(m, "SmzReport")
      .def_readonly("ratio_lo", &SmzReport::ratio_lo)
      .def_readonly("ratio_hi", &SmzReport::ratio_hi)
      .def_readonly("tv_over_sqrt_m", &SmzReport::tv_over_sqrt_m);
  m.def("gauss_measure", &gauss_measure, py::arg("order"), py::arg("strict") = false);
  m.def("equispaced_measure", &equispaced_measure, py::arg("order"), py::arg("lo"), py::arg("hi"),
        py::arg("spacing") = 0.0, py::arg("strict") = false);
  m.def("truncated_lebesgue_measure", &truncated_lebesgue_measure, py::arg("order"),
        py::arg("strict") = false);
  m.def("restrict_to_window", &restrict_to_window, py::arg("measure"), py::arg("left"),
        py::arg("right"));
  m.def("validate_smz", &validate_smz, py::arg("measure"), py::arg("trials"),
        py::arg("seed") = 0x534d5aULL);

  // least squares
  py::class_<HermiteExpansion>(m, "HermiteExpansion")
      .def_readonly("coeffs", &HermiteExpansion::coeffs)
      .def_readonly("degree", &HermiteExpansion::degree)
      .def_readonly("quad_order", &HermiteExpansion::quad_order)
      .def_readonly("measure_kind", &HermiteExpansion::measure_kind);
  m.def("raw_coefficients", &raw_coefficients, py::arg("samples"), py::arg("measure"),
        py::arg("degree"));
  m.def("fit_expansion",
        py::overload_cast<const Eigen::VectorXd&, const SMZMeasure&, int>(&fit_expansion),
        py::arg("samples"), py::arg("measure"), py::arg("degree"));
  m.def("evaluate_expansion",
        py::overload_cast<const HermiteExpansion&, const Eigen::VectorXd&>(&evaluate),
        py::arg("expansion"), py::arg("xs"));
  m.def("fourier_transform", &fourier_transform, py::arg("expansion"), py::arg("omegas"));

  // spectrum
  py::class_<Peak>(m, "Peak")
      .def_readonly("x", &Peak::x)
      .def_readonly("height", &Peak::height);
  m.def("lowpass_profile", &lowpass_profile, py::arg("t"));
  m.def("demodulated_samples", &demodulated_samples, py::arg("expansion"), py::arg("delta"),
        py::arg("bandwidth"), py::arg("omega_max") = 6.0);
  m.def("sigma_sum", &sigma_sum, py::arg("mu_hat"), py::arg("bandwidth"), py::arg("x_grid"));
  m.def("detect_peak", &detect_peak, py::arg("sigma"), py::arg("x_grid"),
        py::arg("refine") = true);
  m.def("local_maxima", &local_maxima, py::arg("sigma"), py::arg("x_grid"),
        py::arg("max_count") = 8);
  m.def("rate_from_peak", &rate_from_peak, py::arg("x_star"), py::arg("delta"));

  // signal + simlab
  py::class_<SignalModel>(m, "SignalModel")
      .def_readonly("amplitudes", &SignalModel::amplitudes)
      .def_readonly("t2_ms", &SignalModel::t2_ms)
      .def_readonly("duration_ms", &SignalModel::duration_ms)
      .def_readonly("sample_count", &SignalModel::sample_count);
  m.def("make_model", &make_model, py::arg("amplitudes"), py::arg("t2_ms"),
        py::arg("duration_ms") = 320.0, py::arg("sample_count") = 64);
  m.def("time_grid_ms", &time_grid_ms, py::arg("model"));
  m.def("synthesize", &synthesize, py::arg("model"));
  m.def("model_value", &model_value, py::arg("model"), py::arg("t_ms"));
  m.def(
      "add_noise",
      [](const Eigen::VectorXd& samples, double snr, uint64_t seed, int index) {
        return add_noise(samples, make_noise_spec(snr, seed, 1), index);
      },
      py::arg("samples"), py::arg("snr"), py::arg("seed"), py::arg("index") = 0);

  // pipeline
  py::class_<L2FConfig>(m, "L2FConfig")
      .def(py::init<>())
      .def_readwrite("degree", &L2FConfig::degree)
      .def_readwrite("quad_order", &L2FConfig::quad_order)
      .def_readwrite("tau_ms", &L2FConfig::tau_ms)
      .def_readwrite("shift_schedule", &L2FConfig::shift_schedule)
      .def_readwrite("delta", &L2FConfig::delta)
      .def_readwrite("bandwidth", &L2FConfig::bandwidth)
      .def_readwrite("omega_max", &L2FConfig::omega_max)
      .def_readwrite("measure_kind", &L2FConfig::measure_kind)
      .def_readwrite("sigma_grid_size", &L2FConfig::sigma_grid_size)
      .def_readwrite("peak_refine", &L2FConfig::peak_refine);
  py::class_<ShiftRecord>(m, "ShiftRecord")
      .def_readonly("shift", &ShiftRecord::shift)
      .def_readonly("lambda_hat", &ShiftRecord::lambda_hat)
      .def_readonly("t22_hat_ms", &ShiftRecord::t22_hat_ms)
      .def_readonly("peak_height", &ShiftRecord::peak_height)
      .def_readonly("second_peak_height", &ShiftRecord::second_peak_height)
      .def_readonly("valid", &ShiftRecord::valid)
      .def_readonly("note", &ShiftRecord::note);
  py::class_<EstimationResult>(m, "EstimationResult")
      .def_readonly("a1", &EstimationResult::a1)
      .def_readonly("a2", &EstimationResult::a2)
      .def_readonly("t21_ms", &EstimationResult::t21_ms)
      .def_readonly("t22_ms", &EstimationResult::t22_ms)
      .def_readonly("solver_converged", &EstimationResult::solver_converged)
      .def_readonly("solver_iterations", &EstimationResult::solver_iterations)
      .def_readonly("residual_norm", &EstimationResult::residual_norm)
      .def_readonly("shift_used", &EstimationResult::shift_used)
      .def_readonly("failed", &EstimationResult::failed)
      .def_readonly("failure_reason", &EstimationResult::failure_reason);
  py::class_<L2FTrace>(m, "L2FTrace")
      .def_readonly("shifts", &L2FTrace::shifts)
      .def_readonly("chosen_index", &L2FTrace::chosen_index)
      .def_readonly("final_result", &L2FTrace::final_result);

  m.def(
      "estimate_t22",
      [](const SignalModel& model, const L2FConfig& cfg) {
        const SyntheticSource src(model);
        return estimate_t22(src, cfg);
      },
      py::arg("model"), py::arg("config") = L2FConfig{});
  m.def(
      "estimate_t22_sampled",
      [](const Eigen::VectorXd& times_ms, const Eigen::VectorXd& values, const L2FConfig& cfg) {
        const SampledSource src(times_ms, values);
        return estimate_t22(src, cfg);
      },
      py::arg("times_ms"), py::arg("values"), py::arg("config") = L2FConfig{});
  m.def(
      "run_l2f",
      [](const SignalModel& model, const L2FConfig& cfg, uint64_t seed) {
        const SyntheticSource src(model);
        return run_l2f(src, cfg, seed);
      },
      py::arg("model"), py::arg("config") = L2FConfig{}, py::arg("seed") = 0);
  m.def(
      "run_l2f_sampled",
      [](const Eigen::VectorXd& times_ms, const Eigen::VectorXd& values, const L2FConfig& cfg,
         uint64_t seed) {
        const SampledSource src(times_ms, values);
        return run_l2f(src, cfg, seed);
      },
      py::arg("times_ms"), py::arg("values"), py::arg("config") = L2FConfig{},
      py::arg("seed") = 0);
  m.def(
      "run_nlls_baseline",
      [](const Eigen::VectorXd& times_ms, const Eigen::VectorXd& values, uint64_t seed) {
        return run_nlls_baseline(times_ms, values, seed);
      },
      py::arg("times_ms"), py::arg("values"), py::arg("seed") = 0);

  // Monte Carlo
  m.def(
      "run_batch",
      [](const SignalModel& model, double snr, uint64_t seed, int realizations,
         const std::string& method, const L2FConfig& cfg, int jobs) {
        const Method m_kind = method == "nlls" ? Method::nlls : Method::l2f;
        const BatchRun run =
            run_batch(model, make_noise_spec(snr, seed, realizations), m_kind, cfg, jobs);
        py::list records;
        for (const auto& rec : run.records) records.append(rec);
        return py::make_tuple(stats_to_dict(run.stats), records);
      },
      py::arg("model"), py::arg("snr"), py::arg("seed"), py::arg("realizations"),
      py::arg("method") = "l2f", py::arg("config") = L2FConfig{}, py::arg("jobs") = 0);
  m.def("averaged_noise_functional", &averaged_noise_functional, py::arg("quad_order"),
        py::arg("degree"), py::arg("noise_bound"), py::arg("seed"), py::arg("m_values"),
        py::arg("repetitions") = 50);
}
