#include "l2f/signal.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "l2f/errors.hpp"

namespace l2f {

SignalModel make_model(std::vector<double> amplitudes, std::vector<double> t2_ms,
                       double duration_ms, int sample_count) {
  if (amplitudes.size() != t2_ms.size() || amplitudes.empty())
    throw config_error("make_model: amplitudes and decay constants must pair up");
  if (duration_ms <= 0.0 || sample_count < 2)
    throw config_error("make_model: need positive duration and at least 2 samples");
  for (double a : amplitudes)
    if (a < 0.0) throw config_error("make_model: amplitudes must be nonnegative");
  for (double t2 : t2_ms)
    if (t2 <= 0.0) throw config_error("make_model: decay constants must be positive");

  std::vector<size_t> idx(t2_ms.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) { return t2_ms[a] < t2_ms[b]; });

  SignalModel model;
  model.amplitudes.resize(static_cast<Eigen::Index>(idx.size()));
  model.t2_ms.resize(static_cast<Eigen::Index>(idx.size()));
  for (size_t i = 0; i < idx.size(); ++i) {
    model.amplitudes[static_cast<Eigen::Index>(i)] = amplitudes[idx[i]];
    model.t2_ms[static_cast<Eigen::Index>(i)] = t2_ms[idx[i]];
  }
  model.duration_ms = duration_ms;
  model.sample_count = sample_count;
  return model;
}

Eigen::VectorXd time_grid_ms(const SignalModel& model) {
  return Eigen::VectorXd::LinSpaced(model.sample_count, 0.0, model.duration_ms);
}

double model_value(const SignalModel& model, double t_ms) {
  double acc = 0.0;
  for (Eigen::Index k = 0; k < model.amplitudes.size(); ++k)
    acc += model.amplitudes[k] * std::exp(-t_ms / model.t2_ms[k]);
  return acc;
}

Eigen::VectorXd synthesize(const SignalModel& model) {
  const Eigen::VectorXd times = time_grid_ms(model);
  Eigen::VectorXd values(times.size());
  for (Eigen::Index i = 0; i < times.size(); ++i) values[i] = model_value(model, times[i]);
  return values;
}

SyntheticSource::SyntheticSource(SignalModel model)
    : model_(std::move(model)), times_(time_grid_ms(model_)), values_(synthesize(model_)) {}

double SyntheticSource::value_at_ms(double t_ms) const { return model_value(model_, t_ms); }

SampledSource::SampledSource(Eigen::VectorXd times_ms, Eigen::VectorXd values)
    : times_(std::move(times_ms)), values_(std::move(values)) {
  const Eigen::Index n = times_.size();
  if (n < 3 || values_.size() != n)
    throw config_error("SampledSource: need at least 3 aligned samples");
  for (Eigen::Index i = 0; i + 1 < n; ++i)
    if (!(times_[i] < times_[i + 1]))
      throw config_error("SampledSource: times must be strictly increasing");

  // Natural cubic spline second derivatives (tridiagonal sweep).
  second_deriv_ = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd scratch = Eigen::VectorXd::Zero(n);
  for (Eigen::Index i = 1; i + 1 < n; ++i) {
    const double sig = (times_[i] - times_[i - 1]) / (times_[i + 1] - times_[i - 1]);
    const double p = sig * second_deriv_[i - 1] + 2.0;
    second_deriv_[i] = (sig - 1.0) / p;
    const double slope_hi = (values_[i + 1] - values_[i]) / (times_[i + 1] - times_[i]);
    const double slope_lo = (values_[i] - values_[i - 1]) / (times_[i] - times_[i - 1]);
    scratch[i] =
        (6.0 * (slope_hi - slope_lo) / (times_[i + 1] - times_[i - 1]) - sig * scratch[i - 1]) / p;
  }
  for (Eigen::Index i = n - 2; i >= 1; --i)
    second_deriv_[i] = second_deriv_[i] * second_deriv_[i + 1] + scratch[i];
  second_deriv_[0] = second_deriv_[n - 1] = 0.0;
}

double SampledSource::value_at_ms(double t_ms) const {
  const Eigen::Index n = times_.size();
  const double t = std::clamp(t_ms, times_[0], times_[n - 1]);
  Eigen::Index lo = 0, hi = n - 1;
  while (hi - lo > 1) {
    const Eigen::Index mid = (lo + hi) / 2;
    (times_[mid] > t ? hi : lo) = mid;
  }
  const double h = times_[hi] - times_[lo];
  const double a = (times_[hi] - t) / h;
  const double b = (t - times_[lo]) / h;
  return a * values_[lo] + b * values_[hi] +
         ((a * a * a - a) * second_deriv_[lo] + (b * b * b - b) * second_deriv_[hi]) * h * h / 6.0;
}

}  // namespace l2f
