#pragma once

#include <memory>
#include <vector>

#include <Eigen/Dense>

namespace l2f {

/// Exact multiexponential ground truth: values(t) = sum_k A_k exp(-t / T2_k).
/// Decay constants are stored sorted ascending with amplitudes paired.
struct SignalModel {
  Eigen::VectorXd amplitudes;
  Eigen::VectorXd t2_ms;
  double duration_ms = 320.0;
  int sample_count = 64;
};

SignalModel make_model(std::vector<double> amplitudes, std::vector<double> t2_ms,
                       double duration_ms = 320.0, int sample_count = 64);

Eigen::VectorXd time_grid_ms(const SignalModel& model);

/// Noiseless samples on the model's equispaced grid.
Eigen::VectorXd synthesize(const SignalModel& model);

double model_value(const SignalModel& model, double t_ms);

/// A signal that the pipeline can interrogate: the original sample grid plus
/// point evaluation anywhere in [0, duration].
class SignalSource {
 public:
  virtual ~SignalSource() = default;
  virtual double value_at_ms(double t_ms) const = 0;
  virtual double duration_ms() const = 0;
  virtual const Eigen::VectorXd& sample_times_ms() const = 0;
  virtual const Eigen::VectorXd& sample_values() const = 0;
};

/// Noiseless model evaluated exactly at any requested time.
class SyntheticSource final : public SignalSource {
 public:
  explicit SyntheticSource(SignalModel model);
  double value_at_ms(double t_ms) const override;
  double duration_ms() const override { return model_.duration_ms; }
  const Eigen::VectorXd& sample_times_ms() const override { return times_; }
  const Eigen::VectorXd& sample_values() const override { return values_; }
  const SignalModel& model() const { return model_; }

 private:
  SignalModel model_;
  Eigen::VectorXd times_, values_;
};

/// Measured samples; off-grid evaluation by natural cubic spline.
class SampledSource final : public SignalSource {
 public:
  SampledSource(Eigen::VectorXd times_ms, Eigen::VectorXd values);
  double value_at_ms(double t_ms) const override;
  double duration_ms() const override { return times_[times_.size() - 1]; }
  const Eigen::VectorXd& sample_times_ms() const override { return times_; }
  const Eigen::VectorXd& sample_values() const override { return values_; }

 private:
  Eigen::VectorXd times_, values_, second_deriv_;
};

}  // namespace l2f
