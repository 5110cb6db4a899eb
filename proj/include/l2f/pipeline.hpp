#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "l2f/leastsq.hpp"
#include "l2f/measures.hpp"
#include "l2f/nlls.hpp"
#include "l2f/signal.hpp"
#include "l2f/spectrum.hpp"

namespace l2f {

/// End-to-end configuration. Time is rescaled by tau_ms so that the sampling
/// window maps onto the quadrature node span; decay constants map to
/// dimensionless rates lambda' = tau / T2.
struct L2FConfig {
  int degree = 32;       // n
  int quad_order = 32;   // m
  double tau_ms = 20.0;  // ms per dimensionless time unit
  std::vector<double> shift_schedule;  // dimensionless; empty selects the default
  double delta = 0.0;    // omega step; 0 selects omega_max / (bandwidth - 1)
  int bandwidth = 60;    // N; calibrated against the noiseless reference estimate
  double omega_max = 6.0;
  MeasureKind measure_kind = MeasureKind::gauss;
  int sigma_grid_size = 4096;
  bool peak_refine = false;  // see README: quantized peak readout by default
};

double resolved_delta(const L2FConfig& cfg);

/// Shifts actually used for a given signal duration: the configured schedule,
/// or 8 values equispaced over the feasible part of [0.3 T', 0.7 T'].
std::vector<double> resolved_shift_schedule(const L2FConfig& cfg, double duration_units,
                                            double node_reach);

struct ShiftRecord {
  double shift = 0.0;            // L (dimensionless)
  double lambda_hat = 0.0;       // dimensionless rate at the detected peak
  double t22_hat_ms = 0.0;
  double peak_height = 0.0;
  double second_peak_height = 0.0;  // 0 when the spectrum has a single maximum
  bool valid = false;            // peak found and T22 within [1, 300] ms
  std::string note;
};

struct EstimationResult {
  double a1 = 0.0, a2 = 0.0;
  double t21_ms = 0.0, t22_ms = 0.0;
  bool solver_converged = false;
  int solver_iterations = 0;
  double residual_norm = 0.0;
  double shift_used = 0.0;
  uint64_t seed = 0;
  int realization_index = -1;
  bool failed = false;
  std::string failure_reason;
};

struct L2FTrace {
  std::vector<ShiftRecord> shifts;
  int chosen_index = -1;
  EstimationResult final_result;
};

/// t' = t / tau; values unchanged. Rates transform as lambda' = lambda * tau.
struct RescaledSamples {
  Eigen::VectorXd times;  // dimensionless
  Eigen::VectorXd values;
};
RescaledSamples rescale(const Eigen::VectorXd& times_ms, const Eigen::VectorXd& values,
                        double tau_ms);

/// Values of the left-shifted signal times the Gaussian weight at the given
/// dimensionless nodes: src((t + shift) * tau) * exp(-t^2/2). Nodes must lie in
/// [-shift, T' - shift].
Eigen::VectorXd shift_and_weight(const SignalSource& src, double tau_ms, double shift,
                                 const Eigen::VectorXd& nodes);

/// Sweeps the shift schedule, expands, demodulates, filters and reads the
/// dominant peak per shift; picks the largest shift whose estimate agrees with
/// its predecessor within 1%, else the shift with the cleanest peak.
L2FTrace estimate_t22(const SignalSource& src, const L2FConfig& cfg);

/// Full pipeline: estimate T22, then fit (A1, A2, T21) by bound-constrained
/// NLLS on the original ms-domain samples with T22 held fixed.
EstimationResult run_l2f(const SignalSource& src, const L2FConfig& cfg, uint64_t seed,
                         L2FTrace* trace_out = nullptr);

/// Four-parameter NLLS baseline with the same bounds and random initialization.
/// initial_override replaces the seeded random start when provided.
EstimationResult run_nlls_baseline(const Eigen::VectorXd& times_ms, const Eigen::VectorXd& values,
                                   uint64_t seed, const Eigen::VectorXd* initial_override = nullptr);

/// One evaluated spectrum for a fixed shift (the cmd-spectrum / trace payload).
SpectrumEstimate spectrum_for_shift(const SignalSource& src, const L2FConfig& cfg, double shift);

}  // namespace l2f
