#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include <Eigen/Dense>

namespace l2f {

enum class MeasureKind { gauss, equispaced, truncated_lebesgue };

std::string to_string(MeasureKind kind);
MeasureKind measure_kind_from_string(const std::string& name);

/// Discrete positive measure with the strong Marcinkiewicz-Zygmund property
/// of order m: weighted-polynomial L2 norms over the nodes match the continuum
/// up to fixed constants, and the total mass behaves like sqrt(m).
struct SMZMeasure {
  MeasureKind kind = MeasureKind::gauss;
  int order = 0;            // m
  Eigen::VectorXd nodes;    // strictly decreasing
  Eigen::VectorXd weights;  // positive, aligned with nodes
  std::optional<std::pair<double, double>> window;  // certified [-L, R]
};

struct SmzReport {
  double ratio_lo = 0.0;    // min over trials of discrete/continuum L2 ratio
  double ratio_hi = 0.0;    // max over trials
  double tv_over_sqrt_m = 0.0;
};

/// Gauss rule of the given order wrapped as a measure. With strict=true the
/// construction is validated by validate_smz and aborts on failure.
SMZMeasure gauss_measure(int order, bool strict = false);

/// Equispaced nodes on [lo, hi], each (except the lowest grid point) carrying
/// the gap below it as mass. Requires [lo, hi] to cover [-sqrt(2m), sqrt(2m)]
/// and spacing <= (1/4) m^{-1/2}; spacing = 0 selects that default.
SMZMeasure equispaced_measure(int order, double lo, double hi, double spacing = 0.0,
                              bool strict = false);

/// Riemann discretization of the Lebesgue measure restricted to
/// [-2 sqrt(m), 2 sqrt(m)], which carries the full L2 mass of any P in Pi_m.
SMZMeasure truncated_lebesgue_measure(int order, bool strict = false);

/// Certifies supp(mu) within [-L, R] and records the window in the metadata.
/// Throws support_error naming the offending nodes otherwise.
SMZMeasure restrict_to_window(const SMZMeasure& mu, double left, double right);

/// Monte Carlo check of the MZ sandwich: draws random coefficient vectors,
/// forms P in Pi_m, and compares the discrete quadratic form against the exact
/// L2 norm (= the coefficient norm, by orthonormality).
SmzReport validate_smz(const SMZMeasure& mu, int trials, uint64_t seed = 0x534d5aULL);

}  // namespace l2f
