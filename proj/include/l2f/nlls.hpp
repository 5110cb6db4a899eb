#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace l2f {

enum class ModelKind {
  biexp_full,       // parameters [A1, A2, T21, T22]
  biexp_fixed_t22,  // parameters [A1, A2, T21], T22 supplied as a constant
};

struct Bounds {
  Eigen::VectorXd lo;
  Eigen::VectorXd hi;
};

/// Box-constrained biexponential fitting problem in ms units.
struct FitProblem {
  Eigen::VectorXd times_ms;
  Eigen::VectorXd values;
  ModelKind kind = ModelKind::biexp_full;
  double fixed_t22 = 0.0;  // used only for biexp_fixed_t22
  Bounds bounds;           // per-parameter boxes
  Eigen::VectorXd initial;
  uint64_t seed = 0;
};

struct FitResult {
  Eigen::VectorXd params;
  double residual_norm = 0.0;
  int iterations = 0;
  bool converged = false;
  bool initial_clamped = false;
  std::vector<std::string> active_bounds;
};

int parameter_count(ModelKind kind);
std::vector<std::string> parameter_names(ModelKind kind);

/// Default boxes: amplitudes in [0, 1], decay constants in [1, 300] ms.
Bounds default_bounds(ModelKind kind);

/// Residuals r_i = model(t_i) - values_i and the analytic Jacobian.
void residual_jacobian(const Eigen::VectorXd& params, const FitProblem& prob,
                       Eigen::VectorXd& residual, Eigen::MatrixXd& jacobian);

/// Amplitudes uniform in (0,1); decay-constant guesses uniform in (0, 300)
/// clamped to [1, 300]. Deterministic per seed.
Eigen::VectorXd random_initial(ModelKind kind, uint64_t seed);

/// Levenberg-Marquardt with projection onto the box. Accepted steps never
/// increase the residual; convergence on step norm < 1e-10 * scale or
/// projected gradient norm < 1e-8, at most 400 iterations. Non-convergence is
/// reported through the result, not thrown.
FitResult solve_nlls(const FitProblem& prob);

/// Problem builder with default bounds and a seeded random initial point.
FitProblem make_biexp_problem(const Eigen::VectorXd& times_ms, const Eigen::VectorXd& values,
                              ModelKind kind, double fixed_t22, uint64_t seed);

}  // namespace l2f
