#pragma once

#include <complex>
#include <optional>
#include <utility>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "l2f/measures.hpp"

namespace l2f {

/// Gram matrix of the psi basis under a discrete measure, with its Cholesky
/// factor. For the Gauss measure with order >= degree the matrix is the
/// identity and the solve is skipped.
struct GramSystem {
  int degree = 0;  // n
  bool identity = false;
  Eigen::MatrixXd gram;                 // n x n (empty when identity)
  Eigen::LLT<Eigen::MatrixXd> chol;     // factor of gram itself
  double cond_estimate = 1.0;           // from the Cholesky diagonal ratio
};

GramSystem build_gram(const SMZMeasure& mu, int degree);

/// Weighted least-squares fit sum_k d_k psi_k from samples on the measure's
/// nodes: coefficients d_k, window/measure metadata carried along.
struct HermiteExpansion {
  Eigen::VectorXd coeffs;
  int degree = 0;      // n
  int quad_order = 0;  // m of the measure used (0 when synthetic)
  MeasureKind measure_kind = MeasureKind::gauss;
  std::optional<std::pair<double, double>> window;
};

/// Raw projections f_hat(l) = sum_j w_j f(x_j) psi_l(x_j) for l < degree.
Eigen::VectorXd raw_coefficients(const Eigen::VectorXd& f_samples, const SMZMeasure& mu,
                                 int degree);

/// Solves gram * d = f_hat; minimizes the weighted residual over the span.
HermiteExpansion fit_expansion(const Eigen::VectorXd& f_samples, const SMZMeasure& mu,
                               int degree);
HermiteExpansion fit_expansion(const Eigen::VectorXd& f_samples, const SMZMeasure& mu,
                               const GramSystem& gram);

double evaluate(const HermiteExpansion& e, double x);
Eigen::VectorXd evaluate(const HermiteExpansion& e, const Eigen::VectorXd& xs);

/// Fourier transform of the expansion: sum_k d_k (-i)^k psi_k(omega).
Eigen::VectorXcd fourier_transform(const HermiteExpansion& e, const Eigen::VectorXd& omegas);

struct ErrorNorms {
  double l1 = 0.0;
  double linf = 0.0;
};

/// Trapezoid L1 norm and max norm of f - expansion on a uniform grid. The grid
/// must span at least [-2 sqrt(n) - 2, 2 sqrt(n) + 2].
ErrorNorms error_norms(const Eigen::VectorXd& f_fine, const HermiteExpansion& e,
                       const Eigen::VectorXd& grid);

}  // namespace l2f
