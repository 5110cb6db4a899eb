#pragma once

#include <Eigen/Dense>

namespace l2f {

// Orthonormal Hermite functions psi_k (L2(R)-orthonormal, Gaussian weight
// folded in) and the associated Gauss quadrature machinery.

/// psi_k(x), evaluated by the stable weighted three-term recurrence.
/// Throws std::domain_error for degree < 0.
double hermite_function(int degree, double x);

/// Rows 0..count-1 of psi evaluated on xs; one recurrence pass per point.
/// Result is count x xs.size().
Eigen::MatrixXd hermite_functions(int count, const Eigen::VectorXd& xs);

/// Gauss rule adapted to the weighted system: nodes are the zeros of psi_m
/// (descending) and weights w_k satisfy
///   sum_k w_k P(x_k) Q(x_k) = integral P Q dt   for P, Q spanned by psi_0..psi_{m-1}.
struct GaussRule {
  int order = 0;
  Eigen::VectorXd nodes;    // strictly decreasing, symmetric about 0
  Eigen::VectorXd weights;  // positive
};

/// Golub-Welsch eigensolve with Newton polish. Valid for 1 <= order <= 512.
GaussRule gauss_hermite_rule(int order);

/// Coefficients of exp(-rate*x - x^2/2) in the psi basis:
///   c_k = pi^{1/4} exp(rate^2/4) (-1)^k rate^k / (2^{k/2} sqrt(k!)),
/// computed in log space. Throws std::domain_error for rate < 0.
Eigen::VectorXd weighted_exp_coefficients(double rate, int count);

}  // namespace l2f
