#include "l2f/hermite.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "l2f/errors.hpp"

namespace l2f {

namespace {

constexpr double kPiQuarterInv = 0.7511255444649425;  // pi^{-1/4}

// One recurrence pass, writing psi_0..psi_{count-1}(x) into out (stride 1 ok).
inline void psi_column(int count, double x, double* out) {
  double prev = 0.0;
  double cur = kPiQuarterInv * std::exp(-0.5 * x * x);
  for (int k = 0; k < count; ++k) {
    out[k] = cur;
    const double next =
        x * std::sqrt(2.0 / (k + 1)) * cur - std::sqrt(static_cast<double>(k) / (k + 1)) * prev;
    prev = cur;
    cur = next;
  }
}

}  // namespace

double hermite_function(int degree, double x) {
  if (degree < 0) throw std::domain_error("hermite_function: degree must be >= 0");
  double prev = 0.0;
  double cur = kPiQuarterInv * std::exp(-0.5 * x * x);
  for (int k = 0; k < degree; ++k) {
    const double next =
        x * std::sqrt(2.0 / (k + 1)) * cur - std::sqrt(static_cast<double>(k) / (k + 1)) * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

Eigen::MatrixXd hermite_functions(int count, const Eigen::VectorXd& xs) {
  if (count < 1) throw std::domain_error("hermite_functions: count must be >= 1");
  Eigen::MatrixXd out(count, xs.size());
  Eigen::VectorXd col(count);
  for (Eigen::Index j = 0; j < xs.size(); ++j) {
    psi_column(count, xs[j], col.data());
    out.col(j) = col;
  }
  return out;
}

GaussRule gauss_hermite_rule(int order) {
  if (order < 1 || order > 512)
    throw config_error("gauss_hermite_rule: order must be in [1, 512], got " +
                       std::to_string(order));

  GaussRule rule;
  rule.order = order;

  if (order == 1) {
    rule.nodes = Eigen::VectorXd::Zero(1);
    rule.weights = Eigen::VectorXd::Constant(1, std::sqrt(M_PI));  // 1/psi_0(0)^2
    return rule;
  }

  // Jacobi matrix of the orthonormal Hermite polynomials: zero diagonal,
  // off-diagonal sqrt(k/2). Eigenvalues are the zeros of psi_order.
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(order);
  Eigen::VectorXd sub(order - 1);
  for (int k = 1; k < order; ++k) sub[k - 1] = std::sqrt(0.5 * k);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw numeric_error("gauss_hermite_rule: tridiagonal eigensolve failed");
  Eigen::VectorXd nodes = solver.eigenvalues();  // ascending

  // Newton polish: psi_m'(x) = -x psi_m(x) + sqrt(2m) psi_{m-1}(x).
  const double root2m = std::sqrt(2.0 * order);
  for (int i = 0; i < order; ++i) {
    for (int it = 0; it < 3; ++it) {
      const double pm = hermite_function(order, nodes[i]);
      const double pm1 = hermite_function(order - 1, nodes[i]);
      const double deriv = -nodes[i] * pm + root2m * pm1;
      if (deriv == 0.0) throw numeric_error("gauss_hermite_rule: zero derivative at node " +
                                            std::to_string(i));
      const double step = pm / deriv;
      nodes[i] -= step;
      if (std::abs(step) < 1e-15 * (1.0 + std::abs(nodes[i]))) break;
    }
  }

  // Enforce the exact symmetry of the node set.
  for (int i = 0; i < order / 2; ++i) {
    const double t = 0.5 * (nodes[order - 1 - i] - nodes[i]);
    nodes[order - 1 - i] = t;
    nodes[i] = -t;
  }
  if (order % 2 == 1) nodes[order / 2] = 0.0;

  for (int i = 0; i + 1 < order; ++i)
    if (!(nodes[i] < nodes[i + 1]))
      throw numeric_error("gauss_hermite_rule: node ordering lost at index " + std::to_string(i));

  // Christoffel weights of the weighted system: w_k = 1 / sum_{j<m} psi_j(x_k)^2.
  // This equals lambda_k exp(x_k^2) with lambda_k the classical Gauss-Hermite
  // weight, but never forms the overflowing factors.
  Eigen::MatrixXd psi = hermite_functions(order, nodes);
  Eigen::VectorXd weights(order);
  for (int i = 0; i < order; ++i) {
    const double k_xx = psi.col(i).squaredNorm();
    if (!(k_xx > 0.0))
      throw numeric_error("gauss_hermite_rule: degenerate Christoffel sum at node " +
                          std::to_string(i));
    weights[i] = 1.0 / k_xx;
  }

  // Descending node order.
  rule.nodes = nodes.reverse();
  rule.weights = weights.reverse();
  return rule;
}

Eigen::VectorXd weighted_exp_coefficients(double rate, int count) {
  if (rate < 0.0) throw std::domain_error("weighted_exp_coefficients: rate must be >= 0");
  if (count < 1) throw std::domain_error("weighted_exp_coefficients: count must be >= 1");
  Eigen::VectorXd out = Eigen::VectorXd::Zero(count);
  const double lead = 0.25 * std::log(M_PI) + 0.25 * rate * rate;
  out[0] = std::exp(lead);
  if (rate == 0.0) return out;
  const double log_rate = std::log(rate);
  for (int k = 1; k < count; ++k) {
    const double log_mag =
        lead + k * log_rate - 0.5 * k * std::log(2.0) - 0.5 * std::lgamma(k + 1.0);
    out[k] = ((k % 2) ? -1.0 : 1.0) * std::exp(log_mag);
  }
  return out;
}

}  // namespace l2f
