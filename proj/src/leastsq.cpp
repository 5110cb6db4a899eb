#include "l2f/leastsq.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "l2f/errors.hpp"
#include "l2f/hermite.hpp"
#include "l2f/numeric.hpp"

namespace l2f {

GramSystem build_gram(const SMZMeasure& mu, int degree) {
  if (degree < 1) throw config_error("build_gram: degree must be >= 1");
  if (degree > mu.order)
    throw config_error("build_gram: degree exceeds measure order (" + std::to_string(degree) +
                       " > " + std::to_string(mu.order) + ")");
  GramSystem gs;
  gs.degree = degree;
  if (mu.kind == MeasureKind::gauss) {
    gs.identity = true;
    return gs;
  }
  const Eigen::MatrixXd psi = hermite_functions(degree, mu.nodes);  // n x nodes
  gs.gram = psi * mu.weights.asDiagonal() * psi.transpose();
  gs.gram = 0.5 * (gs.gram + gs.gram.transpose().eval());  // exact symmetry
  gs.chol.compute(gs.gram);
  if (gs.chol.info() != Eigen::Success)
    throw numeric_error("build_gram: Cholesky failed; measure is not positive definite on the span");
  const Eigen::VectorXd diag = gs.chol.matrixL().toDenseMatrix().diagonal();
  const double dmax = diag.maxCoeff(), dmin = diag.minCoeff();
  gs.cond_estimate = (dmax / dmin) * (dmax / dmin);
  if (gs.cond_estimate > 1e6)
    std::fprintf(stderr, "build_gram: ill-conditioned system, cond estimate %.3g\n",
                 gs.cond_estimate);
  return gs;
}

Eigen::VectorXd raw_coefficients(const Eigen::VectorXd& f_samples, const SMZMeasure& mu,
                                 int degree) {
  if (f_samples.size() != mu.nodes.size()) {
    std::ostringstream msg;
    msg << "raw_coefficients: " << f_samples.size() << " samples for " << mu.nodes.size()
        << " nodes";
    throw shape_error(msg.str());
  }
  if (degree < 1 || degree > mu.order)
    throw config_error("raw_coefficients: degree must be in [1, order]");
  const Eigen::MatrixXd psi = hermite_functions(degree, mu.nodes);
  return psi * mu.weights.cwiseProduct(f_samples).matrix();
}

HermiteExpansion fit_expansion(const Eigen::VectorXd& f_samples, const SMZMeasure& mu,
                               int degree) {
  return fit_expansion(f_samples, mu, build_gram(mu, degree));
}

HermiteExpansion fit_expansion(const Eigen::VectorXd& f_samples, const SMZMeasure& mu,
                               const GramSystem& gram) {
  HermiteExpansion e;
  e.degree = gram.degree;
  e.quad_order = mu.order;
  e.measure_kind = mu.kind;
  e.window = mu.window;
  const Eigen::VectorXd rhs = raw_coefficients(f_samples, mu, gram.degree);
  e.coeffs = gram.identity ? rhs : gram.chol.solve(rhs);
  return e;
}

double evaluate(const HermiteExpansion& e, double x) {
  Eigen::VectorXd xs(1);
  xs[0] = x;
  return evaluate(e, xs)[0];
}

Eigen::VectorXd evaluate(const HermiteExpansion& e, const Eigen::VectorXd& xs) {
  const Eigen::MatrixXd psi = hermite_functions(e.degree, xs);
  return psi.transpose() * e.coeffs;
}

Eigen::VectorXcd fourier_transform(const HermiteExpansion& e, const Eigen::VectorXd& omegas) {
  const Eigen::MatrixXd psi = hermite_functions(e.degree, omegas);
  // (-i)^k cycles through 1, -i, -1, i.
  Eigen::VectorXd re = Eigen::VectorXd::Zero(omegas.size());
  Eigen::VectorXd im = Eigen::VectorXd::Zero(omegas.size());
  for (int k = 0; k < e.degree; ++k) {
    const Eigen::VectorXd term = e.coeffs[k] * psi.row(k).transpose();
    switch (k % 4) {
      case 0: re += term; break;
      case 1: im -= term; break;
      case 2: re -= term; break;
      case 3: im += term; break;
    }
  }
  Eigen::VectorXcd out(omegas.size());
  out.real() = re;
  out.imag() = im;
  return out;
}

ErrorNorms error_norms(const Eigen::VectorXd& f_fine, const HermiteExpansion& e,
                       const Eigen::VectorXd& grid) {
  if (grid.size() < 2) throw config_error("error_norms: grid must have at least 2 points");
  if (f_fine.size() != grid.size())
    throw shape_error("error_norms: sample/grid length mismatch");
  const double reach = 2.0 * std::sqrt(static_cast<double>(e.degree)) + 2.0;
  if (grid[0] > -reach || grid[grid.size() - 1] < reach) {
    std::ostringstream msg;
    msg << "error_norms: grid [" << grid[0] << ", " << grid[grid.size() - 1]
        << "] must span at least [" << -reach << ", " << reach << "]";
    throw config_error(msg.str());
  }
  const double step = grid[1] - grid[0];
  const Eigen::VectorXd diff = (f_fine - evaluate(e, grid)).cwiseAbs();
  ErrorNorms norms;
  norms.l1 = trapezoid(diff, step);
  norms.linf = diff.maxCoeff();
  return norms;
}

}  // namespace l2f
