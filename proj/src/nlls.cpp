#include "l2f/nlls.hpp"

#include <cmath>

#include "l2f/errors.hpp"
#include "l2f/numeric.hpp"

namespace l2f {

namespace {

constexpr int kMaxIterations = 400;
constexpr double kStepTol = 1e-10;
constexpr double kGradTol = 1e-8;

Eigen::VectorXd clamp_to(const Eigen::VectorXd& p, const Bounds& b) {
  return p.cwiseMax(b.lo).cwiseMin(b.hi);
}

// Gradient components pointing out of the box at an active bound do not count.
double projected_gradient_norm(const Eigen::VectorXd& g, const Eigen::VectorXd& p,
                               const Bounds& b) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    double gi = g[i];
    if (p[i] <= b.lo[i] && gi > 0.0) gi = 0.0;
    if (p[i] >= b.hi[i] && gi < 0.0) gi = 0.0;
    worst = std::max(worst, std::abs(gi));
  }
  return worst;
}

}  // namespace

int parameter_count(ModelKind kind) {
  return kind == ModelKind::biexp_full ? 4 : 3;
}

std::vector<std::string> parameter_names(ModelKind kind) {
  if (kind == ModelKind::biexp_full) return {"a1", "a2", "t21", "t22"};
  return {"a1", "a2", "t21"};
}

Bounds default_bounds(ModelKind kind) {
  const int n = parameter_count(kind);
  Bounds b;
  b.lo.resize(n);
  b.hi.resize(n);
  b.lo[0] = b.lo[1] = 0.0;
  b.hi[0] = b.hi[1] = 1.0;
  for (int i = 2; i < n; ++i) {
    b.lo[i] = 1.0;
    b.hi[i] = 300.0;
  }
  return b;
}

void residual_jacobian(const Eigen::VectorXd& params, const FitProblem& prob,
                       Eigen::VectorXd& residual, Eigen::MatrixXd& jacobian) {
  const int np = parameter_count(prob.kind);
  if (params.size() != np) throw shape_error("residual_jacobian: wrong parameter count");
  const Eigen::Index m = prob.times_ms.size();
  if (prob.values.size() != m)
    throw shape_error("residual_jacobian: times/values length mismatch");

  const double a1 = params[0], a2 = params[1], t21 = params[2];
  const double t22 = (prob.kind == ModelKind::biexp_full) ? params[3] : prob.fixed_t22;

  residual.resize(m);
  jacobian.resize(m, np);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double t = prob.times_ms[i];
    const double e1 = std::exp(-t / t21);
    const double e2 = std::exp(-t / t22);
    residual[i] = a1 * e1 + a2 * e2 - prob.values[i];
    jacobian(i, 0) = e1;
    jacobian(i, 1) = e2;
    jacobian(i, 2) = a1 * (t / (t21 * t21)) * e1;
    if (np == 4) jacobian(i, 3) = a2 * (t / (t22 * t22)) * e2;
  }
}

Eigen::VectorXd random_initial(ModelKind kind, uint64_t seed) {
  auto rng = rng_for(seed, 0x1e17);
  const int np = parameter_count(kind);
  Eigen::VectorXd p(np);
  p[0] = uniform01(rng);
  p[1] = uniform01(rng);
  for (int i = 2; i < np; ++i) p[i] = std::max(1.0, 300.0 * uniform01(rng));
  return p;
}

FitResult solve_nlls(const FitProblem& prob) {
  const int np = parameter_count(prob.kind);
  if (prob.bounds.lo.size() != np || prob.bounds.hi.size() != np)
    throw config_error("solve_nlls: bounds do not match the model");
  if (prob.initial.size() != np) throw config_error("solve_nlls: initial point missing");

  FitResult result;
  Eigen::VectorXd p = clamp_to(prob.initial, prob.bounds);
  result.initial_clamped = (p - prob.initial).cwiseAbs().maxCoeff() > 0.0;

  Eigen::VectorXd r;
  Eigen::MatrixXd J;
  residual_jacobian(p, prob, r, J);
  double cost = r.squaredNorm();

  // Initial damping of 1 makes the early steps Marquardt-scaled gradient
  // steps: the weakly-curved decay constant moves a long way before the
  // amplitudes can collapse onto a box face where it loses identifiability.
  double mu = 1.0;
  const double scale_ref = 1.0 + p.norm();
  result.converged = false;

  int iter = 0;
  for (; iter < kMaxIterations; ++iter) {
    const Eigen::VectorXd g = J.transpose() * r;
    if (projected_gradient_norm(g, p, prob.bounds) < kGradTol) {
      result.converged = true;
      break;
    }
    const Eigen::MatrixXd jtj = J.transpose() * J;
    const Eigen::VectorXd diag = jtj.diagonal().cwiseMax(1e-12);

    bool accepted = false;
    for (int tries = 0; tries < 60 && !accepted; ++tries) {
      Eigen::MatrixXd a = jtj;
      a.diagonal() += mu * diag;
      const Eigen::VectorXd step = a.ldlt().solve(-g);
      const Eigen::VectorXd candidate = clamp_to(p + step, prob.bounds);
      Eigen::VectorXd r_new;
      Eigen::MatrixXd J_new;
      residual_jacobian(candidate, prob, r_new, J_new);
      const double cost_new = r_new.squaredNorm();
      if (cost_new < cost) {
        const double moved = (candidate - p).norm();
        p = candidate;
        r.swap(r_new);
        J.swap(J_new);
        cost = cost_new;
        mu = std::max(mu / 3.0, 1e-14);
        accepted = true;
        if (moved < kStepTol * scale_ref) {
          result.converged = true;
        }
      } else {
        mu *= 4.0;
        if (mu > 1e14) break;
      }
    }
    if (!accepted || result.converged) {
      if (!accepted) {
        const Eigen::VectorXd g_final = J.transpose() * r;
        result.converged = projected_gradient_norm(g_final, p, prob.bounds) < kGradTol;
      }
      if (accepted) ++iter;
      break;
    }
  }

  result.params = p;
  result.residual_norm = std::sqrt(cost);
  result.iterations = iter;
  const auto names = parameter_names(prob.kind);
  for (int i = 0; i < np; ++i) {
    const double inset = 1e-9 * (prob.bounds.hi[i] - prob.bounds.lo[i]);
    if (p[i] <= prob.bounds.lo[i] + inset || p[i] >= prob.bounds.hi[i] - inset)
      result.active_bounds.push_back(names[i]);
  }
  return result;
}

FitProblem make_biexp_problem(const Eigen::VectorXd& times_ms, const Eigen::VectorXd& values,
                              ModelKind kind, double fixed_t22, uint64_t seed) {
  FitProblem prob;
  prob.times_ms = times_ms;
  prob.values = values;
  prob.kind = kind;
  prob.fixed_t22 = fixed_t22;
  prob.bounds = default_bounds(kind);
  prob.seed = seed;
  prob.initial = random_initial(kind, seed);
  return prob;
}

}  // namespace l2f
