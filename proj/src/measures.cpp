#include "l2f/measures.hpp"

#include <cmath>
#include <sstream>

#include "l2f/errors.hpp"
#include "l2f/hermite.hpp"
#include "l2f/numeric.hpp"

namespace l2f {

namespace {

constexpr double kEquispacedSpacingFactor = 0.25;  // c1 in spacing <= c1 m^{-1/2}

void check_strict(const SMZMeasure& mu) {
  const SmzReport report = validate_smz(mu, 200);
  double lo = 0.75, hi = 1.25;
  if (mu.kind == MeasureKind::gauss) {
    lo = 1.0 - 1e-10;
    hi = 1.0 + 1e-10;
  }
  if (report.ratio_lo < lo || report.ratio_hi > hi) {
    std::ostringstream msg;
    msg << "measure validation failed (" << to_string(mu.kind) << ", m=" << mu.order
        << "): L2 ratio range [" << report.ratio_lo << ", " << report.ratio_hi
        << "] outside [" << lo << ", " << hi << "]";
    throw numeric_error(msg.str());
  }
}

}  // namespace

std::string to_string(MeasureKind kind) {
  switch (kind) {
    case MeasureKind::gauss: return "gauss";
    case MeasureKind::equispaced: return "equispaced";
    case MeasureKind::truncated_lebesgue: return "truncated_lebesgue";
  }
  return "unknown";
}

MeasureKind measure_kind_from_string(const std::string& name) {
  if (name == "gauss") return MeasureKind::gauss;
  if (name == "equispaced") return MeasureKind::equispaced;
  if (name == "truncated_lebesgue") return MeasureKind::truncated_lebesgue;
  throw config_error("unknown measure kind: " + name);
}

SMZMeasure gauss_measure(int order, bool strict) {
  const GaussRule rule = gauss_hermite_rule(order);
  SMZMeasure mu;
  mu.kind = MeasureKind::gauss;
  mu.order = order;
  mu.nodes = rule.nodes;
  mu.weights = rule.weights;
  if (strict) check_strict(mu);
  return mu;
}

SMZMeasure equispaced_measure(int order, double lo, double hi, double spacing, bool strict) {
  if (order < 1) throw config_error("equispaced_measure: order must be >= 1");
  if (!(hi > lo)) throw config_error("equispaced_measure: empty interval");
  const double reach = std::sqrt(2.0 * order);
  if (lo > -reach || hi < reach) {
    std::ostringstream msg;
    msg << "equispaced_measure: interval [" << lo << ", " << hi
        << "] does not cover [-sqrt(2m), sqrt(2m)] = [" << -reach << ", " << reach << "]";
    throw config_error(msg.str());
  }
  const double max_spacing = kEquispacedSpacingFactor / std::sqrt(static_cast<double>(order));
  if (spacing == 0.0) spacing = max_spacing;
  if (spacing > max_spacing * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "equispaced_measure: spacing " << spacing << " exceeds the bound "
        << max_spacing << " = (1/4) m^{-1/2} for m=" << order;
    throw config_error(msg.str());
  }
  const int gaps = static_cast<int>(std::ceil((hi - lo) / spacing - 1e-12));
  const double step = (hi - lo) / gaps;

  // Each node carries the gap below it; the lowest grid point carries nothing
  // and is dropped so that all weights stay positive.
  SMZMeasure mu;
  mu.kind = MeasureKind::equispaced;
  mu.order = order;
  mu.nodes.resize(gaps);
  for (int i = 0; i < gaps; ++i) mu.nodes[i] = hi - i * step;
  mu.weights = Eigen::VectorXd::Constant(gaps, step);
  if (strict) check_strict(mu);
  return mu;
}

SMZMeasure truncated_lebesgue_measure(int order, bool strict) {
  const double edge = 2.0 * std::sqrt(static_cast<double>(order));
  SMZMeasure mu = equispaced_measure(order, -edge, edge, 0.0, false);
  mu.kind = MeasureKind::truncated_lebesgue;
  if (strict) check_strict(mu);
  return mu;
}

SMZMeasure restrict_to_window(const SMZMeasure& mu, double left, double right) {
  std::ostringstream offenders;
  int bad = 0;
  for (Eigen::Index i = 0; i < mu.nodes.size(); ++i) {
    if (mu.nodes[i] < -left || mu.nodes[i] > right) {
      if (bad < 4) offenders << (bad ? ", " : "") << mu.nodes[i];
      ++bad;
    }
  }
  if (bad > 0) {
    std::ostringstream msg;
    msg << "restrict_to_window: " << bad << " node(s) outside [" << -left << ", " << right
        << "]: " << offenders.str() << (bad > 4 ? ", ..." : "");
    throw support_error(msg.str());
  }
  SMZMeasure out = mu;
  out.window = std::make_pair(left, right);
  return out;
}

SmzReport validate_smz(const SMZMeasure& mu, int trials, uint64_t seed) {
  if (trials < 1) throw config_error("validate_smz: trials must be >= 1");
  const int m = mu.order;
  const Eigen::MatrixXd psi = hermite_functions(m, mu.nodes);  // m x nodes

  SmzReport report;
  report.tv_over_sqrt_m = mu.weights.sum() / std::sqrt(static_cast<double>(m));
  report.ratio_lo = std::numeric_limits<double>::infinity();
  report.ratio_hi = 0.0;

  auto rng = rng_for(seed);
  GaussianDraw draw;
  Eigen::VectorXd coeffs(m);
  for (int t = 0; t < trials; ++t) {
    for (int k = 0; k < m; ++k) coeffs[k] = draw(rng);
    const Eigen::VectorXd values = psi.transpose() * coeffs;  // P at the nodes
    const double discrete = mu.weights.dot(values.cwiseAbs2());
    const double exact = coeffs.squaredNorm();  // = integral |P|^2 dt
    const double ratio = discrete / exact;
    report.ratio_lo = std::min(report.ratio_lo, ratio);
    report.ratio_hi = std::max(report.ratio_hi, ratio);
  }
  return report;
}

}  // namespace l2f
