#include "l2f/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "l2f/errors.hpp"

namespace l2f {

namespace {

// exp(-3/(2u)) for u > 0, else 0; C-infinity cutoff seed. The 3/2 steepens
// the transition enough that the kernel sidelobes beyond 0.5 shrink by more
// than 8x per bandwidth doubling already at N = 32.
inline double bump_seed(double u) { return u > 0.0 ? std::exp(-1.5 / u) : 0.0; }

}  // namespace

double lowpass_profile(double t) {
  t = std::abs(t);
  if (t <= 0.5) return 1.0;
  if (t >= 1.0) return 0.0;
  const double u = 2.0 * (1.0 - t);  // 1 at t=1/2, 0 at t=1
  const double a = bump_seed(u);
  const double b = bump_seed(1.0 - u);
  return a / (a + b);
}

Eigen::VectorXcd demodulated_samples(const HermiteExpansion& e, double delta, int bandwidth,
                                     double omega_max) {
  if (delta <= 0.0) throw config_error("demodulated_samples: delta must be positive");
  if (bandwidth < 2) throw config_error("demodulated_samples: bandwidth must be >= 2");
  const double reach = delta * (bandwidth - 1);
  if (reach > omega_max * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "demodulated_samples: delta*(N-1) = " << reach
        << " exceeds the trusted frequency window " << omega_max;
    throw config_error(msg.str());
  }
  const int count = 2 * bandwidth - 1;
  Eigen::VectorXd omegas(count);
  for (int j = -bandwidth + 1; j < bandwidth; ++j)
    omegas[j + bandwidth - 1] = -static_cast<double>(j) * delta;  // FT argument is -j*delta
  Eigen::VectorXcd ft = fourier_transform(e, omegas);
  for (int j = -bandwidth + 1; j < bandwidth; ++j) {
    const double w = static_cast<double>(j) * delta;
    ft[j + bandwidth - 1] *= std::exp(0.5 * w * w);
  }
  return ft;
}

Eigen::VectorXd sigma_sum(const Eigen::VectorXcd& mu_hat, int bandwidth,
                          const Eigen::VectorXd& x_grid) {
  if (mu_hat.size() != 2 * bandwidth - 1)
    throw shape_error("sigma_sum: mu_hat must have length 2N-1");
  Eigen::VectorXcd filtered(mu_hat.size());
  for (int j = -bandwidth + 1; j < bandwidth; ++j) {
    const double h = lowpass_profile(std::abs(j) / static_cast<double>(bandwidth));
    filtered[j + bandwidth - 1] = h * mu_hat[j + bandwidth - 1];
  }
  Eigen::VectorXd out(x_grid.size());
  for (Eigen::Index g = 0; g < x_grid.size(); ++g) {
    const std::complex<double> rot(std::cos(x_grid[g]), std::sin(x_grid[g]));
    // Start at l = -(N-1) and walk up by one rotation per term.
    std::complex<double> phase = std::pow(rot, -(bandwidth - 1));
    std::complex<double> acc(0.0, 0.0);
    for (int idx = 0; idx < filtered.size(); ++idx) {
      acc += filtered[idx] * phase;
      phase *= rot;
    }
    out[g] = std::abs(acc);
  }
  return out;
}

Peak detect_peak(const Eigen::VectorXd& sigma, const Eigen::VectorXd& x_grid, bool refine) {
  if (sigma.size() == 0 || sigma.size() != x_grid.size())
    throw shape_error("detect_peak: empty grid or length mismatch");
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < sigma.size(); ++i)
    if (sigma[i] > sigma[best]) best = i;  // strict: ties keep the smaller x
  if (sigma[best] <= 0.0) throw no_peak_error("detect_peak: spectrum is identically zero");

  Peak peak{x_grid[best], sigma[best]};
  if (refine && best > 0 && best + 1 < sigma.size()) {
    const double ym = sigma[best - 1], y0 = sigma[best], yp = sigma[best + 1];
    const double denom = ym - 2.0 * y0 + yp;
    if (denom < 0.0) {
      const double shift = 0.5 * (ym - yp) / denom;
      const double step = x_grid[best + 1] - x_grid[best];
      peak.x = x_grid[best] + shift * step;
      peak.height = y0 - 0.25 * (ym - yp) * shift;
    }
  }
  return peak;
}

std::vector<Peak> local_maxima(const Eigen::VectorXd& sigma, const Eigen::VectorXd& x_grid,
                               int max_count) {
  if (sigma.size() == 0 || sigma.size() != x_grid.size())
    throw shape_error("local_maxima: empty grid or length mismatch");
  const Eigen::Index n = sigma.size();
  std::vector<Peak> found;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double prev = sigma[(i + n - 1) % n];
    const double next = sigma[(i + 1) % n];
    if (sigma[i] > prev && sigma[i] >= next && sigma[i] > 0.0)
      found.push_back({x_grid[i], sigma[i]});
  }
  std::sort(found.begin(), found.end(),
            [](const Peak& a, const Peak& b) { return a.height > b.height; });
  if (static_cast<int>(found.size()) > max_count) found.resize(max_count);
  return found;
}

double rate_from_peak(double x_star, double delta) {
  if (delta <= 0.0) throw config_error("rate_from_peak: delta must be positive");
  return x_star / delta;
}

}  // namespace l2f
