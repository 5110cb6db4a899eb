#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "l2f/leastsq.hpp"

namespace l2f {

/// Smooth even low-pass profile: 1 on [0, 1/2], 0 on [1, inf), infinitely
/// differentiable monotone transition in between.
double lowpass_profile(double t);

/// Demodulated Fourier samples mu_hat(j) = exp((j delta)^2 / 2) * FT(e)(-j delta)
/// for j = -N+1 .. N-1 (index j + N - 1). Requires delta * (N-1) <= omega_max,
/// the window over which the expansion's Fourier transform is trusted.
Eigen::VectorXcd demodulated_samples(const HermiteExpansion& e, double delta, int bandwidth,
                                     double omega_max = 6.0);

/// |sigma_N(x)| = |sum_{|l|<N} h(|l|/N) mu_hat(l) exp(i l x)| on the grid.
Eigen::VectorXd sigma_sum(const Eigen::VectorXcd& mu_hat, int bandwidth,
                          const Eigen::VectorXd& x_grid);

struct Peak {
  double x = 0.0;
  double height = 0.0;
};

/// Global argmax of the sampled |sigma|, ties broken toward smaller x.
/// With refine=true a three-point parabolic refinement is applied around the
/// grid argmax. Throws no_peak_error on all-zero input.
Peak detect_peak(const Eigen::VectorXd& sigma, const Eigen::VectorXd& x_grid,
                 bool refine = true);

/// Local maxima (periodic neighbor comparison), sorted by descending height.
std::vector<Peak> local_maxima(const Eigen::VectorXd& sigma, const Eigen::VectorXd& x_grid,
                               int max_count = 8);

/// Maps a peak abscissa back to a dimensionless decay rate.
double rate_from_peak(double x_star, double delta);

/// Evaluated spectrum of one shift: sampled coefficients, grid, detected peaks.
struct SpectrumEstimate {
  Eigen::VectorXcd mu_hat;
  double delta = 0.0;
  Eigen::VectorXd x_grid;
  Eigen::VectorXd abs_sigma;
  std::vector<Peak> peaks;
};

}  // namespace l2f
