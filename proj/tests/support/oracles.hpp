#pragma once

// Test-only reference implementations, deliberately independent of the library
// code paths they are used to check.

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace oracles {

// Orthonormal Hermite function via the explicit physicists' polynomial for
// small degree, evaluated in extended precision.
inline long double hermite_poly_explicit(int degree, long double x) {
  switch (degree) {
    case 0: return 1.0L;
    case 1: return 2.0L * x;
    case 2: return 4.0L * x * x - 2.0L;
    case 3: return 8.0L * x * x * x - 12.0L * x;
    case 4: return 16.0L * x * x * x * x - 48.0L * x * x + 12.0L;
    case 5: return 32.0L * powl(x, 5) - 160.0L * x * x * x + 120.0L * x;
    case 6: return 64.0L * powl(x, 6) - 480.0L * powl(x, 4) + 720.0L * x * x - 60.0L;
    default: return tgammal(-1.0L);  // NaN: extend the table if needed
  }
}

inline long double psi_explicit(int degree, long double x) {
  long double norm = sqrtl(M_PIl);
  for (int k = 1; k <= degree; ++k) norm *= 2.0L * k;
  return hermite_poly_explicit(degree, x) * expl(-0.5L * x * x) / sqrtl(norm);
}

// Composite Simpson rule in long double.
inline long double integrate(const std::function<long double(long double)>& f, long double lo,
                             long double hi, int panels = 4000) {
  const long double h = (hi - lo) / (2 * panels);
  long double acc = f(lo) + f(hi);
  for (int i = 1; i < 2 * panels; ++i) acc += f(lo + i * h) * ((i % 2) ? 4.0L : 2.0L);
  return acc * h / 3.0L;
}

// Trapezoid Fourier transform (2 pi)^{-1/2} int f(t) e^{-i w t} dt of a
// callable sampled on [-span, span] with the given step.
inline std::complex<double> fourier_of(const std::function<double(double)>& f, double omega,
                                       double span = 30.0, double step = 0.01) {
  const int n = static_cast<int>(std::round(2.0 * span / step));
  long double re = 0.0L, im = 0.0L;
  for (int i = 0; i <= n; ++i) {
    const double t = -span + i * step;
    const double w = (i == 0 || i == n) ? 0.5 : 1.0;
    const double v = f(t) * w;
    re += v * std::cos(omega * t);
    im -= v * std::sin(omega * t);
  }
  const double scale = step / std::sqrt(2.0 * M_PI);
  return {static_cast<double>(re) * scale, static_cast<double>(im) * scale};
}

// Closed-form Fourier transform of exp(-rate*t - t^2/2):
// (2 pi)^{-1/2} integral = exp((rate + i w)^2 / 2).
inline std::complex<double> weighted_exp_ft(double rate, double omega) {
  const double mag = std::exp(0.5 * (rate * rate - omega * omega));
  return {mag * std::cos(rate * omega), mag * std::sin(rate * omega)};
}

}  // namespace oracles
