#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace l2f {

// ---------------------------------------------------------------------------
// Deterministic random streams.
//
// All randomness in the library goes through these helpers so that results are
// bit-reproducible for a given (seed, stream) pair, independent of platform
// library details and of any parallel execution schedule.
// ---------------------------------------------------------------------------

inline uint64_t splitmix64(uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// mt19937_64 seeded from (seed, stream) via splitmix64 whitening.
inline std::mt19937_64 rng_for(uint64_t seed, uint64_t stream = 0) {
  uint64_t s = seed ^ (0x9e3779b97f4a7c15ULL * (stream + 1));
  uint64_t a = splitmix64(s);
  uint64_t b = splitmix64(s);
  std::seed_seq seq{static_cast<uint32_t>(a), static_cast<uint32_t>(a >> 32),
                    static_cast<uint32_t>(b), static_cast<uint32_t>(b >> 32)};
  return std::mt19937_64(seq);
}

/// Uniform double in [0, 1) with 53 random bits; identical on every platform.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Standard normal via Box-Muller (deterministic, no library distribution).
class GaussianDraw {
 public:
  double operator()(std::mt19937_64& rng) {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    while (u1 <= 0.0) u1 = uniform01(rng);
    const double u2 = uniform01(rng);
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * M_PI * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

 private:
  double spare_ = 0.0;
  bool have_spare_ = false;
};

inline Eigen::VectorXd gaussian_vector(int count, uint64_t seed, uint64_t stream = 0) {
  auto rng = rng_for(seed, stream);
  GaussianDraw draw;
  Eigen::VectorXd out(count);
  for (int i = 0; i < count; ++i) out[i] = draw(rng);
  return out;
}

// ---------------------------------------------------------------------------
// Summary statistics.
// ---------------------------------------------------------------------------

/// Mean computed on data shifted by the first element; exact for constant input.
inline double mean_of(const std::vector<double>& xs) {
  if (xs.empty()) return 0.0;
  double acc = 0.0;
  for (double x : xs) acc += x - xs.front();
  return xs.front() + acc / static_cast<double>(xs.size());
}

/// Sample standard deviation (divide by M-1); exactly zero for constant input.
inline double stdev_of(const std::vector<double>& xs) {
  const size_t m = xs.size();
  if (m < 2) return 0.0;
  const double mu = mean_of(xs);
  double acc = 0.0;
  for (double x : xs) acc += (x - mu) * (x - mu);
  return std::sqrt(acc / static_cast<double>(m - 1));
}

/// Root mean squared error against a known true value.
inline double rmse_of(const std::vector<double>& xs, double truth) {
  if (xs.empty()) return 0.0;
  double acc = 0.0;
  for (double x : xs) acc += (x - truth) * (x - truth);
  return std::sqrt(acc / static_cast<double>(xs.size()));
}

inline double median_of(std::vector<double> xs) {
  if (xs.empty()) return 0.0;
  std::sort(xs.begin(), xs.end());
  const size_t m = xs.size();
  return (m % 2 == 1) ? xs[m / 2] : 0.5 * (xs[m / 2 - 1] + xs[m / 2]);
}

/// Trapezoid rule on a uniform grid.
inline double trapezoid(const Eigen::VectorXd& values, double step) {
  if (values.size() < 2) return 0.0;
  double acc = 0.5 * (values[0] + values[values.size() - 1]);
  for (Eigen::Index i = 1; i + 1 < values.size(); ++i) acc += values[i];
  return acc * step;
}

}  // namespace l2f
