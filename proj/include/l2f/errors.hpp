#pragma once

#include <stdexcept>
#include <string>

namespace l2f {

/// Invalid configuration or precondition violation detected before any compute.
class config_error : public std::runtime_error {
 public:
  explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

/// Mismatched array shapes between paired inputs.
class shape_error : public std::runtime_error {
 public:
  explicit shape_error(const std::string& what) : std::runtime_error(what) {}
};

/// A measure node falls outside the admissible sampling window.
class support_error : public std::runtime_error {
 public:
  explicit support_error(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical failure (non-convergence, loss of positive definiteness, ...).
class numeric_error : public std::runtime_error {
 public:
  explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

/// No usable peak in a spectrum (all-zero or degenerate input).
class no_peak_error : public std::runtime_error {
 public:
  explicit no_peak_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace l2f
