#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>

namespace cartprod {

using Vertex = std::size_t;

// Numerical tolerances shared by checkers and reports.
inline constexpr double kMeasureTol = 1e-12;    // measure consistency, exact identities
inline constexpr double kIdentityTol = 1e-9;    // spectral / lemma / lifting identities
inline constexpr double kVarianceFloor = 1e-12; // below this a directional variance is zero

// Dense tables over product vertices are refused above this many entries.
inline constexpr std::size_t kDefaultDenseCap = std::size_t{1} << 22;

class GraphError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class CapExceeded : public std::length_error {
 public:
  using std::length_error::length_error;
};

class SpectralError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotBoolean : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

/// a*b, saturating at SIZE_MAX.
inline std::size_t sat_mul(std::size_t a, std::size_t b) {
  if (a != 0 && b > std::numeric_limits<std::size_t>::max() / a)
    return std::numeric_limits<std::size_t>::max();
  return a * b;
}

inline std::size_t ipow(std::size_t base, std::size_t exp) {
  std::size_t r = 1;
  for (std::size_t i = 0; i < exp; ++i) r = sat_mul(r, base);
  return r;
}

/// x log x with 0 log 0 = 0.
inline double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

inline unsigned worker_count(std::size_t jobs) {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  if (jobs < hw) return static_cast<unsigned>(jobs == 0 ? 1 : jobs);
  return hw;
}

}  // namespace detail
}  // namespace cartprod
