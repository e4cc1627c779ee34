#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace glmc {

inline constexpr const char* kVersion = "0.1.0";

// Numerical tolerances shared across the library.  Constraint residuals are
// one order above double-precision accumulation at ambient dimension <= 64.
inline constexpr double kPointTol = 1e-9;
inline constexpr double kTangentTol = 1e-8;
inline constexpr double kFrameTol = 1e-8;

inline double sq(double x) { return x * x; }

inline double clamp(double x, double lo, double hi) {
  return x < lo ? lo : (x > hi ? hi : x);
}

struct InvalidInput : std::invalid_argument {
  explicit InvalidInput(const std::string& what) : std::invalid_argument(what) {}
};

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Raised when a chain produces non-finite coordinates; carries the step index
// so callers can report where the stepsize blew up.
struct NumericalBlowup : std::runtime_error {
  long step;
  explicit NumericalBlowup(long step_index)
      : std::runtime_error("non-finite coordinates at step " + std::to_string(step_index)),
        step(step_index) {}
};

}  // namespace glmc
