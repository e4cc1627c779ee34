#pragma once

#include <cstdint>

#include <Eigen/Core>

#include "glmc/common.hpp"

namespace glmc {

// Stream purposes.  Every random draw in the library is keyed by
// (seed, purpose, a, b, counter) so that results are reproducible and
// independent of evaluation order or thread count.
namespace stream {
inline constexpr std::uint64_t kBrownianBase = 1;
inline constexpr std::uint64_t kBrownianBridge = 2;
inline constexpr std::uint64_t kChainNoise = 3;
inline constexpr std::uint64_t kSgldComponent = 4;
inline constexpr std::uint64_t kPairSampling = 5;
inline constexpr std::uint64_t kExperiment = 6;
inline constexpr std::uint64_t kReference = 7;
}  // namespace stream

inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Counter-based generator: the i-th output is a pure function of
// (seed, purpose, a, b, i).
class KeyedRng {
 public:
  KeyedRng(std::uint64_t seed, std::uint64_t purpose, std::uint64_t a = 0,
           std::uint64_t b = 0) {
    std::uint64_t h = mix64(seed ^ 0x6a09e667f3bcc909ULL);
    h = mix64(h ^ purpose);
    h = mix64(h ^ a);
    base_ = mix64(h ^ b);
  }

  std::uint64_t next_u64() { return mix64(base_ ^ mix64(counter_++)); }

  // Uniform in the open interval (0,1).
  double uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Box-Muller; consumes exactly two counter values per draw.
  double normal() {
    const double u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  Eigen::VectorXd normal_vector(int dim) {
    Eigen::VectorXd z(dim);
    for (int i = 0; i < dim; ++i) z(i) = normal();
    return z;
  }

  std::uint64_t uniform_index(std::uint64_t n) { return next_u64() % n; }

  // Marsaglia-Tsang; requires shape >= 1.
  double gamma(double shape) {
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x = normal();
      double v = 1.0 + c * x;
      if (v <= 0.0) continue;
      v = v * v * v;
      const double u = uniform();
      if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) return d * v;
    }
  }

 private:
  std::uint64_t base_ = 0;
  std::uint64_t counter_ = 0;
};

}  // namespace glmc
