#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace ekzb {

/// Seeded generator whose outputs do not depend on the standard library's distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::complex<double> complex_box(double half_width) {
    return {uniform(-half_width, half_width), uniform(-half_width, half_width)};
  }
  int integer(int lo, int hi_exclusive) {
    return lo + static_cast<int>(engine_() % static_cast<std::uint64_t>(hi_exclusive - lo));
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace ekzb
