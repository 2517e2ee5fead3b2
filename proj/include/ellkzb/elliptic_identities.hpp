#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ellkzb/elliptic.hpp"
#include "ellkzb/random.hpp"

namespace ekzb {

struct SampleSpec {
  std::uint64_t seed = 1;
  int count = 64;
  std::vector<cplx> taus{cplx(0.0, 1.0), cplx(0.3, 0.9)};
  std::vector<int> ls{1, 2, 3, 4};
  double series_tolerance = 1e-16;
  /// minimum lattice distance of every kernel argument
  double margin = 0.08;
};

struct IdentityResidual {
  std::string name;
  std::string statement;
  double max_residual = 0.0;
  int samples = 0;
};

/// Largest absolute residual of each theta / kernel identity over the seeded sample.
/// Throws std::runtime_error if pole avoidance cannot be met.
std::vector<IdentityResidual> identity_residuals(const SampleSpec& spec);

}  // namespace ekzb
