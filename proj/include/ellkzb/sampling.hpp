#pragma once

#include <optional>
#include <vector>

#include "ellkzb/random.hpp"
#include "ellkzb/rmatrix.hpp"

namespace ekzb {

/// Residue and near-pole checks need this much room around every singular hyperplane.
inline constexpr double kSampleMargin = 0.08;

/// tau = uniform(-0.3, 0.3) + i uniform(0.8, 1.3) unless fixed, u in a box of half-width 0.15,
/// redrawn until the discriminant is at least `margin` away.
ModuliPoint sample_moduli_point(const RMatrixModel& m, Rng& rng, std::optional<cplx> tau = std::nullopt,
                                double margin = kSampleMargin);

/// n points in a box of half-width 0.3, pairwise at least min_sep apart modulo the lattice.
std::vector<cplx> sample_marked_points(int n, cplx tau, Rng& rng, double min_sep = kSampleMargin);

/// w minus the lattice point nearest to it.
cplx reduce_mod_lattice(cplx w, cplx tau);

}  // namespace ekzb
