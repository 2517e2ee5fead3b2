#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "ellkzb/rational.hpp"
#include "ellkzb/roots.hpp"

namespace ekzb {

/// Twist by the order-l subgroup of the center, realised by a rotation of the
/// extended Dynkin diagram.  Node 0 is alpha_0 = -theta, node i >= 1 is alpha_i.
struct TwistData {
  int l = 1;
  int j = 1;
  int center_order = 1;
  int rotation = 0;                 // diagram rotation in nodes
  RatVec varpi;                     // coweight with e(varpi) generating the subgroup
  std::vector<int> node_perm;       // lambda on extended nodes
  std::vector<IntVec> node_roots;   // coordinates of each extended node
  std::vector<int> root_perm;       // lambda on root indices
  RatVec kappa;                     // rho^vee / h in simple-coroot coordinates
  std::vector<Rat> kappa_pairing;   // <kappa, alpha> per root

  std::vector<std::vector<int>> orbits;  // lambda-orbits of roots, orbit[0] is the representative
  std::vector<int> orbit_of;
  std::vector<int> orbit_position;       // root = lambda^position(orbit representative)
  std::vector<std::vector<int>> node_orbits;
  int alpha0_orbit = 0;

  // Invariant subalgebra data.
  std::vector<int> invariant_node_orbits;  // node orbits other than the alpha_0 orbit
  RatMat h0_basis;                          // simple coroots of g~0, simple-coroot coordinates of g
  RatMat h0_coweights;                      // fundamental coweights of g~0 in the same coordinates
  RatMat invariant_cartan;                  // Cartan matrix of g~0
  std::vector<int> invariant_root_orbits;   // orbits whose orbit sums span the root spaces of g~0
  bool coweights_integral = true;           // every root pairs integrally with the g~0 coweights

  Eigen::MatrixXd automorphism;  // lambda on the Chevalley basis of g

  int orbit_length(int orbit) const { return static_cast<int>(orbits[orbit].size()); }
  int p_of_orbit(int orbit) const { return l / orbit_length(orbit); }
  int h0_dim() const { return static_cast<int>(h0_basis.size()); }
  /// lambda^m applied to a root index
  int lambda_pow(int root, int m) const;
  /// H_node in simple-coroot coordinates of g.
  RatVec node_coroot(int node) const;
};

/// A-series: l must divide N = rank + 1 and j must be coprime to l.
TwistData build_twist(const RootSystem& rs, int l, int j = 1);

std::string serialize(const TwistData& tw);

}  // namespace ekzb
