#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "ellkzb/roots.hpp"

namespace ekzb {

struct Representation {
  std::string name;
  int dim = 0;
  std::vector<Eigen::MatrixXcd> basis;  // image of each Chevalley basis element

  Eigen::MatrixXcd of(const Eigen::VectorXcd& x) const;
  /// weight(v, i) = eigenvalue of H_i on the v-th basis vector (Cartan acts diagonally).
  Eigen::MatrixXd weights(const ChevalleyAlgebra& g) const;
};

/// A-series only: E_{alpha_i} is the elementary matrix e_{i,i+1}; the other root vectors
/// follow from brackets along extraspecial pairs.
Representation defining_rep(const ChevalleyAlgebra& g);
Representation dual_rep(const Representation& rep);
Representation adjoint_rep(const ChevalleyAlgebra& g);
Representation rep_by_name(const ChevalleyAlgebra& g, const std::string& name);

/// Largest entrywise deviation of [rho(x_i), rho(x_j)] from rho([x_i, x_j]) over basis pairs.
double relation_residual(const ChevalleyAlgebra& g, const Representation& rep);

/// Matrix M with M rho(x) M^-1 = rho(L x) for an automorphism L (Chevalley coordinates),
/// normalised so |det M| = 1.  Throws if no such M exists.
Eigen::MatrixXcd intertwiner(const ChevalleyAlgebra& g, const Representation& rep, const Eigen::MatrixXd& L);

/// exp(2 pi i rho(h)) for h in simple-coroot coordinates.
Eigen::MatrixXcd exp_cartan(const ChevalleyAlgebra& g, const Representation& rep, const Eigen::VectorXcd& h);

}  // namespace ekzb
