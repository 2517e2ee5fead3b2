#pragma once

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

#include "ellkzb/rational.hpp"

namespace ekzb {

enum class Series { A, D };

using IntVec = std::vector<int>;

/// Simply-laced root system with a Chevalley basis.
///
/// Roots are integer coordinate vectors over the simple roots.  Positive roots come
/// first, ordered by height and then lexicographically with alpha_1 < alpha_2 < ...;
/// the negatives follow in the same order.
struct RootSystem {
  Series series = Series::A;
  int rank = 0;
  std::vector<IntVec> roots;
  int num_positive = 0;
  std::vector<std::vector<int>> cartan;  // a_ij = (alpha_i, alpha_j)
  IntVec highest_root;
  int coxeter = 0;
  int dual_coxeter = 0;
  RatVec rho_coweight;               // simple-coroot coordinates
  RatMat fundamental_coweights;      // row i: omega_i^vee in simple-coroot coordinates
  std::vector<std::pair<int, int>> extraspecial;  // per positive root (-1,-1 for simple roots)
  std::vector<std::vector<int>> structure;        // C_{a,b}, 0 when a+b is not a root

  int num_roots() const { return static_cast<int>(roots.size()); }
  int index_of(const IntVec& v) const;  // -1 if v is not a root
  int negative(int a) const;
  int height(int a) const;
  bool is_positive(int a) const { return a < num_positive; }
  int simple_index(int i) const;        // root index of alpha_i (0-based i)
  int inner(const IntVec& a, const IntVec& b) const;
  /// <h, alpha> for h given in simple-coroot coordinates.
  Rat pairing(const RatVec& h, const IntVec& alpha) const;
  int structure_constant(int a, int b) const { return structure[a][b]; }
};

RootSystem build_root_system(Series series, int rank);

/// Chevalley basis of g: index a < |R| is E_{root a}; index |R| + i is H_i.
/// [E_a, E_-a] = H_a, [H_i, E_a] = <a, alpha_i^vee> E_a, [E_a, E_b] = C_{a,b} E_{a+b}.
class ChevalleyAlgebra {
 public:
  explicit ChevalleyAlgebra(const RootSystem& rs);

  const RootSystem& roots() const { return rs_; }
  int dim() const { return dim_; }
  int cartan_offset() const { return rs_.num_roots(); }

  /// Bracket of basis elements as a sparse list (index, coefficient).
  const std::vector<std::pair<int, int>>& bracket_basis(int i, int j) const { return table_[i * dim_ + j]; }
  Eigen::VectorXcd bracket(const Eigen::VectorXcd& x, const Eigen::VectorXcd& y) const;
  /// Invariant form with (E_a, E_-a) = 1, (H_i, H_j) = a_ij.
  const Eigen::MatrixXd& form() const { return form_; }
  /// Chevalley vector of an element of h given in simple-coroot coordinates.
  Eigen::VectorXcd cartan_element(const RatVec& h) const;
  Eigen::VectorXcd cartan_element(const Eigen::VectorXcd& h) const;
  Eigen::VectorXcd unit(int i) const;

 private:
  RootSystem rs_;
  int dim_;
  std::vector<std::vector<std::pair<int, int>>> table_;
  Eigen::MatrixXd form_;
};

/// Exact text dump (integers and rationals only).
std::string serialize(const RootSystem& rs);

}  // namespace ekzb
