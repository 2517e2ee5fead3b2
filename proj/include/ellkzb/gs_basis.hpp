#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "ellkzb/representation.hpp"
#include "ellkzb/roots.hpp"
#include "ellkzb/twist.hpp"

namespace ekzb {

enum class GenKind { Root, Cartan, InvariantE, InvariantH };

struct GSGenerator {
  GenKind kind = GenKind::Root;
  int orbit = 0;    // root orbit (Root, InvariantE) or node orbit (Cartan, InvariantH)
  int fourier = 0;  // a mod l
  int grade = 0;    // (l - a) mod l
  Eigen::VectorXcd vec;  // Chevalley coordinates
  std::string label;
};

using LinComb = std::vector<std::pair<int, std::complex<double>>>;

/// One element of the Cartan family with its dual: (dual_c, h_{-c}) = 1 within the layer.
struct CartanEntry {
  int node_orbit = 0;
  int c = 0;
  int generator = -1;    // index into generators()
  Eigen::VectorXcd h;    // h_orbit^c (or the invariant coroot when c = 0)
  Eigen::VectorXcd dual; // in the span of layer c
  Eigen::VectorXcd opposite;  // h_orbit^{-c}, the partner in the Casimir split
  LinComb dual_in_generators;
};

/// One orbit-representative root term t_a^k (x) t_{-a}^{-k}.
struct RootTerm {
  int orbit = 0;
  int root = 0;  // representative root index
  int k = 0;
  Eigen::VectorXcd t;
  Eigen::VectorXcd t_opp;
};

class GSBasis {
 public:
  GSBasis(const ChevalleyAlgebra& g, const TwistData& tw);

  const ChevalleyAlgebra& algebra() const { return g_; }
  const TwistData& twist() const { return tw_; }
  const std::vector<GSGenerator>& generators() const { return gens_; }
  const std::vector<CartanEntry>& cartan_layer() const { return cartan_; }
  const std::vector<RootTerm>& root_terms() const { return root_terms_; }
  int size() const { return static_cast<int>(gens_.size()); }

  std::complex<double> omega() const;
  /// t_root^a = l^{-1/2} sum_m omega^{ma} E_{lambda^m root}, any root.
  Eigen::VectorXcd t(int root, int a) const;
  /// h_node^c = l^{-1/2} sum_m omega^{mc} H_{lambda^m node}, any extended node.
  Eigen::VectorXcd h(int node, int c) const;
  /// h_alpha^c for an arbitrary root, using its coroot.
  Eigen::VectorXcd h_root(int root, int c) const;

  /// Closed-form pairing matrix over node-orbit representatives,
  /// A^a_{ab} = sum_s omega^{-sa} a_{b, lambda^s a}.
  Eigen::MatrixXcd dual_pairing_matrix(int a) const;
  /// Invariant-form Gram matrix (h_a^a, h_b^{-a}) over the same index set.
  Eigen::MatrixXcd gram_matrix(int a) const;

  /// Coefficients of x over the generator family.
  LinComb expand(const Eigen::VectorXcd& x) const;
  /// Bracket of two generators from the closed-form GS commutation relations.
  LinComb bracket(int i, int j) const;
  /// [dual_e, generator j] for a Cartan-family entry e, via its expansion over h's.
  LinComb bracket_dual(int entry, int j) const;

  /// Casimir split sum_k t^k (x) t^{-k} + sum S (x) h on V_a (x) V_c.
  Eigen::MatrixXcd casimir_split(const Representation& a, const Representation& c) const;
  /// Same element assembled from the Chevalley basis and the inverse of the invariant form.
  Eigen::MatrixXcd casimir_chevalley(const Representation& a, const Representation& c) const;

  std::vector<Eigen::MatrixXcd> rep_matrices(const Representation& rep) const;
  std::string dump_bracket_table() const;

 private:
  /// generator index and phase with t_root^a = phase * (generator vector)
  std::pair<int, std::complex<double>> locate_t(int root, int a) const;
  LinComb root_root(int i, int j) const;
  LinComb cartan_root(int node, int c, double scale, int j) const;

  ChevalleyAlgebra g_;
  TwistData tw_;
  std::vector<GSGenerator> gens_;
  std::vector<CartanEntry> cartan_;
  std::vector<RootTerm> root_terms_;
  std::vector<std::vector<int>> root_gen_;  // [orbit][a] -> generator index
  Eigen::MatrixXcd to_gs_;                  // Chevalley -> generator coordinates
};

struct AdjointPhase {
  std::complex<double> lambda;
  std::complex<double> q;       // Ad of e(kappa)
};
/// Scalars by which Ad of Lambda_0 e(u~) and Ad of e(kappa) multiply each generator.
/// u~ is given in simple-coroot coordinates of g and must lie in h~0.
std::vector<AdjointPhase> adjoint_phases(const GSBasis& basis, const Eigen::VectorXcd& u_tilde);

/// Kronecker product X (x) Y.
Eigen::MatrixXcd kron(const Eigen::MatrixXcd& x, const Eigen::MatrixXcd& y);

}  // namespace ekzb
