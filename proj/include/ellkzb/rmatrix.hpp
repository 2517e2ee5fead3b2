#pragma once

#include <Eigen/Dense>
#include <array>
#include <functional>
#include <string>
#include <vector>

#include "ellkzb/elliptic.hpp"
#include "ellkzb/gs_basis.hpp"
#include "ellkzb/representation.hpp"

namespace ekzb {

/// How the coordinates of u are read: over the simple coroots of h~0, or over its
/// fundamental coweights.
enum class UCoordinates { SimpleCoroot, FundamentalCoweight };

/// Which Cartan element multiplies d/du_j in the moduli derivative.
/// DualBasis: the form-dual of the coordinate direction.  Literal: l * h^0 of the j-th
/// invariant node orbit (kept for comparison; flatness and the dynamical Yang-Baxter
/// equation fail with it whenever h~0 != 0).
enum class DerivationForm { DualBasis, Literal };

struct ModuliPoint {
  Eigen::VectorXcd u;  // coordinates over h~0
  cplx tau{0.0, 1.0};
};

/// Two-site kernel data at one (u, tau, z).  tau_r is 2 pi i d/dtau at fixed u.
struct PairJet {
  Eigen::MatrixXcd r, f, dz_r, dz_f, tau_r;
  std::vector<Eigen::MatrixXcd> du_r, du_f;
  std::vector<Eigen::MatrixXcd> duu_r;  // index j * d + k
};

/// One-site f^{cc} with its u-derivatives and the quadratic Casimir of the site.
struct SiteJet {
  Eigen::MatrixXcd f;
  std::vector<Eigen::MatrixXcd> du_f;
  Eigen::MatrixXcd casimir;
};

class RMatrixModel {
 public:
  explicit RMatrixModel(const GSBasis& basis, UCoordinates coords = UCoordinates::SimpleCoroot,
                        DerivationForm derivation = DerivationForm::DualBasis, SeriesOptions options = {});

  const GSBasis& basis() const { return basis_; }
  const SeriesOptions& series_options() const { return options_; }
  UCoordinates coordinates() const { return coords_; }
  DerivationForm derivation() const { return derivation_; }
  int h0_dim() const { return static_cast<int>(directions_.size()); }
  int l() const { return basis_.twist().l; }

  /// Coordinate direction j in simple-coroot coordinates of g.
  const Eigen::VectorXcd& direction(int j) const { return directions_[j]; }
  /// (direction_i, direction_j) under the invariant form.
  const Eigen::MatrixXcd& gram() const { return gram_; }
  /// Chevalley vector of the Cartan element multiplying d/du_j.
  const Eigen::VectorXcd& derivation_element(int j) const { return derivation_elems_[j]; }
  /// Coefficient c_jk of d/du_j d/du_k in the tau operator: half the form on derivation elements.
  cplx laplacian_coefficient(int j, int k) const;

  /// u in simple-coroot coordinates of g.
  Eigen::VectorXcd ambient(const Eigen::VectorXcd& u) const;
  /// Coordinates of an element of h~0 given in simple-coroot coordinates of g.
  Eigen::VectorXcd coordinates_of(const Eigen::VectorXcd& ambient_vec) const;
  /// <u + kappa tau, root>
  cplx pairing(const ModuliPoint& p, int root) const;
  /// <direction_j, root>
  double direction_pairing(int j, int root) const;
  /// Smallest lattice distance of the shifted pairings over all root terms.
  double discriminant_distance(const ModuliPoint& p) const;

  EllipticContext context(cplx tau) const { return EllipticContext(Tau(tau), options_); }

 private:
  GSBasis basis_;
  SeriesOptions options_;
  UCoordinates coords_;
  DerivationForm derivation_;
  std::vector<Eigen::VectorXcd> directions_;
  Eigen::MatrixXcd gram_;
  std::vector<Eigen::VectorXcd> derivation_elems_;
};

/// Kernel r^{ac}, f^{ac} and derivatives on V_a (x) V_c with precomputed tensor terms.
class PairEvaluator {
 public:
  PairEvaluator(const RMatrixModel& model, const Representation& a, const Representation& c);

  int dim() const { return dim_; }
  /// max_u_order: 0 skips u-derivatives, 1 fills du_r/du_f, 2 also duu_r.
  PairJet jet(const ModuliPoint& p, cplx z, int max_u_order = 2) const;
  PairJet jet(const ModuliPoint& p, cplx z, const EllipticContext& ctx, int max_u_order) const;
  Eigen::MatrixXcd r(const ModuliPoint& p, cplx z) const;
  Eigen::MatrixXcd f(const ModuliPoint& p, cplx z) const;
  Eigen::MatrixXcd du_r(const ModuliPoint& p, cplx z, int j) const;
  const Eigen::MatrixXcd& casimir() const { return casimir_; }

 private:
  struct Term {
    int root = -1;  // -1 for Cartan terms
    int k = 0;
    Eigen::MatrixXcd op;
  };
  const RMatrixModel& model_;
  int dim_;
  std::vector<Term> terms_;
  Eigen::MatrixXcd casimir_;
};

class SiteEvaluator {
 public:
  SiteEvaluator(const RMatrixModel& model, const Representation& rep);
  SiteJet jet(const ModuliPoint& p) const;

 private:
  struct Term {
    int root = -1;
    int k = 0;
    Eigen::MatrixXcd op;
  };
  const RMatrixModel& model_;
  int dim_;
  std::vector<Term> terms_;
  Eigen::MatrixXcd casimir_;
};

Eigen::MatrixXcd eval_r(const RMatrixModel& m, const Representation& a, const Representation& c,
                        const ModuliPoint& p, cplx z);
Eigen::MatrixXcd eval_f(const RMatrixModel& m, const Representation& a, const Representation& c,
                        const ModuliPoint& p, cplx z);
/// Diagonal f^{cc}: the r-matrix kernel's regular part at coincident points.
Eigen::MatrixXcd eval_f_diagonal(const RMatrixModel& m, const Representation& rep, const ModuliPoint& p);
Eigen::MatrixXcd du_r(const RMatrixModel& m, const Representation& a, const Representation& c,
                      const ModuliPoint& p, cplx z, int j);

/// Largest singular value.
double operator_norm(const Eigen::MatrixXcd& m);

// Tensor layout helpers for several sites.
std::vector<int> site_dims(const std::vector<Representation>& reps);
/// Embed a matrix on V_a (x) V_c (in that order) into the full tensor product.
Eigen::MatrixXcd embed_pair(const Eigen::MatrixXcd& m, const std::vector<int>& dims, int a, int c);
Eigen::MatrixXcd embed_site(const Eigen::MatrixXcd& m, const std::vector<int>& dims, int a);
/// Swap V_a (x) V_c -> V_c (x) V_a.
Eigen::MatrixXcd swap_matrix(int da, int dc);

/// A two-site r-matrix as a function of (u, tau) and z.
using RFunction = std::function<Eigen::MatrixXcd(const ModuliPoint&, cplx)>;

/// sum_ij A_ij S_i (x) S_j over the c = 0 dual Cartan elements; A must be antisymmetric.
Eigen::MatrixXcd dynamical_twist_term(const RMatrixModel& m, const Representation& a, const Representation& c,
                                      const Eigen::MatrixXd& A);
/// r + delta r as an evaluator.
RFunction apply_dynamical_twist(RFunction r, Eigen::MatrixXcd delta);

/// Sum of commutators plus moduli-derivative terms on V1 (x) V2 (x) V3.
/// A non-null twist adds the constant dynamical twist term to every r^{ij}.
double cdybe_residual(const RMatrixModel& m, const std::vector<Representation>& reps, const ModuliPoint& p,
                      const std::array<cplx, 3>& z, const Eigen::MatrixXd* twist = nullptr);

struct QuasiPeriodicityReport {
  double z_shift_1 = 0.0;
  double z_shift_tau = 0.0;
  double u_shift_coroot = 0.0;
  double u_shift_tau_coroot = 0.0;
  double u_shift_coweight = 0.0;
  double u_shift_tau_coweight = 0.0;
  double max() const;
};
QuasiPeriodicityReport quasiperiodicity_residual(const RMatrixModel& m, const Representation& a,
                                                 const Representation& c, const ModuliPoint& p, cplx z,
                                                 const Eigen::MatrixXd* twist = nullptr);

// The optional twist adds the constant dynamical twist term before checking.
double unitarity_residual(const RMatrixModel& m, const Representation& a, const Representation& c,
                          const ModuliPoint& p, cplx z, const Eigen::MatrixXd* twist = nullptr);
/// Max over four approach directions of || eps r(eps e^{i theta}) - C2 ||.
double residue_residual(const RMatrixModel& m, const Representation& a, const Representation& c,
                        const ModuliPoint& p, double eps = 1e-8, const Eigen::MatrixXd* twist = nullptr);
/// Max over the h~0 directions of ||[x (x) 1 + 1 (x) x, r]||.
double zero_weight_residual(const RMatrixModel& m, const Representation& a, const Representation& c,
                            const ModuliPoint& p, cplx z, const Eigen::MatrixXd* twist = nullptr);
/// || f^{ac}(z) - swap f^{ca}(-z) swap ||
double f_symmetry_residual(const RMatrixModel& m, const Representation& a, const Representation& c,
                           const ModuliPoint& p, cplx z);

/// Moves u so that the shifted pairing of the given root term equals eps and compares
/// eps * r with the predicted principal part (all terms singular on the same hyperplane).
/// Requires h~0 != 0; returns the residual.
double near_discriminant_residual(const RMatrixModel& m, const Representation& a, const Representation& c,
                                  const ModuliPoint& p, cplx z, int root, int k, double eps = 1e-7);

/// Largest deviation of the analytic jets from central differences (relative to max(1, |value|)).
struct DerivativeCheck {
  double dz_r = 0, du_r = 0, duu_r = 0, tau_r = 0, dz_f = 0, du_f = 0, site_du_f = 0;
  double heat = 0;  // || tau_r - dz_f ||, exact identity rather than a difference quotient
  double max() const;
};
DerivativeCheck derivative_check(const RMatrixModel& m, const Representation& a, const Representation& c,
                                 const ModuliPoint& p, cplx z);

}  // namespace ekzb
