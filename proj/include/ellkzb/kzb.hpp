#pragma once

#include <Eigen/Dense>
#include <vector>

#include "ellkzb/rmatrix.hpp"

namespace ekzb {

struct MarkedConfig {
  std::vector<cplx> z;
  std::vector<Representation> reps;
  ModuliPoint point;
  /// Optional factor in front of d/dz_a (the level-dependent normalisation); only 1 is flat.
  double z_derivative_scale = 1.0;

  int n() const { return static_cast<int>(z.size()); }
};

/// Throws std::invalid_argument when two marked points coincide modulo the lattice or
/// the reps do not match the points.
void validate(const RMatrixModel& m, const MarkedConfig& cfg);

/// zeroth + sum_j du_coeffs[j] d/du_j + sum_a dz_coeffs[a] d/dz_a + dtau_coeff d/dtau
///   + sum_jk duu_coeffs(j,k) d/du_j d/du_k.
/// dz, dtau and duu coefficients multiply the identity.
struct FirstOrderOperator {
  Eigen::MatrixXcd zeroth;
  std::vector<Eigen::MatrixXcd> du_coeffs;
  std::vector<cplx> dz_coeffs;
  cplx dtau_coeff{0.0, 0.0};
  Eigen::MatrixXcd duu_coeffs;
};

FirstOrderOperator build_nabla_a(const RMatrixModel& m, const MarkedConfig& cfg, int a);
FirstOrderOperator build_nabla_tau(const RMatrixModel& m, const MarkedConfig& cfg);

/// Orthogonal projector onto the joint kernel of sum_c rho_c(x), x in h~0.
Eigen::MatrixXcd weight_zero_projector(const RMatrixModel& m, const MarkedConfig& cfg);

/// A commutator of connection operators written as zeroth + sum_j du_linear[j] d/du_j,
/// with norms after two-sided projection.
struct CurvatureData {
  Eigen::MatrixXcd zeroth;
  std::vector<Eigen::MatrixXcd> du_linear;
  double zeroth_norm = 0.0;
  double du_norm = 0.0;
  double zeroth_norm_unprojected = 0.0;
  double du_norm_unprojected = 0.0;
  int projector_rank = 0;
};

CurvatureData curvature_zz(const RMatrixModel& m, const MarkedConfig& cfg, int a, int b);
CurvatureData curvature_ztau(const RMatrixModel& m, const MarkedConfig& cfg, int a);

/// Every pair and site kernel of a configuration, embedded in the full tensor product.
class KzbSystem {
 public:
  KzbSystem(const RMatrixModel& m, const MarkedConfig& cfg, bool with_tau_data = true);

  int dim() const { return dim_; }
  int n() const { return n_; }
  /// R_a = sum_{c != a} r^{ac}(z_a - z_c) and its derivatives.
  Eigen::MatrixXcd R(int a) const;
  Eigen::MatrixXcd dz_R(int a, int b) const;  // d/dz_b R_a
  Eigen::MatrixXcd du_R(int a, int j) const;
  Eigen::MatrixXcd duu_R(int a, int j, int k) const;
  Eigen::MatrixXcd tau_R(int a) const;        // 2 pi i d/dtau R_a
  /// F = 1/2 sum_{b,d} f^{bd}, including the diagonal terms, and its derivatives.
  Eigen::MatrixXcd F() const;
  Eigen::MatrixXcd dz_F(int a) const;
  Eigen::MatrixXcd du_F(int j) const;
  /// derivation element j acting on site a.
  const Eigen::MatrixXcd& X(int a, int j) const { return X_[a][j]; }

 private:
  struct Embedded {
    Eigen::MatrixXcd r, dz_r, tau_r, f, dz_f;
    std::vector<Eigen::MatrixXcd> du_r, du_f, duu_r;
  };
  const Embedded& pair(int a, int c) const { return pairs_[a * n_ + c]; }
  int n_;
  int d_;
  int dim_;
  bool tau_data_;
  std::vector<Embedded> pairs_;  // a * n + c, a != c
  std::vector<Eigen::MatrixXcd> site_f_;
  std::vector<std::vector<Eigen::MatrixXcd>> site_du_f_;
  std::vector<std::vector<Eigen::MatrixXcd>> X_;
};

}  // namespace ekzb
