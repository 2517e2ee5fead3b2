#include "ellkzb/representation.hpp"

#include <cmath>
#include <stdexcept>

#include "ellkzb/elliptic.hpp"

namespace ekzb {

Eigen::MatrixXcd Representation::of(const Eigen::VectorXcd& x) const {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (int i = 0; i < x.size(); ++i)
    if (x[i] != 0.0) m += x[i] * basis[i];
  return m;
}

Eigen::MatrixXd Representation::weights(const ChevalleyAlgebra& g) const {
  const int r = g.roots().rank;
  Eigen::MatrixXd w(dim, r);
  for (int i = 0; i < r; ++i) {
    const Eigen::MatrixXcd& h = basis[g.cartan_offset() + i];
    if ((h - Eigen::MatrixXcd(h.diagonal().asDiagonal())).norm() > 1e-12)
      throw std::logic_error("representation: Cartan generators must act diagonally");
    w.col(i) = h.diagonal().real();
  }
  return w;
}

Representation defining_rep(const ChevalleyAlgebra& g) {
  const RootSystem& rs = g.roots();
  if (rs.series != Series::A) throw std::invalid_argument("defining_rep: only the A-series is supported");
  const int n = rs.rank + 1;
  Representation rep;
  rep.name = "defining";
  rep.dim = n;
  rep.basis.assign(g.dim(), Eigen::MatrixXcd::Zero(n, n));
  for (int i = 0; i < rs.rank; ++i) {
    rep.basis[rs.simple_index(i)](i, i + 1) = 1.0;
    rep.basis[rs.negative(rs.simple_index(i))](i + 1, i) = 1.0;
    rep.basis[g.cartan_offset() + i](i, i) = 1.0;
    rep.basis[g.cartan_offset() + i](i + 1, i + 1) = -1.0;
  }
  for (int x = 0; x < rs.num_positive; ++x) {
    const auto [a, b] = rs.extraspecial[x];
    if (a < 0) continue;
    const Eigen::MatrixXcd& A = rep.basis[a];
    const Eigen::MatrixXcd& B = rep.basis[b];
    rep.basis[x] = (A * B - B * A) / static_cast<double>(rs.structure[a][b]);
    const int na = rs.negative(a), nb = rs.negative(b);
    const Eigen::MatrixXcd& C = rep.basis[na];
    const Eigen::MatrixXcd& D = rep.basis[nb];
    rep.basis[rs.negative(x)] = (C * D - D * C) / static_cast<double>(rs.structure[na][nb]);
  }
  return rep;
}

Representation dual_rep(const Representation& rep) {
  Representation d;
  d.name = rep.name == "defining" ? "dual" : rep.name + "*";
  d.dim = rep.dim;
  for (const auto& m : rep.basis) d.basis.push_back(-m.transpose());
  return d;
}

Representation adjoint_rep(const ChevalleyAlgebra& g) {
  Representation rep;
  rep.name = "adjoint";
  rep.dim = g.dim();
  rep.basis.assign(g.dim(), Eigen::MatrixXcd::Zero(g.dim(), g.dim()));
  for (int i = 0; i < g.dim(); ++i)
    for (int j = 0; j < g.dim(); ++j)
      for (const auto& [k, c] : g.bracket_basis(i, j)) rep.basis[i](k, j) += static_cast<double>(c);
  return rep;
}

Representation rep_by_name(const ChevalleyAlgebra& g, const std::string& name) {
  if (name == "defining") return defining_rep(g);
  if (name == "dual") return dual_rep(defining_rep(g));
  if (name == "adjoint") return adjoint_rep(g);
  throw std::invalid_argument("unknown representation '" + name + "' (expected defining, dual or adjoint)");
}

double relation_residual(const ChevalleyAlgebra& g, const Representation& rep) {
  double worst = 0.0;
  for (int i = 0; i < g.dim(); ++i)
    for (int j = 0; j < g.dim(); ++j) {
      Eigen::MatrixXcd lhs = rep.basis[i] * rep.basis[j] - rep.basis[j] * rep.basis[i];
      for (const auto& [k, c] : g.bracket_basis(i, j)) lhs -= static_cast<double>(c) * rep.basis[k];
      worst = std::max(worst, lhs.cwiseAbs().maxCoeff());
    }
  return worst;
}

Eigen::MatrixXcd intertwiner(const ChevalleyAlgebra& g, const Representation& rep, const Eigen::MatrixXd& L) {
  const int d = rep.dim;
  const int n = g.dim();
  // M X - (L X) M = 0 for every basis element X, as a linear system in vec(M).
  Eigen::MatrixXcd sys(n * d * d, d * d);
  const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(d, d);
  for (int i = 0; i < n; ++i) {
    const Eigen::MatrixXcd& X = rep.basis[i];
    const Eigen::MatrixXcd Y = rep.of(L.col(i).cast<std::complex<double>>());
    // vec(M X) = (X^T kron I) vec(M); vec(Y M) = (I kron Y) vec(M)
    Eigen::MatrixXcd block(d * d, d * d);
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < d; ++c) {
        block.block(r * d, c * d, d, d) = X(c, r) * I - (r == c ? Y : Eigen::MatrixXcd::Zero(d, d));
      }
    sys.block(i * d * d, 0, d * d, d * d) = block;
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(sys, Eigen::ComputeFullV);
  const Eigen::VectorXd& s = svd.singularValues();
  if (s[s.size() - 1] > 1e-9 * std::max(1.0, s[0]))
    throw std::runtime_error("intertwiner: no matrix realises the automorphism in rep " + rep.name);
  Eigen::VectorXcd v = svd.matrixV().col(d * d - 1);
  Eigen::MatrixXcd M(d, d);
  for (int c = 0; c < d; ++c) M.col(c) = v.segment(c * d, d);
  const std::complex<double> det = M.determinant();
  M /= std::pow(det, 1.0 / d);
  // Prefer a representative whose largest entry is real and positive.
  Eigen::Index r0, c0;
  M.cwiseAbs().maxCoeff(&r0, &c0);
  M *= std::abs(M(r0, c0)) / M(r0, c0);
  return M;
}

Eigen::MatrixXcd exp_cartan(const ChevalleyAlgebra& g, const Representation& rep, const Eigen::VectorXcd& h) {
  const Eigen::MatrixXcd H = rep.of(g.cartan_element(h));
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(rep.dim, rep.dim);
  for (int i = 0; i < rep.dim; ++i) out(i, i) = std::exp(kTwoPiI * H(i, i));
  return out;
}

}  // namespace ekzb
