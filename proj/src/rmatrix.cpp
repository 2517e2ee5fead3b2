#include "ellkzb/rmatrix.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ekzb {

namespace {

Eigen::VectorXcd to_complex(const RatVec& v) {
  Eigen::VectorXcd out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = to_double(v[i]);
  return out;
}

Eigen::MatrixXd cartan_matrix(const RootSystem& rs) {
  Eigen::MatrixXd A(rs.rank, rs.rank);
  for (int i = 0; i < rs.rank; ++i)
    for (int k = 0; k < rs.rank; ++k) A(i, k) = rs.cartan[i][k];
  return A;
}

double max_abs(const Eigen::MatrixXcd& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

TwistedJet term_jet(const RMatrixModel& m, const ModuliPoint& p, int root, int k, cplx z,
                    const EllipticContext& ctx) {
  const int l = m.l();
  if (root < 0) return twisted_jet({cplx(0.0, 0.0), k, l, 0.0}, z, ctx);
  const TwistedArg arg{m.pairing(p, root), k, l,
                       to_double(m.basis().twist().kappa_pairing[root])};
  try {
    return twisted_jet(arg, z, ctx);
  } catch (const PoleError& e) {
    if (e.argument() == "z") throw;
    throw PoleError("root " + std::to_string(root) + " with k = " + std::to_string(k) +
                        " (discriminant: pairing + k/l on the lattice)",
                    e.value());
  }
}

}  // namespace

RMatrixModel::RMatrixModel(const GSBasis& basis, UCoordinates coords, DerivationForm derivation,
                           SeriesOptions options)
    : basis_(basis), options_(options), coords_(coords), derivation_(derivation) {
  const TwistData& tw = basis_.twist();
  const ChevalleyAlgebra& g = basis_.algebra();
  const Eigen::MatrixXd A = cartan_matrix(g.roots());
  const RatMat& src = coords == UCoordinates::SimpleCoroot ? tw.h0_basis : tw.h0_coweights;
  for (const RatVec& v : src) directions_.push_back(to_complex(v));
  const int d = h0_dim();
  gram_.resize(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) gram_(i, j) = directions_[i].transpose() * A.cast<cplx>() * directions_[j];
  if (derivation == DerivationForm::DualBasis) {
    const Eigen::MatrixXcd Ginv = d ? Eigen::MatrixXcd(gram_.inverse()) : Eigen::MatrixXcd();
    for (int j = 0; j < d; ++j) {
      Eigen::VectorXcd x = Eigen::VectorXcd::Zero(g.roots().rank);
      for (int i = 0; i < d; ++i) x += Ginv(i, j) * directions_[i];
      derivation_elems_.push_back(g.cartan_element(x));
    }
  } else {
    for (int j = 0; j < d; ++j) {
      const int node = tw.node_orbits[tw.invariant_node_orbits[j]][0];
      derivation_elems_.push_back(static_cast<double>(tw.l) * basis_.h(node, 0));
    }
  }
}

cplx RMatrixModel::laplacian_coefficient(int j, int k) const {
  const Eigen::MatrixXcd F = basis_.algebra().form().cast<cplx>();
  return 0.5 * cplx(derivation_elems_[j].transpose() * F * derivation_elems_[k]);
}

Eigen::VectorXcd RMatrixModel::ambient(const Eigen::VectorXcd& u) const {
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(basis_.algebra().roots().rank);
  if (u.size() != h0_dim())
    throw std::invalid_argument("moduli point has " + std::to_string(u.size()) + " coordinates, expected " +
                                std::to_string(h0_dim()));
  for (int j = 0; j < h0_dim(); ++j) out += u[j] * directions_[j];
  return out;
}

Eigen::VectorXcd RMatrixModel::coordinates_of(const Eigen::VectorXcd& v) const {
  const int d = h0_dim();
  if (d == 0) return Eigen::VectorXcd();
  Eigen::MatrixXcd D(v.size(), d);
  for (int j = 0; j < d; ++j) D.col(j) = directions_[j];
  Eigen::VectorXcd c = D.colPivHouseholderQr().solve(v);
  if ((D * c - v).norm() > 1e-10 * std::max(1.0, v.norm()))
    throw std::invalid_argument("coordinates_of: vector is not in h~0");
  return c;
}

cplx RMatrixModel::pairing(const ModuliPoint& p, int root) const {
  const RootSystem& rs = basis_.algebra().roots();
  const Eigen::VectorXcd u = ambient(p.u);
  cplx s = 0.0;
  for (int i = 0; i < rs.rank; ++i)
    for (int k = 0; k < rs.rank; ++k) s += u[i] * static_cast<double>(rs.cartan[i][k] * rs.roots[root][k]);
  return s + to_double(basis_.twist().kappa_pairing[root]) * p.tau;
}

double RMatrixModel::direction_pairing(int j, int root) const {
  const RootSystem& rs = basis_.algebra().roots();
  double s = 0.0;
  for (int i = 0; i < rs.rank; ++i)
    for (int k = 0; k < rs.rank; ++k) s += directions_[j][i].real() * rs.cartan[i][k] * rs.roots[root][k];
  return s;
}

double RMatrixModel::discriminant_distance(const ModuliPoint& p) const {
  const EllipticContext ctx = context(p.tau);
  double best = 1e300;
  for (const RootTerm& t : basis_.root_terms())
    best = std::min(best, ctx.lattice_distance(pairing(p, t.root) + static_cast<double>(t.k) / l()));
  return best;
}

PairEvaluator::PairEvaluator(const RMatrixModel& model, const Representation& a, const Representation& c)
    : model_(model), dim_(a.dim * c.dim) {
  const GSBasis& b = model.basis();
  for (const RootTerm& t : b.root_terms()) terms_.push_back({t.root, t.k, kron(a.of(t.t), c.of(t.t_opp))});
  for (const CartanEntry& e : b.cartan_layer()) terms_.push_back({-1, e.c, kron(a.of(e.dual), c.of(e.opposite))});
  casimir_ = Eigen::MatrixXcd::Zero(dim_, dim_);
  for (const Term& t : terms_) casimir_ += t.op;
}

PairJet PairEvaluator::jet(const ModuliPoint& p, cplx z, int max_u_order) const {
  return jet(p, z, model_.context(p.tau), max_u_order);
}

PairJet PairEvaluator::jet(const ModuliPoint& p, cplx z, const EllipticContext& ctx, int max_u_order) const {
  const int d = model_.h0_dim();
  const Eigen::MatrixXcd zero = Eigen::MatrixXcd::Zero(dim_, dim_);
  PairJet out;
  out.r = out.f = out.dz_r = out.dz_f = out.tau_r = zero;
  if (max_u_order >= 1) out.du_r.assign(d, zero), out.du_f.assign(d, zero);
  if (max_u_order >= 2) out.duu_r.assign(d * d, zero);
  for (const Term& t : terms_) {
    const TwistedJet j = term_jet(model_, p, t.root, t.k, z, ctx);
    out.r += j.phi * t.op;
    out.f += j.f * t.op;
    out.dz_r += j.dz_phi * t.op;
    out.dz_f += j.dz_f * t.op;
    out.tau_r += j.tau_phi * t.op;
    if (t.root < 0 || max_u_order < 1) continue;
    for (int a = 0; a < d; ++a) {
      const double pa = model_.direction_pairing(a, t.root);
      if (pa == 0.0) continue;
      out.du_r[a] += (pa * j.f) * t.op;
      out.du_f[a] += (pa * j.du_f) * t.op;
      if (max_u_order < 2) continue;
      for (int b = 0; b < d; ++b) {
        const double pb = model_.direction_pairing(b, t.root);
        if (pb != 0.0) out.duu_r[a * d + b] += (pa * pb * j.du_f) * t.op;
      }
    }
  }
  return out;
}

Eigen::MatrixXcd PairEvaluator::r(const ModuliPoint& p, cplx z) const { return jet(p, z, 0).r; }
Eigen::MatrixXcd PairEvaluator::f(const ModuliPoint& p, cplx z) const { return jet(p, z, 0).f; }
Eigen::MatrixXcd PairEvaluator::du_r(const ModuliPoint& p, cplx z, int j) const {
  if (j < 0 || j >= model_.h0_dim()) throw std::out_of_range("du_r: direction index out of range");
  return jet(p, z, 1).du_r[j];
}

SiteEvaluator::SiteEvaluator(const RMatrixModel& model, const Representation& rep) : model_(model), dim_(rep.dim) {
  const GSBasis& b = model.basis();
  for (const RootTerm& t : b.root_terms()) terms_.push_back({t.root, t.k, rep.of(t.t) * rep.of(t.t_opp)});
  for (const CartanEntry& e : b.cartan_layer()) terms_.push_back({-1, e.c, rep.of(e.dual) * rep.of(e.opposite)});
  casimir_ = Eigen::MatrixXcd::Zero(dim_, dim_);
  for (const Term& t : terms_) casimir_ += t.op;
}

SiteJet SiteEvaluator::jet(const ModuliPoint& p) const {
  const EllipticContext ctx = model_.context(p.tau);
  const int d = model_.h0_dim();
  const int l = model_.l();
  SiteJet out;
  out.casimir = casimir_;
  out.f = -2.0 * l * ctx.eta1() * casimir_;
  out.du_f.assign(d, Eigen::MatrixXcd::Zero(dim_, dim_));
  for (const Term& t : terms_) {
    if (t.root < 0) {
      if (t.k == 0) continue;
      out.f -= wp(static_cast<double>(t.k) / l, ctx) * t.op;
      continue;
    }
    const cplx x = model_.pairing(p, t.root) + static_cast<double>(t.k) / l;
    ctx.require_off_lattice(x, "root " + std::to_string(t.root) + " with k = " + std::to_string(t.k));
    out.f -= wp(x, ctx) * t.op;
    const cplx dp = wp_deriv(x, ctx);
    for (int a = 0; a < d; ++a) {
      const double pa = model_.direction_pairing(a, t.root);
      if (pa != 0.0) out.du_f[a] -= (pa * dp) * t.op;
    }
  }
  return out;
}

Eigen::MatrixXcd eval_r(const RMatrixModel& m, const Representation& a, const Representation& c,
                        const ModuliPoint& p, cplx z) {
  return PairEvaluator(m, a, c).r(p, z);
}

Eigen::MatrixXcd eval_f(const RMatrixModel& m, const Representation& a, const Representation& c,
                        const ModuliPoint& p, cplx z) {
  return PairEvaluator(m, a, c).f(p, z);
}

Eigen::MatrixXcd eval_f_diagonal(const RMatrixModel& m, const Representation& rep, const ModuliPoint& p) {
  return SiteEvaluator(m, rep).jet(p).f;
}

Eigen::MatrixXcd du_r(const RMatrixModel& m, const Representation& a, const Representation& c,
                      const ModuliPoint& p, cplx z, int j) {
  return PairEvaluator(m, a, c).du_r(p, z, j);
}

double operator_norm(const Eigen::MatrixXcd& m) {
  if (m.size() == 0) return 0.0;
  const Eigen::MatrixXcd g = m.adjoint() * m;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(g, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

std::vector<int> site_dims(const std::vector<Representation>& reps) {
  std::vector<int> d;
  for (const auto& r : reps) d.push_back(r.dim);
  return d;
}

namespace {
std::vector<int> strides(const std::vector<int>& dims) {
  std::vector<int> s(dims.size(), 1);
  for (int i = static_cast<int>(dims.size()) - 2; i >= 0; --i) s[i] = s[i + 1] * dims[i + 1];
  return s;
}
int total_dim(const std::vector<int>& dims) {
  int D = 1;
  for (int d : dims) D *= d;
  return D;
}
}  // namespace

Eigen::MatrixXcd embed_pair(const Eigen::MatrixXcd& m, const std::vector<int>& dims, int a, int c) {
  if (a == c) throw std::invalid_argument("embed_pair: sites must differ");
  const int D = total_dim(dims);
  const std::vector<int> st = strides(dims);
  const int da = dims[a], dc = dims[c];
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(D, D);
  for (int col = 0; col < D; ++col) {
    const int ia = (col / st[a]) % da, ic = (col / st[c]) % dc;
    const int base = col - ia * st[a] - ic * st[c];
    for (int ra = 0; ra < da; ++ra)
      for (int rc = 0; rc < dc; ++rc) {
        const cplx v = m(ra * dc + rc, ia * dc + ic);
        if (v != 0.0) out(base + ra * st[a] + rc * st[c], col) += v;
      }
  }
  return out;
}

Eigen::MatrixXcd embed_site(const Eigen::MatrixXcd& m, const std::vector<int>& dims, int a) {
  const int D = total_dim(dims);
  const std::vector<int> st = strides(dims);
  const int da = dims[a];
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(D, D);
  for (int col = 0; col < D; ++col) {
    const int ia = (col / st[a]) % da;
    const int base = col - ia * st[a];
    for (int ra = 0; ra < da; ++ra)
      if (m(ra, ia) != 0.0) out(base + ra * st[a], col) += m(ra, ia);
  }
  return out;
}

Eigen::MatrixXcd swap_matrix(int da, int dc) {
  Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(da * dc, da * dc);
  for (int ia = 0; ia < da; ++ia)
    for (int ic = 0; ic < dc; ++ic) s(ic * da + ia, ia * dc + ic) = 1.0;
  return s;
}

Eigen::MatrixXcd dynamical_twist_term(const RMatrixModel& m, const Representation& a, const Representation& c,
                                      const Eigen::MatrixXd& A) {
  const int d = m.h0_dim();
  if (A.rows() != d || A.cols() != d)
    throw std::invalid_argument("dynamical twist: A must be " + std::to_string(d) + "x" + std::to_string(d));
  if ((A + A.transpose()).cwiseAbs().maxCoeff() > 1e-14)
    throw std::invalid_argument("dynamical twist: A is not antisymmetric");
  std::vector<Eigen::VectorXcd> S;
  for (const CartanEntry& e : m.basis().cartan_layer())
    if (e.c == 0) S.push_back(e.dual);
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(a.dim * c.dim, a.dim * c.dim);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      if (A(i, j) != 0.0) out += A(i, j) * kron(a.of(S[i]), c.of(S[j]));
  return out;
}

RFunction apply_dynamical_twist(RFunction r, Eigen::MatrixXcd delta) {
  return [r = std::move(r), delta = std::move(delta)](const ModuliPoint& p, cplx z) -> Eigen::MatrixXcd {
    return r(p, z) + delta;
  };
}

double cdybe_residual(const RMatrixModel& m, const std::vector<Representation>& reps, const ModuliPoint& p,
                      const std::array<cplx, 3>& z, const Eigen::MatrixXd* twist) {
  if (reps.size() != 3) throw std::invalid_argument("cdybe_residual: three representations required");
  const std::vector<int> dims = site_dims(reps);
  const EllipticContext ctx = m.context(p.tau);
  const int d = m.h0_dim();
  // r^{ij}(z_i - z_j) with its u-derivatives, embedded.
  struct Emb {
    Eigen::MatrixXcd r;
    std::vector<Eigen::MatrixXcd> du;
  };
  auto pair = [&](int i, int j) {
    const PairEvaluator ev(m, reps[i], reps[j]);
    const PairJet jet = ev.jet(p, z[i] - z[j], ctx, 1);
    Emb e;
    Eigen::MatrixXcd r = jet.r;
    if (twist) r += dynamical_twist_term(m, reps[i], reps[j], *twist);
    e.r = embed_pair(r, dims, i, j);
    for (int k = 0; k < d; ++k) e.du.push_back(embed_pair(jet.du_r[k], dims, i, j));
    return e;
  };
  const Emb r12 = pair(0, 1), r13 = pair(0, 2), r23 = pair(1, 2), r31 = pair(2, 0);
  auto comm = [](const Eigen::MatrixXcd& x, const Eigen::MatrixXcd& y) -> Eigen::MatrixXcd { return x * y - y * x; };
  Eigen::MatrixXcd total = comm(r12.r, r13.r) + comm(r12.r, r23.r) + comm(r13.r, r23.r);
  const std::array<std::pair<int, const Emb*>, 3> cyc{{{0, &r23}, {1, &r31}, {2, &r12}}};
  for (const auto& [site, e] : cyc)
    for (int k = 0; k < d; ++k) {
      const Eigen::MatrixXcd X = embed_site(reps[site].of(m.derivation_element(k)), dims, site);
      total += X * e->du[k];
    }
  return operator_norm(total);
}

double QuasiPeriodicityReport::max() const {
  return std::max({z_shift_1, z_shift_tau, u_shift_coroot, u_shift_tau_coroot, u_shift_coweight,
                   u_shift_tau_coweight});
}

namespace {

/// r^{ac} with an optional constant dynamical twist added.
class TwistedPair {
 public:
  TwistedPair(const RMatrixModel& m, const Representation& a, const Representation& c, const Eigen::MatrixXd* twist)
      : ev_(m, a, c) {
    if (twist) delta_ = dynamical_twist_term(m, a, c, *twist);
  }
  Eigen::MatrixXcd r(const ModuliPoint& p, cplx z) const {
    Eigen::MatrixXcd out = ev_.r(p, z);
    if (delta_.size()) out += delta_;
    return out;
  }
  Eigen::MatrixXcd r(const ModuliPoint& p, cplx z, const EllipticContext& ctx) const {
    Eigen::MatrixXcd out = ev_.jet(p, z, ctx, 0).r;
    if (delta_.size()) out += delta_;
    return out;
  }
  const Eigen::MatrixXcd& casimir() const { return ev_.casimir(); }

 private:
  PairEvaluator ev_;
  Eigen::MatrixXcd delta_;
};

}  // namespace

QuasiPeriodicityReport quasiperiodicity_residual(const RMatrixModel& m, const Representation& a,
                                                 const Representation& c, const ModuliPoint& p, cplx z,
                                                 const Eigen::MatrixXd* twist) {
  const GSBasis& b = m.basis();
  const ChevalleyAlgebra& g = b.algebra();
  const TwistData& tw = b.twist();
  const TwistedPair ev(m, a, c, twist);
  const Eigen::MatrixXcd Ic = Eigen::MatrixXcd::Identity(c.dim, c.dim);
  auto ad1 = [&](const Eigen::MatrixXcd& M, const Eigen::MatrixXcd& r) -> Eigen::MatrixXcd {
    return kron(M, Ic) * r * kron(M.inverse(), Ic);
  };
  QuasiPeriodicityReport rep;
  const Eigen::MatrixXcd r0 = ev.r(p, z);

  Eigen::VectorXcd kappa(tw.kappa.size());
  for (std::size_t i = 0; i < tw.kappa.size(); ++i) kappa[i] = to_double(tw.kappa[i]);
  const Eigen::MatrixXcd Q = exp_cartan(g, a, kappa);
  rep.z_shift_1 = operator_norm(ev.r(p, z + 1.0) - ad1(Q, r0));

  const Eigen::MatrixXcd L0 = intertwiner(g, a, tw.automorphism);
  const Eigen::MatrixXcd Lam = L0 * exp_cartan(g, a, -m.ambient(p.u));
  Eigen::MatrixXcd omega0 = Eigen::MatrixXcd::Zero(a.dim * c.dim, a.dim * c.dim);
  for (const CartanEntry& e : b.cartan_layer())
    if (e.c == 0) omega0 += kron(a.of(e.dual), c.of(e.opposite));
  rep.z_shift_tau = operator_norm(ev.r(p, z + p.tau) - (ad1(Lam, r0) - kTwoPiI * omega0));

  auto shifts = [&](const RatMat& lattice, double& plain, double& with_tau) {
    for (const RatVec& v : lattice) {
      const Eigen::VectorXcd beta = to_complex(v);
      ModuliPoint q = p;
      q.u = p.u + m.coordinates_of(beta);
      plain = std::max(plain, operator_norm(ev.r(q, z) - r0));
      q.u = p.u + m.coordinates_of(p.tau * beta);
      const Eigen::MatrixXcd E = exp_cartan(g, a, -z * beta);
      with_tau = std::max(with_tau, operator_norm(ev.r(q, z) - ad1(E, r0)));
    }
  };
  shifts(tw.h0_basis, rep.u_shift_coroot, rep.u_shift_tau_coroot);
  if (tw.coweights_integral) shifts(tw.h0_coweights, rep.u_shift_coweight, rep.u_shift_tau_coweight);
  return rep;
}

double unitarity_residual(const RMatrixModel& m, const Representation& a, const Representation& c,
                          const ModuliPoint& p, cplx z, const Eigen::MatrixXd* twist) {
  const Eigen::MatrixXcd S = swap_matrix(a.dim, c.dim);
  const Eigen::MatrixXcd rac = TwistedPair(m, a, c, twist).r(p, z);
  const Eigen::MatrixXcd rca = TwistedPair(m, c, a, twist).r(p, -z);
  return operator_norm(rac + S.transpose() * rca * S);
}

double residue_residual(const RMatrixModel& m, const Representation& a, const Representation& c,
                        const ModuliPoint& p, double eps, const Eigen::MatrixXd* twist) {
  SeriesOptions opts = m.series_options();
  opts.pole_radius = std::min(opts.pole_radius, eps * 1e-3);
  const EllipticContext ctx(Tau(p.tau), opts);
  const TwistedPair ev(m, a, c, twist);
  double worst = 0.0;
  for (int q = 0; q < 4; ++q) {
    const cplx z = eps * std::exp(cplx(0.0, kPi * (0.25 + 0.5 * q)));
    worst = std::max(worst, operator_norm(z * ev.r(p, z, ctx) - ev.casimir()));
  }
  return worst;
}

double zero_weight_residual(const RMatrixModel& m, const Representation& a, const Representation& c,
                            const ModuliPoint& p, cplx z, const Eigen::MatrixXd* twist) {
  const ChevalleyAlgebra& g = m.basis().algebra();
  const Eigen::MatrixXcd r = TwistedPair(m, a, c, twist).r(p, z);
  const Eigen::MatrixXcd Ia = Eigen::MatrixXcd::Identity(a.dim, a.dim);
  const Eigen::MatrixXcd Ic = Eigen::MatrixXcd::Identity(c.dim, c.dim);
  double worst = 0.0;
  for (int j = 0; j < m.h0_dim(); ++j) {
    const Eigen::VectorXcd x = g.cartan_element(m.direction(j));
    const Eigen::MatrixXcd X = kron(a.of(x), Ic) + kron(Ia, c.of(x));
    worst = std::max(worst, operator_norm(X * r - r * X));
  }
  return worst;
}

double f_symmetry_residual(const RMatrixModel& m, const Representation& a, const Representation& c,
                           const ModuliPoint& p, cplx z) {
  const Eigen::MatrixXcd S = swap_matrix(a.dim, c.dim);
  const Eigen::MatrixXcd fac = PairEvaluator(m, a, c).f(p, z);
  const Eigen::MatrixXcd fca = PairEvaluator(m, c, a).f(p, -z);
  return operator_norm(fac - S.transpose() * fca * S);
}

double near_discriminant_residual(const RMatrixModel& m, const Representation& a, const Representation& c,
                                  const ModuliPoint& p, cplx z, int root, int k, double eps) {
  const int d = m.h0_dim();
  if (d == 0) throw std::invalid_argument("near_discriminant_residual: h~0 = 0, there is no discriminant in u");
  const int l = m.l();
  Eigen::VectorXcd w = Eigen::VectorXcd::Zero(m.direction(0).size());
  double wa = 0.0;
  for (int j = 0; j < d; ++j) {
    const double pj = m.direction_pairing(j, root);
    w += pj * m.direction(j);
    wa += pj * pj;
  }
  if (wa == 0.0) throw std::invalid_argument("near_discriminant_residual: root does not pair with h~0");
  const cplx x0 = m.pairing(p, root) + static_cast<double>(k) / l;
  // <w, root> = sum_j <d_j, root>^2 = wa
  ModuliPoint q = p;
  q.u = p.u + m.coordinates_of(((cplx(eps) - x0) / wa) * w);

  SeriesOptions opts = m.series_options();
  opts.pole_radius = std::min(opts.pole_radius, eps * 1e-3);
  const EllipticContext ctx(Tau(q.tau), opts);
  const PairEvaluator ev(m, a, c);
  const Eigen::MatrixXcd r = ev.jet(q, z, ctx, 0).r;

  // Principal part: every root term whose shifted pairing is +-eps modulo the lattice.
  const GSBasis& b = m.basis();
  Eigen::MatrixXcd predicted = Eigen::MatrixXcd::Zero(ev.dim(), ev.dim());
  for (const RootTerm& t : b.root_terms()) {
    const cplx x = m.pairing(q, t.root) + static_cast<double>(t.k) / l;
    for (int sign : {1, -1}) {
      const cplx w2 = x - sign * eps;
      const double n = std::round(w2.imag() / q.tau.imag());
      const double mm = std::round((w2 - n * q.tau).real());
      if (std::abs(w2 - mm - n * q.tau) > 1e-3 * eps) continue;
      const double kap = to_double(b.twist().kappa_pairing[t.root]);
      predicted += (static_cast<double>(sign) * e_of(kap * z - n * z)) * kron(a.of(t.t), c.of(t.t_opp));
      break;
    }
  }
  return operator_norm(eps * r - predicted);
}

double DerivativeCheck::max() const { return std::max({dz_r, du_r, duu_r, tau_r, dz_f, du_f, site_du_f, heat}); }

DerivativeCheck derivative_check(const RMatrixModel& m, const Representation& a, const Representation& c,
                                 const ModuliPoint& p, cplx z) {
  const PairEvaluator ev(m, a, c);
  const SiteEvaluator site(m, a);
  const PairJet j0 = ev.jet(p, z, 2);
  const double h = 1e-5;
  auto rel = [](const Eigen::MatrixXcd& analytic, const Eigen::MatrixXcd& fd) {
    return max_abs(analytic - fd) / std::max(1.0, max_abs(analytic));
  };
  DerivativeCheck out;
  {
    const PairJet up = ev.jet(p, z + h, 0), dn = ev.jet(p, z - h, 0);
    out.dz_r = rel(j0.dz_r, (up.r - dn.r) / (2 * h));
    out.dz_f = rel(j0.dz_f, (up.f - dn.f) / (2 * h));
  }
  {
    ModuliPoint up = p, dn = p;
    up.tau += h;
    dn.tau -= h;
    out.tau_r = rel(j0.tau_r, kTwoPiI * (ev.r(up, z) - ev.r(dn, z)) / (2 * h));
  }
  const int d = m.h0_dim();
  const SiteJet s0 = site.jet(p);
  for (int k = 0; k < d; ++k) {
    ModuliPoint up = p, dn = p;
    up.u[k] += h;
    dn.u[k] -= h;
    const PairJet ju = ev.jet(up, z, 1), jd = ev.jet(dn, z, 1);
    out.du_r = std::max(out.du_r, rel(j0.du_r[k], (ju.r - jd.r) / (2 * h)));
    out.du_f = std::max(out.du_f, rel(j0.du_f[k], (ju.f - jd.f) / (2 * h)));
    for (int i = 0; i < d; ++i)
      out.duu_r = std::max(out.duu_r, rel(j0.duu_r[i * d + k], (ju.du_r[i] - jd.du_r[i]) / (2 * h)));
    out.site_du_f = std::max(out.site_du_f, rel(s0.du_f[k], (site.jet(up).f - site.jet(dn).f) / (2 * h)));
  }
  out.heat = max_abs(j0.tau_r - j0.dz_f) / std::max(1.0, max_abs(j0.tau_r));
  return out;
}

}  // namespace ekzb
