#include "ellkzb/gs_basis.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "ellkzb/elliptic.hpp"

namespace ekzb {

namespace {

int mod(int a, int l) { return ((a % l) + l) % l; }

int node_pow(const TwistData& tw, int node, int m) {
  m = mod(m, tw.l);
  for (int i = 0; i < m; ++i) node = tw.node_perm[node];
  return node;
}

LinComb merge(const LinComb& in) {
  std::map<int, cplx> acc;
  for (const auto& [k, c] : in) acc[k] += c;
  LinComb out;
  for (const auto& [k, c] : acc)
    if (std::abs(c) > 1e-13) out.emplace_back(k, c);
  return out;
}

std::string fmt_coeff(cplx c) {
  auto clean = [](double x) { return std::abs(x) < 1e-12 ? 0.0 : x; };
  std::ostringstream os;
  os.precision(12);
  os << "(" << clean(c.real()) << "," << clean(c.imag()) << ")";
  return os.str();
}

}  // namespace

cplx GSBasis::omega() const { return e_of(1.0 / tw_.l); }

Eigen::VectorXcd GSBasis::t(int root, int a) const {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(g_.dim());
  const int l = tw_.l;
  for (int m = 0; m < l; ++m) v[tw_.lambda_pow(root, m)] += std::pow(omega(), mod(m * a, l));
  return v / std::sqrt(static_cast<double>(l));
}

Eigen::VectorXcd GSBasis::h(int node, int c) const {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(g_.dim());
  const int l = tw_.l;
  for (int m = 0; m < l; ++m)
    v += std::pow(omega(), mod(m * c, l)) * g_.cartan_element(tw_.node_coroot(node_pow(tw_, node, m)));
  return v / std::sqrt(static_cast<double>(l));
}

Eigen::VectorXcd GSBasis::h_root(int root, int c) const {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(g_.dim());
  const int l = tw_.l;
  const RootSystem& rs = g_.roots();
  for (int m = 0; m < l; ++m) {
    const IntVec& r = rs.roots[tw_.lambda_pow(root, m)];
    RatVec hv(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) hv[i] = Rat(r[i]);
    v += std::pow(omega(), mod(m * c, l)) * g_.cartan_element(hv);
  }
  return v / std::sqrt(static_cast<double>(l));
}

GSBasis::GSBasis(const ChevalleyAlgebra& g, const TwistData& tw) : g_(g), tw_(tw) {
  const int l = tw_.l;
  const RootSystem& rs = g_.roots();
  const std::set<int> inv_orbits(tw_.invariant_root_orbits.begin(), tw_.invariant_root_orbits.end());

  root_gen_.assign(tw_.orbits.size(), std::vector<int>(l, -1));
  for (int o = 0; o < static_cast<int>(tw_.orbits.size()); ++o) {
    const int rep = tw_.orbits[o][0];
    const int p = tw_.p_of_orbit(o);
    for (int a = 0; a < l; a += p) {
      GSGenerator gen;
      gen.orbit = o;
      gen.fourier = a;
      gen.grade = mod(l - a, l);
      if (a == 0 && inv_orbits.count(o)) {
        gen.kind = GenKind::InvariantE;
        gen.vec = Eigen::VectorXcd::Zero(g_.dim());
        for (int r : tw_.orbits[o]) gen.vec[r] += 1.0;
        gen.label = "E~[" + std::to_string(o) + "]";
      } else {
        gen.kind = GenKind::Root;
        gen.vec = t(rep, a);
        gen.label = "t[" + std::to_string(o) + "," + std::to_string(a) + "]";
      }
      root_gen_[o][a] = size();
      gens_.push_back(gen);
      RootTerm term;
      term.orbit = o;
      term.root = rep;
      term.k = a;
      term.t = t(rep, a);
      term.t_opp = t(rs.negative(rep), -a);
      root_terms_.push_back(term);
    }
  }

  for (int o = 0; o < static_cast<int>(tw_.node_orbits.size()); ++o) {
    const int node = tw_.node_orbits[o][0];
    const int p = l / static_cast<int>(tw_.node_orbits[o].size());
    for (int c = 0; c < l; c += p) {
      if (c == 0 && o == tw_.alpha0_orbit) continue;
      GSGenerator gen;
      gen.orbit = o;
      gen.fourier = c;
      gen.grade = mod(l - c, l);
      CartanEntry entry;
      entry.node_orbit = o;
      entry.c = c;
      if (c == 0) {
        gen.kind = GenKind::InvariantH;
        gen.vec = Eigen::VectorXcd::Zero(g_.dim());
        for (int n : tw_.node_orbits[o]) gen.vec += g_.cartan_element(tw_.node_coroot(n));
        gen.label = "H~[" + std::to_string(o) + "]";
        entry.h = gen.vec;
        entry.opposite = gen.vec;
      } else {
        gen.kind = GenKind::Cartan;
        gen.vec = h(node, c);
        gen.label = "h[" + std::to_string(o) + "," + std::to_string(c) + "]";
        entry.h = gen.vec;
        entry.opposite = h(node, -c);
      }
      entry.generator = size();
      gens_.push_back(gen);
      cartan_.push_back(entry);
    }
  }

  if (size() != g_.dim())
    throw std::logic_error("GSBasis: generator count " + std::to_string(size()) + " differs from dim g = " +
                           std::to_string(g_.dim()));
  Eigen::MatrixXcd B(g_.dim(), g_.dim());
  for (int i = 0; i < size(); ++i) B.col(i) = gens_[i].vec;
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(B);
  if (!lu.isInvertible()) throw std::logic_error("GSBasis: generators are linearly dependent");
  to_gs_ = lu.inverse();

  // Dual Cartan elements layer by layer: (dual_i, opposite_j) = delta_ij.
  const Eigen::MatrixXcd& F = g_.form().cast<cplx>();
  for (int c = 0; c < l; ++c) {
    std::vector<int> idx;
    for (int e = 0; e < static_cast<int>(cartan_.size()); ++e)
      if (cartan_[e].c == c) idx.push_back(e);
    if (idx.empty()) continue;
    const int n = static_cast<int>(idx.size());
    Eigen::MatrixXcd G(n, n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) G(a, b) = cartan_[idx[a]].h.transpose() * F * cartan_[idx[b]].opposite;
    const Eigen::MatrixXcd X = G.inverse();
    for (int a = 0; a < n; ++a) {
      CartanEntry& entry = cartan_[idx[a]];
      entry.dual = Eigen::VectorXcd::Zero(g_.dim());
      for (int k = 0; k < n; ++k) {
        entry.dual += X(a, k) * cartan_[idx[k]].h;
        entry.dual_in_generators.emplace_back(cartan_[idx[k]].generator, X(a, k));
      }
    }
  }
}

std::pair<int, cplx> GSBasis::locate_t(int root, int a) const {
  const int l = tw_.l;
  a = mod(a, l);
  const int o = tw_.orbit_of[root];
  const int p = tw_.p_of_orbit(o);
  if (a % p != 0) return {-1, 0.0};
  const int pos = tw_.orbit_position[root];
  cplx phase = std::pow(omega(), mod(-pos * a, l));
  const int gen = root_gen_[o][a];
  if (gens_[gen].kind == GenKind::InvariantE) phase *= static_cast<double>(p) / std::sqrt(static_cast<double>(l));
  return {gen, phase};
}

LinComb GSBasis::expand(const Eigen::VectorXcd& x) const {
  const Eigen::VectorXcd y = to_gs_ * x;
  LinComb out;
  for (int i = 0; i < y.size(); ++i)
    if (std::abs(y[i]) > 1e-13) out.emplace_back(i, y[i]);
  return out;
}

namespace {
// Scale s with generator = s * t_rep^a (root family) or s * h_rep^c (Cartan family).
double family_scale(const GSGenerator& gen, const TwistData& tw) {
  const double sl = std::sqrt(static_cast<double>(tw.l));
  if (gen.kind == GenKind::InvariantE) return sl / tw.p_of_orbit(gen.orbit);
  if (gen.kind == GenKind::InvariantH) return sl / (tw.l / static_cast<double>(tw.node_orbits[gen.orbit].size()));
  return 1.0;
}
bool is_root_kind(GenKind k) { return k == GenKind::Root || k == GenKind::InvariantE; }
}  // namespace

LinComb GSBasis::root_root(int i, int j) const {
  const GSGenerator& gi = gens_[i];
  const GSGenerator& gj = gens_[j];
  const RootSystem& rs = g_.roots();
  const int l = tw_.l;
  const int alpha = tw_.orbits[gi.orbit][0];
  const int beta = tw_.orbits[gj.orbit][0];
  const int a = gi.fourier, b = gj.fourier;
  const double scale = family_scale(gi, tw_) * family_scale(gj, tw_) / std::sqrt(static_cast<double>(l));
  LinComb out;
  for (int s = 0; s < l; ++s) {
    const int bs = tw_.lambda_pow(beta, s);
    const cplx w = scale * std::pow(omega(), mod(s * b, l));
    if (bs == rs.negative(alpha)) {
      for (const auto& [k, c] : expand(h_root(alpha, a + b))) out.emplace_back(k, w * c);
      continue;
    }
    const int C = rs.structure_constant(alpha, bs);
    if (C == 0) continue;
    IntVec sum(rs.rank);
    for (int k = 0; k < rs.rank; ++k) sum[k] = rs.roots[alpha][k] + rs.roots[bs][k];
    const auto [gen, phase] = locate_t(rs.index_of(sum), a + b);
    if (gen >= 0) out.emplace_back(gen, w * static_cast<double>(C) * phase);
  }
  return merge(out);
}

LinComb GSBasis::cartan_root(int node, int c, double scale, int j) const {
  const GSGenerator& gj = gens_[j];
  const RootSystem& rs = g_.roots();
  const int l = tw_.l;
  const int beta = tw_.orbits[gj.orbit][0];
  cplx sum = 0.0;
  for (int s = 0; s < l; ++s)
    sum += std::pow(omega(), mod(-c * s, l)) *
           static_cast<double>(rs.inner(rs.roots[tw_.lambda_pow(beta, s)], tw_.node_roots[node]));
  sum *= scale * family_scale(gj, tw_) / std::sqrt(static_cast<double>(l));
  const auto [gen, phase] = locate_t(beta, c + gj.fourier);
  if (gen < 0 || std::abs(sum) < 1e-14) return {};
  return {{gen, sum * phase}};
}

LinComb GSBasis::bracket(int i, int j) const {
  const GSGenerator& gi = gens_[i];
  const GSGenerator& gj = gens_[j];
  const bool ri = is_root_kind(gi.kind), rj = is_root_kind(gj.kind);
  if (ri && rj) return root_root(i, j);
  if (!ri && !rj) return {};
  if (!ri) return cartan_root(tw_.node_orbits[gi.orbit][0], gi.fourier, family_scale(gi, tw_), j);
  LinComb out = cartan_root(tw_.node_orbits[gj.orbit][0], gj.fourier, family_scale(gj, tw_), i);
  for (auto& term : out) term.second = -term.second;
  return out;
}

LinComb GSBasis::bracket_dual(int entry, int j) const {
  LinComb out;
  for (const auto& [k, x] : cartan_[entry].dual_in_generators)
    for (const auto& [m, c] : bracket(k, j)) out.emplace_back(m, x * c);
  return merge(out);
}

Eigen::MatrixXcd GSBasis::dual_pairing_matrix(int a) const {
  std::vector<int> nodes;
  const int l = tw_.l;
  for (const auto& orb : tw_.node_orbits)
    if (a % (l / static_cast<int>(orb.size())) == 0) nodes.push_back(orb[0]);
  const int n = static_cast<int>(nodes.size());
  const RootSystem& rs = g_.roots();
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(n, n);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int s = 0; s < l; ++s)
        A(x, y) += std::pow(omega(), mod(-s * a, l)) *
                   static_cast<double>(rs.inner(tw_.node_roots[nodes[y]], tw_.node_roots[node_pow(tw_, nodes[x], s)]));
  return A;
}

Eigen::MatrixXcd GSBasis::gram_matrix(int a) const {
  std::vector<int> nodes;
  const int l = tw_.l;
  for (const auto& orb : tw_.node_orbits)
    if (a % (l / static_cast<int>(orb.size())) == 0) nodes.push_back(orb[0]);
  const int n = static_cast<int>(nodes.size());
  const Eigen::MatrixXcd F = g_.form().cast<cplx>();
  Eigen::MatrixXcd G(n, n);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) G(x, y) = h(nodes[x], a).transpose() * F * h(nodes[y], -a);
  return G;
}

Eigen::MatrixXcd GSBasis::casimir_split(const Representation& ra, const Representation& rc) const {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(ra.dim * rc.dim, ra.dim * rc.dim);
  for (const RootTerm& term : root_terms_) out += kron(ra.of(term.t), rc.of(term.t_opp));
  for (const CartanEntry& e : cartan_) out += kron(ra.of(e.dual), rc.of(e.opposite));
  return out;
}

Eigen::MatrixXcd GSBasis::casimir_chevalley(const Representation& ra, const Representation& rc) const {
  const Eigen::MatrixXd Finv = g_.form().inverse();
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(ra.dim * rc.dim, ra.dim * rc.dim);
  for (int i = 0; i < g_.dim(); ++i)
    for (int j = 0; j < g_.dim(); ++j)
      if (std::abs(Finv(i, j)) > 1e-15) out += Finv(i, j) * kron(ra.basis[i], rc.basis[j]);
  return out;
}

std::vector<Eigen::MatrixXcd> GSBasis::rep_matrices(const Representation& rep) const {
  std::vector<Eigen::MatrixXcd> out;
  for (const GSGenerator& gen : gens_) out.push_back(rep.of(gen.vec));
  return out;
}

std::string GSBasis::dump_bracket_table() const {
  std::ostringstream os;
  for (int i = 0; i < size(); ++i)
    for (int j = i + 1; j < size(); ++j) {
      const LinComb b = bracket(i, j);
      if (b.empty()) continue;
      os << "[" << gens_[i].label << ", " << gens_[j].label << "] =";
      for (const auto& [k, c] : b) os << " " << fmt_coeff(c) << "*" << gens_[k].label;
      os << "\n";
    }
  return os.str();
}

std::vector<AdjointPhase> adjoint_phases(const GSBasis& basis, const Eigen::VectorXcd& u_tilde) {
  const TwistData& tw = basis.twist();
  const RootSystem& rs = basis.algebra().roots();
  std::vector<AdjointPhase> out;
  for (const GSGenerator& gen : basis.generators()) {
    AdjointPhase ph;
    const cplx shift = -static_cast<double>(gen.fourier) / tw.l;
    if (gen.kind == GenKind::Root || gen.kind == GenKind::InvariantE) {
      const int beta = tw.orbits[gen.orbit][0];
      cplx pairing = 0.0;
      for (int i = 0; i < rs.rank; ++i)
        for (int k = 0; k < rs.rank; ++k) pairing += u_tilde[i] * static_cast<double>(rs.cartan[i][k] * rs.roots[beta][k]);
      ph.lambda = e_of(pairing + shift);
      ph.q = e_of(to_double(tw.kappa_pairing[beta]));
    } else {
      ph.lambda = e_of(shift);
      ph.q = 1.0;
    }
    out.push_back(ph);
  }
  return out;
}

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& x, const Eigen::MatrixXcd& y) {
  Eigen::MatrixXcd out(x.rows() * y.rows(), x.cols() * y.cols());
  for (int i = 0; i < x.rows(); ++i)
    for (int j = 0; j < x.cols(); ++j) out.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = x(i, j) * y;
  return out;
}

}  // namespace ekzb
