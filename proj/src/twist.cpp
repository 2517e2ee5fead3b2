#include "ellkzb/twist.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace ekzb {

int TwistData::lambda_pow(int root, int m) const {
  m = ((m % l) + l) % l;
  for (int i = 0; i < m; ++i) root = root_perm[root];
  return root;
}

RatVec TwistData::node_coroot(int node) const {
  RatVec v(node_roots[node].size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = node_roots[node][i];
  return v;
}

TwistData build_twist(const RootSystem& rs, int l, int j) {
  if (rs.series != Series::A) throw std::invalid_argument("build_twist: only the A-series is supported");
  const int N = rs.rank + 1;
  if (l < 1 || N % l != 0)
    throw std::invalid_argument("build_twist: l = " + std::to_string(l) + " does not divide N = " + std::to_string(N));
  if (std::gcd(j, l) != 1)
    throw std::invalid_argument("build_twist: j = " + std::to_string(j) + " is not coprime to l = " + std::to_string(l));
  const int p = N / l;

  TwistData tw;
  tw.l = l;
  tw.j = j;
  tw.center_order = N;
  tw.rotation = ((p * j) % N + N) % N;
  tw.varpi = rs.fundamental_coweights[0];
  for (Rat& r : tw.varpi) r *= Rat(p);

  tw.node_roots.resize(N);
  tw.node_roots[0] = rs.highest_root;
  for (int& c : tw.node_roots[0]) c = -c;
  for (int i = 1; i < N; ++i) {
    tw.node_roots[i].assign(rs.rank, 0);
    tw.node_roots[i][i - 1] = 1;
  }
  tw.node_perm.resize(N);
  for (int i = 0; i < N; ++i) tw.node_perm[i] = (i + tw.rotation) % N;

  const int nr = rs.num_roots();
  tw.root_perm.resize(nr);
  for (int a = 0; a < nr; ++a) {
    IntVec img(rs.rank, 0);
    for (int i = 0; i < rs.rank; ++i)
      for (int k = 0; k < rs.rank; ++k) img[k] += rs.roots[a][i] * tw.node_roots[tw.node_perm[i + 1]][k];
    const int b = rs.index_of(img);
    if (b < 0) throw std::logic_error("build_twist: diagram rotation does not preserve the root system");
    tw.root_perm[a] = b;
  }
  for (int a = 0; a < nr; ++a) {
    int r = a;
    for (int m = 0; m < l; ++m) r = tw.root_perm[r];
    if (r != a) throw std::logic_error("build_twist: lambda^l is not the identity");
  }

  tw.kappa = rs.rho_coweight;
  for (Rat& r : tw.kappa) r /= Rat(rs.coxeter);
  for (int a = 0; a < nr; ++a) tw.kappa_pairing.push_back(rs.pairing(tw.kappa, rs.roots[a]));

  tw.orbit_of.assign(nr, -1);
  tw.orbit_position.assign(nr, 0);
  for (int a = 0; a < nr; ++a) {
    if (tw.orbit_of[a] >= 0) continue;
    std::vector<int> orb;
    int r = a;
    do {
      tw.orbit_of[r] = static_cast<int>(tw.orbits.size());
      tw.orbit_position[r] = static_cast<int>(orb.size());
      orb.push_back(r);
      r = tw.root_perm[r];
    } while (r != a);
    tw.orbits.push_back(orb);
  }

  std::vector<int> node_seen(N, 0);
  for (int n = 0; n < N; ++n) {
    if (node_seen[n]) continue;
    std::vector<int> orb;
    int r = n;
    do {
      node_seen[r] = 1;
      orb.push_back(r);
      r = tw.node_perm[r];
    } while (r != n);
    if (n == 0) tw.alpha0_orbit = static_cast<int>(tw.node_orbits.size());
    tw.node_orbits.push_back(orb);
  }
  for (int o = 0; o < static_cast<int>(tw.node_orbits.size()); ++o)
    if (o != tw.alpha0_orbit) tw.invariant_node_orbits.push_back(o);

  for (int o : tw.invariant_node_orbits) {
    RatVec b(rs.rank, Rat(0));
    for (int node : tw.node_orbits[o]) {
      const RatVec h = tw.node_coroot(node);
      for (int i = 0; i < rs.rank; ++i) b[i] += h[i];
    }
    tw.h0_basis.push_back(b);
  }
  const int d0 = tw.h0_dim();
  tw.invariant_cartan.assign(d0, RatVec(d0, Rat(0)));
  for (int i = 0; i < d0; ++i)
    for (int k = 0; k < d0; ++k) {
      const int node = tw.node_orbits[tw.invariant_node_orbits[k]][0];
      tw.invariant_cartan[i][k] = rs.pairing(tw.h0_basis[i], tw.node_roots[node]);
    }
  if (d0 > 0) {
    const RatMat M = rat_inverse(tw.invariant_cartan);
    for (int i = 0; i < d0; ++i) {
      RatVec w(rs.rank, Rat(0));
      for (int k = 0; k < d0; ++k)
        for (int c = 0; c < rs.rank; ++c) w[c] += M[i][k] * tw.h0_basis[k][c];
      tw.h0_coweights.push_back(w);
    }
  }
  for (const RatVec& w : tw.h0_coweights)
    for (int a = 0; a < nr; ++a)
      if (!is_integer(rs.pairing(w, rs.roots[a]))) tw.coweights_integral = false;

  // Roots of g~0: close the orbit sums of the invariant simple root vectors under brackets.
  const ChevalleyAlgebra g(rs);
  std::vector<Eigen::VectorXcd> simple;
  std::vector<Eigen::VectorXcd> found;
  std::set<int> pos_orbits;
  for (int o : tw.invariant_node_orbits) {
    Eigen::VectorXcd e = Eigen::VectorXcd::Zero(g.dim());
    for (int node : tw.node_orbits[o]) e[rs.index_of(tw.node_roots[node])] += 1.0;
    simple.push_back(e);
    found.push_back(e);
    pos_orbits.insert(tw.orbit_of[rs.index_of(tw.node_roots[tw.node_orbits[o][0]])]);
  }
  for (std::size_t idx = 0; idx < found.size(); ++idx) {
    for (const auto& e : simple) {
      const Eigen::VectorXcd y = g.bracket(e, found[idx]);
      if (y.norm() < 1e-9) continue;
      std::set<int> support;
      for (int a = 0; a < nr; ++a)
        if (std::abs(y[a]) > 1e-9) support.insert(tw.orbit_of[a]);
      if (support.size() != 1 || y.tail(rs.rank).norm() > 1e-9)
        throw std::logic_error("build_twist: invariant root vector spans several orbits");
      if (pos_orbits.insert(*support.begin()).second) found.push_back(y);
    }
  }
  std::set<int> all = pos_orbits;
  for (int o : pos_orbits) all.insert(tw.orbit_of[rs.negative(tw.orbits[o][0])]);
  tw.invariant_root_orbits.assign(all.begin(), all.end());

  const int dim = g.dim();
  tw.automorphism = Eigen::MatrixXd::Zero(dim, dim);
  for (int a = 0; a < nr; ++a) tw.automorphism(tw.root_perm[a], a) = 1.0;
  for (int i = 0; i < rs.rank; ++i) {
    const RatVec h = tw.node_coroot(tw.node_perm[i + 1]);
    for (int k = 0; k < rs.rank; ++k) tw.automorphism(g.cartan_offset() + k, g.cartan_offset() + i) = to_double(h[k]);
  }
  return tw;
}

std::string serialize(const TwistData& tw) {
  std::ostringstream os;
  auto rv = [](const RatVec& v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + to_string(v[i]);
    return s + ")";
  };
  os << "[twist]\n";
  os << "l = " << tw.l << "\nj = " << tw.j << "\nrotation = " << tw.rotation << "\n";
  os << "varpi = " << rv(tw.varpi) << "\nkappa = " << rv(tw.kappa) << "\n";
  os << "node_perm =";
  for (int n : tw.node_perm) os << " " << n;
  os << "\n";
  for (std::size_t o = 0; o < tw.orbits.size(); ++o) {
    os << "orbit " << o << " =";
    for (int r : tw.orbits[o]) os << " " << r;
    os << "\n";
  }
  os << "alpha0_node_orbit = " << tw.alpha0_orbit << "\n";
  for (std::size_t i = 0; i < tw.h0_basis.size(); ++i) os << "h0_basis " << i << " = " << rv(tw.h0_basis[i]) << "\n";
  for (std::size_t i = 0; i < tw.h0_coweights.size(); ++i)
    os << "h0_coweight " << i << " = " << rv(tw.h0_coweights[i]) << "\n";
  os << "invariant_root_orbits =";
  for (int o : tw.invariant_root_orbits) os << " " << o;
  os << "\n";
  return os.str();
}

}  // namespace ekzb
