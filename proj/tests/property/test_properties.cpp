#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <numeric>

#include "ellkzb/config.hpp"
#include "ellkzb/random.hpp"
#include "ellkzb/rmatrix.hpp"
#include "ellkzb/sampling.hpp"
#include "oracles.hpp"

using namespace ekzb;

namespace {

cplx random_tau(Rng& rng) { return {rng.uniform(-0.5, 0.5), rng.uniform(0.6, 1.6)}; }

struct RandomTwist {
  int rank, l, j;
};

RandomTwist random_twist(Rng& rng, int max_rank) {
  RandomTwist t{};
  t.rank = rng.integer(1, max_rank + 1);
  const int N = t.rank + 1;
  std::vector<int> divisors;
  for (int d = 1; d <= N; ++d)
    if (N % d == 0) divisors.push_back(d);
  t.l = divisors[rng.integer(0, static_cast<int>(divisors.size()))];
  std::vector<int> js;
  for (int j = 1; j <= std::max(1, t.l - 1); ++j)
    if (std::gcd(j, t.l) == 1) js.push_back(j);
  t.j = js[rng.integer(0, static_cast<int>(js.size()))];
  return t;
}

Eigen::MatrixXcd random_matrix(Rng& rng, int r, int c) {
  Eigen::MatrixXcd m(r, c);
  for (int i = 0; i < r; ++i)
    for (int k = 0; k < c; ++k) m(i, k) = rng.complex_box(1.0);
  return m;
}

}  // namespace

TEST_SUITE("property") {

TEST_CASE("theta: periodicity, parity and the triple product") {
  Rng rng(1001);
  for (int trial = 0; trial < 200; ++trial) {
    const cplx tau = random_tau(rng);
    const EllipticContext ctx{Tau(tau)};
    const cplx z = rng.complex_box(0.5);
    const cplx t = theta(z, ctx);
    const double scale = std::max(1.0, std::abs(t));
    CHECK(std::abs(theta(-z, ctx) + t) < 1e-12 * scale);
    CHECK(std::abs(theta(z + 1.0, ctx) + t) < 1e-12 * scale);
    const cplx shifted = -std::exp(-kTwoPiI * (0.5 * tau + z)) * t;
    CHECK(std::abs(theta(z + tau, ctx) - shifted) < 1e-11 * std::max(1.0, std::abs(shifted)));
    CHECK(std::abs(t - oracle::theta_product(z, tau)) < 1e-12 * scale);
  }
}

TEST_CASE("phi: quasi-periodicity and oddness") {
  Rng rng(1002);
  for (int trial = 0; trial < 200; ++trial) {
    const cplx tau = random_tau(rng);
    const EllipticContext ctx{Tau(tau)};
    const cplx u = rng.complex_box(0.45), z = rng.complex_box(0.45);
    if (ctx.lattice_distance(u) < 0.05 || ctx.lattice_distance(z) < 0.05 || ctx.lattice_distance(u + z) < 0.05)
      continue;
    const cplx p = phi(u, z, ctx);
    const double scale = std::max(1.0, std::abs(p));
    CHECK(std::abs(phi(u, z + 1.0, ctx) - p) < 1e-10 * scale);
    CHECK(std::abs(phi(u, z + tau, ctx) - e_of(-u) * p) < 1e-10 * scale);
    CHECK(std::abs(phi(-u, -z, ctx) + p) < 1e-10 * scale);
    CHECK(std::abs(phi(z, u, ctx) - p) < 1e-10 * scale);
  }
}

TEST_CASE("number formatting round-trips arbitrary doubles") {
  Rng rng(1003);
  int checked = 0;
  while (checked < 2000) {
    std::uint64_t bits = 0;
    for (int k = 0; k < 4; ++k) bits = (bits << 16) ^ static_cast<std::uint64_t>(rng.integer(0, 1 << 16));
    double x = 0.0;
    std::memcpy(&x, &bits, sizeof x);
    if (!std::isfinite(x)) continue;
    ++checked;
    CHECK(std::strtod(format_double(x).c_str(), nullptr) == x);
    const cplx z(x, rng.uniform(-1e3, 1e3));
    const cplx back = parse_complex(format_complex(z));
    CHECK(back.real() == z.real());
    CHECK(back.imag() == z.imag());
  }
}

TEST_CASE("random twists: lambda has order l and the GS bracket closes") {
  Rng rng(1004);
  for (int trial = 0; trial < 12; ++trial) {
    const RandomTwist t = random_twist(rng, 5);
    CAPTURE(t.rank);
    CAPTURE(t.l);
    CAPTURE(t.j);
    const RootSystem rs = build_root_system(Series::A, t.rank);
    const ChevalleyAlgebra g(rs);
    const TwistData tw = build_twist(rs, t.l, t.j);
    for (int r = 0; r < rs.num_roots(); ++r) CHECK(tw.lambda_pow(r, t.l) == r);

    for (const Representation& rep : {defining_rep(g), dual_rep(defining_rep(g)), adjoint_rep(g)})
      CHECK(relation_residual(g, rep) < 1e-12);

    const GSBasis basis(g, tw);
    const auto M = basis.rep_matrices(defining_rep(g));
    double worst = 0.0;
    for (int a = 0; a < 40; ++a) {
      const int i = rng.integer(0, basis.size()), k = rng.integer(0, basis.size());
      Eigen::MatrixXcd lhs = M[i] * M[k] - M[k] * M[i];
      for (const auto& [m, c] : basis.bracket(i, k)) lhs -= c * M[m];
      worst = std::max(worst, lhs.cwiseAbs().maxCoeff());
    }
    CHECK(worst < 1e-12);
  }
}

TEST_CASE("random twists: unitarity, zero weight and CDYBE") {
  Rng rng(1005);
  for (int trial = 0; trial < 8; ++trial) {
    const RandomTwist t = random_twist(rng, 4);
    CAPTURE(t.rank);
    CAPTURE(t.l);
    CAPTURE(t.j);
    const RootSystem rs = build_root_system(Series::A, t.rank);
    const ChevalleyAlgebra g(rs);
    const GSBasis basis(g, build_twist(rs, t.l, t.j));
    const RMatrixModel model(basis);
    const Representation V = defining_rep(g);
    const ModuliPoint p = sample_moduli_point(model, rng);
    const auto z = sample_marked_points(3, p.tau, rng);
    CHECK(unitarity_residual(model, V, dual_rep(V), p, z[0] - z[1]) < 1e-11);
    CHECK(zero_weight_residual(model, V, V, p, z[0] - z[2]) < 1e-11);
    CHECK(cdybe_residual(model, {V, V, V}, p, {z[0], z[1], z[2]}) < 1e-9);
  }
}

TEST_CASE("operator norm is a submultiplicative, unitarily invariant norm") {
  Rng rng(1006);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = rng.integer(1, 9);
    const Eigen::MatrixXcd A = random_matrix(rng, n, n), B = random_matrix(rng, n, n);
    const double a = operator_norm(A), b = operator_norm(B);
    CHECK(a >= 0.0);
    CHECK(operator_norm(A + B) <= (a + b) * (1 + 1e-12));
    CHECK(operator_norm(A * B) <= a * b * (1 + 1e-12));
    const cplx c = rng.complex_box(3.0);
    CHECK(std::abs(operator_norm(c * A) - std::abs(c) * a) < 1e-12 * (1 + std::abs(c) * a));
    const Eigen::MatrixXcd U = Eigen::HouseholderQR<Eigen::MatrixXcd>(B).householderQ();
    CHECK(std::abs(operator_norm(U * A * U.adjoint()) - a) < 1e-11 * (1 + a));
    CHECK(operator_norm(A) >= A.cwiseAbs().maxCoeff() * (1 - 1e-12));
  }
}

TEST_CASE("embedding into tensor products is consistent") {
  Rng rng(1007);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = rng.integer(2, 5);
    std::vector<int> dims(n);
    for (int& d : dims) d = rng.integer(1, 4);
    const int a = rng.integer(0, n);
    int c = rng.integer(0, n - 1);
    if (c >= a) ++c;
    const Eigen::MatrixXcd X = random_matrix(rng, dims[a], dims[a]), Y = random_matrix(rng, dims[c], dims[c]);
    const Eigen::MatrixXcd lhs = embed_pair(kron(X, Y), dims, a, c);
    const Eigen::MatrixXcd rhs = embed_site(X, dims, a) * embed_site(Y, dims, c);
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-13);
    CHECK((embed_site(X, dims, a) * embed_site(Y, dims, c) - embed_site(Y, dims, c) * embed_site(X, dims, a))
              .cwiseAbs()
              .maxCoeff() < 1e-13);
  }
}

}  // TEST_SUITE
