#include "doctest.h"

#include "ellkzb/rmatrix.hpp"
#include "ellkzb/sampling.hpp"
#include "oracles.hpp"

using namespace ekzb;

namespace {

struct Setup {
  RootSystem rs;
  ChevalleyAlgebra g;
  GSBasis basis;
  RMatrixModel model;
  Representation V;

  Setup(int rank, int l, UCoordinates coords = UCoordinates::SimpleCoroot,
        DerivationForm deriv = DerivationForm::DualBasis)
      : rs(build_root_system(Series::A, rank)),
        g(rs),
        basis(g, build_twist(rs, l)),
        model(basis, coords, deriv),
        V(defining_rep(g)) {}
};

const std::pair<int, int> kSweep[] = {{1, 1}, {1, 2}, {2, 1}, {2, 3}, {3, 1}, {3, 2}, {3, 4}};

}  // namespace

TEST_SUITE("rmatrix") {

TEST_CASE("untwisted r-matrix matches an independently coded Felder r-matrix") {
  // Agreement off the Cartan-Cartan block; there the two differ by a constant
  // antisymmetric tensor, which is a dynamical gauge.
  for (int rank : {1, 2, 3}) {
    const int N = rank + 1;
    Setup s(rank, 1);
    const Eigen::MatrixXcd P = swap_matrix(N, N);
    Rng rng(100 + rank);
    for (int i = 0; i < 4; ++i) {
      const ModuliPoint p = sample_moduli_point(s.model, rng);
      const auto zs = sample_marked_points(2, p.tau, rng);
      const Eigen::MatrixXcd d0 = eval_r(s.model, s.V, s.V, p, zs[0]) - oracle::felder_r(p.u, p.tau, zs[0]);
      const Eigen::MatrixXcd d1 = eval_r(s.model, s.V, s.V, p, zs[1]) - oracle::felder_r(p.u, p.tau, zs[1]);
      const Eigen::MatrixXcd c0 = oracle::cartan_cartan_part(d0, N);
      CHECK((d0 - c0).cwiseAbs().maxCoeff() < 1e-10);
      CHECK((c0 - oracle::cartan_cartan_part(d1, N)).cwiseAbs().maxCoeff() < 1e-10);
      CHECK((P * c0 * P + c0).cwiseAbs().maxCoeff() < 1e-10);
    }
  }
}

TEST_CASE("r-matrix axioms across the sweep") {
  for (const auto& [rank, l] : kSweep) {
    CAPTURE(rank);
    CAPTURE(l);
    Setup s(rank, l);
    const Representation W = dual_rep(s.V);
    Rng rng(7 * rank + l);
    for (int i = 0; i < 3; ++i) {
      const ModuliPoint p = sample_moduli_point(s.model, rng);
      const auto zs = sample_marked_points(2, p.tau, rng);
      const cplx z = zs[0] - zs[1];
      CHECK(unitarity_residual(s.model, s.V, W, p, z) < 1e-11);
      CHECK(zero_weight_residual(s.model, s.V, W, p, z) < 1e-11);
      CHECK(f_symmetry_residual(s.model, s.V, W, p, z) < 1e-11);
      CHECK(residue_residual(s.model, s.V, W, p) < 1e-6);
      CHECK(quasiperiodicity_residual(s.model, s.V, W, p, z).max() < 1e-10);
      CHECK(derivative_check(s.model, s.V, s.V, p, z).max() < 1e-5);
    }
  }
}

TEST_CASE("CDYBE holds with the dual-basis derivation in either u-coordinate convention") {
  for (const auto& [rank, l] : kSweep) {
    for (UCoordinates coords : {UCoordinates::SimpleCoroot, UCoordinates::FundamentalCoweight}) {
      Setup s(rank, l, coords);
      Rng rng(3);
      const ModuliPoint p = sample_moduli_point(s.model, rng);
      const auto z = sample_marked_points(3, p.tau, rng);
      CHECK(cdybe_residual(s.model, {s.V, s.V, s.V}, p, {z[0], z[1], z[2]}) < 1e-9);
    }
  }
}

TEST_CASE("the literal derivation element breaks CDYBE when h~0 is nonzero") {
  Setup s(1, 1, UCoordinates::SimpleCoroot, DerivationForm::Literal);
  Rng rng(5);
  const ModuliPoint p = sample_moduli_point(s.model, rng);
  const auto z = sample_marked_points(3, p.tau, rng);
  CHECK(cdybe_residual(s.model, {s.V, s.V, s.V}, p, {z[0], z[1], z[2]}) > 1e-3);
}

TEST_CASE("constant antisymmetric dynamical twist") {
  Setup s(2, 1);
  Eigen::MatrixXd A(2, 2);
  A << 0.0, 0.7, -0.7, 0.0;
  Rng rng(11);
  const ModuliPoint p = sample_moduli_point(s.model, rng);
  const auto z = sample_marked_points(3, p.tau, rng);
  CHECK(cdybe_residual(s.model, {s.V, s.V, s.V}, p, {z[0], z[1], z[2]}, &A) < 1e-9);
  CHECK(unitarity_residual(s.model, s.V, s.V, p, z[0] - z[1], &A) < 1e-11);
  CHECK(residue_residual(s.model, s.V, s.V, p, 1e-8, &A) < 1e-6);
  CHECK(quasiperiodicity_residual(s.model, s.V, s.V, p, z[0] - z[1], &A).max() < 1e-10);

  const Eigen::MatrixXcd delta = dynamical_twist_term(s.model, s.V, s.V, A);
  const RFunction twisted = apply_dynamical_twist(
      [&](const ModuliPoint& q, cplx w) { return eval_r(s.model, s.V, s.V, q, w); }, delta);
  CHECK((twisted(p, z[0]) - eval_r(s.model, s.V, s.V, p, z[0]) - delta).cwiseAbs().maxCoeff() == 0.0);

  Eigen::MatrixXd sym(2, 2);
  sym << 0.0, 1.0, 1.0, 0.0;
  CHECK_THROWS_AS(dynamical_twist_term(s.model, s.V, s.V, sym), std::invalid_argument);
  CHECK_THROWS_AS(dynamical_twist_term(s.model, s.V, s.V, Eigen::MatrixXd::Zero(3, 3)), std::invalid_argument);
}

TEST_CASE("simple pole on the discriminant") {
  Setup s(1, 1);
  Rng rng(2);
  const ModuliPoint p = sample_moduli_point(s.model, rng);
  const cplx z(0.21, 0.05);
  for (const RootTerm& t : s.basis.root_terms())
    CHECK(near_discriminant_residual(s.model, s.V, s.V, p, z, t.root, t.k) < 1e-5);

  // the pairing <u + kappa tau, alpha> is affine in u; put it at 0
  const int alpha = s.basis.root_terms()[0].root;
  ModuliPoint hit = p;
  hit.u[0] = 0.0;
  const cplx at0 = s.model.pairing(hit, alpha);
  hit.u[0] = 1.0;
  const cplx slope = s.model.pairing(hit, alpha) - at0;
  hit.u[0] = -at0 / slope;
  CHECK_THROWS_AS(eval_r(s.model, s.V, s.V, hit, z), PoleError);

  Setup b(1, 2);
  ModuliPoint pb;
  pb.u = Eigen::VectorXcd(0);
  pb.tau = cplx(0.1, 1.0);
  CHECK_THROWS_AS(near_discriminant_residual(b.model, b.V, b.V, pb, z, 0, 0), std::invalid_argument);
}

TEST_CASE("diagonal f at coincident points is unitary-symmetric") {
  Setup s(2, 3);
  ModuliPoint p;
  p.u = Eigen::VectorXcd(0);
  p.tau = cplx(0.05, 1.1);
  const Eigen::MatrixXcd f = eval_f_diagonal(s.model, s.V, p);
  CHECK(f.rows() == 3);
  const auto jet = SiteEvaluator(s.model, s.V).jet(p);
  CHECK((jet.f - f).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("tensor helpers") {
  const Eigen::MatrixXcd S = swap_matrix(2, 3);
  CHECK((swap_matrix(3, 2) * S - Eigen::MatrixXcd::Identity(6, 6)).cwiseAbs().maxCoeff() == 0.0);
  const Eigen::MatrixXcd A = Eigen::MatrixXcd::Random(2, 2), B = Eigen::MatrixXcd::Random(3, 3);
  CHECK((S * kron(A, B) * S.transpose() - kron(B, A)).cwiseAbs().maxCoeff() < 1e-15);

  const std::vector<int> dims{2, 3, 2};
  const Eigen::MatrixXcd pair = embed_pair(kron(A, B), dims, 0, 1);
  const Eigen::MatrixXcd prod = embed_site(A, dims, 0) * embed_site(B, dims, 1);
  CHECK((pair - prod).cwiseAbs().maxCoeff() < 1e-14);
  const Eigen::MatrixXcd rev = embed_pair(kron(B, A), dims, 1, 0);
  CHECK((rev - prod).cwiseAbs().maxCoeff() < 1e-14);

  const Eigen::MatrixXcd M = Eigen::MatrixXcd::Random(5, 5);
  const double sv = Eigen::JacobiSVD<Eigen::MatrixXcd>(M).singularValues()[0];
  CHECK(std::abs(operator_norm(M) - sv) < 1e-12 * sv);
}

}  // TEST_SUITE
