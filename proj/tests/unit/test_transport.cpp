#include "doctest.h"

#include "ellkzb/config.hpp"
#include "ellkzb/sampling.hpp"
#include "ellkzb/transport.hpp"

using namespace ekzb;

namespace {

struct Belavin {
  RootSystem rs{build_root_system(Series::A, 1)};
  ChevalleyAlgebra g{rs};
  GSBasis basis{g, build_twist(rs, 2)};
  RMatrixModel model{basis};
  MarkedConfig cfg;

  Belavin() {
    const Representation V = defining_rep(g);
    cfg.reps = {V, V};
    cfg.point.u = Eigen::VectorXcd(0);
    cfg.point.tau = cplx(0.1, 1.1);
    cfg.z = {cplx(0.05, 0.02), cplx(-0.2, -0.1)};
  }
};

Eigen::MatrixXcd identity4() { return Eigen::MatrixXcd::Identity(4, 4); }

}  // namespace

TEST_SUITE("transport") {

TEST_CASE("transport requires the Belavin regime") {
  const RootSystem rs = build_root_system(Series::A, 1);
  const ChevalleyAlgebra g(rs);
  const GSBasis basis(g, build_twist(rs, 1));
  const RMatrixModel model(basis);
  MarkedConfig cfg;
  const Representation V = defining_rep(g);
  cfg.reps = {V, dual_rep(V)};
  cfg.point.u = Eigen::VectorXcd::Constant(1, cplx(0.1, 0.05));
  cfg.z = {0.1, -0.1};
  CHECK_THROWS_AS(transport(model, cfg, TransportVariable::Z, 0, {0.2}, identity4()), RegimeError);
}

TEST_CASE("path grammar") {
  const PathSpec a = parse_path("z1:0.3+0.25i;0.1-0.2i");
  CHECK(a.which == TransportVariable::Z);
  CHECK(a.point == 1);
  REQUIRE(a.vertices.size() == 2);
  CHECK(a.vertices[1] == cplx(0.1, -0.2));

  const PathSpec t = parse_path("tau:i;0.1+1.2i;");
  CHECK(t.which == TransportVariable::Tau);
  CHECK(t.vertices.size() == 2);
  CHECK(parse_path("z0:").vertices.empty());

  CHECK_THROWS_AS(parse_path("0.3+0.1i"), std::invalid_argument);
  CHECK_THROWS_AS(parse_path("w0:0.1"), std::invalid_argument);
  CHECK_THROWS_AS(parse_path("z1x:0.1"), std::invalid_argument);
  CHECK_THROWS(parse_path("z0:0.1+"));
}

TEST_CASE("generator is minus the KZB Hamiltonian") {
  Belavin b;
  const KzbSystem sys(b.model, b.cfg, false);
  const Eigen::MatrixXcd A = transport_generator(b.model, b.cfg, TransportVariable::Z, 0, b.cfg.z[0]);
  CHECK((A + sys.R(0)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("empty path and adaptive against fixed steps") {
  Belavin b;
  const TransportResult none = transport(b.model, b.cfg, TransportVariable::Z, 0, {}, identity4());
  CHECK(none.value == identity4());
  CHECK(none.steps == 0);

  const std::vector<cplx> path{cplx(0.15, 0.1), cplx(0.25, 0.0)};
  const Eigen::MatrixXcd adaptive = transport(b.model, b.cfg, TransportVariable::Z, 0, path, identity4()).value;
  TransportOptions fixed;
  fixed.fixed_steps = 400;
  const Eigen::MatrixXcd f = transport(b.model, b.cfg, TransportVariable::Z, 0, path, identity4(), fixed).value;
  CHECK((adaptive - f).norm() < 1e-9);
}

TEST_CASE("homotopy invariance in z and tau") {
  Belavin b;
  const cplx z0 = b.cfg.z[0], end = z0 + cplx(0.2, 0.0);
  const Eigen::MatrixXcd up =
      transport(b.model, b.cfg, TransportVariable::Z, 0, {z0 + cplx(0.1, 0.08), end}, identity4()).value;
  const Eigen::MatrixXcd down =
      transport(b.model, b.cfg, TransportVariable::Z, 0, {z0 + cplx(0.1, -0.08), end}, identity4()).value;
  CHECK((up - down).norm() / up.norm() < 1e-9);

  const cplx t0 = b.cfg.point.tau, t1 = t0 + cplx(0.1, 0.1);
  const Eigen::MatrixXcd x = transport(b.model, b.cfg, TransportVariable::Tau, 0, {t0 + 0.1, t1}, identity4()).value;
  const Eigen::MatrixXcd y =
      transport(b.model, b.cfg, TransportVariable::Tau, 0, {t0 + cplx(0.0, 0.1), t1}, identity4()).value;
  CHECK((x - y).norm() / x.norm() < 1e-9);
}

TEST_CASE("loops around another marked point give a nontrivial monodromy") {
  Belavin b;
  const cplx c = b.cfg.z[1], z0 = b.cfg.z[0];
  const cplx dir = (z0 - c) / std::abs(z0 - c);
  std::vector<cplx> loop;
  for (int k = 0; k <= 32; ++k) loop.push_back(c + 0.1 * dir * std::exp(cplx(0.0, 2.0 * kPi * k / 32)));
  loop.push_back(z0);
  const Eigen::MatrixXcd m = transport(b.model, b.cfg, TransportVariable::Z, 0, loop, identity4()).value;
  CHECK((m - identity4()).norm() > 1e-2);
  // the simple pole has residue C2, so det picks up exp(-2 pi i tr C2) = 1 for sl2 on C2 (x) C2
  CHECK(std::abs(m.determinant() - 1.0) < 1e-8);
}

}  // TEST_SUITE
