#include "doctest.h"

#include "ellkzb/kzb.hpp"
#include "ellkzb/sampling.hpp"

using namespace ekzb;

namespace {

struct Setup {
  RootSystem rs;
  ChevalleyAlgebra g;
  GSBasis basis;
  RMatrixModel model;

  Setup(int rank, int l) : rs(build_root_system(Series::A, rank)), g(rs), basis(g, build_twist(rs, l)), model(basis) {}

  MarkedConfig config(std::vector<Representation> reps, std::uint64_t seed) const {
    Rng rng(seed);
    MarkedConfig c;
    c.reps = std::move(reps);
    c.point = sample_moduli_point(model, rng);
    c.z = sample_marked_points(static_cast<int>(c.reps.size()), c.point.tau, rng);
    return c;
  }
};

}  // namespace

TEST_SUITE("kzb") {

TEST_CASE("configuration validation") {
  Setup s(1, 1);
  const Representation V = defining_rep(s.g);
  MarkedConfig c = s.config({V, V}, 1);
  c.z[1] = c.z[0] + 1.0 + c.point.tau;
  CHECK_THROWS_AS(validate(s.model, c), std::invalid_argument);
  c.z.push_back(0.3);
  CHECK_THROWS_AS(validate(s.model, c), std::invalid_argument);
  CHECK_THROWS_AS(curvature_zz(s.model, s.config({V, V}, 2), 0, 0), std::invalid_argument);
}

TEST_CASE("weight-zero projector") {
  Setup s(1, 1);
  const Representation V = defining_rep(s.g);
  const MarkedConfig c = s.config({V, dual_rep(V)}, 3);
  const Eigen::MatrixXcd P = weight_zero_projector(s.model, c);
  CHECK((P * P - P).cwiseAbs().maxCoeff() == 0.0);
  CHECK(std::abs(P.trace() - 2.0) < 1e-14);

  Setup b(1, 2);
  const MarkedConfig cb = b.config({defining_rep(b.g), defining_rep(b.g)}, 3);
  CHECK((weight_zero_projector(b.model, cb) - Eigen::MatrixXcd::Identity(4, 4)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("flatness on weight-zero vectors") {
  for (const auto& [rank, l] : {std::pair{1, 1}, std::pair{1, 2}, std::pair{2, 1}, std::pair{2, 3}}) {
    CAPTURE(rank);
    CAPTURE(l);
    Setup s(rank, l);
    const Representation V = defining_rep(s.g);
    const bool belavin = s.model.h0_dim() == 0;
    const std::vector<Representation> two = belavin ? std::vector{V, V} : std::vector{V, dual_rep(V)};
    std::vector<Representation> three = two;
    three.push_back(belavin ? V : adjoint_rep(s.g));

    const CurvatureData zz2 = curvature_zz(s.model, s.config(two, 4), 0, 1);
    CHECK(zz2.zeroth_norm < 1e-8);
    CHECK(zz2.du_norm < 1e-8);
    const CurvatureData zz3 = curvature_zz(s.model, s.config(three, 5), 1, 2);
    CHECK(zz3.zeroth_norm < 1e-8);
    CHECK(zz3.du_norm < 1e-8);
    const CurvatureData zt = curvature_ztau(s.model, s.config(two, 6), 1);
    CHECK(zt.zeroth_norm < 1e-7);
    CHECK(zt.du_norm < 1e-7);
    CHECK(zt.projector_rank > 0);
  }
}

TEST_CASE("projection matters when h~0 is nonzero") {
  Setup s(1, 1);
  const Representation V = defining_rep(s.g);
  const CurvatureData c = curvature_ztau(s.model, s.config({V, dual_rep(V)}, 8), 0);
  CHECK(c.zeroth_norm < 1e-7);
  CHECK(c.zeroth_norm_unprojected > 1e-3);
}

TEST_CASE("a rescaled z-derivative breaks flatness in tau") {
  Setup s(1, 2);
  const Representation V = defining_rep(s.g);
  MarkedConfig c = s.config({V, V}, 9);
  c.z_derivative_scale = 2.0;
  // [nabla_a, nabla_b] only sees the scale through terms that cancel by unitarity
  CHECK(curvature_zz(s.model, c, 0, 1).zeroth_norm < 1e-8);
  CHECK(curvature_ztau(s.model, c, 0).zeroth_norm > 1e-3);
}

TEST_CASE("connection operators") {
  Setup s(2, 1);
  const Representation V = defining_rep(s.g);
  const MarkedConfig c = s.config({V, dual_rep(V)}, 10);
  const FirstOrderOperator a = build_nabla_a(s.model, c, 1);
  CHECK(a.du_coeffs.size() == 2);
  CHECK(a.dz_coeffs[1] == cplx(1.0));
  CHECK(a.dz_coeffs[0] == cplx(0.0));
  const Eigen::MatrixXcd R = eval_r(s.model, dual_rep(V), V, c.point, c.z[1] - c.z[0]);
  CHECK((a.zeroth - embed_pair(R, {3, 3}, 1, 0)).cwiseAbs().maxCoeff() < 1e-12);

  const FirstOrderOperator t = build_nabla_tau(s.model, c);
  CHECK(t.dtau_coeff == kTwoPiI);
  const Eigen::MatrixXcd half_inverse = 0.5 * s.model.gram().inverse();
  CHECK((t.duu_coeffs - half_inverse).cwiseAbs().maxCoeff() < 1e-13);
  CHECK_THROWS_AS(build_nabla_a(s.model, c, 2), std::out_of_range);
}

}  // TEST_SUITE
