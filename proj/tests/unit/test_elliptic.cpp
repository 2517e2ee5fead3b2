#include "doctest.h"
#include <functional>

#include "ellkzb/elliptic.hpp"
#include "ellkzb/elliptic_identities.hpp"
#include "oracles.hpp"

using namespace ekzb;

namespace {

const cplx kTaus[] = {cplx(0.0, 1.0), cplx(0.3, 0.9), cplx(-0.45, 0.7), cplx(0.1, 2.5)};
const cplx kPoints[] = {cplx(0.13, 0.07), cplx(-0.31, 0.22), cplx(0.4, -0.35), cplx(0.05, 0.6)};

// five-point stencil, O(h^4)
cplx derivative(const std::function<cplx(cplx)>& f, cplx z, double h = 1e-4) {
  return (f(z - 2 * h) - 8.0 * f(z - h) + 8.0 * f(z + h) - f(z + 2 * h)) / (12 * h);
}

}  // namespace

TEST_SUITE("elliptic") {

TEST_CASE("theta matches the triple product and the plain partial sum") {
  for (cplx tau : kTaus) {
    const EllipticContext ctx{Tau(tau)};
    for (cplx z : kPoints) {
      const cplx t = theta(z, ctx);
      CHECK(std::abs(t - oracle::theta_product(z, tau)) < 1e-13 * std::max(1.0, std::abs(t)));
      CHECK(std::abs(t - oracle::theta_brute(z, tau)) < 1e-13 * std::max(1.0, std::abs(t)));
    }
    CHECK(std::abs(ctx.theta_prime_zero() - oracle::theta_prime_zero_product(tau)) < 1e-12);
  }
}

TEST_CASE("theta quasi-periodicity") {
  for (cplx tau : kTaus) {
    const EllipticContext ctx{Tau(tau)};
    const cplx q = e_of(tau);
    for (cplx z : kPoints) {
      CHECK(std::abs(theta(z + 1.0, ctx) + theta(z, ctx)) < 1e-12);
      const cplx expected = -std::pow(q, -0.5) * e_of(-z) * theta(z, ctx);
      CHECK(std::abs(theta(z + tau, ctx) - expected) < 1e-11 * std::max(1.0, std::abs(expected)));
    }
  }
}

TEST_CASE("derived kernels") {
  for (cplx tau : kTaus) {
    const EllipticContext ctx{Tau(tau)};
    for (cplx z : kPoints) {
      CHECK(std::abs(e1(z, ctx) - oracle::e1_product(z, tau)) < 1e-11);
      const cplx dE1 = derivative([&](cplx w) { return e1(w, ctx); }, z);
      CHECK(std::abs(e2(z, ctx) + dE1) < 1e-7);
      CHECK(std::abs(wp(z, ctx) - wp_lattice_sum(z, tau)) < 1e-9 * std::max(1.0, std::abs(wp(z, ctx))));
      const cplx dwp = derivative([&](cplx w) { return wp(w, ctx); }, z);
      CHECK(std::abs(wp_deriv(z, ctx) - dwp) < 1e-6 * std::max(1.0, std::abs(dwp)));
      CHECK(std::abs(rho(z, ctx) - 0.5 * (e1(z, ctx) * e1(z, ctx) - wp(z, ctx))) < 1e-10);
      for (cplx u : kPoints) {
        if (std::abs(u - z) < 1e-12 || std::abs(u + z) < 0.05) continue;
        const cplx p = phi(u, z, ctx);
        CHECK(std::abs(p - oracle::phi_product(u, z, tau)) < 1e-10 * std::max(1.0, std::abs(p)));
        const cplx du = derivative([&](cplx v) { return phi(v, z, ctx); }, u);
        CHECK(std::abs(f_kernel(u, z, ctx) - du) < 1e-6 * std::max(1.0, std::abs(du)));
      }
    }
    CHECK(std::abs(eta1(ctx) - eta1_series(ctx)) < 1e-10);
  }
}

TEST_CASE("phi has residue 1 at z = 0") {
  SeriesOptions close;
  close.pole_radius = 1e-9;
  const EllipticContext near{Tau(cplx(0.2, 1.1)), close};
  const cplx u(0.17, 0.09);
  for (double eps : {1e-4, 1e-6}) CHECK(std::abs(eps * phi(u, eps, near) - 1.0) < 10 * eps);
}

TEST_CASE("degenerate twisted kernel reduces to E1 and rho") {
  const EllipticContext ctx{Tau(cplx(0.1, 0.95))};
  for (cplx z : kPoints) {
    const TwistedJet j = twisted_jet(TwistedArg{}, z, ctx);
    CHECK(std::abs(j.phi - e1(z, ctx)) < 1e-12);
    CHECK(std::abs(j.f - rho(z, ctx)) < 1e-10);
  }
}

TEST_CASE("twisted kernel equals the gauged classical kernel") {
  const EllipticContext ctx{Tau(cplx(0.1, 0.95))};
  const cplx pairing(0.12, 0.04), z(0.21, -0.13);
  const double kappa = 0.25;
  const cplx expected = e_of(kappa * z) * phi(pairing + 1.0 / 2.0, z, ctx);
  CHECK(std::abs(phi_twisted(pairing, 1, 2, kappa, z, ctx) - expected) < 1e-12);
}

TEST_CASE("poles and invalid input are reported") {
  const cplx tau(0.2, 1.1);
  const EllipticContext ctx{Tau(tau)};
  CHECK_THROWS_AS(e1(0.0, ctx), PoleError);
  CHECK_THROWS_AS(wp(1.0 + tau, ctx), PoleError);
  try {
    phi(cplx(0.1, 0.1), tau, ctx);
    FAIL("expected a pole");
  } catch (const PoleError& e) {
    CHECK(e.argument() == "z");
  }
  CHECK_THROWS_AS(Tau(cplx(0.3, -1.0)), std::invalid_argument);
  CHECK_THROWS_AS(Tau(cplx(0.3, 0.0)), std::invalid_argument);
  SeriesOptions bad;
  bad.max_terms = 0;
  CHECK_THROWS_AS(EllipticContext(Tau(tau), bad), std::invalid_argument);
}

TEST_CASE("identity suite on a small sample") {
  SampleSpec spec;
  spec.count = 6;
  spec.seed = 9;
  const auto res = identity_residuals(spec);
  CHECK(res.size() == 14);
  for (const auto& r : res) {
    INFO(r.name);
    CHECK(r.samples > 0);
    CHECK(r.max_residual < 1e-9);
  }
}

}  // TEST_SUITE
