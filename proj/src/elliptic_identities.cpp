#include "ellkzb/elliptic_identities.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace ekzb {

namespace {

enum Id {
  kThetaPeriod1,
  kThetaPeriodTau,
  kPhiSymmetric,
  kPhiOdd,
  kTwistedPeriod1,
  kTwistedPeriodTau,
  kTwistedOdd,
  kHeat,
  kFayClassical,
  kFayTwisted,
  kFayDegenerate,
  kFayDifference,
  kFayOpposite,
  kFayDiagonal,
  kIdCount
};

const std::array<std::pair<const char*, const char*>, kIdCount> kIdentityNames{{
    {"theta_shift_1", "theta(z+1) = -theta(z)"},
    {"theta_shift_tau", "theta(z+tau) = -q^(-1/2) e(-z) theta(z)"},
    {"phi_symmetric", "phi(u,z) = phi(z,u)"},
    {"phi_odd", "phi(-u,-z) = -phi(u,z)"},
    {"twisted_shift_1", "phi_a^k(z+1) = e(<kappa,a>) phi_a^k(z)"},
    {"twisted_shift_tau", "phi_a^k(z+tau) = e(<kappa,a> tau - x_a^k) phi_a^k(z)"},
    {"twisted_odd", "phi_{-a}^{-k}(-z) = -phi_a^k(z)"},
    {"heat", "2 pi i d/dtau phi_a^k(z) = d/dz f_a^k(z)"},
    {"fay_classical", "phi(u1,z1)phi(u2,z2) = phi(u1+u2,z1)phi(u2,z2-z1) + phi(u1+u2,z2)phi(u1,z1-z2)"},
    {"fay_twisted",
     "phi_a(z_ac)f_b(z_ab) - phi_b(z_ab)f_a(z_ac) + phi_{a+b}(z_ab)f_a(z_bc) - phi_{a+b}(z_ac)f_{-b}(z_bc) = 0"},
    {"fay_degenerate",
     "phi_a(z_ac)rho(z_ab) - E1(z_ab)f_a(z_ac) + phi_a(z_ab)f_a(z_bc) - phi_a(z_ac)rho(z_cb) = -1/2 du f_a(z_ac)"},
    {"fay_difference", "phi_a f_b - phi_b f_a = phi_{a+b} (wp(x_a) - wp(x_b))"},
    {"fay_opposite", "phi_b f_{-b} - phi_{-b} f_b = wp'(x_b)"},
    {"fay_diagonal", "phi_b wp(x_b) - phi_b rho + E1 f_b = 1/2 du f_b"},
}};

TwistedArg negate(const TwistedArg& a) { return {-a.pairing, -a.k, a.l, -a.kappa}; }
TwistedArg add(const TwistedArg& a, const TwistedArg& b) {
  return {a.pairing + b.pairing, a.k + b.k, a.l, a.kappa + b.kappa};
}

}  // namespace

std::vector<IdentityResidual> identity_residuals(const SampleSpec& spec) {
  std::vector<IdentityResidual> out(kIdCount);
  for (int i = 0; i < kIdCount; ++i) {
    out[i].name = kIdentityNames[i].first;
    out[i].statement = kIdentityNames[i].second;
  }
  auto record = [&](Id id, cplx residual) {
    out[id].max_residual = std::max(out[id].max_residual, std::abs(residual));
    ++out[id].samples;
  };

  Rng rng(spec.seed);
  SeriesOptions opts;
  opts.tolerance = spec.series_tolerance;

  for (cplx tv : spec.taus) {
    const Tau tau(tv);
    const EllipticContext ctx(tau, opts);
    // d/dtau by the trapezoid rule on a circle around tau: spectrally accurate for a
    // holomorphic function, and series noise is only amplified by 1 / radius.
    constexpr int kNodes = 48;
    constexpr double kRadius = 0.02;
    std::vector<cplx> nodes;
    std::vector<EllipticContext> shifted;
    for (int s = 0; s < kNodes; ++s) {
      nodes.push_back(kRadius * std::exp(cplx(0.0, 2.0 * kPi * s / kNodes)));
      shifted.emplace_back(Tau(tv + nodes.back()), opts);
    }

    for (int l : spec.ls) {
      for (int sample = 0; sample < spec.count; ++sample) {
        cplx za, zb, zc;
        TwistedArg A, B;
        bool ok = false;
        for (int attempt = 0; attempt < 2000 && !ok; ++attempt) {
          za = rng.complex_box(0.45);
          zb = rng.complex_box(0.45);
          zc = rng.complex_box(0.45);
          const double ca = rng.uniform(-0.5, 0.5);
          const double cb = rng.uniform(-0.5, 0.5);
          A = {rng.complex_box(0.4) + ca * tv, rng.integer(0, l), l, ca};
          B = {rng.complex_box(0.4) + cb * tv, rng.integer(0, l), l, cb};
          ok = true;
          for (cplx w : {za, za - zb, za - zc, zb - zc, A.shifted(), B.shifted(),
                         A.shifted() + B.shifted(), A.pairing, B.pairing, A.pairing + B.pairing})
            if (ctx.lattice_distance(w) < spec.margin) ok = false;
        }
        if (!ok) throw std::runtime_error("identity_residuals: could not sample a pole-free point");
        const cplx zab = za - zb, zac = za - zc, zbc = zb - zc;

        const ThetaJet t = ctx.theta_jet(za, 0);
        record(kThetaPeriod1, ctx.theta_jet(za + 1.0, 0)[0] + t[0]);
        record(kThetaPeriodTau,
               ctx.theta_jet(za + tv, 0)[0] + std::exp(cplx(0.0, -kPi) * tv) * e_of(-za) * t[0]);

        const cplx u = A.pairing;
        record(kPhiSymmetric, phi(u, zac, ctx) - phi(zac, u, ctx));
        record(kPhiOdd, phi(-u, -zac, ctx) + phi(u, zac, ctx));

        const cplx pa = twisted_jet(A, zac, ctx).phi;
        record(kTwistedPeriod1, twisted_jet(A, zac + 1.0, ctx).phi - e_of(A.kappa) * pa);
        record(kTwistedPeriodTau,
               twisted_jet(A, zac + tv, ctx).phi - e_of(A.kappa * tv - A.shifted()) * pa);
        record(kTwistedOdd, twisted_jet(negate(A), -zac, ctx).phi + pa);

        // tau-derivative at fixed u: the pairing carries kappa tau.
        cplx dtau = 0.0;
        for (int s = 0; s < kNodes; ++s) {
          TwistedArg As = A;
          As.pairing += A.kappa * nodes[s];
          dtau += twisted_jet(As, zac, shifted[s]).phi / nodes[s];
        }
        dtau /= kNodes;
        record(kHeat, kTwoPiI * dtau - twisted_jet(A, zac, ctx).dz_f);

        const cplx u1 = A.shifted(), u2 = B.shifted();
        record(kFayClassical, phi(u1, zac, ctx) * phi(u2, zbc, ctx) -
                                  phi(u1 + u2, zac, ctx) * phi(u2, zbc - zac, ctx) -
                                  phi(u1 + u2, zbc, ctx) * phi(u1, zac - zbc, ctx));

        const TwistedArg AB = add(A, B);
        const TwistedJet a_ac = twisted_jet(A, zac, ctx);
        const TwistedJet a_ab = twisted_jet(A, zab, ctx);
        const TwistedJet a_bc = twisted_jet(A, zbc, ctx);
        const TwistedJet b_ab = twisted_jet(B, zab, ctx);
        const TwistedJet b_ac = twisted_jet(B, zac, ctx);
        const TwistedJet nb_bc = twisted_jet(negate(B), zbc, ctx);
        const TwistedJet nb_ac = twisted_jet(negate(B), zac, ctx);
        const TwistedJet ab_ab = twisted_jet(AB, zab, ctx);
        const TwistedJet ab_ac = twisted_jet(AB, zac, ctx);
        record(kFayTwisted,
               a_ac.phi * b_ab.f - b_ab.phi * a_ac.f + ab_ab.phi * a_bc.f - ab_ac.phi * nb_bc.f);

        const TwistedArg zero{0.0, 0, l, 0.0};
        const TwistedJet c_ab = twisted_jet(zero, zab, ctx);
        const cplx rho_cb = twisted_jet(zero, -zbc, ctx).f;
        record(kFayDegenerate, a_ac.phi * c_ab.f - c_ab.phi * a_ac.f + a_ab.phi * a_bc.f -
                                   a_ac.phi * rho_cb + 0.5 * a_ac.du_f);

        const cplx wpa = wp(A.shifted(), ctx), wpb = wp(B.shifted(), ctx);
        record(kFayDifference, a_ac.phi * b_ac.f - b_ac.phi * a_ac.f - ab_ac.phi * (wpa - wpb));
        record(kFayOpposite, b_ac.phi * nb_ac.f - nb_ac.phi * b_ac.f - wp_deriv(B.shifted(), ctx));

        const TwistedJet c_ac = twisted_jet(zero, zac, ctx);
        record(kFayDiagonal, b_ac.phi * wpb - b_ac.phi * c_ac.f + c_ac.phi * b_ac.f - 0.5 * b_ac.du_f);
      }
    }
  }
  return out;
}

}  // namespace ekzb
