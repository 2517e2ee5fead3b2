#include "ellkzb/elliptic.hpp"

#include <cmath>
#include <sstream>

namespace ekzb {

namespace {

std::string describe(const std::string& arg, cplx v) {
  std::ostringstream os;
  os << "pole: argument '" << arg << "' = " << v.real() << (v.imag() < 0 ? "" : "+") << v.imag()
     << "i lies on the period lattice";
  return os.str();
}

}  // namespace

PoleError::PoleError(std::string argument, cplx value)
    : std::domain_error(describe(argument, value)), argument_(std::move(argument)), value_(value) {}

Tau::Tau(cplx value) : value_(value) {
  if (!(value.imag() > 0.0)) throw std::invalid_argument("tau must lie in the upper half-plane");
}

EllipticContext::EllipticContext(Tau tau, SeriesOptions options)
    : tau_(tau), options_(options), q_(std::exp(kTwoPiI * tau.value())) {
  if (options_.tolerance <= 0.0 || options_.max_terms <= 0)
    throw std::invalid_argument("series options must be positive");
  const ThetaJet j0 = theta_jet(0.0, 3);
  t1_zero_ = j0[1];
  t3_zero_ = j0[3];
  // eta1 from E2 - p at one reference point, p taken from the row sum.
  const cplx z0 = 0.37 * (1.0 + tau.value()) / 2.0;
  const ThetaJet j = theta_jet(z0, 2);
  const cplx E1 = j[1] / j[0];
  const cplx E2 = E1 * E1 - j[2] / j[0];
  eta1_ = 0.5 * (E2 - wp_lattice_sum(z0, tau.value()));
}

// theta(z) = sum_n (-1)^n exp(pi i tau (n+1/2)^2 + 2 pi i (n+1/2) z), summed in pairs n, -n-1.
ThetaJet EllipticContext::theta_jet(cplx z, int max_order) const {
  ThetaJet out{};
  const cplx pi_i(0.0, kPi);
  const cplx t = tau_.value();
  double scale = 0.0;
  double prev = 0.0;
  for (int m = 0; m < options_.max_terms; ++m) {
    double mag = 0.0;
    for (int n : {m, -m - 1}) {
      const double s = n + 0.5;
      const cplx term = std::exp(pi_i * (t * s * s + 2.0 * s * z)) * ((n % 2 != 0) ? -1.0 : 1.0);
      const cplx fac = 2.0 * s * pi_i;
      cplx p = 1.0;
      for (int d = 0; d <= max_order; ++d) {
        out[d] += term * p;
        p *= fac;
      }
      mag = std::max(mag, std::abs(term) * std::pow(1.0 + std::abs(fac), max_order));
    }
    scale = std::max(scale, mag);
    if (m > 0 && mag < prev) {
      const double r = mag / prev;
      if (r < 0.5 && mag * r / (1.0 - r) <= options_.tolerance * scale) return out;
    }
    prev = mag;
  }
  throw ConvergenceError("theta series did not converge within max_terms; tau too close to the real axis?");
}

double EllipticContext::lattice_distance(cplx z) const {
  const cplx t = tau_.value();
  const double b = z.imag() / t.imag();
  const double a = z.real() - b * t.real();
  return std::hypot(a - std::round(a), b - std::round(b));
}

void EllipticContext::require_off_lattice(cplx z, const std::string& what) const {
  if (lattice_distance(z) < options_.pole_radius) throw PoleError(what, z);
}

cplx theta(cplx z, const EllipticContext& ctx) { return ctx.theta_jet(z, 0)[0]; }

cplx theta_deriv(cplx z, int order, const EllipticContext& ctx) {
  if (order < 0 || order > 4) throw std::invalid_argument("theta_deriv: order must be in 0..4");
  return ctx.theta_jet(z, order)[order];
}

cplx e1(cplx z, const EllipticContext& ctx) {
  ctx.require_off_lattice(z, "z");
  const ThetaJet j = ctx.theta_jet(z, 1);
  return j[1] / j[0];
}

cplx e2(cplx z, const EllipticContext& ctx) {
  ctx.require_off_lattice(z, "z");
  const ThetaJet j = ctx.theta_jet(z, 2);
  const cplx E1 = j[1] / j[0];
  return E1 * E1 - j[2] / j[0];
}

cplx wp(cplx z, const EllipticContext& ctx) { return e2(z, ctx) - 2.0 * ctx.eta1(); }

cplx wp_deriv(cplx z, const EllipticContext& ctx) {
  ctx.require_off_lattice(z, "z");
  const ThetaJet j = ctx.theta_jet(z, 3);
  const cplx E1 = j[1] / j[0];
  const cplx dE1 = j[2] / j[0] - E1 * E1;
  const cplx ddE1 = j[3] / j[0] - j[2] * j[1] / (j[0] * j[0]) - 2.0 * E1 * dE1;
  return -ddE1;
}

cplx eta1(const EllipticContext& ctx) { return ctx.eta1(); }

cplx eta1_series(const EllipticContext& ctx) {
  return -ctx.theta_third_zero() / (6.0 * ctx.theta_prime_zero());
}

cplx wp_lattice_sum(cplx z, cplx tau) {
  const double pi2 = kPi * kPi;
  auto csc2 = [&](cplx w) {
    const cplx s = std::sin(kPi * w);
    return pi2 / (s * s);
  };
  cplx sum = csc2(z) - pi2 / 3.0;
  for (int m = 1; m < 10000; ++m) {
    const cplx mt = static_cast<double>(m) * tau;
    const cplx term = csc2(z + mt) + csc2(z - mt) - 2.0 * csc2(mt);
    sum += term;
    if (std::abs(term) <= 1e-18 * std::abs(sum) && m > 1) break;
    if (kPi * mt.imag() > 300.0) break;
  }
  return sum;
}

cplx rho(cplx z, const EllipticContext& ctx) {
  const cplx E1 = e1(z, ctx);
  return 0.5 * (E1 * E1 - wp(z, ctx));
}

PhiJet phi_jet(cplx u, cplx z, const EllipticContext& ctx) {
  ctx.require_off_lattice(u, "u");
  ctx.require_off_lattice(z, "z");
  const ThetaJet ju = ctx.theta_jet(u, 2);
  const ThetaJet jz = ctx.theta_jet(z, 2);
  const ThetaJet jw = ctx.theta_jet(u + z, 2);
  const cplx E1u = ju[1] / ju[0];
  const cplx E1z = jz[1] / jz[0];
  const cplx E2u = E1u * E1u - ju[2] / ju[0];
  // Factor A keeps every expression finite when u + z hits the lattice.
  const cplx A = ctx.theta_prime_zero() / (ju[0] * jz[0]);
  PhiJet r;
  r.phi = A * jw[0];
  r.dz_phi = A * jw[1] - r.phi * E1z;
  r.f = A * jw[1] - r.phi * E1u;
  r.du_f = A * jw[2] - 2.0 * E1u * A * jw[1] + r.phi * (E1u * E1u + E2u);
  r.dz_f = A * (jw[2] - E1z * jw[1]) - E1u * r.dz_phi;
  r.tau_phi = 0.5 * (A * jw[2] + r.phi * (ctx.theta_third_zero() / ctx.theta_prime_zero() -
                                          ju[2] / ju[0] - jz[2] / jz[0]));
  return r;
}

cplx phi(cplx u, cplx z, const EllipticContext& ctx) { return phi_jet(u, z, ctx).phi; }
cplx f_kernel(cplx u, cplx z, const EllipticContext& ctx) { return phi_jet(u, z, ctx).f; }

bool TwistedArg::degenerate() const {
  return pairing == cplx(0.0, 0.0) && kappa == 0.0 && k % l == 0;
}

TwistedJet twisted_jet(const TwistedArg& a, cplx z, const EllipticContext& ctx) {
  TwistedJet r;
  if (a.degenerate()) {
    ctx.require_off_lattice(z, "z");
    const ThetaJet j = ctx.theta_jet(z, 3);
    const cplx E1 = j[1] / j[0];
    const cplx E2 = E1 * E1 - j[2] / j[0];
    const cplx P = E2 - 2.0 * ctx.eta1();
    const cplx dE1 = -E2;
    const cplx dP = -(j[3] / j[0] - j[2] * j[1] / (j[0] * j[0]) - 2.0 * E1 * dE1);
    r.phi = E1;
    r.f = 0.5 * (E1 * E1 - P);
    r.dz_phi = -E2;
    r.du_f = 0.0;
    r.dz_f = -E1 * E2 - 0.5 * dP;
    r.tau_phi = 0.5 * (j[3] / j[0] - E1 * j[2] / j[0]);
    return r;
  }
  const cplx x = a.shifted();
  ctx.require_off_lattice(x, "pairing + k/l");
  const PhiJet j = phi_jet(x, z, ctx);
  const cplx c2pi = kTwoPiI * a.kappa;
  const cplx ph = std::exp(c2pi * z);
  r.phi = ph * j.phi;
  r.f = ph * j.f;
  r.dz_phi = ph * (c2pi * j.phi + j.dz_phi);
  r.du_f = ph * j.du_f;
  r.dz_f = ph * (c2pi * j.f + j.dz_f);
  r.tau_phi = ph * (j.tau_phi + c2pi * j.f);
  return r;
}

cplx phi_twisted(cplx pairing, int k, int l, double kappa_pairing, cplx z, const EllipticContext& ctx) {
  return twisted_jet({pairing, k, l, kappa_pairing}, z, ctx).phi;
}

cplx f_twisted(cplx pairing, int k, int l, double kappa_pairing, cplx z, const EllipticContext& ctx) {
  const TwistedArg a{pairing, k, l, kappa_pairing};
  if (z == cplx(0.0, 0.0) && !a.degenerate()) {
    ctx.require_off_lattice(a.shifted(), "pairing + k/l");
    return -e2(a.shifted(), ctx);
  }
  return twisted_jet(a, z, ctx).f;
}

cplx phi_twisted_dz(cplx pairing, int k, int l, double kappa_pairing, cplx z, int order,
                    const EllipticContext& ctx) {
  const TwistedArg a{pairing, k, l, kappa_pairing};
  switch (order) {
    case 0:
      return twisted_jet(a, z, ctx).phi;
    case 1:
      return twisted_jet(a, z, ctx).dz_phi;
    case 2:
    case 3: {
      const double h = 1e-5;
      const cplx up = twisted_jet(a, z + h, ctx).dz_phi;
      const cplx dn = twisted_jet(a, z - h, ctx).dz_phi;
      if (order == 2) return (up - dn) / (2.0 * h);
      return (up - 2.0 * twisted_jet(a, z, ctx).dz_phi + dn) / (h * h);
    }
    default:
      throw std::invalid_argument("phi_twisted_dz: order must be in 0..3");
  }
}

}  // namespace ekzb
