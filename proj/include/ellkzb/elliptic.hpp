#pragma once

#include <array>
#include <complex>
#include <stdexcept>
#include <string>

namespace ekzb {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline const cplx kTwoPiI{0.0, 2.0 * kPi};

/// e(x) = exp(2 pi i x)
inline cplx e_of(cplx x) { return std::exp(kTwoPiI * x); }

/// Raised when an argument lies within the exclusion radius of the period lattice.
class PoleError : public std::domain_error {
 public:
  PoleError(std::string argument, cplx value);
  const std::string& argument() const { return argument_; }
  cplx value() const { return value_; }

 private:
  std::string argument_;
  cplx value_;
};

/// The theta series did not reach its tail bound within max_terms.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Tau {
 public:
  explicit Tau(cplx value);
  cplx value() const { return value_; }

 private:
  cplx value_;
};

struct SeriesOptions {
  double tolerance = 1e-16;
  int max_terms = 400;
  double pole_radius = 1e-4;
};

/// Theta function value and z-derivatives 0..4 at one point.
using ThetaJet = std::array<cplx, 5>;

/// Immutable evaluation context for one modular parameter.
class EllipticContext {
 public:
  explicit EllipticContext(Tau tau, SeriesOptions options = {});

  const Tau& tau() const { return tau_; }
  cplx q() const { return q_; }
  const SeriesOptions& options() const { return options_; }

  /// theta and its first `max_order` derivatives; higher slots are zero.
  ThetaJet theta_jet(cplx z, int max_order) const;

  cplx theta_prime_zero() const { return t1_zero_; }
  cplx theta_third_zero() const { return t3_zero_; }
  cplx eta1() const { return eta1_; }

  /// Euclidean distance to the nearest lattice point in the (1, tau) coordinates.
  double lattice_distance(cplx z) const;
  void require_off_lattice(cplx z, const std::string& what) const;

 private:
  Tau tau_;
  SeriesOptions options_;
  cplx q_;
  cplx t1_zero_;
  cplx t3_zero_;
  cplx eta1_;
};

cplx theta(cplx z, const EllipticContext& ctx);
cplx theta_deriv(cplx z, int order, const EllipticContext& ctx);

cplx e1(cplx z, const EllipticContext& ctx);
/// -d/dz E1
cplx e2(cplx z, const EllipticContext& ctx);
cplx wp(cplx z, const EllipticContext& ctx);
cplx wp_deriv(cplx z, const EllipticContext& ctx);
cplx eta1(const EllipticContext& ctx);
/// eta1 from the third derivative of theta at the origin.
cplx eta1_series(const EllipticContext& ctx);
/// Weierstrass p by row summation of cosecant squares; independent of the theta series.
cplx wp_lattice_sum(cplx z, cplx tau);
cplx rho(cplx z, const EllipticContext& ctx);

cplx phi(cplx u, cplx z, const EllipticContext& ctx);
cplx f_kernel(cplx u, cplx z, const EllipticContext& ctx);

/// phi(u, z) with its derivatives, all formed from three theta jets.
/// tau_phi is 2 pi i times the tau-derivative at fixed (u, z), via the heat equation for theta.
struct PhiJet {
  cplx phi;
  cplx f;       // d/du phi
  cplx dz_phi;
  cplx du_f;
  cplx dz_f;
  cplx tau_phi;
};
PhiJet phi_jet(cplx u, cplx z, const EllipticContext& ctx);

/// First argument of a twisted kernel: pairing = <u + kappa tau, alpha>, shift k/l,
/// kappa = <kappa, alpha>.  pairing, kappa and k = 0 (mod l) together select the Cartan kernel.
struct TwistedArg {
  cplx pairing{0.0, 0.0};
  int k = 0;
  int l = 1;
  double kappa = 0.0;

  bool degenerate() const;
  cplx shifted() const { return pairing + static_cast<double>(k) / l; }
};

/// Twisted kernel with derivatives.  tau_phi is 2 pi i d/dtau holding u fixed,
/// so the pairing moves with kappa tau.
struct TwistedJet {
  cplx phi;
  cplx f;
  cplx dz_phi;
  cplx du_f;
  cplx dz_f;
  cplx tau_phi;
};
TwistedJet twisted_jet(const TwistedArg& a, cplx z, const EllipticContext& ctx);

cplx phi_twisted(cplx pairing, int k, int l, double kappa_pairing, cplx z, const EllipticContext& ctx);
cplx f_twisted(cplx pairing, int k, int l, double kappa_pairing, cplx z, const EllipticContext& ctx);
/// order 0 and 1 analytic, orders 2 and 3 by central differences of order 1 (step 1e-5).
cplx phi_twisted_dz(cplx pairing, int k, int l, double kappa_pairing, cplx z, int order,
                    const EllipticContext& ctx);

}  // namespace ekzb
