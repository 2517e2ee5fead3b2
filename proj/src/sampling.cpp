#include "ellkzb/sampling.hpp"

#include <cmath>
#include <stdexcept>

namespace ekzb {

namespace {
constexpr int kMaxAttempts = 100000;
}

ModuliPoint sample_moduli_point(const RMatrixModel& m, Rng& rng, std::optional<cplx> tau, double margin) {
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    ModuliPoint p;
    p.tau = tau ? *tau : cplx(rng.uniform(-0.3, 0.3), rng.uniform(0.8, 1.3));
    p.u = Eigen::VectorXcd(m.h0_dim());
    for (int j = 0; j < m.h0_dim(); ++j) p.u[j] = rng.complex_box(0.15);
    if (m.discriminant_distance(p) >= margin) return p;
  }
  throw std::runtime_error("sampling: no moduli point keeps clear of the discriminant");
}

std::vector<cplx> sample_marked_points(int n, cplx tau, Rng& rng, double min_sep) {
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    std::vector<cplx> out;
    for (int a = 0; a < n; ++a) out.push_back(rng.complex_box(0.3));
    bool ok = true;
    for (int a = 0; a < n && ok; ++a)
      for (int b = a + 1; b < n && ok; ++b) ok = std::abs(reduce_mod_lattice(out[a] - out[b], tau)) >= min_sep;
    if (ok) return out;
  }
  throw std::runtime_error("sampling: marked points keep colliding");
}

cplx reduce_mod_lattice(cplx w, cplx tau) {
  const double n0 = std::round(w.imag() / tau.imag());
  cplx best = w;
  for (int dn = -1; dn <= 1; ++dn) {
    const cplx v = w - (n0 + dn) * tau;
    const cplx c = v - std::round(v.real());
    if (std::abs(c) < std::abs(best)) best = c;
  }
  return best;
}

}  // namespace ekzb
