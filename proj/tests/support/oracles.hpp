#pragma once

#include <Eigen/Dense>
#include <complex>

// Reference implementations that share no code with the library.

namespace oracle {

using cplx = std::complex<double>;

/// theta(z) = 2i e^{pi i tau/4} sin(pi z) prod_m (1-q^m)(1-q^m w)(1-q^m/w), q = e(tau), w = e(z).
cplx theta_product(cplx z, cplx tau, int factors = 200);
/// theta'(0) from the same product.
cplx theta_prime_zero_product(cplx tau, int factors = 200);
/// Logarithmic derivative of the product: pi cot(pi z) + sum of geometric terms.
cplx e1_product(cplx z, cplx tau, int factors = 200);
/// theta'(0) theta(u+z) / (theta(u) theta(z)) from the product formula.
cplx phi_product(cplx u, cplx z, cplx tau);
/// Plain partial sum over |n| <= terms/2 of the defining theta series.
cplx theta_brute(cplx z, cplx tau, int terms = 400);

/// Dynamical elliptic r-matrix of sl_N on C^N (x) C^N written with elementary matrices:
///   sum_{i != j} e((k_i - k_j) z) phi(lam_i - lam_j, z) e_ij (x) e_ji + E1(z) (sum_i e_ii (x) e_ii - 1/N),
/// with lam = diag(u) + tau k and k = rho^vee / N.  u is given in simple-coroot
/// coordinates.  The factor e((k_i - k_j) z) is the gauge Ad_{e(kappa z)} on the first factor.
Eigen::MatrixXcd felder_r(const Eigen::VectorXcd& u_coroot, cplx tau, cplx z);

/// Part of a matrix on C^N (x) C^N supported on e_ii (x) e_jj, and the remainder.
Eigen::MatrixXcd cartan_cartan_part(const Eigen::MatrixXcd& m, int N);

}  // namespace oracle
