#include "ellkzb/rational.hpp"

#include <stdexcept>

namespace ekzb {

RatMat rat_identity(int n) {
  RatMat m(n, RatVec(n, Rat(0)));
  for (int i = 0; i < n; ++i) m[i][i] = Rat(1);
  return m;
}

RatMat rat_inverse(const RatMat& m) {
  const int n = static_cast<int>(m.size());
  RatMat a = m;
  RatMat inv = rat_identity(n);
  for (int col = 0; col < n; ++col) {
    int piv = -1;
    for (int r = col; r < n; ++r)
      if (a[r][col] != Rat(0)) {
        piv = r;
        break;
      }
    if (piv < 0) throw std::domain_error("rat_inverse: singular matrix");
    std::swap(a[col], a[piv]);
    std::swap(inv[col], inv[piv]);
    const Rat p = a[col][col];
    for (int c = 0; c < n; ++c) {
      a[col][c] /= p;
      inv[col][c] /= p;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col || a[r][col] == Rat(0)) continue;
      const Rat f = a[r][col];
      for (int c = 0; c < n; ++c) {
        a[r][c] -= f * a[col][c];
        inv[r][c] -= f * inv[col][c];
      }
    }
  }
  return inv;
}

RatVec rat_mul(const RatMat& m, const RatVec& v) {
  RatVec out(m.size(), Rat(0));
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) out[i] += m[i][j] * v[j];
  return out;
}

RatMat rat_mul(const RatMat& a, const RatMat& b) {
  const std::size_t n = a.size(), k = b.size(), p = b.empty() ? 0 : b[0].size();
  RatMat out(n, RatVec(p, Rat(0)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t t = 0; t < k; ++t)
      if (a[i][t] != Rat(0))
        for (std::size_t j = 0; j < p; ++j) out[i][j] += a[i][t] * b[t][j];
  return out;
}

Rat rat_dot(const RatVec& a, const RatVec& b) {
  Rat s(0);
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double to_double(Rat r) { return boost::rational_cast<double>(r); }

std::string to_string(Rat r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

bool is_integer(Rat r) { return r.denominator() == 1; }

}  // namespace ekzb
