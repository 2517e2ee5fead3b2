#include "ellkzb/roots.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace ekzb {

namespace {

std::vector<std::vector<int>> cartan_matrix(Series series, int rank) {
  std::vector<std::vector<int>> a(rank, std::vector<int>(rank, 0));
  for (int i = 0; i < rank; ++i) a[i][i] = 2;
  auto link = [&](int i, int j) { a[i][j] = a[j][i] = -1; };
  if (series == Series::A) {
    for (int i = 0; i + 1 < rank; ++i) link(i, i + 1);
  } else {
    for (int i = 0; i + 2 < rank - 1; ++i) link(i, i + 1);
    link(rank - 3, rank - 2);
    link(rank - 3, rank - 1);
  }
  return a;
}

int height_of(const IntVec& v) { return std::accumulate(v.begin(), v.end(), 0); }

// Height first, then alpha_1 < alpha_2 < ...: at the first differing coordinate the
// larger coefficient comes first.
bool root_less(const IntVec& a, const IntVec& b) {
  const int ha = height_of(a), hb = height_of(b);
  if (ha != hb) return ha < hb;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) return a[i] > b[i];
  return false;
}

IntVec add(const IntVec& a, const IntVec& b) {
  IntVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

IntVec neg(const IntVec& a) {
  IntVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = -a[i];
  return r;
}

}  // namespace

int RootSystem::index_of(const IntVec& v) const {
  const bool pos = std::any_of(v.begin(), v.end(), [](int x) { return x > 0; });
  const int lo = pos ? 0 : num_positive;
  const int hi = pos ? num_positive : num_roots();
  for (int i = lo; i < hi; ++i)
    if (roots[i] == v) return i;
  return -1;
}

int RootSystem::negative(int a) const { return a < num_positive ? a + num_positive : a - num_positive; }

int RootSystem::height(int a) const { return height_of(roots[a]); }

int RootSystem::simple_index(int i) const {
  IntVec v(rank, 0);
  v[i] = 1;
  return index_of(v);
}

int RootSystem::inner(const IntVec& a, const IntVec& b) const {
  int s = 0;
  for (int i = 0; i < rank; ++i)
    for (int j = 0; j < rank; ++j) s += a[i] * cartan[i][j] * b[j];
  return s;
}

Rat RootSystem::pairing(const RatVec& h, const IntVec& alpha) const {
  Rat s(0);
  for (int i = 0; i < rank; ++i)
    for (int j = 0; j < rank; ++j)
      if (alpha[j] != 0) s += h[i] * Rat(cartan[i][j] * alpha[j]);
  return s;
}

RootSystem build_root_system(Series series, int rank) {
  if (series == Series::A && rank < 1) throw std::invalid_argument("A-series needs rank >= 1");
  if (series == Series::D && rank < 4) throw std::invalid_argument("D-series needs rank >= 4");
  RootSystem rs;
  rs.series = series;
  rs.rank = rank;
  rs.cartan = cartan_matrix(series, rank);

  // Positive roots by alpha-string closure from the simple roots.
  std::set<IntVec> found;
  std::vector<IntVec> layer;
  for (int i = 0; i < rank; ++i) {
    IntVec v(rank, 0);
    v[i] = 1;
    found.insert(v);
    layer.push_back(v);
  }
  while (!layer.empty()) {
    std::vector<IntVec> next;
    for (const IntVec& b : layer) {
      for (int i = 0; i < rank; ++i) {
        int p = 0;
        IntVec down = b;
        while (true) {
          down[i] -= 1;
          if (!found.count(down)) break;
          ++p;
        }
        int pair = 0;
        for (int j = 0; j < rank; ++j) pair += b[j] * rs.cartan[j][i];
        if (p - pair > 0) {
          IntVec up = b;
          up[i] += 1;
          if (found.insert(up).second) next.push_back(up);
        }
      }
    }
    layer = std::move(next);
  }
  std::vector<IntVec> pos(found.begin(), found.end());
  std::sort(pos.begin(), pos.end(), root_less);
  rs.num_positive = static_cast<int>(pos.size());
  rs.roots = pos;
  for (const IntVec& p : pos) rs.roots.push_back(neg(p));
  rs.highest_root = pos.back();
  rs.coxeter = height_of(rs.highest_root) + 1;
  rs.dual_coxeter = rs.coxeter;  // simply laced

  RatMat A(rank, RatVec(rank));
  for (int i = 0; i < rank; ++i)
    for (int j = 0; j < rank; ++j) A[i][j] = rs.cartan[i][j];
  rs.fundamental_coweights = rat_inverse(A);
  rs.rho_coweight.assign(rank, Rat(0));
  for (int i = 0; i < rank; ++i)
    for (int j = 0; j < rank; ++j) rs.rho_coweight[j] += rs.fundamental_coweights[i][j];

  // Extraspecial pairs: the smallest positive alpha with xi - alpha positive.
  rs.extraspecial.assign(rs.num_positive, {-1, -1});
  for (int x = 0; x < rs.num_positive; ++x) {
    if (rs.height(x) == 1) continue;
    for (int a = 0; a < rs.num_positive; ++a) {
      IntVec d = rs.roots[x];
      for (int i = 0; i < rank; ++i) d[i] -= rs.roots[a][i];
      const int b = rs.index_of(d);
      if (b >= 0 && b < rs.num_positive) {
        rs.extraspecial[x] = {a, b};
        break;
      }
    }
  }

  const int n = rs.num_roots();
  auto sum_index = [&](int a, int b) { return rs.index_of(add(rs.roots[a], rs.roots[b])); };
  std::map<std::pair<int, int>, int> memo;
  std::function<int(int, int)> N = [&](int a, int b) -> int {
    const int s = sum_index(a, b);
    if (s < 0) return 0;
    auto it = memo.find({a, b});
    if (it != memo.end()) return it->second;
    int val = 0;
    const bool pa = rs.is_positive(a), pb = rs.is_positive(b);
    if (pa && pb) {
      const auto [e1, e2] = rs.extraspecial[s];
      if (a == e1 && b == e2) {
        val = 1;
      } else if (a == e2 && b == e1) {
        val = -1;
      } else {
        // Four-root relation with (a, b, -e1, -e2); all roots have squared length 2.
        const int ne1 = rs.negative(e1), ne2 = rs.negative(e2);
        int acc = 0;
        if (sum_index(b, ne1) >= 0) acc += N(b, ne1) * N(a, ne2);
        if (sum_index(a, ne1) >= 0) acc += N(ne1, a) * N(b, ne2);
        val = acc;  // N(e1, e2) = 1
      }
    } else if (!pa && !pb) {
      val = -N(rs.negative(a), rs.negative(b));
    } else {
      const int g = rs.negative(s);  // a + b + g = 0: N(a,b) = N(b,g) = N(g,a)
      if (pa) {
        val = rs.is_positive(g) ? N(g, a) : N(b, g);
      } else {
        val = rs.is_positive(g) ? N(b, g) : N(g, a);
      }
    }
    memo[{a, b}] = val;
    return val;
  };
  rs.structure.assign(n, std::vector<int>(n, 0));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) rs.structure[a][b] = N(a, b);
  return rs;
}

ChevalleyAlgebra::ChevalleyAlgebra(const RootSystem& rs)
    : rs_(rs), dim_(rs.num_roots() + rs.rank), table_(dim_ * dim_), form_(Eigen::MatrixXd::Zero(dim_, dim_)) {
  const int n = rs.num_roots();
  const int off = n;
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      auto& cell = table_[a * dim_ + b];
      if (b == rs.negative(a)) {
        for (int k = 0; k < rs.rank; ++k)
          if (rs.roots[a][k] != 0) cell.push_back({off + k, rs.roots[a][k]});
      } else if (rs.structure[a][b] != 0) {
        cell.push_back({rs.index_of(add(rs.roots[a], rs.roots[b])), rs.structure[a][b]});
      }
    }
    for (int i = 0; i < rs.rank; ++i) {
      int p = 0;
      for (int j = 0; j < rs.rank; ++j) p += rs.cartan[i][j] * rs.roots[a][j];
      if (p != 0) {
        table_[(off + i) * dim_ + a].push_back({a, p});
        table_[a * dim_ + off + i].push_back({a, -p});
      }
    }
    form_(a, rs.negative(a)) = 1.0;
  }
  for (int i = 0; i < rs.rank; ++i)
    for (int j = 0; j < rs.rank; ++j) form_(off + i, off + j) = rs.cartan[i][j];
}

Eigen::VectorXcd ChevalleyAlgebra::bracket(const Eigen::VectorXcd& x, const Eigen::VectorXcd& y) const {
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(dim_);
  for (int i = 0; i < dim_; ++i) {
    if (x[i] == 0.0) continue;
    for (int j = 0; j < dim_; ++j) {
      if (y[j] == 0.0) continue;
      const std::complex<double> c = x[i] * y[j];
      for (const auto& [k, v] : table_[i * dim_ + j]) out[k] += c * static_cast<double>(v);
    }
  }
  return out;
}

Eigen::VectorXcd ChevalleyAlgebra::cartan_element(const RatVec& h) const {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim_);
  for (int i = 0; i < rs_.rank; ++i) v[cartan_offset() + i] = to_double(h[i]);
  return v;
}

Eigen::VectorXcd ChevalleyAlgebra::cartan_element(const Eigen::VectorXcd& h) const {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim_);
  v.segment(cartan_offset(), rs_.rank) = h;
  return v;
}

Eigen::VectorXcd ChevalleyAlgebra::unit(int i) const {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim_);
  v[i] = 1.0;
  return v;
}

std::string serialize(const RootSystem& rs) {
  std::ostringstream os;
  os << "[root_system]\n";
  os << "series = " << (rs.series == Series::A ? "A" : "D") << "\n";
  os << "rank = " << rs.rank << "\n";
  os << "coxeter = " << rs.coxeter << "\n";
  os << "dual_coxeter = " << rs.dual_coxeter << "\n";
  auto vec = [&](const IntVec& v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s + ")";
  };
  os << "cartan =";
  for (const auto& row : rs.cartan) os << " " << vec(row);
  os << "\n";
  for (int a = 0; a < rs.num_roots(); ++a) os << "root " << a << " = " << vec(rs.roots[a]) << "\n";
  os << "rho_coweight =";
  for (const Rat& r : rs.rho_coweight) os << " " << to_string(r);
  os << "\n";
  for (int a = 0; a < rs.num_roots(); ++a)
    for (int b = 0; b < rs.num_roots(); ++b)
      if (rs.structure[a][b] != 0) os << "C " << a << " " << b << " = " << rs.structure[a][b] << "\n";
  return os.str();
}

}  // namespace ekzb
