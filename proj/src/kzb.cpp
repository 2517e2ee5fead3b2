#include "ellkzb/kzb.hpp"

#include <cmath>
#include <stdexcept>

namespace ekzb {

void validate(const RMatrixModel& m, const MarkedConfig& cfg) {
  if (cfg.reps.size() != cfg.z.size())
    throw std::invalid_argument("marked configuration: " + std::to_string(cfg.z.size()) + " points but " +
                                std::to_string(cfg.reps.size()) + " representations");
  if (cfg.z.empty()) throw std::invalid_argument("marked configuration: no points");
  const EllipticContext ctx = m.context(cfg.point.tau);
  for (int a = 0; a < cfg.n(); ++a)
    for (int b = a + 1; b < cfg.n(); ++b)
      if (ctx.lattice_distance(cfg.z[a] - cfg.z[b]) <= m.series_options().pole_radius)
        throw std::invalid_argument("marked points " + std::to_string(a) + " and " + std::to_string(b) +
                                    " coincide modulo the lattice");
}

KzbSystem::KzbSystem(const RMatrixModel& m, const MarkedConfig& cfg, bool with_tau_data)
    : n_(cfg.n()), d_(m.h0_dim()), tau_data_(with_tau_data) {
  validate(m, cfg);
  const std::vector<int> dims = site_dims(cfg.reps);
  dim_ = 1;
  for (int d : dims) dim_ *= d;
  const EllipticContext ctx = m.context(cfg.point.tau);
  pairs_.resize(n_ * n_);
  for (int a = 0; a < n_; ++a)
    for (int c = 0; c < n_; ++c) {
      if (a == c) continue;
      const PairEvaluator ev(m, cfg.reps[a], cfg.reps[c]);
      const PairJet j = ev.jet(cfg.point, cfg.z[a] - cfg.z[c], ctx, with_tau_data ? 2 : 1);
      Embedded& e = pairs_[a * n_ + c];
      e.r = embed_pair(j.r, dims, a, c);
      e.dz_r = embed_pair(j.dz_r, dims, a, c);
      for (const auto& x : j.du_r) e.du_r.push_back(embed_pair(x, dims, a, c));
      if (!with_tau_data) continue;
      e.tau_r = embed_pair(j.tau_r, dims, a, c);
      e.f = embed_pair(j.f, dims, a, c);
      e.dz_f = embed_pair(j.dz_f, dims, a, c);
      for (const auto& x : j.du_f) e.du_f.push_back(embed_pair(x, dims, a, c));
      for (const auto& x : j.duu_r) e.duu_r.push_back(embed_pair(x, dims, a, c));
    }
  if (with_tau_data)
    for (int c = 0; c < n_; ++c) {
      const SiteJet s = SiteEvaluator(m, cfg.reps[c]).jet(cfg.point);
      site_f_.push_back(embed_site(s.f, dims, c));
      std::vector<Eigen::MatrixXcd> du;
      for (const auto& x : s.du_f) du.push_back(embed_site(x, dims, c));
      site_du_f_.push_back(du);
    }
  X_.resize(n_);
  for (int a = 0; a < n_; ++a)
    for (int j = 0; j < d_; ++j) X_[a].push_back(embed_site(cfg.reps[a].of(m.derivation_element(j)), dims, a));
}

Eigen::MatrixXcd KzbSystem::R(int a) const {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim_, dim_);
  for (int c = 0; c < n_; ++c)
    if (c != a) out += pair(a, c).r;
  return out;
}

Eigen::MatrixXcd KzbSystem::dz_R(int a, int b) const {
  if (b != a) return -pair(a, b).dz_r;
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim_, dim_);
  for (int c = 0; c < n_; ++c)
    if (c != a) out += pair(a, c).dz_r;
  return out;
}

Eigen::MatrixXcd KzbSystem::du_R(int a, int j) const {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim_, dim_);
  for (int c = 0; c < n_; ++c)
    if (c != a) out += pair(a, c).du_r[j];
  return out;
}

Eigen::MatrixXcd KzbSystem::duu_R(int a, int j, int k) const {
  if (!tau_data_) throw std::logic_error("KzbSystem: second u-derivatives were not computed");
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim_, dim_);
  for (int c = 0; c < n_; ++c)
    if (c != a) out += pair(a, c).duu_r[j * d_ + k];
  return out;
}

Eigen::MatrixXcd KzbSystem::tau_R(int a) const {
  if (!tau_data_) throw std::logic_error("KzbSystem: tau data were not computed");
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim_, dim_);
  for (int c = 0; c < n_; ++c)
    if (c != a) out += pair(a, c).tau_r;
  return out;
}

Eigen::MatrixXcd KzbSystem::F() const {
  if (!tau_data_) throw std::logic_error("KzbSystem: tau data were not computed");
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim_, dim_);
  for (int b = 0; b < n_; ++b) {
    out += 0.5 * site_f_[b];
    for (int d = 0; d < n_; ++d)
      if (d != b) out += 0.5 * pair(b, d).f;
  }
  return out;
}

Eigen::MatrixXcd KzbSystem::dz_F(int a) const {
  if (!tau_data_) throw std::logic_error("KzbSystem: tau data were not computed");
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim_, dim_);
  for (int c = 0; c < n_; ++c) {
    if (c == a) continue;
    out += 0.5 * pair(a, c).dz_f;
    out -= 0.5 * pair(c, a).dz_f;
  }
  return out;
}

Eigen::MatrixXcd KzbSystem::du_F(int j) const {
  if (!tau_data_) throw std::logic_error("KzbSystem: tau data were not computed");
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim_, dim_);
  for (int b = 0; b < n_; ++b) {
    out += 0.5 * site_du_f_[b][j];
    for (int d = 0; d < n_; ++d)
      if (d != b) out += 0.5 * pair(b, d).du_f[j];
  }
  return out;
}

FirstOrderOperator build_nabla_a(const RMatrixModel& m, const MarkedConfig& cfg, int a) {
  if (a < 0 || a >= cfg.n()) throw std::out_of_range("build_nabla_a: no marked point " + std::to_string(a));
  const KzbSystem sys(m, cfg, false);
  FirstOrderOperator op;
  op.zeroth = sys.R(a);
  for (int j = 0; j < m.h0_dim(); ++j) op.du_coeffs.push_back(sys.X(a, j));
  op.dz_coeffs.assign(cfg.n(), 0.0);
  op.dz_coeffs[a] = cfg.z_derivative_scale;
  op.duu_coeffs = Eigen::MatrixXcd::Zero(m.h0_dim(), m.h0_dim());
  return op;
}

FirstOrderOperator build_nabla_tau(const RMatrixModel& m, const MarkedConfig& cfg) {
  const KzbSystem sys(m, cfg, true);
  FirstOrderOperator op;
  op.zeroth = sys.F();
  op.dz_coeffs.assign(cfg.n(), 0.0);
  op.dtau_coeff = kTwoPiI;
  const int d = m.h0_dim();
  op.duu_coeffs.resize(d, d);
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k) op.duu_coeffs(j, k) = m.laplacian_coefficient(j, k);
  return op;
}

Eigen::MatrixXcd weight_zero_projector(const RMatrixModel& m, const MarkedConfig& cfg) {
  const std::vector<int> dims = site_dims(cfg.reps);
  int D = 1;
  for (int d : dims) D *= d;
  Eigen::VectorXd keep = Eigen::VectorXd::Ones(D);
  const ChevalleyAlgebra& g = m.basis().algebra();
  for (int j = 0; j < m.h0_dim(); ++j) {
    Eigen::MatrixXcd T = Eigen::MatrixXcd::Zero(D, D);
    const Eigen::VectorXcd x = g.cartan_element(m.direction(j));
    for (int c = 0; c < cfg.n(); ++c) T += embed_site(cfg.reps[c].of(x), dims, c);
    const Eigen::MatrixXcd off = T - Eigen::MatrixXcd(T.diagonal().asDiagonal());
    if (off.cwiseAbs().maxCoeff() > 1e-12)
      throw std::logic_error("weight_zero_projector: Cartan action is not diagonal");
    for (int i = 0; i < D; ++i)
      if (std::abs(T(i, i)) > 1e-9) keep[i] = 0.0;
  }
  return keep.cast<cplx>().asDiagonal();
}

namespace {

Eigen::MatrixXcd comm(const Eigen::MatrixXcd& x, const Eigen::MatrixXcd& y) { return x * y - y * x; }

void finish(CurvatureData& c, const Eigen::MatrixXcd& P) {
  c.zeroth_norm_unprojected = operator_norm(c.zeroth);
  c.zeroth_norm = operator_norm(P * c.zeroth * P);
  for (const auto& x : c.du_linear) {
    c.du_norm_unprojected = std::max(c.du_norm_unprojected, operator_norm(x));
    c.du_norm = std::max(c.du_norm, operator_norm(P * x * P));
  }
  c.projector_rank = static_cast<int>(std::lround(P.trace().real()));
}

}  // namespace

CurvatureData curvature_zz(const RMatrixModel& m, const MarkedConfig& cfg, int a, int b) {
  if (a == b) throw std::invalid_argument("curvature_zz: the two marked points must differ");
  if (a < 0 || b < 0 || a >= cfg.n() || b >= cfg.n()) throw std::out_of_range("curvature_zz: point index");
  const KzbSystem sys(m, cfg, false);
  const double s = cfg.z_derivative_scale;
  const Eigen::MatrixXcd Ra = sys.R(a), Rb = sys.R(b);
  CurvatureData c;
  c.zeroth = s * (sys.dz_R(b, a) - sys.dz_R(a, b)) + comm(Ra, Rb);
  for (int j = 0; j < m.h0_dim(); ++j) {
    c.zeroth += sys.X(a, j) * sys.du_R(b, j) - sys.X(b, j) * sys.du_R(a, j);
    c.du_linear.push_back(comm(sys.X(a, j), Rb) - comm(sys.X(b, j), Ra));
  }
  finish(c, weight_zero_projector(m, cfg));
  return c;
}

CurvatureData curvature_ztau(const RMatrixModel& m, const MarkedConfig& cfg, int a) {
  if (a < 0 || a >= cfg.n()) throw std::out_of_range("curvature_ztau: point index");
  const KzbSystem sys(m, cfg, true);
  const int d = m.h0_dim();
  const Eigen::MatrixXcd Ra = sys.R(a), F = sys.F();
  CurvatureData c;
  c.zeroth = cfg.z_derivative_scale * sys.dz_F(a) - sys.tau_R(a) + comm(Ra, F);
  for (int j = 0; j < d; ++j) {
    c.zeroth += sys.X(a, j) * sys.du_F(j);
    for (int k = 0; k < d; ++k) c.zeroth -= m.laplacian_coefficient(j, k) * sys.duu_R(a, j, k);
  }
  for (int k = 0; k < d; ++k) {
    Eigen::MatrixXcd x = comm(sys.X(a, k), F);
    for (int j = 0; j < d; ++j)
      x -= (m.laplacian_coefficient(j, k) + m.laplacian_coefficient(k, j)) * sys.du_R(a, j);
    c.du_linear.push_back(x);
  }
  finish(c, weight_zero_projector(m, cfg));
  return c;
}

}  // namespace ekzb
