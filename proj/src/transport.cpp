#include "ellkzb/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ellkzb/config.hpp"

namespace ekzb {

namespace {

constexpr double kRoundoffFloor = 32 * std::numeric_limits<double>::epsilon();

class Generator {
 public:
  Generator(const RMatrixModel& m, const MarkedConfig& cfg, TransportVariable which, int point)
      : m_(m), cfg_(cfg), which_(which), point_(point), dims_(site_dims(cfg.reps)) {
    if (m.h0_dim() != 0)
      throw RegimeError("transport needs h~0 = 0 (Belavin twist); this configuration has " +
                        std::to_string(m.h0_dim()) + " dynamical parameters");
    validate(m, cfg);
    if (which == TransportVariable::Z && (point < 0 || point >= cfg.n()))
      throw std::out_of_range("transport: no marked point " + std::to_string(point));
    const int n = cfg.n();
    for (int a = 0; a < n; ++a)
      for (int c = 0; c < n; ++c)
        if (a != c) pairs_.emplace_back(a, c);
    for (const auto& [a, c] : pairs_) evaluators_.emplace_back(m, cfg.reps[a], cfg.reps[c]);
    if (which == TransportVariable::Tau)
      for (int c = 0; c < n; ++c) sites_.emplace_back(m, cfg.reps[c]);
  }

  Eigen::MatrixXcd operator()(cplx w) const {
    int D = 1;
    for (int d : dims_) D *= d;
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(D, D);
    if (which_ == TransportVariable::Z) {
      const ModuliPoint& p = cfg_.point;
      const EllipticContext ctx = m_.context(p.tau);
      for (std::size_t i = 0; i < pairs_.size(); ++i) {
        const auto [a, c] = pairs_[i];
        if (a != point_) continue;
        out -= embed_pair(evaluators_[i].jet(p, w - cfg_.z[c], ctx, 0).r, dims_, a, c);
      }
      return out / cfg_.z_derivative_scale;
    }
    ModuliPoint p = cfg_.point;
    p.tau = w;
    const EllipticContext ctx = m_.context(w);
    for (std::size_t i = 0; i < pairs_.size(); ++i) {
      const auto [a, c] = pairs_[i];
      out -= 0.5 * embed_pair(evaluators_[i].jet(p, cfg_.z[a] - cfg_.z[c], ctx, 0).f, dims_, a, c);
    }
    for (int c = 0; c < cfg_.n(); ++c) out -= 0.5 * embed_site(sites_[c].jet(p).f, dims_, c);
    return out / kTwoPiI;
  }

  cplx start() const { return which_ == TransportVariable::Z ? cfg_.z[point_] : cfg_.point.tau; }

 private:
  const RMatrixModel& m_;
  MarkedConfig cfg_;
  TransportVariable which_;
  int point_;
  std::vector<int> dims_;
  std::vector<std::pair<int, int>> pairs_;
  std::vector<PairEvaluator> evaluators_;
  std::vector<SiteEvaluator> sites_;
};

Eigen::MatrixXcd rk4(const Generator& A, cplx w0, cplx dw, double h, const Eigen::MatrixXcd& y) {
  const cplx s = h * dw;
  const Eigen::MatrixXcd k1 = s * (A(w0) * y);
  const Eigen::MatrixXcd k2 = s * (A(w0 + 0.5 * s) * (y + 0.5 * k1));
  const Eigen::MatrixXcd k3 = s * (A(w0 + 0.5 * s) * (y + 0.5 * k2));
  const Eigen::MatrixXcd k4 = s * (A(w0 + s) * (y + k3));
  return y + (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0;
}

}  // namespace

Eigen::MatrixXcd transport_generator(const RMatrixModel& m, const MarkedConfig& cfg, TransportVariable which,
                                     int point, cplx w) {
  return Generator(m, cfg, which, point)(w);
}

TransportResult transport(const RMatrixModel& m, const MarkedConfig& cfg, TransportVariable which, int point,
                          const std::vector<cplx>& path, const Eigen::MatrixXcd& F0, const TransportOptions& opts) {
  const Generator A(m, cfg, which, point);
  TransportResult res;
  res.value = F0;
  cplx from = A.start();
  for (const cplx to : path) {
    const cplx dw = to - from;
    if (dw == cplx(0.0, 0.0)) continue;
    if (opts.fixed_steps > 0) {
      const double h = 1.0 / opts.fixed_steps;
      for (int i = 0; i < opts.fixed_steps; ++i) res.value = rk4(A, from + (i * h) * dw, dw, h, res.value);
      res.steps += opts.fixed_steps;
      from = to;
      continue;
    }
    double t = 0.0;
    double h = std::min(1.0, opts.initial_step);
    while (t < 1.0) {
      if (res.steps + res.rejected > opts.max_steps) throw std::runtime_error("transport: step budget exhausted");
      h = std::min(h, 1.0 - t);
      const cplx w = from + t * dw;
      const Eigen::MatrixXcd full = rk4(A, w, dw, h, res.value);
      const Eigen::MatrixXcd half = rk4(A, w + 0.5 * h * dw, dw, 0.5 * h, rk4(A, w, dw, 0.5 * h, res.value));
      const double scale = std::max(1.0, half.cwiseAbs().maxCoeff());
      const double err = (half - full).cwiseAbs().maxCoeff() / (15.0 * scale);
      // below the round-off floor a smaller step cannot reduce the estimate any further
      const double allowed = std::max(opts.tolerance * h, kRoundoffFloor);
      if (err <= allowed) {
        res.value = half + (half - full) / 15.0;
        t += h;
        ++res.steps;
      } else {
        ++res.rejected;
      }
      const double factor = err > 0 ? 0.9 * std::pow(allowed / err, 0.2) : 4.0;
      h *= std::clamp(factor, 0.2, 4.0);
      if (h < opts.min_step && t < 1.0)
        throw std::runtime_error("transport: step size underflow near a singularity at w = " +
                                 format_complex(from + t * dw));
    }
    from = to;
  }
  return res;
}

PathSpec parse_path(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw std::invalid_argument("path spec '" + text + "' lacks '<variable>:'");
  const std::string head = text.substr(0, colon);
  PathSpec spec;
  if (head == "tau") {
    spec.which = TransportVariable::Tau;
  } else if (head.size() > 1 && head[0] == 'z') {
    spec.which = TransportVariable::Z;
    try {
      std::size_t used = 0;
      spec.point = std::stoi(head.substr(1), &used);
      if (used != head.size() - 1) throw std::invalid_argument("");
    } catch (const std::exception&) {
      throw std::invalid_argument("path spec variable '" + head + "' is not z<index> or tau");
    }
  } else {
    throw std::invalid_argument("path spec variable '" + head + "' is not z<index> or tau");
  }
  std::string rest = text.substr(colon + 1);
  std::size_t pos = 0;
  while (pos <= rest.size()) {
    const auto next = rest.find(';', pos);
    const std::string item = rest.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
    if (!item.empty()) spec.vertices.push_back(parse_complex(item));
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  return spec;
}

}  // namespace ekzb
