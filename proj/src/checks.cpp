#include "ellkzb/checks.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <future>
#include <map>
#include <set>

#include "ellkzb/elliptic_identities.hpp"
#include "ellkzb/gs_basis.hpp"
#include "ellkzb/kzb.hpp"
#include "ellkzb/random.hpp"
#include "ellkzb/rmatrix.hpp"
#include "ellkzb/sampling.hpp"
#include "ellkzb/transport.hpp"

namespace ekzb {

namespace {

using Clock = std::chrono::steady_clock;

std::vector<CheckInfo> build_catalog() {
  std::vector<CheckInfo> c{
      {"elliptic.theta_shift_1", "elliptic", "theta(z+1) = -theta(z)", 1e-9},
      {"elliptic.theta_shift_tau", "elliptic", "theta(z+tau) = -q^(-1/2) e(-z) theta(z)", 1e-9},
      {"elliptic.phi_symmetric", "elliptic", "phi(u,z) = phi(z,u)", 1e-9},
      {"elliptic.phi_odd", "elliptic", "phi(-u,-z) = -phi(u,z)", 1e-9},
      {"elliptic.twisted_shift_1", "elliptic", "twisted kernel under z -> z+1 picks up e(<kappa,a>)", 1e-9},
      {"elliptic.twisted_shift_tau", "elliptic", "twisted kernel under z -> z+tau picks up e(<kappa,a> tau - x)", 1e-9},
      {"elliptic.twisted_odd", "elliptic", "phi_{-a}^{-k}(-z) = -phi_a^k(z)", 1e-9},
      {"elliptic.heat", "elliptic", "heat equation 2 pi i d/dtau phi = d/dz f", 1e-9},
      {"elliptic.fay_classical", "elliptic", "Fay trisecant identity for phi", 1e-9},
      {"elliptic.fay_twisted", "elliptic", "three-point Fay identity for twisted kernels", 1e-9},
      {"elliptic.fay_degenerate", "elliptic", "degenerate Fay identity with rho and E1", 1e-9},
      {"elliptic.fay_difference", "elliptic", "phi_a f_b - phi_b f_a = phi_{a+b} (wp(x_a) - wp(x_b))", 1e-9},
      {"elliptic.fay_opposite", "elliptic", "phi_b f_{-b} - phi_{-b} f_b = wp'(x_b)", 1e-9},
      {"elliptic.fay_diagonal", "elliptic", "phi_b wp(x_b) - phi_b rho + E1 f_b = 1/2 du f_b", 1e-9},

      {"lie.representations", "gs", "Chevalley relations hold in the defining, dual and adjoint representations", 1e-12},
      {"lie.automorphism", "gs", "the extended-diagram rotation is a Lie algebra automorphism", 1e-12},
      {"lie.intertwiner", "gs", "Lambda_0 is realised by a matrix in the defining representation", 1e-12},
      {"gs.bracket_table", "gs", "GS commutation relations agree with representation commutators", 1e-12},
      {"gs.duality", "gs", "dual Cartan elements pair to the identity within each layer", 1e-13},
      {"gs.grading", "gs", "the bracket respects the Z/l grading of the GS basis", 0.0},
      {"gs.casimir", "gs", "Casimir split over the GS basis equals the Chevalley Casimir", 1e-12},

      {"rmatrix.residue", "rmatrix", "r(z) ~ C2 / z at z = 0", 1e-6},
      {"rmatrix.unitarity", "rmatrix", "r^{12}(z) = -r^{21}(-z)", 1e-11},
      {"rmatrix.zero_weight", "rmatrix", "r commutes with the diagonal action of h~0", 1e-11},
      {"rmatrix.f_symmetry", "rmatrix", "f^{12}(z) = f^{21}(-z)", 1e-11},
      {"rmatrix.near_discriminant", "rmatrix", "simple pole of r on the discriminant hyperplanes in u", 1e-5},
      {"rmatrix.derivatives", "rmatrix", "analytic z, u and tau derivatives agree with central differences", 1e-5},
      {"rmatrix.heat", "rmatrix", "2 pi i d/dtau r = d/dz f", 1e-9},

      {"quasiperiodicity.z_shift_1", "quasiperiodicity", "r(z+1) = Ad_Q r(z)", 1e-10},
      {"quasiperiodicity.z_shift_tau", "quasiperiodicity",
       "r(z+tau) = Ad_{Lambda_0 e(-u)} r(z) - 2 pi i Omega_0", 1e-10},
      {"quasiperiodicity.u_shift_coroot", "quasiperiodicity", "r is periodic under coroot shifts of u", 1e-10},
      {"quasiperiodicity.u_shift_tau_coroot", "quasiperiodicity", "r(u + tau beta) = Ad_{e(-z beta)} r(u)", 1e-10},
      {"quasiperiodicity.u_shift_coweight", "quasiperiodicity", "r is periodic under coweight shifts of u", 1e-10},
      {"quasiperiodicity.u_shift_tau_coweight", "quasiperiodicity",
       "r(u + tau beta) = Ad_{e(-z beta)} r(u) for coweights beta", 1e-10},

      {"cdybe.residual", "cdybe", "classical dynamical Yang-Baxter equation", 1e-9},
      {"cdybe.dynamical_twist", "cdybe", "classical dynamical Yang-Baxter equation after a constant dynamical twist",
       1e-9},

      {"kzb.curvature_zz", "curvature", "[nabla_a, nabla_b] = 0 on weight-zero vectors", 1e-8},
      {"kzb.curvature_ztau", "curvature", "[nabla_a, nabla_tau] = 0 on weight-zero vectors", 1e-7},

      {"transport.homotopy", "transport", "horizontal transport depends only on the homotopy class of the path", 1e-6},
      {"transport.tau_homotopy", "transport", "transport in tau depends only on the endpoints", 1e-6},
      {"transport.convergence", "transport", "fixed-step RK4 error ratio under step halving", 8.0,
       Comparison::AtLeast},
      {"transport.monodromy", "transport", "loop monodromy is independent of the loop representative", 1e-5},
      {"transport.monodromy_symmetry", "transport", "monodromy commutes with Q (x) Q and Lambda_0 (x) Lambda_0",
       1e-5},
  };
  return c;
}

std::uint64_t fnv1a(const std::string& s, std::uint64_t h = 1469598103934665603ULL) {
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

struct Env {
  const RunConfig& cfg;
  const RMatrixModel& M;
  std::set<std::string> selected;

  const ChevalleyAlgebra& g() const { return M.basis().algebra(); }
  std::string algebra_name() const { return to_string(cfg.series) + std::to_string(cfg.rank); }
  bool wants(const std::string& id) const { return selected.count(id) > 0; }
};

class Sampler {
 public:
  Sampler(const Env& env, const std::string& family) : env_(env), rng_(env.cfg.seed ^ fnv1a(family)) {}

  ModuliPoint point() { return sample_moduli_point(env_.M, rng_, env_.cfg.tau); }

  /// Configured positions when they fit, otherwise random ones.
  std::vector<cplx> z(int n, cplx tau, double min_sep = kSampleMargin) {
    if (!env_.cfg.positions.empty() && n == env_.cfg.points) return env_.cfg.positions;
    return sample_marked_points(n, tau, rng_, min_sep);
  }

  Rng& rng() { return rng_; }

 private:
  const Env& env_;
  Rng rng_;
};

using Params = std::vector<std::pair<std::string, std::string>>;

Params base_params(const Env& env) {
  return {{"algebra", env.algebra_name()},
          {"l", std::to_string(env.cfg.l)},
          {"j", std::to_string(env.cfg.j)},
          {"coordinates", to_string(env.cfg.coordinates)},
          {"derivation", to_string(env.cfg.derivation)}};
}

class Family {
 public:
  explicit Family(const Env& env) : env_(env), start_(Clock::now()) {}

  void add(const std::string& id, Params params, double residual, std::string note = {}) {
    if (!env_.wants(id)) return;
    CheckRecord r = skeleton(id, std::move(params));
    r.residual = residual;
    r.note = std::move(note);
    if (!std::isfinite(residual) || residual < 0.0) {
      r.status = CheckStatus::Error;
      r.note += (r.note.empty() ? "" : "; ") + std::string("residual is not a finite nonnegative number");
      r.residual = 0.0;
    } else if (r.comparison == Comparison::Below) {
      r.status = residual <= r.tolerance ? CheckStatus::Pass : CheckStatus::Fail;
    } else {
      r.status = residual >= r.tolerance ? CheckStatus::Pass : CheckStatus::Fail;
    }
    records_.push_back(std::move(r));
  }

  void skip(const std::string& id, Params params, std::string why) {
    if (!env_.wants(id)) return;
    CheckRecord r = skeleton(id, std::move(params));
    r.status = CheckStatus::Skipped;
    r.note = std::move(why);
    records_.push_back(std::move(r));
  }

  void error(const std::string& id, Params params, std::string what) {
    if (!env_.wants(id)) return;
    CheckRecord r = skeleton(id, std::move(params));
    r.status = CheckStatus::Error;
    r.note = std::move(what);
    records_.push_back(std::move(r));
  }

  std::vector<CheckRecord> finish() {
    const double t = std::chrono::duration<double>(Clock::now() - start_).count();
    for (auto& r : records_) r.wall_time = t;
    return std::move(records_);
  }

 private:
  CheckRecord skeleton(const std::string& id, Params params) const {
    const CheckInfo* info = find_check(id);
    CheckRecord r;
    r.id = id;
    r.suite = info->suite;
    r.anchor = info->anchor;
    r.comparison = info->comparison;
    const auto it = env_.cfg.tolerances.find(id);
    r.tolerance = it != env_.cfg.tolerances.end() ? it->second : info->tolerance;
    std::sort(params.begin(), params.end());
    r.params = std::move(params);
    return r;
  }

  const Env& env_;
  Clock::time_point start_;
  std::vector<CheckRecord> records_;
};

/// Runs body; any exception becomes an error record for every listed id.
std::vector<CheckRecord> guarded(const Env& env, const std::vector<std::string>& ids,
                                 const std::function<void(Family&)>& body) {
  Family fam(env);
  try {
    body(fam);
  } catch (const std::exception& e) {
    Family err(env);
    for (const auto& id : ids) err.error(id, base_params(env), e.what());
    return err.finish();
  }
  return fam.finish();
}

std::vector<std::pair<Representation, Representation>> rep_pairs(const Env& env) {
  const Representation V = defining_rep(env.g());
  return {{V, V}, {V, dual_rep(V)}};
}

std::string pair_name(const Representation& a, const Representation& c) { return a.name + "," + c.name; }

/// Per-point representations: all defining in the Belavin case (no weight-zero condition),
/// otherwise chosen so the weight-zero subspace is nonzero.
std::vector<Representation> curvature_reps(const Env& env, int n) {
  const ChevalleyAlgebra& g = env.g();
  if (!env.cfg.reps.empty() && n == env.cfg.points) {
    std::vector<Representation> out;
    for (const auto& name : env.cfg.reps) out.push_back(rep_by_name(g, name));
    return out;
  }
  const Representation V = defining_rep(g);
  if (env.M.h0_dim() == 0) return std::vector<Representation>(n, V);
  if (n == 1) return {adjoint_rep(g)};
  if (n == 2) return {V, dual_rep(V)};
  std::vector<Representation> out{V, dual_rep(V)};
  while (static_cast<int>(out.size()) < n) out.push_back(adjoint_rep(g));
  return out;
}

std::string rep_list(const std::vector<Representation>& reps) {
  std::string s;
  for (const auto& r : reps) s += (s.empty() ? "" : ",") + r.name;
  return s;
}

// ---------------------------------------------------------------- families

void run_elliptic(const Env& env, Family& fam) {
  SampleSpec spec;
  spec.seed = env.cfg.seed;
  spec.count = std::max(64, env.cfg.samples);
  spec.series_tolerance = env.cfg.series_tolerance;
  for (const IdentityResidual& r : identity_residuals(spec)) {
    Params p{{"samples", std::to_string(r.samples)}, {"taus", "0+1i,0.3+0.9i"}, {"ls", "1,2,3,4"}};
    fam.add("elliptic." + r.name, p, r.max_residual);
  }
}

void run_lie(const Env& env, Family& fam) {
  const ChevalleyAlgebra& g = env.g();
  const Params base{{"algebra", env.algebra_name()}, {"l", std::to_string(env.cfg.l)}, {"j", std::to_string(env.cfg.j)}};
  const Representation V = defining_rep(g);
  double rel = 0.0;
  for (const auto& rep : {V, dual_rep(V), adjoint_rep(g)}) rel = std::max(rel, relation_residual(g, rep));
  fam.add("lie.representations", base, rel);

  const Eigen::MatrixXd& L = env.M.basis().twist().automorphism;
  const int dim = g.dim();
  double aut = 0.0;
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      const Eigen::VectorXcd lhs = L.cast<cplx>() * g.bracket(g.unit(i), g.unit(j));
      const Eigen::VectorXcd rhs = g.bracket(L.cast<cplx>() * g.unit(i), L.cast<cplx>() * g.unit(j));
      aut = std::max(aut, (lhs - rhs).cwiseAbs().maxCoeff());
    }
  fam.add("lie.automorphism", base, aut);

  const Eigen::MatrixXcd Mi = intertwiner(g, V, L);
  const Eigen::MatrixXcd Minv = Mi.inverse();
  double inter = 0.0;
  for (int i = 0; i < dim; ++i) {
    const Eigen::MatrixXcd d = Mi * V.of(g.unit(i)) * Minv - V.of(L.cast<cplx>() * g.unit(i));
    inter = std::max(inter, d.cwiseAbs().maxCoeff());
  }
  fam.add("lie.intertwiner", base, inter);
}

void run_gs(const Env& env, Family& fam) {
  const GSBasis& B = env.M.basis();
  const ChevalleyAlgebra& g = env.g();
  const Params base{{"algebra", env.algebra_name()}, {"l", std::to_string(env.cfg.l)}, {"j", std::to_string(env.cfg.j)}};
  const Representation V = defining_rep(g);

  double table = 0.0;
  for (const auto& rep : {V, adjoint_rep(g)}) {
    const auto M = B.rep_matrices(rep);
    for (int i = 0; i < B.size(); ++i)
      for (int j = 0; j < B.size(); ++j) {
        Eigen::MatrixXcd lhs = M[i] * M[j] - M[j] * M[i];
        for (const auto& [k, c] : B.bracket(i, j)) lhs -= c * M[k];
        table = std::max(table, lhs.cwiseAbs().maxCoeff());
      }
  }
  fam.add("gs.bracket_table", base, table);

  double dual = 0.0;
  const Eigen::MatrixXcd F = g.form().cast<cplx>();
  const auto& layer = B.cartan_layer();
  for (std::size_t x = 0; x < layer.size(); ++x)
    for (std::size_t y = 0; y < layer.size(); ++y)
      if (layer[x].c == layer[y].c) {
        const cplx v = layer[x].dual.transpose() * F * layer[y].opposite;
        dual = std::max(dual, std::abs(v - (x == y ? 1.0 : 0.0)));
      }
  fam.add("gs.duality", base, dual);

  const int l = env.cfg.l;
  double grading = 0.0;
  const auto& gens = B.generators();
  for (int i = 0; i < B.size(); ++i)
    for (int j = 0; j < B.size(); ++j)
      for (const auto& [k, c] : B.bracket(i, j))
        if ((gens[i].grade + gens[j].grade - gens[k].grade) % l != 0) grading = std::max(grading, std::abs(c));
  fam.add("gs.grading", base, grading);

  fam.add("gs.casimir", base, (B.casimir_split(V, V) - B.casimir_chevalley(V, V)).cwiseAbs().maxCoeff());
}

void run_rmatrix(const Env& env, Family& fam) {
  const RMatrixModel& M = env.M;
  Sampler s(env, "rmatrix");
  const int n = env.cfg.samples;
  std::vector<ModuliPoint> pts;
  std::vector<cplx> zs;
  for (int i = 0; i < n; ++i) {
    pts.push_back(s.point());
    const auto z = s.z(2, pts.back().tau);
    zs.push_back(z[0] - z[1]);
  }
  std::vector<int> pole_terms;
  for (std::size_t t = 0; t < M.basis().root_terms().size(); ++t) {
    const int root = M.basis().root_terms()[t].root;
    for (int j = 0; j < M.h0_dim(); ++j)
      if (M.direction_pairing(j, root) != 0.0) {
        pole_terms.push_back(static_cast<int>(t));
        break;
      }
  }
  for (const auto& [a, c] : rep_pairs(env)) {
    Params p = base_params(env);
    p.emplace_back("reps", pair_name(a, c));
    p.emplace_back("samples", std::to_string(n));
    double res = 0, uni = 0, zw = 0, fs = 0, nd = 0, der = 0, heat = 0;
    for (int i = 0; i < n; ++i) {
      const cplx z = zs[i];
      if (env.wants("rmatrix.residue")) res = std::max(res, residue_residual(M, a, c, pts[i]));
      if (env.wants("rmatrix.unitarity")) uni = std::max(uni, unitarity_residual(M, a, c, pts[i], z));
      if (env.wants("rmatrix.zero_weight")) zw = std::max(zw, zero_weight_residual(M, a, c, pts[i], z));
      if (env.wants("rmatrix.f_symmetry")) fs = std::max(fs, f_symmetry_residual(M, a, c, pts[i], z));
      if (env.wants("rmatrix.near_discriminant") && !pole_terms.empty()) {
        const RootTerm& t = M.basis().root_terms()[pole_terms[i % pole_terms.size()]];
        nd = std::max(nd, near_discriminant_residual(M, a, c, pts[i], z, t.root, t.k));
      }
      if (env.wants("rmatrix.derivatives") || env.wants("rmatrix.heat")) {
        DerivativeCheck d = derivative_check(M, a, c, pts[i], z);
        heat = std::max(heat, d.heat);
        d.heat = 0.0;
        der = std::max(der, d.max());
      }
    }
    fam.add("rmatrix.residue", p, res);
    fam.add("rmatrix.unitarity", p, uni);
    if (M.h0_dim() == 0)
      fam.add("rmatrix.zero_weight", p, zw, "h~0 = 0, the condition is vacuous");
    else
      fam.add("rmatrix.zero_weight", p, zw);
    fam.add("rmatrix.f_symmetry", p, fs);
    if (pole_terms.empty())
      fam.skip("rmatrix.near_discriminant", p, "h~0 = 0, r has no poles in u");
    else
      fam.add("rmatrix.near_discriminant", p, nd);
    fam.add("rmatrix.derivatives", p, der);
    fam.add("rmatrix.heat", p, heat);
  }
}

void run_quasiperiodicity(const Env& env, Family& fam) {
  const RMatrixModel& M = env.M;
  Sampler s(env, "quasiperiodicity");
  const int n = env.cfg.samples;
  for (const auto& [a, c] : rep_pairs(env)) {
    QuasiPeriodicityReport worst;
    for (int i = 0; i < n; ++i) {
      const ModuliPoint p = s.point();
      const auto z = s.z(2, p.tau);
      const QuasiPeriodicityReport q = quasiperiodicity_residual(M, a, c, p, z[0] - z[1]);
      worst.z_shift_1 = std::max(worst.z_shift_1, q.z_shift_1);
      worst.z_shift_tau = std::max(worst.z_shift_tau, q.z_shift_tau);
      worst.u_shift_coroot = std::max(worst.u_shift_coroot, q.u_shift_coroot);
      worst.u_shift_tau_coroot = std::max(worst.u_shift_tau_coroot, q.u_shift_tau_coroot);
      worst.u_shift_coweight = std::max(worst.u_shift_coweight, q.u_shift_coweight);
      worst.u_shift_tau_coweight = std::max(worst.u_shift_tau_coweight, q.u_shift_tau_coweight);
    }
    Params p = base_params(env);
    p.emplace_back("reps", pair_name(a, c));
    p.emplace_back("samples", std::to_string(n));
    fam.add("quasiperiodicity.z_shift_1", p, worst.z_shift_1);
    fam.add("quasiperiodicity.z_shift_tau", p, worst.z_shift_tau);
    if (M.h0_dim() == 0) {
      for (const char* id : {"quasiperiodicity.u_shift_coroot", "quasiperiodicity.u_shift_tau_coroot",
                             "quasiperiodicity.u_shift_coweight", "quasiperiodicity.u_shift_tau_coweight"})
        fam.skip(id, p, "h~0 = 0, there is no u");
      continue;
    }
    fam.add("quasiperiodicity.u_shift_coroot", p, worst.u_shift_coroot);
    fam.add("quasiperiodicity.u_shift_tau_coroot", p, worst.u_shift_tau_coroot);
    if (M.basis().twist().coweights_integral) {
      fam.add("quasiperiodicity.u_shift_coweight", p, worst.u_shift_coweight);
      fam.add("quasiperiodicity.u_shift_tau_coweight", p, worst.u_shift_tau_coweight);
    } else {
      fam.skip("quasiperiodicity.u_shift_coweight", p, "the coweights of g~0 do not pair integrally with every root");
      fam.skip("quasiperiodicity.u_shift_tau_coweight", p,
               "the coweights of g~0 do not pair integrally with every root");
    }
  }
}

void run_cdybe(const Env& env, Family& fam) {
  const RMatrixModel& M = env.M;
  Sampler s(env, "cdybe");
  const int n = env.cfg.samples;
  const Representation V = defining_rep(env.g());
  const std::vector<Representation> reps{V, V, V};
  const int d = M.h0_dim();
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      A(i, j) = s.rng().uniform(-1.0, 1.0);
      A(j, i) = -A(i, j);
    }
  double plain = 0.0, twisted = 0.0;
  for (int i = 0; i < n; ++i) {
    const ModuliPoint p = s.point();
    const auto z = s.z(3, p.tau);
    const std::array<cplx, 3> zz{z[0], z[1], z[2]};
    if (env.wants("cdybe.residual")) plain = std::max(plain, cdybe_residual(M, reps, p, zz));
    if (env.wants("cdybe.dynamical_twist") && d >= 2) twisted = std::max(twisted, cdybe_residual(M, reps, p, zz, &A));
  }
  Params p = base_params(env);
  p.emplace_back("reps", rep_list(reps));
  p.emplace_back("samples", std::to_string(n));
  fam.add("cdybe.residual", p, plain);
  if (d >= 2)
    fam.add("cdybe.dynamical_twist", p, twisted);
  else
    fam.skip("cdybe.dynamical_twist", p, "dim h~0 < 2 admits no nonzero antisymmetric twist");
}

void run_curvature(const Env& env, Family& fam, bool zz) {
  const RMatrixModel& M = env.M;
  const std::string id = zz ? "kzb.curvature_zz" : "kzb.curvature_ztau";
  Sampler s(env, id);
  const bool fixed = !env.cfg.positions.empty() || !env.cfg.reps.empty();
  std::vector<int> ns;
  if (fixed)
    ns = {env.cfg.points};
  else
    ns = zz ? std::vector<int>{2, 3} : std::vector<int>{1, 2};
  for (int n : ns) {
    MarkedConfig mc;
    mc.reps = curvature_reps(env, n);
    mc.z_derivative_scale = env.cfg.z_derivative_scale;
    Params p = base_params(env);
    p.emplace_back("n", std::to_string(n));
    p.emplace_back("reps", rep_list(mc.reps));
    p.emplace_back("samples", std::to_string(env.cfg.samples));
    if (zz && n < 2) {
      fam.skip(id, p, "needs two marked points");
      continue;
    }
    double worst = 0.0;
    int rank = -1;
    for (int i = 0; i < env.cfg.samples; ++i) {
      mc.point = s.point();
      mc.z = s.z(n, mc.point.tau);
      const CurvatureData c = zz ? curvature_zz(M, mc, 0, 1) : curvature_ztau(M, mc, 0);
      worst = std::max({worst, c.zeroth_norm, c.du_norm});
      rank = c.projector_rank;
    }
    p.emplace_back("projector_rank", std::to_string(rank));
    if (rank == 0)
      fam.add(id, p, worst, "the weight-zero subspace is trivial");
    else
      fam.add(id, p, worst);
  }
}

void run_transport(const Env& env, Family& fam) {
  const RMatrixModel& M = env.M;
  const std::vector<std::string> ids{"transport.homotopy", "transport.tau_homotopy", "transport.convergence",
                                     "transport.monodromy", "transport.monodromy_symmetry"};
  Params p = base_params(env);
  p.emplace_back("n", "2");
  if (M.h0_dim() != 0) {
    for (const auto& id : ids) fam.skip(id, p, "transport needs the Belavin twist (h~0 = 0)");
    return;
  }
  const ChevalleyAlgebra& g = env.g();
  MarkedConfig mc;
  mc.reps = curvature_reps(env, 2);
  mc.z_derivative_scale = env.cfg.z_derivative_scale;
  p.emplace_back("reps", rep_list(mc.reps));
  p.emplace_back("samples", std::to_string(env.cfg.samples));
  const int dim = mc.reps[0].dim * mc.reps[1].dim;
  const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(dim, dim);

  Eigen::VectorXcd kappa(g.roots().rank);
  for (int i = 0; i < g.roots().rank; ++i) kappa[i] = to_double(M.basis().twist().kappa[i]);
  const Eigen::MatrixXcd QQ = kron(exp_cartan(g, mc.reps[0], kappa), exp_cartan(g, mc.reps[1], kappa));
  const Eigen::MatrixXd& L = M.basis().twist().automorphism;
  const Eigen::MatrixXcd LL = kron(intertwiner(g, mc.reps[0], L), intertwiner(g, mc.reps[1], L));

  Sampler s(env, "transport");
  double hom = 0, tau_hom = 0, conv = 1e300, mono = 0, sym = 0;
  for (int i = 0; i < env.cfg.samples; ++i) {
    mc.point = s.point();
    mc.z = s.z(2, mc.point.tau, 0.25);
    const cplx delta = reduce_mod_lattice(mc.z[0] - mc.z[1], mc.point.tau);
    const cplx centre = mc.z[0] - delta;  // the translate of z_1 nearest z_0
    const cplx dir = delta / std::abs(delta);
    const cplx z0 = mc.z[0];

    const cplx target = z0 + 0.15 * dir;
    const std::vector<cplx> upper{z0 + dir * cplx(0.075, 0.05), target};
    const std::vector<cplx> lower{z0 + dir * cplx(0.075, -0.05), target};
    TransportOptions reference;
    reference.tolerance = 1e-13;
    const Eigen::MatrixXcd a = transport(M, mc, TransportVariable::Z, 0, upper, I, reference).value;
    if (env.wants("transport.homotopy")) {
      const Eigen::MatrixXcd b = transport(M, mc, TransportVariable::Z, 0, lower, I).value;
      hom = std::max(hom, (a - b).norm() / a.norm());
    }
    if (env.wants("transport.convergence")) {
      double err[3];
      for (int k = 0; k < 3; ++k) {
        TransportOptions o;
        o.fixed_steps = 4 << k;
        err[k] = (transport(M, mc, TransportVariable::Z, 0, upper, I, o).value - a).norm();
      }
      conv = std::min({conv, err[0] / err[1], err[1] / err[2]});
    }
    if (env.wants("transport.tau_homotopy")) {
      const cplx t0 = mc.point.tau;
      const cplx t1 = t0 + cplx(0.1, 0.1);
      const Eigen::MatrixXcd x = transport(M, mc, TransportVariable::Tau, 0, {t0 + 0.1, t1}, I).value;
      const Eigen::MatrixXcd y = transport(M, mc, TransportVariable::Tau, 0, {t0 + cplx(0.0, 0.1), t1}, I).value;
      tau_hom = std::max(tau_hom, (x - y).norm() / x.norm());
    }
    if (env.wants("transport.monodromy") || env.wants("transport.monodromy_symmetry")) {
      const double r = 0.12, h = 0.1;
      std::vector<cplx> circle{centre + r * dir};
      for (int k = 1; k <= 48; ++k) circle.push_back(centre + r * dir * std::exp(cplx(0.0, 2.0 * kPi * k / 48)));
      circle.push_back(z0);
      std::vector<cplx> square{centre + h * dir};
      for (const cplx corner : {cplx(1, 1), cplx(-1, 1), cplx(-1, -1), cplx(1, -1), cplx(1, 0)})
        square.push_back(centre + h * dir * corner);
      square.push_back(z0);
      const Eigen::MatrixXcd m1 = transport(M, mc, TransportVariable::Z, 0, circle, I).value;
      const Eigen::MatrixXcd m2 = transport(M, mc, TransportVariable::Z, 0, square, I).value;
      mono = std::max(mono, (m1 - m2).norm() / m1.norm());
      sym = std::max({sym, (m1 * QQ - QQ * m1).norm() / m1.norm(), (m1 * LL - LL * m1).norm() / m1.norm()});
    }
  }
  fam.add("transport.homotopy", p, hom);
  fam.add("transport.tau_homotopy", p, tau_hom);
  fam.add("transport.convergence", p, conv, "minimum ratio of successive errors at 4, 8, 16 steps per segment");
  fam.add("transport.monodromy", p, mono);
  fam.add("transport.monodromy_symmetry", p, sym);
}

}  // namespace

const std::vector<CheckInfo>& check_catalog() {
  static const std::vector<CheckInfo> c = build_catalog();
  return c;
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> s{"elliptic", "gs",        "rmatrix",  "quasiperiodicity",
                                          "cdybe",    "curvature", "transport"};
  return s;
}

const CheckInfo* find_check(const std::string& id) {
  for (const auto& c : check_catalog())
    if (c.id == id) return &c;
  return nullptr;
}

std::string to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::Skipped: return "skipped";
    case CheckStatus::Error: return "error";
  }
  return "error";
}

std::string CheckRecord::param_hash() const {
  std::uint64_t h = fnv1a(id);
  for (const auto& [k, v] : params) h = fnv1a(v, fnv1a(k + "=", h));
  return hex(h);
}

bool failed(const CheckRecord& r) { return r.status == CheckStatus::Fail || r.status == CheckStatus::Error; }

void validate_selection(const RunConfig& cfg) {
  for (const auto& s : cfg.suites)
    if (s != "all" && std::find(suite_names().begin(), suite_names().end(), s) == suite_names().end())
      throw ConfigError("run.suites: unknown suite '" + s + "'", 0, "run.suites");
  for (const auto& id : cfg.checks)
    if (!find_check(id)) throw ConfigError("run.checks: unknown check '" + id + "'", 0, "run.checks");
  for (const auto& [id, tol] : cfg.tolerances)
    if (!find_check(id)) throw ConfigError("tolerances: unknown check '" + id + "'", 0, "tolerances." + id);
}

std::vector<std::string> selected_checks(const RunConfig& cfg) {
  const bool all = std::find(cfg.suites.begin(), cfg.suites.end(), "all") != cfg.suites.end();
  std::vector<std::string> out;
  for (const auto& c : check_catalog()) {
    const bool suite_ok = all || std::find(cfg.suites.begin(), cfg.suites.end(), c.suite) != cfg.suites.end();
    const bool check_ok = cfg.checks.empty() || std::find(cfg.checks.begin(), cfg.checks.end(), c.id) != cfg.checks.end();
    if (suite_ok && check_ok) out.push_back(c.id);
  }
  return out;
}

std::vector<CheckRecord> run_checks(const RunConfig& cfg) {
  validate_selection(cfg);
  const RootSystem rs = build_root_system(cfg.series, cfg.rank);
  const ChevalleyAlgebra g(rs);
  const GSBasis basis(g, build_twist(rs, cfg.l, cfg.j));
  const RMatrixModel model(basis, cfg.coordinates, cfg.derivation, cfg.series_options());

  Env env{cfg, model, {}};
  for (const auto& id : selected_checks(cfg)) env.selected.insert(id);

  struct Task {
    std::string prefix;
    std::function<void(Family&)> body;
  };
  const std::vector<Task> tasks{
      {"elliptic.", [&](Family& f) { run_elliptic(env, f); }},
      {"lie.", [&](Family& f) { run_lie(env, f); }},
      {"gs.", [&](Family& f) { run_gs(env, f); }},
      {"rmatrix.", [&](Family& f) { run_rmatrix(env, f); }},
      {"quasiperiodicity.", [&](Family& f) { run_quasiperiodicity(env, f); }},
      {"cdybe.", [&](Family& f) { run_cdybe(env, f); }},
      {"kzb.curvature_zz", [&](Family& f) { run_curvature(env, f, true); }},
      {"kzb.curvature_ztau", [&](Family& f) { run_curvature(env, f, false); }},
      {"transport.", [&](Family& f) { run_transport(env, f); }},
  };
  std::vector<std::future<std::vector<CheckRecord>>> futures;
  for (const Task& t : tasks) {
    std::vector<std::string> ids;
    for (const auto& id : env.selected)
      if (id.rfind(t.prefix, 0) == 0) ids.push_back(id);
    if (ids.empty()) continue;
    futures.push_back(std::async(std::launch::async, [&env, ids, &t] { return guarded(env, ids, t.body); }));
  }
  std::vector<CheckRecord> out;
  for (auto& f : futures) {
    auto part = f.get();
    out.insert(out.end(), part.begin(), part.end());
  }
  std::sort(out.begin(), out.end(), [](const CheckRecord& a, const CheckRecord& b) {
    if (a.id != b.id) return a.id < b.id;
    return a.param_hash() < b.param_hash();
  });
  return out;
}

}  // namespace ekzb
