// Prints one PASS/FAIL line per acceptance criterion; exits nonzero if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "ellkzb/checks.hpp"
#include "ellkzb/elliptic_identities.hpp"
#include "ellkzb/report.hpp"
#include "ellkzb/sampling.hpp"
#include "json.hpp"
#include "oracles.hpp"

using namespace ekzb;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

struct Worst {
  std::map<std::string, double> residual;  // worst per check id over all runs
  std::vector<std::string> problems;

  void absorb(const std::vector<CheckRecord>& records, const std::string& label) {
    for (const auto& r : records) {
      if (r.status == CheckStatus::Skipped) continue;
      auto [it, fresh] = residual.emplace(r.id, r.residual);
      if (!fresh) it->second = r.comparison == Comparison::AtLeast ? std::min(it->second, r.residual)
                                                                    : std::max(it->second, r.residual);
      if (failed(r)) problems.push_back(label + " " + r.id + " " + to_string(r.status) + (r.note.empty() ? "" : " (" + r.note + ")"));
    }
  }

  Outcome outcome(const std::vector<std::string>& required) const {
    Outcome o;
    std::ostringstream d;
    for (const auto& id : required) {
      const auto it = residual.find(id);
      if (it == residual.end()) {
        o.ok = false;
        d << id << "=missing ";
      } else {
        d << id << "=" << std::scientific << it->second << " ";
      }
    }
    for (const auto& p : problems) {
      o.ok = false;
      d << "[" << p << "] ";
    }
    o.detail = d.str();
    return o;
  }
};

RunConfig base(int rank, int l, int j, int samples, std::vector<std::string> checks) {
  RunConfig c;
  c.rank = rank;
  c.l = l;
  c.j = j;
  c.samples = samples;
  c.seed = 20240601;
  c.seed_given = true;
  c.suites = {"all"};
  c.checks = std::move(checks);
  return c;
}

std::string label(int rank, int l, int j = 1) {
  return "sl" + std::to_string(rank + 1) + " l=" + std::to_string(l) + (j == 1 ? "" : " j=" + std::to_string(j));
}

const std::vector<std::pair<int, int>> kSweep{{1, 1}, {1, 2}, {2, 1}, {2, 3}, {3, 1}, {3, 2}, {3, 4}};

Outcome identities() {
  SampleSpec spec;
  spec.count = 64;
  spec.seed = 20240601;
  spec.series_tolerance = 1e-14;
  Outcome o;
  double worst = 0.0;
  std::string name;
  for (const auto& r : identity_residuals(spec)) {
    if (r.max_residual >= worst) {
      worst = r.max_residual;
      name = r.name;
    }
    if (!(r.max_residual < 1e-9) || r.samples == 0) o.ok = false;
  }
  std::ostringstream d;
  d << "worst " << name << " " << std::scientific << worst << " (bound 1e-9)";
  o.detail = d.str();
  return o;
}

Outcome gs_basis() {
  Worst w;
  const std::vector<std::tuple<int, int, int>> cases{{1, 1, 1}, {1, 2, 1}, {2, 1, 1}, {2, 3, 1}, {2, 3, 2},
                                                     {3, 1, 1}, {3, 2, 1}, {3, 4, 1}, {3, 4, 3}};
  for (const auto& [rank, l, j] : cases)
    w.absorb(run_checks(base(rank, l, j, 1, {"gs.bracket_table", "gs.duality", "gs.grading"})), label(rank, l, j));
  return w.outcome({"gs.bracket_table", "gs.duality", "gs.grading"});
}

Outcome rmatrix_axioms() {
  const std::vector<std::string> ids{"rmatrix.residue",
                                     "rmatrix.unitarity",
                                     "rmatrix.zero_weight",
                                     "quasiperiodicity.z_shift_1",
                                     "quasiperiodicity.z_shift_tau",
                                     "quasiperiodicity.u_shift_coroot",
                                     "quasiperiodicity.u_shift_tau_coroot"};
  Worst w;
  for (const auto& [rank, l] : kSweep) w.absorb(run_checks(base(rank, l, 1, 16, ids)), label(rank, l));
  return w.outcome(ids);
}

Outcome cdybe() {
  Worst w;
  for (const auto& [rank, l] : kSweep) w.absorb(run_checks(base(rank, l, 1, 8, {"cdybe.residual"})), label(rank, l));
  return w.outcome({"cdybe.residual"});
}

Outcome felder() {
  double off = 0.0, drift = 0.0, sym = 0.0;
  for (int rank : {1, 2}) {
    const int N = rank + 1;
    const RootSystem rs = build_root_system(Series::A, rank);
    const ChevalleyAlgebra g(rs);
    const GSBasis basis(g, build_twist(rs, 1));
    const RMatrixModel model(basis);
    const Representation V = defining_rep(g);
    const Eigen::MatrixXcd P = swap_matrix(N, N);
    Rng rng(77 + rank);
    for (int i = 0; i < 16; ++i) {
      const ModuliPoint p = sample_moduli_point(model, rng);
      const auto zs = sample_marked_points(2, p.tau, rng);
      const Eigen::MatrixXcd d0 = eval_r(model, V, V, p, zs[0]) - oracle::felder_r(p.u, p.tau, zs[0]);
      const Eigen::MatrixXcd d1 = eval_r(model, V, V, p, zs[1]) - oracle::felder_r(p.u, p.tau, zs[1]);
      const Eigen::MatrixXcd c0 = oracle::cartan_cartan_part(d0, N);
      off = std::max(off, (d0 - c0).cwiseAbs().maxCoeff());
      drift = std::max(drift, (c0 - oracle::cartan_cartan_part(d1, N)).cwiseAbs().maxCoeff());
      sym = std::max(sym, (P * c0 * P + c0).cwiseAbs().maxCoeff());
    }
  }
  std::ostringstream d;
  d << std::scientific << "off-Cartan " << off << " (bound 1e-10), Cartan z-drift " << drift << ", Cartan symmetric part "
    << sym;
  return {off < 1e-10 && drift < 1e-10 && sym < 1e-10, d.str()};
}

Outcome curvature(const std::string& id) {
  Worst w;
  for (const auto& [rank, l] : std::vector<std::pair<int, int>>{{1, 1}, {1, 2}, {2, 1}, {2, 3}})
    w.absorb(run_checks(base(rank, l, 1, 4, {id})), label(rank, l));
  return w.outcome({id});
}

Outcome dynamical_twist() {
  const RootSystem rs = build_root_system(Series::A, 2);
  const ChevalleyAlgebra g(rs);
  const GSBasis basis(g, build_twist(rs, 1));
  const RMatrixModel model(basis);
  const Representation V = defining_rep(g), W = dual_rep(V);
  Rng rng(31337);
  Eigen::MatrixXd A(2, 2);
  A(0, 0) = A(1, 1) = 0.0;
  A(0, 1) = rng.uniform(-1.0, 1.0);
  A(1, 0) = -A(0, 1);
  double res = 0, uni = 0, zw = 0, qp = 0, cy = 0;
  for (int i = 0; i < 16; ++i) {
    const ModuliPoint p = sample_moduli_point(model, rng);
    const auto z = sample_marked_points(3, p.tau, rng);
    for (const Representation* c : {&V, &W}) {
      res = std::max(res, residue_residual(model, V, *c, p, 1e-8, &A));
      uni = std::max(uni, unitarity_residual(model, V, *c, p, z[0] - z[1], &A));
      zw = std::max(zw, zero_weight_residual(model, V, *c, p, z[0] - z[1], &A));
      qp = std::max(qp, quasiperiodicity_residual(model, V, *c, p, z[0] - z[1], &A).max());
    }
    if (i < 8) cy = std::max(cy, cdybe_residual(model, {V, V, V}, p, {z[0], z[1], z[2]}, &A));
  }
  std::ostringstream d;
  d << std::scientific << "A01=" << A(0, 1) << " residue " << res << " unitarity " << uni << " zero_weight " << zw
    << " quasiperiodicity " << qp << " cdybe " << cy;
  return {res < 1e-6 && uni < 1e-11 && zw < 1e-11 && qp < 1e-10 && cy < 1e-9, d.str()};
}

Outcome transport_checks() {
  const std::vector<std::string> ids{"transport.homotopy", "transport.convergence", "transport.monodromy",
                                     "transport.monodromy_symmetry"};
  Worst w;
  w.absorb(run_checks(base(1, 2, 1, 16, ids)), label(1, 2));
  return w.outcome(ids);
}

std::string without_wall_time(const std::string& report) {
  std::istringstream in(report);
  std::string line, out;
  while (std::getline(in, line)) {
    auto j = nlohmann::json::parse(line);
    j.erase("wall_time");
    out += j.dump() + "\n";
  }
  return out;
}

Outcome determinism() {
  RunConfig c = base(1, 2, 1, 4, {});
  std::string reports[2];
  for (auto& r : reports) {
    std::ostringstream o;
    const auto t0 = std::chrono::steady_clock::now();
    const auto recs = run_checks(c);
    write_report(o, c, recs, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    r = o.str();
  }
  const std::string a = without_wall_time(reports[0]), b = without_wall_time(reports[1]);
  const auto lines = std::count(a.begin(), a.end(), '\n');
  return {a == b && lines > 2, std::to_string(lines) + " report lines, identical modulo wall_time: " + (a == b ? "yes" : "no")};
}

}  // namespace

int main() {
  struct Criterion {
    int number;
    const char* name;
    double budget;  // seconds
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "elliptic identity residuals", 10, identities},
      {2, "GS basis bracket, duality and grading", 5, gs_basis},
      {3, "r-matrix residue, unitarity, zero weight, quasi-periodicity", 30, rmatrix_axioms},
      {4, "classical dynamical Yang-Baxter equation on V (x) V (x) V", 60, cdybe},
      {5, "agreement with an independent Felder r-matrix", 30, felder},
      {6, "KZB flatness [nabla_a, nabla_b]", 120, [] { return curvature("kzb.curvature_zz"); }},
      {7, "KZB flatness [nabla_a, nabla_tau]", 120, [] { return curvature("kzb.curvature_ztau"); }},
      {8, "constant dynamical twist preserves the axioms", 60, dynamical_twist},
      {9, "horizontal transport and monodromy", 30, transport_checks},
      {10, "reproducible reports", 60, determinism},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs <= c.budget;
    const bool pass = o.ok && in_time;
    if (!pass) ++failures;
    std::printf("criterion %d: %s - %s (%.2f s of %.0f s) %s%s\n", c.number, pass ? "PASS" : "FAIL", c.name, secs,
                c.budget, o.detail.c_str(), in_time ? "" : " [over time budget]");
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
