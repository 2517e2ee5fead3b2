#include <chrono>
#include <fstream>
#include <iostream>
#include <memory>

#include "CLI11.hpp"
#include "json.hpp"

#include "ellkzb/checks.hpp"
#include "ellkzb/config.hpp"
#include "ellkzb/random.hpp"
#include "ellkzb/report.hpp"
#include "ellkzb/transport.hpp"

namespace {

using namespace ekzb;

constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

/// Output stream for --out, or stdout when the path is empty or "-".
std::ostream& open_out(const std::string& path, std::unique_ptr<std::ofstream>& holder) {
  if (path.empty() || path == "-") return std::cout;
  holder = std::make_unique<std::ofstream>(path);
  if (!*holder) throw ConfigError("cannot write '" + path + "'");
  return *holder;
}

int verify(const std::string& config_path, const std::vector<std::string>& suites, const std::optional<std::uint64_t>& seed,
           const std::string& out_path) {
  RunConfig cfg = load_config(config_path);
  if (!suites.empty()) cfg.suites = suites;
  if (seed) {
    cfg.seed = *seed;
    cfg.seed_given = true;
  }
  if (!cfg.seed_given) throw ConfigError(config_path + ": run.seed: a seed is required (set it or pass --seed)", 0, "run.seed");
  validate_selection(cfg);
  std::unique_ptr<std::ofstream> holder;
  std::ostream& out = open_out(out_path, holder);
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<CheckRecord> records = run_checks(cfg);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_report(out, cfg, records, wall);
  out.flush();
  int failures = 0;
  for (const auto& r : records) failures += failed(r);
  std::cerr << records.size() << " checks, " << failures << " failed, " << wall << " s\n";
  return failures ? kExitFail : 0;
}

int run_transport(const std::string& config_path, const std::string& path_text, const std::string& out_path) {
  const RunConfig cfg = load_config(config_path);
  PathSpec spec;
  try {
    spec = parse_path(path_text);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("--path: ") + e.what(), 0, "path");
  }
  const RootSystem rs = build_root_system(cfg.series, cfg.rank);
  const ChevalleyAlgebra g(rs);
  const GSBasis basis(g, build_twist(rs, cfg.l, cfg.j));
  const RMatrixModel model(basis, cfg.coordinates, cfg.derivation, cfg.series_options());

  MarkedConfig mc;
  Rng rng(cfg.seed);
  mc.point.tau = cfg.tau ? *cfg.tau : cplx(rng.uniform(-0.3, 0.3), rng.uniform(0.8, 1.3));
  mc.point.u = Eigen::VectorXcd::Zero(model.h0_dim());
  if (cfg.positions.empty())
    for (int a = 0; a < cfg.points; ++a) mc.z.push_back(rng.complex_box(0.3));
  else
    mc.z = cfg.positions;
  for (int a = 0; a < cfg.points; ++a)
    mc.reps.push_back(cfg.reps.empty() ? defining_rep(g) : rep_by_name(g, cfg.reps[a]));
  mc.z_derivative_scale = cfg.z_derivative_scale;

  int dim = 1;
  for (const auto& r : mc.reps) dim *= r.dim;
  const TransportResult res =
      transport(model, mc, spec.which, spec.point, spec.vertices, Eigen::MatrixXcd::Identity(dim, dim));

  nlohmann::json j;
  j["type"] = "transport";
  j["version"] = kToolVersion;
  j["config"] = canonical_config(cfg);
  j["path"] = path_text;
  j["tau"] = format_complex(mc.point.tau);
  std::vector<std::string> z;
  for (const cplx w : mc.z) z.push_back(format_complex(w));
  j["z"] = z;
  j["steps"] = res.steps;
  j["rejected"] = res.rejected;
  nlohmann::json rows = nlohmann::json::array();
  for (int r = 0; r < res.value.rows(); ++r) {
    std::vector<std::string> row;
    for (int c = 0; c < res.value.cols(); ++c) row.push_back(format_complex(res.value(r, c)));
    rows.push_back(row);
  }
  j["matrix"] = rows;
  std::unique_ptr<std::ofstream> holder;
  open_out(out_path, holder) << j.dump() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Twisted dynamical elliptic r-matrices and KZB connections: numerical certification"};
  app.require_subcommand(1);

  std::string config_path, out_path, path_text;
  std::vector<std::string> suites;
  std::uint64_t seed_value = 0;

  auto* verify_cmd = app.add_subcommand("verify", "run the selected check suites and write a JSON-lines report");
  verify_cmd->add_option("--config", config_path, "INI config file")->required();
  verify_cmd->add_option("--suite", suites, "suite to run (repeatable); overrides run.suites");
  auto* seed_opt = verify_cmd->add_option("--seed", seed_value, "overrides run.seed");
  verify_cmd->add_option("--out", out_path, "report path (default: stdout)");

  auto* list_cmd = app.add_subcommand("list-checks", "print every check id with its suite, tolerance and anchor");

  auto* transport_cmd = app.add_subcommand("transport", "transport the identity along a path (Belavin twist only)");
  transport_cmd->add_option("--config", config_path, "INI config file")->required();
  transport_cmd->add_option("--path", path_text, "z<k>:<w1>;<w2>;... or tau:<w1>;...")->required();
  transport_cmd->add_option("--out", out_path, "output path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (list_cmd->parsed()) {
      std::cout << catalog_text();
      return 0;
    }
    if (verify_cmd->parsed()) {
      std::optional<std::uint64_t> seed;
      if (seed_opt->count()) seed = seed_value;
      return verify(config_path, suites, seed, out_path);
    }
    return run_transport(config_path, path_text, out_path);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const RegimeError& e) {
    std::cerr << "unsupported: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFail;
  }
}
