#include "ellkzb/report.hpp"

#include <sstream>

#include "json.hpp"

namespace ekzb {

using nlohmann::json;

std::string manifest_line(const RunConfig& cfg) {
  json j;
  j["type"] = "manifest";
  j["tool"] = "ellkzb";
  j["version"] = kToolVersion;
  j["seed"] = cfg.seed;
  j["config"] = canonical_config(cfg);
  j["checks"] = selected_checks(cfg);
  j["conventions"] = {
      {"cartan_split", "S^k (x) h^{-k}"},
      {"u_coordinates", to_string(cfg.coordinates)},
      {"derivation", to_string(cfg.derivation)},
  };
  return j.dump();
}

std::string record_line(const CheckRecord& r) {
  json j;
  j["type"] = "check";
  j["id"] = r.id;
  j["suite"] = r.suite;
  j["anchor"] = r.anchor;
  json params = json::object();
  for (const auto& [k, v] : r.params) params[k] = v;
  j["params"] = params;
  j["param_hash"] = r.param_hash();
  j["residual"] = r.residual;
  j["tolerance"] = r.tolerance;
  j["comparison"] = r.comparison == Comparison::Below ? "residual <= tolerance" : "residual >= tolerance";
  j["status"] = to_string(r.status);
  j["note"] = r.note;
  j["wall_time"] = r.wall_time;
  return j.dump();
}

std::string summary_line(const std::vector<CheckRecord>& records, double wall_time) {
  int counts[4] = {0, 0, 0, 0};
  for (const auto& r : records) ++counts[static_cast<int>(r.status)];
  json j;
  j["type"] = "summary";
  j["total"] = records.size();
  j["passed"] = counts[static_cast<int>(CheckStatus::Pass)];
  j["failed"] = counts[static_cast<int>(CheckStatus::Fail)];
  j["skipped"] = counts[static_cast<int>(CheckStatus::Skipped)];
  j["errors"] = counts[static_cast<int>(CheckStatus::Error)];
  j["status"] = counts[static_cast<int>(CheckStatus::Fail)] + counts[static_cast<int>(CheckStatus::Error)] ? "fail" : "pass";
  j["wall_time"] = wall_time;
  return j.dump();
}

void write_report(std::ostream& out, const RunConfig& cfg, const std::vector<CheckRecord>& records, double wall_time) {
  out << manifest_line(cfg) << '\n';
  for (const auto& r : records) out << record_line(r) << '\n';
  out << summary_line(records, wall_time) << '\n';
}

std::string catalog_text() {
  std::ostringstream o;
  for (const auto& c : check_catalog()) {
    o << c.id << '\t' << c.suite << '\t' << (c.comparison == Comparison::Below ? "<= " : ">= ")
      << format_double(c.tolerance) << '\t' << c.anchor << '\n';
  }
  return o.str();
}

}  // namespace ekzb
