#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ellkzb/config.hpp"

namespace ekzb {

/// Most checks pass when the residual stays below the tolerance; a few measured
/// quantities (convergence factors) must reach it instead.
enum class Comparison { Below, AtLeast };

struct CheckInfo {
  std::string id;
  std::string suite;
  std::string anchor;  // the identity or property being certified
  double tolerance;
  Comparison comparison = Comparison::Below;
};

const std::vector<CheckInfo>& check_catalog();
const std::vector<std::string>& suite_names();
/// nullptr for unknown ids.
const CheckInfo* find_check(const std::string& id);

enum class CheckStatus { Pass, Fail, Skipped, Error };
std::string to_string(CheckStatus s);

struct CheckRecord {
  std::string id;
  std::string suite;
  std::string anchor;
  std::vector<std::pair<std::string, std::string>> params;  // sorted by key
  double residual = 0.0;
  double tolerance = 0.0;
  Comparison comparison = Comparison::Below;
  CheckStatus status = CheckStatus::Pass;
  std::string note;
  double wall_time = 0.0;

  /// Stable 64-bit FNV-1a hash of the parameters, as 16 hex digits.
  std::string param_hash() const;
};

bool failed(const CheckRecord& r);

/// Rejects unknown suites, check ids and tolerance keys.  Throws ConfigError.
void validate_selection(const RunConfig& cfg);

/// Ids of the checks the config selects, in catalog order.
std::vector<std::string> selected_checks(const RunConfig& cfg);

/// Runs the selected checks (in parallel) and returns records sorted by id, then parameter hash.
std::vector<CheckRecord> run_checks(const RunConfig& cfg);

}  // namespace ekzb
