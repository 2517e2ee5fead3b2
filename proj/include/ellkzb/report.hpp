#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "ellkzb/checks.hpp"
#include "ellkzb/config.hpp"

namespace ekzb {

inline constexpr const char* kToolVersion = "0.1.0";

/// JSON-lines report: a manifest line, one line per record, a summary line.
/// Keys are sorted; only fields named wall_time vary between identical runs.
std::string manifest_line(const RunConfig& cfg);
std::string record_line(const CheckRecord& r);
std::string summary_line(const std::vector<CheckRecord>& records, double wall_time);
void write_report(std::ostream& out, const RunConfig& cfg, const std::vector<CheckRecord>& records, double wall_time);

/// One line per catalog entry: id, suite, tolerance and anchor.
std::string catalog_text();

}  // namespace ekzb
