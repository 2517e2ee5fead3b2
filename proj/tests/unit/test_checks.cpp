#include "doctest.h"

#include <algorithm>
#include <set>
#include <sstream>

#include "ellkzb/checks.hpp"
#include "ellkzb/report.hpp"
#include "json.hpp"

using namespace ekzb;

namespace {

RunConfig small(const std::string& suites, int l = 2) {
  RunConfig c;
  c.rank = 1;
  c.l = l;
  c.samples = 2;
  c.seed = 9;
  c.seed_given = true;
  c.suites = {suites};
  return c;
}

std::string strip_wall_time(const std::string& report) {
  std::istringstream in(report);
  std::string line, out;
  while (std::getline(in, line)) {
    auto j = nlohmann::json::parse(line);
    j.erase("wall_time");
    out += j.dump() + "\n";
  }
  return out;
}

}  // namespace

TEST_SUITE("checks") {

TEST_CASE("catalog") {
  std::set<std::string> ids;
  bool cdybe = false;
  for (const CheckInfo& c : check_catalog()) {
    CHECK(ids.insert(c.id).second);
    CHECK(std::find(suite_names().begin(), suite_names().end(), c.suite) != suite_names().end());
    CHECK(!c.anchor.empty());
    cdybe = cdybe || c.anchor.find("classical dynamical Yang-Baxter equation") != std::string::npos;
  }
  CHECK(cdybe);
  CHECK(find_check("rmatrix.unitarity") != nullptr);
  CHECK(find_check("rmatrix.nothing") == nullptr);

  const std::string text = catalog_text();
  CHECK(std::count(text.begin(), text.end(), '\n') == static_cast<long>(check_catalog().size()));
}

TEST_CASE("selection") {
  RunConfig c = small("gs");
  std::vector<std::string> sel = selected_checks(c);
  CHECK(!sel.empty());
  for (const auto& id : sel) CHECK(find_check(id)->suite == "gs");

  c.suites = {"all"};
  CHECK(selected_checks(c).size() == check_catalog().size());
  c.checks = {"rmatrix.unitarity"};
  CHECK(selected_checks(c) == std::vector<std::string>{"rmatrix.unitarity"});

  c.checks = {"rmatrix.nothing"};
  CHECK_THROWS_AS(validate_selection(c), ConfigError);
  c.checks.clear();
  c.suites = {"bogus"};
  CHECK_THROWS_AS(validate_selection(c), ConfigError);
  c.suites = {"all"};
  c.tolerances["bogus.id"] = 1.0;
  CHECK_THROWS_AS(validate_selection(c), ConfigError);
}

TEST_CASE("passing and failing runs") {
  const auto gs = run_checks(small("gs"));
  REQUIRE(!gs.empty());
  for (const auto& r : gs) CHECK(r.status == CheckStatus::Pass);

  RunConfig bad = small("rmatrix");
  bad.checks = {"rmatrix.unitarity"};
  bad.tolerances["rmatrix.unitarity"] = 1e-300;
  const auto rs = run_checks(bad);
  REQUIRE(rs.size() >= 1);
  bool any_fail = false;
  for (const auto& r : rs) {
    CHECK(r.id == "rmatrix.unitarity");
    CHECK(r.tolerance == 1e-300);
    any_fail = any_fail || failed(r);
  }
  CHECK(any_fail);
}

TEST_CASE("vacuous checks are skipped") {
  RunConfig c = small("transport", 1);
  const auto rs = run_checks(c);
  REQUIRE(!rs.empty());
  for (const auto& r : rs) {
    CHECK(r.status == CheckStatus::Skipped);
    CHECK(!failed(r));
  }
}

TEST_CASE("report lines are sorted-key JSON and reproducible") {
  RunConfig c = small("rmatrix");
  const auto a = run_checks(c);
  const auto b = run_checks(c);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 1; i < a.size(); ++i)
    CHECK((a[i - 1].id < a[i].id || (a[i - 1].id == a[i].id && a[i - 1].param_hash() <= a[i].param_hash())));

  std::ostringstream ra, rb;
  write_report(ra, c, a, 1.0);
  write_report(rb, c, b, 2.0);
  CHECK(ra.str() != rb.str());
  CHECK(strip_wall_time(ra.str()) == strip_wall_time(rb.str()));

  std::istringstream in(ra.str());
  std::string line;
  std::vector<std::string> types;
  while (std::getline(in, line)) {
    const auto j = nlohmann::ordered_json::parse(line);
    std::string prev;
    for (const auto& [k, v] : j.items()) {
      CHECK(prev < k);
      prev = k;
    }
    types.push_back(j.at("type").get<std::string>());
  }
  REQUIRE(types.size() == a.size() + 2);
  CHECK(types.front() == "manifest");
  CHECK(types.back() == "summary");

  const auto summary = nlohmann::json::parse(summary_line(a, 0.5));
  CHECK(summary.at("total") == a.size());
  CHECK(summary.at("status") == "pass");
}

TEST_CASE("parameter hash") {
  CheckRecord r;
  r.params = {{"l", "2"}, {"rank", "1"}};
  const std::string h = r.param_hash();
  CHECK(h.size() == 16);
  r.params[0].second = "1";
  CHECK(r.param_hash() != h);
}

}  // TEST_SUITE
