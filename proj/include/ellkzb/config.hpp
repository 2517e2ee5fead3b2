#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ellkzb/elliptic.hpp"
#include "ellkzb/rmatrix.hpp"
#include "ellkzb/roots.hpp"

namespace ekzb {

/// "re+imi" grammar: optional real part, optional imaginary part ending in i.
/// Examples: 0.3+0.9i, -1e-2-2.5i, i, -i, 2, 1.5i.
cplx parse_complex(const std::string& text);
/// Shortest round-trip digits for both parts, always in "re+imi" form.
std::string format_complex(cplx x);
std::string format_double(double x);

/// Bad input; line is 0 when the problem is not tied to one line.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, int line = 0, std::string field = {});
  int line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  int line_;
  std::string field_;
};

struct RunConfig {
  Series series = Series::A;
  int rank = 1;
  int l = 1;
  int j = 1;
  std::optional<cplx> tau;  // unset: sampled per point
  std::uint64_t seed = 42;
  bool seed_given = false;
  int samples = 16;
  std::vector<std::string> suites{"all"};
  std::vector<std::string> checks;  // empty: every check of the selected suites
  std::map<std::string, double> tolerances;

  int points = 2;
  std::vector<cplx> positions;        // empty: random
  std::vector<std::string> reps;      // empty: automatic choice
  double z_derivative_scale = 1.0;

  UCoordinates coordinates = UCoordinates::SimpleCoroot;
  DerivationForm derivation = DerivationForm::DualBasis;

  double series_tolerance = 1e-16;
  int max_terms = 400;
  double pole_radius = 1e-4;

  /// Rank of the Lie algebra's defining representation, N for sl_N.
  int dimension() const { return rank + 1; }
  SeriesOptions series_options() const;
};

/// Parses and validates the structural fields (algebra, twist, points); suite and
/// check names are checked by the caller against the catalog.
RunConfig parse_config(const std::string& text, const std::string& origin = "<config>");
RunConfig load_config(const std::string& path);

/// Canonical text of a config, used for the report manifest.
std::string canonical_config(const RunConfig& cfg);

std::string to_string(UCoordinates c);
std::string to_string(DerivationForm d);
std::string to_string(Series s);

}  // namespace ekzb
