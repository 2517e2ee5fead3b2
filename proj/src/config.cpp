#include "ellkzb/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

namespace ekzb {

namespace pt = boost::property_tree;

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_real(const std::string& s) {
  double x = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (!s.empty() && s[0] == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, x);
  if (ec != std::errc() || ptr != last || first == last) throw std::invalid_argument("not a number: '" + s + "'");
  return x;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

/// Line of "key =" inside [section] in the raw text, for diagnostics.
int locate(const std::string& text, const std::string& section, const std::string& key) {
  std::istringstream in(text);
  std::string line, current;
  int no = 0;
  while (std::getline(in, line)) {
    ++no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == ';' || t[0] == '#') continue;
    if (t.front() == '[' && t.back() == ']') {
      current = trim(t.substr(1, t.size() - 2));
      if (key.empty() && current == section) return no;
      continue;
    }
    const auto eq = t.find('=');
    if (current == section && eq != std::string::npos && trim(t.substr(0, eq)) == key) return no;
  }
  return 0;
}

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> k{
      {"algebra", {"series", "rank"}},
      {"twist", {"l", "j"}},
      {"moduli", {"tau", "coordinates", "derivation"}},
      {"run", {"seed", "samples", "suites", "checks"}},
      {"points", {"n", "positions", "reps", "z_derivative_scale"}},
      {"series", {"tolerance", "max_terms", "pole_radius"}},
      {"tolerances", {}},
  };
  return k;
}

class Reader {
 public:
  Reader(const pt::ptree& tree, const std::string& text, const std::string& origin)
      : tree_(tree), text_(text), origin_(origin) {}

  [[noreturn]] void fail(const std::string& section, const std::string& key, const std::string& msg) const {
    const int line = locate(text_, section, key);
    std::string where = origin_;
    if (line > 0) where += ":" + std::to_string(line);
    const std::string field = key.empty() ? section : section + "." + key;
    throw ConfigError(where + ": " + field + ": " + msg, line, field);
  }

  std::optional<std::string> get(const std::string& section, const std::string& key) const {
    const auto sec = tree_.get_child_optional(section);
    if (!sec) return std::nullopt;
    const auto v = sec->get_optional<std::string>(pt::ptree::path_type(key, '\0'));
    if (!v) return std::nullopt;
    return trim(*v);
  }

  template <class F>
  auto convert(const std::string& section, const std::string& key, const std::string& value, F f) const {
    try {
      return f(value);
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      fail(section, key, e.what());
    }
  }

  int integer(const std::string& section, const std::string& key, int fallback) const {
    const auto v = get(section, key);
    if (!v) return fallback;
    return convert(section, key, *v, [](const std::string& s) {
      int x = 0;
      const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
      if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
        throw std::invalid_argument("not an integer: '" + s + "'");
      return x;
    });
  }

  double real(const std::string& section, const std::string& key, double fallback) const {
    const auto v = get(section, key);
    if (!v) return fallback;
    return convert(section, key, *v, parse_real);
  }

 private:
  const pt::ptree& tree_;
  const std::string& text_;
  std::string origin_;
};

}  // namespace

cplx parse_complex(const std::string& raw) {
  const std::string s = trim(raw);
  if (s.empty()) throw std::invalid_argument("empty complex number");
  if (s.back() != 'i') return cplx(parse_real(s), 0.0);
  const std::string body = s.substr(0, s.size() - 1);
  // Split at the last sign that is not part of an exponent.
  std::size_t cut = std::string::npos;
  for (std::size_t k = body.size(); k-- > 1;) {
    if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
      cut = k;
      break;
    }
  }
  const std::string re = cut == std::string::npos ? std::string() : body.substr(0, cut);
  std::string im = cut == std::string::npos ? body : body.substr(cut);
  if (im.empty() || im == "+") im = "1";
  if (im == "-") im = "-1";
  try {
    return cplx(re.empty() ? 0.0 : parse_real(re), parse_real(im));
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument("not a complex number: '" + s + "' (expected re+imi)");
  }
}

std::string format_double(double x) {
  char buf[40];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  (void)ec;
  return std::string(buf, ptr);
}

std::string format_complex(cplx x) {
  const std::string im = format_double(x.imag());
  return format_double(x.real()) + (im[0] == '-' ? "" : "+") + im + "i";
}

ConfigError::ConfigError(const std::string& what, int line, std::string field)
    : std::runtime_error(what), line_(line), field_(std::move(field)) {}

SeriesOptions RunConfig::series_options() const {
  SeriesOptions o;
  o.tolerance = series_tolerance;
  o.max_terms = max_terms;
  o.pole_radius = pole_radius;
  return o;
}

std::string to_string(UCoordinates c) {
  return c == UCoordinates::SimpleCoroot ? "simple_coroot" : "fundamental_coweight";
}
std::string to_string(DerivationForm d) { return d == DerivationForm::DualBasis ? "dual_basis" : "literal"; }
std::string to_string(Series s) { return s == Series::A ? "A" : "D"; }

RunConfig parse_config(const std::string& text, const std::string& origin) {
  pt::ptree tree;
  {
    std::istringstream in(text);
    try {
      pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
      throw ConfigError(origin + ":" + std::to_string(e.line()) + ": " + e.message(), static_cast<int>(e.line()));
    }
  }
  const Reader rd(tree, text, origin);

  for (const auto& [section, body] : tree) {
    const auto it = known_keys().find(section);
    if (it == known_keys().end()) rd.fail(section, "", "unknown section");
    if (section == "tolerances") continue;
    for (const auto& kv : body)
      if (!it->second.count(kv.first)) rd.fail(section, kv.first, "unknown key");
  }

  RunConfig c;
  if (const auto s = rd.get("algebra", "series")) {
    if (*s == "A")
      c.series = Series::A;
    else if (*s == "D")
      rd.fail("algebra", "series", "the D series is not supported (only A)");
    else
      rd.fail("algebra", "series", "unknown series '" + *s + "'");
  }
  c.rank = rd.integer("algebra", "rank", c.rank);
  if (c.rank < 1) rd.fail("algebra", "rank", "must be at least 1");
  c.l = rd.integer("twist", "l", c.l);
  c.j = rd.integer("twist", "j", c.j);
  const int N = c.dimension();
  if (c.l < 1 || N % c.l != 0)
    rd.fail("twist", "l", "l = " + std::to_string(c.l) + " does not divide N = " + std::to_string(N));
  if (std::gcd(c.j, c.l) != 1 || c.j < 1)
    rd.fail("twist", "j", "j = " + std::to_string(c.j) + " must be positive and coprime to l = " + std::to_string(c.l));

  if (const auto s = rd.get("moduli", "tau"); s && *s != "random") {
    c.tau = rd.convert("moduli", "tau", *s, parse_complex);
    if (c.tau->imag() <= 0.0) rd.fail("moduli", "tau", "imaginary part must be positive");
  }
  if (const auto s = rd.get("moduli", "coordinates")) {
    if (*s == "simple_coroot")
      c.coordinates = UCoordinates::SimpleCoroot;
    else if (*s == "fundamental_coweight")
      c.coordinates = UCoordinates::FundamentalCoweight;
    else
      rd.fail("moduli", "coordinates", "expected simple_coroot or fundamental_coweight");
  }
  if (const auto s = rd.get("moduli", "derivation")) {
    if (*s == "dual_basis")
      c.derivation = DerivationForm::DualBasis;
    else if (*s == "literal")
      c.derivation = DerivationForm::Literal;
    else
      rd.fail("moduli", "derivation", "expected dual_basis or literal");
  }

  if (const auto s = rd.get("run", "seed")) {
    c.seed = rd.convert("run", "seed", *s, [](const std::string& v) {
      std::uint64_t x = 0;
      const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
      if (ec != std::errc() || ptr != v.data() + v.size() || v.empty())
        throw std::invalid_argument("not an unsigned integer: '" + v + "'");
      return x;
    });
    c.seed_given = true;
  }
  c.samples = rd.integer("run", "samples", c.samples);
  if (c.samples < 1) rd.fail("run", "samples", "must be at least 1");
  if (const auto s = rd.get("run", "suites")) c.suites = split_list(*s);
  if (c.suites.empty()) rd.fail("run", "suites", "no suite selected");
  if (const auto s = rd.get("run", "checks")) c.checks = split_list(*s);

  c.points = rd.integer("points", "n", c.points);
  if (c.points < 1) rd.fail("points", "n", "must be at least 1");
  if (const auto s = rd.get("points", "positions"); s && *s != "random") {
    for (const auto& item : split_list(*s)) c.positions.push_back(rd.convert("points", "positions", item, parse_complex));
    if (static_cast<int>(c.positions.size()) != c.points)
      rd.fail("points", "positions",
              std::to_string(c.positions.size()) + " positions for n = " + std::to_string(c.points));
  }
  if (const auto s = rd.get("points", "reps"); s && *s != "auto") {
    c.reps = split_list(*s);
    if (static_cast<int>(c.reps.size()) != c.points)
      rd.fail("points", "reps", std::to_string(c.reps.size()) + " representations for n = " + std::to_string(c.points));
    for (const auto& r : c.reps)
      if (r != "defining" && r != "dual" && r != "adjoint")
        rd.fail("points", "reps", "unknown representation '" + r + "' (expected defining, dual or adjoint)");
  }
  c.z_derivative_scale = rd.real("points", "z_derivative_scale", c.z_derivative_scale);

  c.series_tolerance = rd.real("series", "tolerance", c.series_tolerance);
  c.max_terms = rd.integer("series", "max_terms", c.max_terms);
  c.pole_radius = rd.real("series", "pole_radius", c.pole_radius);
  if (!(c.series_tolerance > 0.0)) rd.fail("series", "tolerance", "must be positive");
  if (c.max_terms < 4) rd.fail("series", "max_terms", "must be at least 4");
  if (!(c.pole_radius > 0.0)) rd.fail("series", "pole_radius", "must be positive");

  if (const auto sec = tree.get_child_optional("tolerances"))
    for (const auto& kv : *sec) {
      const double t = rd.convert("tolerances", kv.first, trim(kv.second.data()), parse_real);
      if (!(t > 0.0) || !std::isfinite(t)) rd.fail("tolerances", kv.first, "must be a positive finite number");
      c.tolerances[kv.first] = t;
    }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path);
}

std::string canonical_config(const RunConfig& c) {
  auto join = [](const auto& xs, auto fmt) {
    std::string out;
    for (const auto& x : xs) out += (out.empty() ? "" : ",") + fmt(x);
    return out;
  };
  const auto id = [](const std::string& s) { return s; };
  std::ostringstream o;
  o << "[algebra]\nseries=" << to_string(c.series) << "\nrank=" << c.rank << "\n";
  o << "[twist]\nl=" << c.l << "\nj=" << c.j << "\n";
  o << "[moduli]\ntau=" << (c.tau ? format_complex(*c.tau) : "random") << "\ncoordinates=" << to_string(c.coordinates)
    << "\nderivation=" << to_string(c.derivation) << "\n";
  o << "[run]\nseed=" << c.seed << "\nsamples=" << c.samples << "\nsuites=" << join(c.suites, id)
    << "\nchecks=" << join(c.checks, id) << "\n";
  o << "[points]\nn=" << c.points << "\npositions=" << (c.positions.empty() ? "random" : join(c.positions, format_complex))
    << "\nreps=" << (c.reps.empty() ? "auto" : join(c.reps, id)) << "\nz_derivative_scale=" << format_double(c.z_derivative_scale)
    << "\n";
  o << "[series]\ntolerance=" << format_double(c.series_tolerance) << "\nmax_terms=" << c.max_terms
    << "\npole_radius=" << format_double(c.pole_radius) << "\n";
  o << "[tolerances]\n";
  for (const auto& [k, v] : c.tolerances) o << k << "=" << format_double(v) << "\n";
  return o.str();
}

}  // namespace ekzb
