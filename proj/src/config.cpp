#include "wmlab/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <set>
#include <sstream>

#include "wmlab/errors.hpp"

namespace wmlab {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

double parse_double(const std::string& key, const std::string& value) {
  if (value == "inf" || value == "infinity") return std::numeric_limits<double>::infinity();
  try {
    std::size_t used = 0;
    const double x = std::stod(value, &used);
    if (used == value.size()) return x;
  } catch (const std::exception&) {
  }
  throw ConfigError(key + ": expected a number, got '" + value + "'");
}

long long parse_integer(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const long long x = std::stoll(value, &used);
    if (used == value.size()) return x;
  } catch (const std::exception&) {
  }
  throw ConfigError(key + ": expected an integer, got '" + value + "'");
}

int parse_int(const std::string& key, const std::string& value) {
  const long long x = parse_integer(key, value);
  if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max()) {
    throw ConfigError(key + ": integer out of range");
  }
  return static_cast<int>(x);
}

std::string join(const std::vector<double>& xs) {
  std::string s;
  for (const double x : xs) s += (s.empty() ? "" : " ") + format_number(x);
  return s;
}

void check_monotone(const std::string& key, const std::vector<double>& xs) {
  if (xs.size() < 2) return;
  const bool up = xs[1] > xs[0];
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (up ? !(xs[i] > xs[i - 1]) : !(xs[i] < xs[i - 1])) throw ConfigError(key + " must be strictly monotone");
  }
}

const std::set<std::string> kExperiments{"hl1", "hl2", "yamashita", "qh-compare", "nt-bounds"};
const std::set<std::string> kDensities{"hyperbolic", "quasihyperbolic", "bergman", "constant"};

}  // namespace

std::string format_number(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::vector<double> parse_number_list(std::string_view text) {
  std::string s(text);
  for (char& c : s) {
    if (c == ',') c = ' ';
  }
  std::istringstream in(s);
  std::vector<double> xs;
  std::string token;
  while (in >> token) xs.push_back(parse_double("list", token));
  return xs;
}

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig c;
  std::set<std::string> seen;
  const std::map<std::string, std::function<void(const std::string&)>> setters{
      {"experiment", [&](const std::string& v) { c.experiment = v; }},
      {"domain", [&](const std::string& v) { c.domain = parse_domain(v); }},
      {"density", [&](const std::string& v) { c.density = v; }},
      {"density_constant", [&](const std::string& v) { c.density_constant = parse_double("density_constant", v); }},
      {"map", [&](const std::string& v) { c.map = v; }},
      {"contraction", [&](const std::string& v) { c.contraction = parse_double("contraction", v); }},
      {"alpha", [&](const std::string& v) { c.alpha = parse_double("alpha", v); }},
      {"p", [&](const std::string& v) { c.p = parse_double("p", v); }},
      {"radii", [&](const std::string& v) { c.radii = parse_number_list(v); }},
      {"steps", [&](const std::string& v) { c.steps = parse_number_list(v); }},
      {"circle_samples", [&](const std::string& v) { c.circle_samples = parse_int("circle_samples", v); }},
      {"trace_samples", [&](const std::string& v) { c.trace_samples = parse_int("trace_samples", v); }},
      {"resolution", [&](const std::string& v) { c.resolution = parse_double("resolution", v); }},
      {"kernel_degree", [&](const std::string& v) { c.kernel_degree = parse_int("kernel_degree", v); }},
      {"kernel_resolution", [&](const std::string& v) { c.kernel_resolution = parse_double("kernel_resolution", v); }},
      {"kernel_order", [&](const std::string& v) { c.kernel_order = parse_int("kernel_order", v); }},
      {"tolerance", [&](const std::string& v) { c.tolerance = parse_double("tolerance", v); }},
      {"seed",
       [&](const std::string& v) {
         const long long s = parse_integer("seed", v);
         if (s < 0) throw ConfigError("seed must be nonnegative");
         c.seed = static_cast<std::uint64_t>(s);
       }},
      {"pairs", [&](const std::string& v) { c.pairs = parse_int("pairs", v); }},
      {"rays", [&](const std::string& v) { c.rays = parse_int("rays", v); }},
      {"min_boundary_distance",
       [&](const std::string& v) { c.min_boundary_distance = parse_double("min_boundary_distance", v); }},
      {"comparability_bound",
       [&](const std::string& v) { c.comparability_bound = parse_double("comparability_bound", v); }},
      {"distance_bound", [&](const std::string& v) { c.distance_bound = parse_double("distance_bound", v); }},
      {"certificate_cap", [&](const std::string& v) { c.certificate_cap = parse_double("certificate_cap", v); }},
      {"out", [&](const std::string& v) { c.out = v; }},
  };
  std::istringstream in{std::string(text)};
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(number) + ": expected key = value");
    const std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string value = trim(std::string_view(body).substr(eq + 1));
    const auto it = setters.find(key);
    if (it == setters.end()) throw ConfigError("line " + std::to_string(number) + ": unknown key '" + key + "'");
    if (!seen.insert(key).second) throw ConfigError("line " + std::to_string(number) + ": duplicate key '" + key + "'");
    if (value.empty()) throw ConfigError("line " + std::to_string(number) + ": empty value for '" + key + "'");
    it->second(value);
  }
  if (c.experiment.empty()) throw ConfigError("config needs an 'experiment' key");
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("cannot read config " + file.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

ExperimentConfig with_defaults(ExperimentConfig config) {
  if (config.radii.empty()) {
    for (int k = 2; k <= 9; ++k) config.radii.push_back(1.0 - std::ldexp(1.0, -k));
  }
  if (config.steps.empty()) {
    for (int k = 3; k <= 8; ++k) config.steps.push_back(std::ldexp(1.0, -k));
  }
  return config;
}

void validate(const ExperimentConfig& c) {
  if (!kExperiments.contains(c.experiment)) throw ConfigError("unknown experiment '" + c.experiment + "'");
  if (!kDensities.contains(c.density)) throw ConfigError("unknown density '" + c.density + "'");
  if (!(c.alpha > 0.0 && c.alpha <= 1.0)) throw ConfigError("alpha must lie in (0, 1]");
  if (!(c.p >= 1.0)) throw ConfigError("p must be at least 1 (or inf)");
  if (!(c.density_constant > 0.0) || !std::isfinite(c.density_constant)) {
    throw ConfigError("density_constant must be positive");
  }
  if (c.contraction && !(*c.contraction > 0.0 && *c.contraction < 1.0)) {
    throw ConfigError("contraction must lie in (0, 1)");
  }
  check_monotone("radii", c.radii);
  check_monotone("steps", c.steps);
  for (const double r : c.radii) {
    if (!(r > 0.0 && r < 1.0)) throw ConfigError("radii must lie in (0, 1)");
  }
  if (c.radii.size() > 1 && c.radii[1] < c.radii[0]) throw ConfigError("radii must increase toward 1");
  for (const double h : c.steps) {
    if (!(h > 0.0 && h <= 3.141592653589793)) throw ConfigError("steps must lie in (0, pi]");
  }
  if (c.circle_samples < 64) throw ConfigError("circle_samples must be at least 64");
  if (c.trace_samples < 0) throw ConfigError("trace_samples must be nonnegative");
  if (!(c.resolution > 0.0)) throw ConfigError("resolution must be positive");
  if (c.kernel_degree < 1) throw ConfigError("kernel_degree must be positive");
  if (!(c.kernel_resolution > 0.0)) throw ConfigError("kernel_resolution must be positive");
  if (c.kernel_order < 1) throw ConfigError("kernel_order must be positive");
  if (!(c.tolerance > 0.0)) throw ConfigError("tolerance must be positive");
  if (c.pairs < 0) throw ConfigError("pairs must be nonnegative");
  if (c.rays < 1) throw ConfigError("rays must be positive");
  if (!(c.min_boundary_distance > 0.0)) throw ConfigError("min_boundary_distance must be positive");
  if (!(c.comparability_bound >= 1.0) || !(c.distance_bound >= 1.0)) {
    throw ConfigError("comparability bounds must be at least 1");
  }
  if (!(c.certificate_cap >= 1.0)) throw ConfigError("certificate_cap must be at least 1");
}

std::map<std::string, std::string> config_echo(const ExperimentConfig& c) {
  return {
      {"experiment", c.experiment},
      {"domain", to_string(c.domain)},
      {"density", c.density},
      {"density_constant", format_number(c.density_constant)},
      {"map", c.map},
      {"contraction", c.contraction ? format_number(*c.contraction) : "none"},
      {"alpha", format_number(c.alpha)},
      {"p", format_number(c.p)},
      {"radii", join(c.radii)},
      {"steps", join(c.steps)},
      {"circle_samples", std::to_string(c.circle_samples)},
      {"trace_samples", std::to_string(c.trace_samples)},
      {"resolution", format_number(c.resolution)},
      {"kernel_degree", std::to_string(c.kernel_degree)},
      {"kernel_resolution", format_number(c.kernel_resolution)},
      {"kernel_order", std::to_string(c.kernel_order)},
      {"tolerance", format_number(c.tolerance)},
      {"seed", std::to_string(c.seed)},
      {"pairs", std::to_string(c.pairs)},
      {"rays", std::to_string(c.rays)},
      {"min_boundary_distance", format_number(c.min_boundary_distance)},
      {"comparability_bound", format_number(c.comparability_bound)},
      {"distance_bound", format_number(c.distance_bound)},
      {"certificate_cap", format_number(c.certificate_cap)},
  };
}

std::string config_hash(const ExperimentConfig& config) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  auto feed = [&](std::string_view s) {
    for (const unsigned char ch : s) {
      h ^= ch;
      h *= 0x100000001b3ull;
    }
  };
  for (const auto& [key, value] : config_echo(config)) {
    feed(key);
    feed("=");
    feed(value);
    feed("\n");
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace wmlab
