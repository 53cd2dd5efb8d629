#include "wmlab/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "wmlab/errors.hpp"

namespace wmlab {

using nlohmann::json;

namespace {

Criterion decided(std::string name, json rule) {
  Criterion c{std::move(name), std::move(rule), false};
  c.passed = evaluate_rule(c.rule);
  return c;
}

std::string file_stem(const VerificationReport& report) { return report.experiment + "-" + report.config_hash; }

void write_table(const DataTable& table, const std::filesystem::path& file) {
  std::ofstream out(file);
  if (!out) throw IoError("cannot write " + file.string());
  out << '#';
  for (const auto& c : table.columns) out << ' ' << c;
  out << '\n';
  char buf[40];
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", row[i]);
      out << (i ? " " : "") << buf;
    }
    out << '\n';
  }
  if (!out) throw IoError("failed writing " + file.string());
}

}  // namespace

json json_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

double number_from_json(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  if (j.is_boolean()) return j.get<bool>() ? 1.0 : 0.0;
  throw ConfigError("report: expected a number, got " + j.dump());
}

Criterion within(std::string name, double value, double target, double tolerance) {
  return decided(std::move(name), {{"rule", "within"},
                                   {"value", json_number(value)},
                                   {"target", json_number(target)},
                                   {"tolerance", json_number(tolerance)}});
}

Criterion at_most(std::string name, double value, double bound) {
  return decided(std::move(name), {{"rule", "at_most"}, {"value", json_number(value)}, {"bound", json_number(bound)}});
}

Criterion at_least(std::string name, double value, double bound) {
  return decided(std::move(name), {{"rule", "at_least"}, {"value", json_number(value)}, {"bound", json_number(bound)}});
}

Criterion in_range(std::string name, double min, double max, double lower, double upper) {
  return decided(std::move(name), {{"rule", "in_range"},
                                   {"min", json_number(min)},
                                   {"max", json_number(max)},
                                   {"lower", json_number(lower)},
                                   {"upper", json_number(upper)}});
}

Criterion flag_clear(std::string name, bool flag) {
  return decided(std::move(name), {{"rule", "flag_clear"}, {"flag", flag}});
}

Criterion implies(std::string name, const Criterion& premise, const Criterion& conclusion) {
  return decided(std::move(name), {{"rule", "implies"}, {"premise", premise.rule}, {"conclusion", conclusion.rule}});
}

bool evaluate_rule(const json& rule) {
  const auto kind = rule.at("rule").get<std::string>();
  auto num = [&](const char* key) { return number_from_json(rule.at(key)); };
  // NaN inputs fail every comparison.
  if (kind == "within") return std::abs(num("value") - num("target")) <= num("tolerance");
  if (kind == "at_most") return num("value") <= num("bound");
  if (kind == "at_least") return num("value") >= num("bound");
  if (kind == "in_range") return num("lower") <= num("min") && num("max") <= num("upper");
  if (kind == "flag_clear") return num("flag") == 0.0;
  if (kind == "implies") return !evaluate_rule(rule.at("premise")) || evaluate_rule(rule.at("conclusion"));
  throw ConfigError("report: unknown rule '" + kind + "'");
}

DataTable two_column(std::string name, std::string x, std::string y, const std::vector<double>& xs,
                     const std::vector<double>& ys) {
  DataTable t{std::move(name), {std::move(x), std::move(y)}, {}};
  for (std::size_t i = 0; i < xs.size(); ++i) t.rows.push_back({xs[i], ys[i]});
  return t;
}

bool VerificationReport::passed() const {
  for (const auto& c : criteria) {
    if (!c.passed) return false;
  }
  return !criteria.empty();
}

json to_json(const VerificationReport& report) {
  json j;
  j["tool_version"] = kToolVersion;
  j["experiment"] = report.experiment;
  j["config"] = report.config;
  j["config_hash"] = report.config_hash;
  j["passed"] = report.passed();
  json criteria = json::array();
  for (const auto& c : report.criteria) criteria.push_back({{"name", c.name}, {"passed", c.passed}, {"rule", c.rule}});
  j["criteria"] = criteria;
  j["measurements"] = report.measurements;
  json tables = json::array();
  for (const auto& t : report.tables) {
    json rows = json::array();
    for (const auto& row : t.rows) {
      json r = json::array();
      for (const double x : row) r.push_back(json_number(x));
      rows.push_back(r);
    }
    tables.push_back({{"name", t.name},
                      {"file", file_stem(report) + "-" + t.name + ".dat"},
                      {"columns", t.columns},
                      {"rows", rows}});
  }
  j["tables"] = tables;
  j["notes"] = report.notes;
  return j;
}

std::vector<std::filesystem::path> emit_report(const VerificationReport& report, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  std::vector<std::filesystem::path> written;
  const auto summary = dir / (file_stem(report) + ".json");
  {
    std::ofstream out(summary);
    if (!out) throw IoError("cannot write " + summary.string());
    out << to_json(report).dump(2) << '\n';
    if (!out) throw IoError("failed writing " + summary.string());
  }
  written.push_back(summary);
  for (const auto& t : report.tables) {
    const auto file = dir / (file_stem(report) + "-" + t.name + ".dat");
    write_table(t, file);
    written.push_back(file);
  }
  return written;
}

std::vector<RederivedVerdict> rederive(const json& summary) {
  std::vector<RederivedVerdict> out;
  for (const auto& c : summary.at("criteria")) {
    out.push_back({c.at("name").get<std::string>(), c.at("passed").get<bool>(), evaluate_rule(c.at("rule"))});
  }
  return out;
}

json load_summary(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw IoError("cannot read " + file.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("malformed report " + file.string() + ": " + e.what());
  }
}

}  // namespace wmlab
