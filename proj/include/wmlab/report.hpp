#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

namespace wmlab {

inline constexpr const char* kToolVersion = "wmlab 1.0.0";

/// A verdict and the numbers that decide it. Rules:
///   within     |value - target| <= tolerance
///   at_most    value <= bound
///   at_least   value >= bound
///   in_range   lower <= min and max <= upper
///   flag_clear flag == 0
///   implies    premise fails or conclusion holds (both nested criteria)
struct Criterion {
  std::string name;
  nlohmann::json rule;  // {"rule": ..., inputs...}
  bool passed = false;
};

Criterion within(std::string name, double value, double target, double tolerance);
Criterion at_most(std::string name, double value, double bound);
Criterion at_least(std::string name, double value, double bound);
Criterion in_range(std::string name, double min, double max, double lower, double upper);
Criterion flag_clear(std::string name, bool flag);
Criterion implies(std::string name, const Criterion& premise, const Criterion& conclusion);

/// Recomputes a verdict from the rule's stored inputs. Throws ConfigError on unknown rules.
bool evaluate_rule(const nlohmann::json& rule);

/// Rows of numbers with named columns; written as whitespace-separated text at 17 digits.
struct DataTable {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

DataTable two_column(std::string name, std::string x, std::string y, const std::vector<double>& xs,
                     const std::vector<double>& ys);

struct VerificationReport {
  std::string experiment;
  std::map<std::string, std::string> config;
  std::string config_hash;
  std::vector<Criterion> criteria;
  std::vector<DataTable> tables;
  nlohmann::json measurements = nlohmann::json::object();
  std::vector<std::string> notes;

  bool passed() const;
};

/// Non-finite doubles become the strings "inf", "-inf", "nan".
nlohmann::json json_number(double x);
double number_from_json(const nlohmann::json& j);

nlohmann::json to_json(const VerificationReport& report);

/// Writes <experiment>-<hash>.json and one <experiment>-<hash>-<table>.dat per table into
/// `dir` (created if missing). Returns the written paths, summary first. Throws IoError.
std::vector<std::filesystem::path> emit_report(const VerificationReport& report, const std::filesystem::path& dir);

struct RederivedVerdict {
  std::string name;
  bool recorded = false;
  bool derived = false;
};

/// Verdicts recomputed from a summary file's stored numbers.
std::vector<RederivedVerdict> rederive(const nlohmann::json& summary);
nlohmann::json load_summary(const std::filesystem::path& file);

}  // namespace wmlab
