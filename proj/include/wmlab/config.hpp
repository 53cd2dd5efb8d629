#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wmlab/domain.hpp"

namespace wmlab {

/// One experiment, read from "key = value" lines. Every key and its default is listed in
/// docs/config.md. Unset optional ladders mean "use the default ladder".
struct ExperimentConfig {
  std::string experiment;  // hl1, hl2, yamashita, qh-compare, nt-bounds
  DomainSpec domain;
  std::string density = "hyperbolic";  // hyperbolic, quasihyperbolic, bergman, constant
  double density_constant = 1.0;
  std::string map = "cusp_a50";
  std::optional<double> contraction;  // wraps the map with affine_into(domain, map, s)
  double alpha = 0.5;
  double p = 1.0;  // inf selects the sup form
  std::vector<double> radii;
  std::vector<double> steps;
  int circle_samples = 4096;
  int trace_samples = 0;  // 0: chosen from the smallest step
  double resolution = 0.01;
  int kernel_degree = 40;
  double kernel_resolution = 0.01;
  int kernel_order = 4;
  double tolerance = 0.1;
  std::uint64_t seed = 1;
  int pairs = 200;
  int rays = 16;
  double min_boundary_distance = 0.05;
  double comparability_bound = 3.0;  // C for rho * d
  double distance_bound = 3.0;       // C' for beta / k
  double certificate_cap = 10.0;
  std::filesystem::path out = "out";
};

/// Throws ConfigError on unknown or duplicate keys and malformed values.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& file);

/// Defaults filled in: radii 1 - 2^-k (k = 2..9), steps 2^-k (k = 3..8).
ExperimentConfig with_defaults(ExperimentConfig config);

/// Checks ranges and ladder monotonicity; throws ConfigError.
void validate(const ExperimentConfig& config);

/// Canonical key/value echo at 17 significant digits, sorted by key; `out` is excluded so
/// the same experiment hashes identically wherever it is written.
std::map<std::string, std::string> config_echo(const ExperimentConfig& config);

/// FNV-1a 64 over the canonical echo, as 16 hex digits.
std::string config_hash(const ExperimentConfig& config);

/// Splits "1 2 3" or "1, 2, 3" into doubles; throws ConfigError.
std::vector<double> parse_number_list(std::string_view text);

std::string format_number(double x);

}  // namespace wmlab
