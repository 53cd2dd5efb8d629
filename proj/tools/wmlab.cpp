// Command-line driver for the weighted-metric lab. Exit status: 0 when every criterion
// passed, 1 when one failed, 2 on configuration or numerical errors.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "wmlab/errors.hpp"
#include "wmlab/experiments.hpp"

namespace {

using namespace wmlab;
using nlohmann::json;

constexpr int kPassed = 0;
constexpr int kFailed = 1;
constexpr int kError = 2;

// Settings shared by every subcommand; unset flags leave the config file's values alone.
struct Overrides {
  std::string config_file;
  std::optional<std::string> out, domain, density, map, kernel_file;
  std::optional<double> resolution, tolerance, p;
  std::optional<int> degree, order;
  std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config_file, "experiment config file (key = value)")->check(CLI::ExistingFile);
  cmd->add_option("--out", o.out, "output directory");
  cmd->add_option("--resolution", o.resolution, "geodesic lattice step");
  cmd->add_option("--degree", o.degree, "Bergman kernel polynomial degree");
  cmd->add_option("--seed", o.seed, "seed for random pair sampling");
  cmd->add_option("--tolerance", o.tolerance, "exponent tolerance");
  cmd->add_option("--domain", o.domain, "domain, e.g. \"disc\" or \"ellipse 1.5 1\"");
  cmd->add_option("--density", o.density, "hyperbolic, quasihyperbolic, bergman or constant");
  cmd->add_option("--map", o.map, "catalog map name");
  cmd->add_option("--p", o.p, "integral-means exponent (inf for the sup form)");
  cmd->add_option("--kernel", o.kernel_file, "previously fitted kernel file for the Bergman density");
}

ExperimentConfig resolve(const Overrides& o, const std::string& experiment = {}) {
  ExperimentConfig c = o.config_file.empty() ? ExperimentConfig{} : load_config(o.config_file);
  if (!experiment.empty()) {
    if (!o.config_file.empty() && c.experiment != experiment) {
      throw ConfigError("config is for '" + c.experiment + "', not '" + experiment + "'");
    }
    c.experiment = experiment;
  }
  if (c.experiment.empty()) c.experiment = "hl1";  // the utility commands ignore it
  if (o.out) c.out = *o.out;
  if (o.domain) c.domain = parse_domain(*o.domain);
  if (o.density) c.density = *o.density;
  if (o.map) c.map = *o.map;
  if (o.p) c.p = *o.p;
  if (o.resolution) c.resolution = *o.resolution;
  if (o.degree) c.kernel_degree = *o.degree;
  if (o.order) c.kernel_order = *o.order;
  if (o.seed) c.seed = *o.seed;
  if (o.tolerance) c.tolerance = *o.tolerance;
  c = with_defaults(c);
  validate(c);
  return c;
}

ExperimentContext context_for(const Overrides& o) {
  if (!o.kernel_file) return {};
  return {std::make_shared<const KernelModel>(load_kernel(*o.kernel_file))};
}

Complex parse_point(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw ConfigError("point '" + text + "': expected x,y");
  try {
    std::size_t used_x = 0, used_y = 0;
    const double x = std::stod(text.substr(0, comma), &used_x);
    const double y = std::stod(text.substr(comma + 1), &used_y);
    if (used_x != comma || used_y != text.size() - comma - 1) throw std::invalid_argument(text);
    return {x, y};
  } catch (const std::logic_error&) {
    throw ConfigError("point '" + text + "': expected x,y");
  }
}

std::string num(double x) { return format_number(x); }

void print_fit(const ExponentFit& fit) {
  std::cout << "slope " << num(fit.slope) << "  r_squared " << num(fit.r_squared) << "  max_residual "
            << num(fit.max_residual) << "  points " << fit.count << '\n';
}

// Curve file plus a sidecar fit summary; returns the curve path.
template <class Curve>
std::filesystem::path export_curve(const Curve& curve, const ExperimentConfig& c, const std::string& kind,
                                   const std::optional<ExponentFit>& fit) {
  std::filesystem::create_directories(c.out);
  const auto stem = c.out / (kind + "-" + config_hash(c));
  auto file = stem;
  file += ".dat";
  write_curve(curve, file);
  json summary{{"tool_version", kToolVersion}, {"config", config_echo(c)}, {"divergent", curve.divergent}};
  if (fit) {
    summary["fit"] = {{"slope", json_number(fit->slope)},
                      {"intercept", json_number(fit->intercept)},
                      {"r_squared", json_number(fit->r_squared)},
                      {"max_residual", json_number(fit->max_residual)},
                      {"count", fit->count}};
  }
  auto sidecar = stem;
  sidecar += ".fit.json";
  std::ofstream(sidecar) << summary.dump(2) << '\n';
  return file;
}

int cmd_kernel_fit(const Overrides& o) {
  const ExperimentConfig c = resolve(o);
  const KernelModel model = fit_bergman_kernel(c.domain, c.kernel_degree, c.kernel_resolution, c.kernel_order);
  std::filesystem::create_directories(c.out);
  const auto file = c.out / ("kernel-" + config_hash(c) + ".kernel");
  save_kernel(model, file);
  std::cout << "kernel " << to_string(c.domain) << " degree " << model.degree << " -> " << file.string() << '\n';
  return kPassed;
}

int cmd_density_eval(const Overrides& o, const std::vector<std::string>& points) {
  const ExperimentConfig c = resolve(o);
  const MetricDensity omega = experiment_density(c, context_for(o));
  std::cout << "# x y density boundary_distance\n";
  for (const auto& text : points) {
    const Complex z = parse_point(text);
    std::cout << num(z.real()) << ' ' << num(z.imag()) << ' ' << num(omega(z)) << ' '
              << num(boundary_distance(c.domain, z)) << '\n';
  }
  return kPassed;
}

int cmd_distance(const Overrides& o, const std::string& from, const std::string& to, const std::string& path_file) {
  const ExperimentConfig c = resolve(o);
  const MetricDensity omega = experiment_density(c, context_for(o));
  const Complex z = parse_point(from), w = parse_point(to);
  const GeodesicResult r = weighted_distance(omega, z, w, c.resolution);
  std::cout << "distance " << num(r.distance) << "  resolution " << num(r.resolution) << "  vertices "
            << r.path.vertices.size() << (r.divergent ? "  divergent" : "") << '\n';
  if (omega.kind() == DensityKind::hyperbolic) {
    std::cout << "closed_form " << num(hyperbolic_distance_closed(z, w)) << '\n';
  }
  if (!path_file.empty()) write_path(r.path, path_file);
  return r.divergent ? kFailed : kPassed;
}

int cmd_means(const Overrides& o) {
  const ExperimentConfig c = resolve(o);
  const CircleFunction g = weighted_derivative_function(experiment_map(c), experiment_density(c, context_for(o)));
  const MeansCurve curve = means_curve(g, c.radii, c.p, c.circle_samples);
  std::cout << "# one_minus_r means\n";
  for (std::size_t i = 0; i < curve.radii.size(); ++i) {
    std::cout << num(1.0 - curve.radii[i]) << ' ' << num(curve.values[i]) << '\n';
  }
  std::optional<ExponentFit> fit;
  if (!curve.divergent) {
    fit = fit_exponent(curve);
    print_fit(*fit);
  }
  std::cout << "wrote " << export_curve(curve, c, "means", fit).string() << '\n';
  return curve.divergent ? kFailed : kPassed;
}

int cmd_modulus(const Overrides& o) {
  const ExperimentConfig c = resolve(o);
  const MetricDensity omega = experiment_density(c, context_for(o));
  const BoundaryTrace trace = boundary_trace(experiment_map(c), trace_sample_count(c.steps, c.trace_samples));
  const DistanceEvaluator d = distance_for(omega, c.resolution);
  const ModulusCurve curve =
      std::isinf(c.p) ? sup_modulus_curve(trace, d, c.steps) : mean_modulus_curve(trace, d, c.p, c.steps);
  std::cout << "# h modulus (" << d.name() << ")\n";
  for (std::size_t i = 0; i < curve.steps.size(); ++i) std::cout << num(curve.steps[i]) << ' ' << num(curve.values[i]) << '\n';
  std::optional<ExponentFit> fit;
  if (!curve.divergent) {
    fit = fit_exponent(curve);
    print_fit(*fit);
  }
  std::cout << "wrote " << export_curve(curve, c, "modulus", fit).string() << '\n';
  return curve.divergent ? kFailed : kPassed;
}

void print_verdicts(const std::vector<RederivedVerdict>& verdicts) {
  for (const auto& v : verdicts) std::cout << (v.derived ? "PASS " : "FAIL ") << v.name << '\n';
}

int cmd_verify(const Overrides& o, const std::string& experiment) {
  const ExperimentConfig c = resolve(o, experiment);
  const VerificationReport report = run_experiment(c, context_for(o));
  const auto files = emit_report(report, c.out);
  print_verdicts(rederive(to_json(report)));
  for (const auto& note : report.notes) std::cout << "note: " << note << '\n';
  for (const auto& f : files) std::cout << "wrote " << f.string() << '\n';
  std::cout << (report.passed() ? "PASSED" : "FAILED") << ' ' << report.experiment << '\n';
  return report.passed() ? kPassed : kFailed;
}

int cmd_report(const std::string& summary_file) {
  const json summary = load_summary(summary_file);
  const auto verdicts = rederive(summary);
  print_verdicts(verdicts);
  bool passed = !verdicts.empty();
  for (const auto& v : verdicts) {
    if (v.recorded != v.derived) throw ConfigError("recorded verdict for '" + v.name + "' disagrees with its numbers");
    passed = passed && v.derived;
  }
  if (summary.at("passed").get<bool>() != passed) throw ConfigError("recorded overall verdict disagrees with criteria");
  std::cout << (passed ? "PASSED" : "FAILED") << ' ' << summary.at("experiment").get<std::string>() << '\n';
  return passed ? kPassed : kFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weighted-metric lab: Bergman kernels, weighted distances and Hardy-Lipschitz experiments"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));

  Overrides o;
  std::vector<std::string> points;
  std::string from, to, path_file, experiment, summary_file;

  auto* kernel = app.add_subcommand("kernel", "Bergman kernel fitting");
  kernel->require_subcommand(1);
  auto* fit = kernel->add_subcommand("fit", "fit and save a kernel for the config's domain and degree");
  add_common(fit, o);
  fit->add_option("--order", o.order, "Gauss order per quadrature cell")->check(CLI::PositiveNumber);

  auto* density = app.add_subcommand("density", "metric densities");
  density->require_subcommand(1);
  auto* eval = density->add_subcommand("eval", "evaluate the density at points");
  add_common(eval, o);
  eval->add_option("points", points, "points as x,y")->required();

  auto* distance = app.add_subcommand("distance", "weighted geodesic distance between two points");
  add_common(distance, o);
  distance->add_option("from", from, "start point x,y")->required();
  distance->add_option("to", to, "end point x,y")->required();
  distance->add_option("--path", path_file, "write the geodesic polyline here");

  auto* means = app.add_subcommand("means", "integral means of f* on the radius ladder");
  add_common(means, o);
  auto* modulus = app.add_subcommand("modulus", "Lipschitz modulus of the boundary trace on the step ladder");
  add_common(modulus, o);

  auto* verify = app.add_subcommand("verify", "run a verification experiment and write its report");
  add_common(verify, o);
  verify->add_option("experiment", experiment, "experiment name")
      ->required()
      ->check(CLI::IsMember({"hl1", "hl2", "yamashita", "qh-compare", "nt-bounds"}));

  auto* report = app.add_subcommand("report", "re-derive the verdicts stored in a report");
  report->add_option("summary", summary_file, "summary .json file")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPassed : kError;
  }

  try {
    if (fit->parsed()) return cmd_kernel_fit(o);
    if (eval->parsed()) return cmd_density_eval(o, points);
    if (distance->parsed()) return cmd_distance(o, from, to, path_file);
    if (means->parsed()) return cmd_means(o);
    if (modulus->parsed()) return cmd_modulus(o);
    if (verify->parsed()) return cmd_verify(o, experiment);
    if (report->parsed()) return cmd_report(summary_file);
  } catch (const wmlab::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kError;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: malformed report: " << e.what() << '\n';
    return kError;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kError;
  }
  return kError;
}
