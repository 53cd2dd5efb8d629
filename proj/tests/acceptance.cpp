// Acceptance suite: runs each numbered criterion at its stated tolerance and prints one
// "criterion N: PASS|FAIL" line with the numbers that decided it. Indented lines are detail.
// Exit status 1 when any criterion fails.
//
// usage: acceptance [path-to-wmlab-cli] [scratch-dir]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "wmlab/errors.hpp"
#include "wmlab/experiments.hpp"

namespace {

using namespace wmlab;
using std::numbers::pi;
namespace fs = std::filesystem;

struct Outcome {
  bool passed = false;
  std::string summary;
};

std::string fmt(const char* format, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, x);
  return buf;
}

void detail(const std::string& line) { std::cout << "    " << line << std::endl; }

Complex point_in_disc(std::mt19937_64& rng, double radius) {
  for (;;) {
    const Complex z(radius * (2.0 * unit_uniform(rng) - 1.0), radius * (2.0 * unit_uniform(rng) - 1.0));
    if (std::abs(z) <= radius) return z;
  }
}

std::shared_ptr<const KernelModel> disc_kernel() {
  static const auto model = std::make_shared<const KernelModel>(fit_bergman_kernel(DomainSpec::unit_disc(), 40, 0.01));
  return model;
}

// 21 x 21 grid on [-0.7, 0.7]^2, restricted to |z| <= 0.7.
std::vector<Complex> disc_sample_grid() {
  std::vector<Complex> points;
  for (int i = 0; i <= 20; ++i) {
    for (int j = 0; j <= 20; ++j) {
      const Complex z(-0.7 + 0.07 * i, -0.7 + 0.07 * j);
      if (std::abs(z) <= 0.7 + 1e-12) points.push_back(z);
    }
  }
  return points;
}

Outcome kernel_oracle() {
  const auto start = std::chrono::steady_clock::now();
  const auto model = disc_kernel();
  const double fit_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const auto points = disc_sample_grid();
  double worst = 0.0;
  for (const Complex z : points) {
    for (const Complex w : points) {
      const Complex exact = 1.0 / (pi * std::pow(1.0 - z * std::conj(w), 2));
      worst = std::max(worst, std::abs(kernel_eval(*model, z, w) - exact));
    }
  }
  return {worst < 1e-5 && fit_seconds < 120.0,
          "max kernel error " + fmt("%.3g", worst) + " (< 1e-05), fit " + fmt("%.1f", fit_seconds) + " s (< 120 s)"};
}

Outcome density_oracle() {
  double worst = 0.0;
  for (const Complex z : disc_sample_grid()) {
    worst = std::max(worst, std::abs(bergman_density(*disc_kernel(), z) - std::sqrt(2.0) / (1.0 - std::norm(z))));
  }
  return {worst < 1e-3, "max density error " + fmt("%.3g", worst) + " (< 1e-03)"};
}

Outcome hyperbolic_geodesics() {
  GeodesicSolver solver(MetricDensity::hyperbolic(), 0.01);
  std::mt19937_64 rng(3);
  double worst = 0.0;
  for (int k = 0; k < 50; ++k) {
    const Complex z = point_in_disc(rng, 0.8), w = point_in_disc(rng, 0.8);
    const double exact = hyperbolic_distance_closed(z, w);
    if (exact == 0.0) continue;
    worst = std::max(worst, std::abs(solver.solve(z, w).distance - exact) / exact);
  }
  return {worst < 0.01, "max relative error " + fmt("%.3g", worst) + " over 50 pairs (< 0.01)"};
}

Outcome density_limit() {
  const auto disc = DomainSpec::unit_disc();
  const std::vector<MetricDensity> densities{MetricDensity::hyperbolic(), MetricDensity::quasihyperbolic(disc),
                                             MetricDensity::bergman(disc_kernel())};
  const std::vector<Complex> points{0.0, 0.3, Complex(-0.2, 0.4), Complex(0, 0.5), Complex(0.4, -0.3)};
  double worst = 0.0;
  int not_decreasing = 0;
  for (const auto& omega : densities) {
    for (const Complex z : points) {
      const double expected = density_eval(omega, z);
      std::vector<double> gaps;
      for (const double h : {0.08, 0.04, 0.02}) {
        const auto r = weighted_distance(omega, z, z + std::polar(h, 0.7), h / 20);
        gaps.push_back(std::abs(r.distance / h - expected) / expected);
      }
      worst = std::max(worst, gaps[2]);
      if (!(gaps[1] <= gaps[0] && gaps[2] <= gaps[1])) {
        ++not_decreasing;
        detail(to_string(omega.kind()) + " at (" + fmt("%g", z.real()) + ", " + fmt("%g", z.imag()) +
               "): gaps " + fmt("%.3g", gaps[0]) + " " + fmt("%.3g", gaps[1]) + " " + fmt("%.3g", gaps[2]));
      }
    }
  }
  return {worst < 0.05 && not_decreasing == 0, "max gap at h = 0.02 " + fmt("%.3g", worst) + " (< 0.05), " +
                                                   std::to_string(not_decreasing) + " non-decreasing sequences"};
}

Outcome conformal_identity() {
  std::mt19937_64 rng(5);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const Complex a = point_in_disc(rng, 0.95), z = point_in_disc(rng, 0.95);
    const auto phi = disc_automorphism(a, 2.0 * pi * unit_uniform(rng));
    worst = std::max(worst, std::abs(std::abs(phi.derivative(z)) * (1.0 - std::norm(z)) - (1.0 - std::norm(phi(z)))));
  }
  GeodesicSolver solver(MetricDensity::bergman(disc_kernel()), 0.01);
  double invariance = 0.0;
  for (int k = 0; k < 8; ++k) {
    const Complex z = point_in_disc(rng, 0.6), w = point_in_disc(rng, 0.6);
    const auto phi = disc_automorphism(point_in_disc(rng, 0.3), 2.0 * pi * unit_uniform(rng));
    const double d = solver.solve(z, w).distance;
    if (d == 0.0) continue;
    invariance = std::max(invariance, std::abs(solver.solve(phi(z), phi(w)).distance - d) / d);
  }
  return {worst < 1e-12 && invariance < 0.03, "conformal identity defect " + fmt("%.3g", worst) +
                                                  " (< 1e-12), Bergman invariance " + fmt("%.3g", invariance) +
                                                  " (< 0.03)"};
}

Outcome limit_quotient() {
  GeodesicSolver solver(MetricDensity::hyperbolic(), 1e-3);
  const auto& omega = solver.density();
  const std::vector<Complex> lattice{0.0, 0.3, Complex(-0.25, 0.2), Complex(0, 0.4), Complex(0.2, -0.35), -0.5};
  const double h = 0.02;
  double worst = 0.0;
  std::string where;
  for (const auto& name : catalog_names()) {
    const auto f = catalog_map(name);
    double map_worst = 0.0;
    for (const Complex z : lattice) {
      const double fs = weighted_derivative(f, omega, z);
      if (fs == 0.0) continue;
      for (const Complex dir : {Complex(1), Complex(0, 1)}) {
        const double q = solver.solve(f(z), f(z + h * dir)).distance / h;
        const double gap = std::abs(q - fs) / fs;
        map_worst = std::max(map_worst, gap);
        if (gap > worst) {
          worst = gap;
          where = name + " at (" + fmt("%g", z.real()) + ", " + fmt("%g", z.imag()) + ")";
        }
      }
    }
    detail(name + ": max relative gap " + fmt("%.4f", map_worst));
  }
  const auto square = catalog_map("square");
  const double critical = solver.solve(square(0.0), square(h)).distance / h;
  detail("z^2 at 0: quotient " + fmt("%.5f", critical) + ", f* = 0");
  return {worst < 0.05 && critical < 1e-2, "max relative gap " + fmt("%.4f", worst) + " (< 0.05) at " + where +
                                               "; z^2 quotient at 0 " + fmt("%.5f", critical) + " (< 0.01)"};
}

double measurement(const VerificationReport& r, const char* key) { return number_from_json(r.measurements.at(key)); }

bool criterion_passed(const VerificationReport& r, const std::string& name) {
  for (const auto& c : r.criteria) {
    if (c.name == name) return c.passed;
  }
  return false;
}

Outcome exponent_agreement() {
  int finite_runs = 0, finite_ok = 0;
  double slowest = 0.0;
  for (const int a : {30, 50, 70, 100}) {
    const std::string map = "map = cusp_a" + std::to_string(a) + "\nalpha = " + format_number(a / 100.0) + "\n";
    for (const std::string p : {"inf", "1", "2"}) {
      const auto start = std::chrono::steady_clock::now();
      const auto report = run_experiment(parse_config("experiment = " + std::string(p == "inf" ? "hl1" : "hl2") +
                                                      "\n" + map + "p = " + p + "\n"));
      const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      bool ok = criterion_passed(report, "means exponent") && criterion_passed(report, "modulus exponent") &&
                criterion_passed(report, "exponents agree");
      if (a == 100) ok = ok && criterion_passed(report, "means bounded");
      std::string line = "alpha " + fmt("%g", a / 100.0) + " p " + p + ": means+1 " +
                         fmt("%.3f", measurement(report, "alpha_from_means")) + ", modulus " +
                         fmt("%.3f", measurement(report, "alpha_from_modulus")) + ", " + fmt("%.1f", seconds) + " s " +
                         (ok ? "ok" : "off");
      if (report.measurements.contains("expected_class_exponent")) {
        line += " (class exponent " + fmt("%.2f", measurement(report, "expected_class_exponent")) + ")";
      }
      detail(line);
      // The criterion ranges over p in {1, 2}; the sup form is reported alongside.
      if (p != "inf") {
        ++finite_runs;
        if (ok && seconds < 600.0) ++finite_ok;
      }
      slowest = std::max(slowest, seconds);
    }
  }
  return {finite_ok == finite_runs, std::to_string(finite_ok) + " of " + std::to_string(finite_runs) +
                                      " (alpha, p) runs within 0.1 of alpha and of each other; slowest run " +
                                      fmt("%.1f", slowest) + " s (< 600 s)"};
}

Outcome negative_controls() {
  const auto identity = run_experiment(parse_config("experiment = hl1\nmap = identity\n"));
  const bool divergent = identity.measurements.at("modulus_divergent").get<bool>();
  const auto constant = run_experiment(parse_config("experiment = qh-compare\ndensity = constant\npairs = 0\n"));
  detail("identity hl1: " + std::string(identity.passed() ? "passed" : "failed") +
         ", modulus divergent = " + (divergent ? "true" : "false"));
  detail("constant-density qh-compare: " + std::string(constant.passed() ? "passed" : "failed") + ", ratio min " +
         fmt("%.3g", measurement(constant, "ratio_min")));
  return {!identity.passed() && divergent && !constant.passed(), "both controls fail as required"};
}

Outcome ellipse_comparability() {
  // Degree 120: at degree 40 the series is truncated visibly at boundary distance 0.05.
  const std::string base = "domain = ellipse 1.5 1\ndensity = bergman\nkernel_degree = 120\n";
  auto start = std::chrono::steady_clock::now();
  const auto kernel = experiment_kernel(with_defaults(parse_config("experiment = qh-compare\n" + base)));
  const ExperimentContext context{kernel};
  auto lap = [&start] {
    const auto now = std::chrono::steady_clock::now();
    const double s = std::chrono::duration<double>(now - start).count();
    start = now;
    return fmt("%.1f", s) + " s";
  };
  detail("kernel fit " + lap());
  const auto qh = run_experiment(parse_config("experiment = qh-compare\n" + base + "pairs = 40\n"), context);
  detail("qh-compare " + lap() + ": ratios [" + fmt("%.3f", measurement(qh, "ratio_min")) + ", " +
         fmt("%.3f", measurement(qh, "ratio_max")) + "], innermost drift " +
         fmt("%.3f", measurement(qh, "innermost_ring_drift")) + ", distance ratios [" +
         fmt("%.3f", measurement(qh, "pair_ratio_min")) + ", " + fmt("%.3f", measurement(qh, "pair_ratio_max")) + "]");
  const auto nt = run_experiment(parse_config("experiment = nt-bounds\n" + base + "pairs = 200\n"), context);
  const int evaluated = nt.measurements.at("pairs_evaluated").get<int>();
  detail("nt-bounds " + lap() + ": certificate " + fmt("%.3f", measurement(nt, "certificate")) + " on " +
         std::to_string(evaluated) + " pairs, " + std::to_string(nt.measurements.at("pairs_excluded").get<int>()) +
         " excluded");
  return {qh.passed() && nt.passed() && evaluated == 200,
          "ratios within [1/3, 3] and drift " + fmt("%.3f", measurement(qh, "innermost_ring_drift")) +
              " (<= 0.25); certificate c = " + fmt("%.3f", measurement(nt, "certificate")) + " (<= 10)"};
}

std::string slurp(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Runs each config twice through the CLI (or the library when no CLI path is given) into
// separate directories and compares every written file byte for byte.
Outcome determinism(const std::string& cli, const fs::path& scratch) {
  const std::vector<std::pair<std::string, std::string>> configs{
      {"hl1", "experiment = hl1\nmap = cusp_a50\nalpha = 0.5\n"},
      {"hl2", "experiment = hl2\nmap = blaschke2\ncontraction = 0.8\nalpha = 1\np = 2\n"},
      {"nt-bounds", "experiment = nt-bounds\ndensity = bergman\nmin_boundary_distance = 0.2\npairs = 12\n"
                    "resolution = 0.02\n"}};
  int compared = 0, differing = 0;
  for (const auto& [name, text] : configs) {
    std::vector<fs::path> dirs;
    for (int run = 0; run < 2; ++run) {
      const fs::path dir = scratch / (name + "-run" + std::to_string(run));
      fs::remove_all(dir);
      if (cli.empty()) {
        emit_report(run_experiment(parse_config(text)), dir);
      } else {
        fs::create_directories(dir);
        const fs::path conf = dir / "experiment.conf";
        std::ofstream(conf) << text;
        const std::string command = "\"" + cli + "\" verify " + name + " --config \"" + conf.string() + "\" --out \"" +
                                    (dir / "out").string() + "\" > /dev/null";
        const int status = std::system(command.c_str());
        if (status == -1 || WEXITSTATUS(status) == 2) return {false, "cli failed on " + name};
        fs::remove(conf);
      }
      dirs.push_back(dir);
    }
    std::vector<fs::path> files;
    for (const auto& entry : fs::recursive_directory_iterator(dirs[0])) {
      if (entry.is_regular_file()) files.push_back(fs::relative(entry.path(), dirs[0]));
    }
    for (const auto& rel : files) {
      ++compared;
      if (!fs::exists(dirs[1] / rel) || slurp(dirs[0] / rel) != slurp(dirs[1] / rel)) {
        ++differing;
        detail("differs: " + rel.string());
      }
    }
  }
  return {compared > 0 && differing == 0,
          std::to_string(compared) + " files compared, " + std::to_string(differing) + " differ" +
              (cli.empty() ? " (library)" : " (cli)")};
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";
  const fs::path scratch = argc > 2 ? fs::path(argv[2]) : fs::temp_directory_path() / "wmlab_acceptance";

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"Bergman kernel of the disc", kernel_oracle},
      {"Bergman density of the disc", density_oracle},
      {"hyperbolic geodesics", hyperbolic_geodesics},
      {"limit of d(z, z + h) / h", density_limit},
      {"conformal identity and Bergman invariance", conformal_identity},
      {"weighted-derivative limit quotient", limit_quotient},
      {"exponent agreement", exponent_agreement},
      {"negative controls", negative_controls},
      {"ellipse comparability and distance certificate", ellipse_comparability},
      {"determinism", [&] { return determinism(cli, scratch); }},
  };

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto& [title, run] = criteria[i];
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("error: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!outcome.passed) ++failed;
    std::cout << "criterion " << i + 1 << ": " << (outcome.passed ? "PASS" : "FAIL") << "  " << title << ": "
              << outcome.summary << "  [" << fmt("%.1f", seconds) << " s]" << std::endl;
  }
  std::cout << (criteria.size() - failed) << " of " << criteria.size() << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
