#include "wmlab/growth.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>

namespace wmlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double gap_angle(const BoundaryTrace& trace) { return kTwoPi / static_cast<double>(trace.n); }

// d(trace(t + k), trace(t)) for every t, as a p-mean (p = inf: max).
double shifted_mean(const BoundaryTrace& trace, const DistanceEvaluator& d, Eigen::Index k, double p) {
  const Eigen::Index n = trace.values.size();
  double acc = 0.0;
  for (Eigen::Index t = 0; t < n; ++t) {
    const double v = d(trace.values((t + k) % n), trace.values(t));
    if (!std::isfinite(v)) return kInf;
    acc = std::isinf(p) ? std::max(acc, v) : acc + std::pow(v, p);
  }
  return std::isinf(p) ? acc : std::pow(acc / static_cast<double>(n), 1.0 / p);
}

void check_trace(const BoundaryTrace& trace) {
  if (trace.n < 1 || trace.values.size() != trace.n) throw ConfigError("trace sample count does not match its values");
}

void check_steps(const std::vector<double>& steps) {
  if (steps.empty()) throw ConfigError("step ladder is empty");
  const bool up = steps.size() < 2 || steps[1] > steps[0];
  for (std::size_t i = 1; i < steps.size(); ++i) {
    if (up ? !(steps[i] > steps[i - 1]) : !(steps[i] < steps[i - 1])) {
      throw ConfigError("step ladder must be strictly monotone");
    }
  }
  for (const double h : steps) {
    if (!(h > 0.0 && h <= std::numbers::pi)) throw ConfigError("steps must lie in (0, pi]");
  }
}

// Largest gap count k with k * gap < h.
Eigen::Index max_gap_below(const BoundaryTrace& trace, double h) {
  const double g = gap_angle(trace);
  auto k = static_cast<Eigen::Index>(std::ceil(h / g)) - 1;
  while ((k + 1) * g < h) ++k;
  while (k > 0 && k * g >= h) --k;
  return std::min<Eigen::Index>(k, trace.n / 2);
}

std::vector<Eigen::Index> shift_ladder(const BoundaryTrace& trace, double h) {
  std::vector<Eigen::Index> ks;
  for (const double s : {h / 8, h / 4, h / 2, h}) {
    const auto k = static_cast<Eigen::Index>(std::floor(s / gap_angle(trace) * (1.0 + 1e-12)));
    if (k >= 1) ks.push_back(k);
  }
  if (ks.empty()) throw ConfigError("modulus step is below the trace sample spacing");
  return ks;
}

void write_columns(const std::vector<double>& x, const std::vector<double>& y, const std::filesystem::path& file) {
  std::ofstream out(file);
  if (!out) throw IoError("cannot write " + file.string());
  char buf[96];
  for (std::size_t i = 0; i < x.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g\n", x[i], y[i]);
    out << buf;
  }
  if (!out) throw IoError("failed writing " + file.string());
}

}  // namespace

double integral_means(const CircleFunction& g, double r, double p, int n) {
  if (!(r > 0.0 && r < 1.0)) throw ConfigError("integral means need a radius in (0, 1)");
  if (!(p >= 1.0)) throw ConfigError("integral means need p >= 1");
  if (n < 64) throw ConfigError("integral means need at least 64 samples");
  double acc = 0.0;
  for (int j = 0; j < n; ++j) {
    const double v = g(std::polar(r, kTwoPi * j / n));
    if (!std::isfinite(v)) return kInf;
    if (v < 0.0) throw ConfigError("integral means need a nonnegative function");
    acc = std::isinf(p) ? std::max(acc, v) : acc + std::pow(v, p);
  }
  return std::isinf(p) ? acc : std::pow(acc / n, 1.0 / p);
}

MeansCurve means_curve(const CircleFunction& g, const std::vector<double>& radii, double p, int n) {
  for (std::size_t i = 1; i < radii.size(); ++i) {
    if (!(radii[i] > radii[i - 1])) throw ConfigError("radii must be strictly increasing");
  }
  MeansCurve curve;
  curve.p = p;
  curve.radii = radii;
  for (const double r : radii) {
    curve.values.push_back(integral_means(g, r, p, n));
    curve.divergent = curve.divergent || std::isinf(curve.values.back());
  }
  return curve;
}

CircleFunction weighted_derivative_function(const AnalyticMap& f, const MetricDensity& omega) {
  return [f, omega](Complex z) { return weighted_derivative(f, omega, z); };
}

DistanceEvaluator::DistanceEvaluator(std::string name, std::function<double(Complex, Complex)> fn)
  : name_(std::move(name)), fn_(std::move(fn)) {}

DistanceEvaluator DistanceEvaluator::euclidean() {
  return {"euclidean", [](Complex a, Complex b) { return std::abs(a - b); }};
}

DistanceEvaluator DistanceEvaluator::hyperbolic() { return {"hyperbolic", hyperbolic_distance_closed}; }

DistanceEvaluator DistanceEvaluator::geodesic(MetricDensity omega, double resolution) {
  auto solver = std::make_shared<GeodesicSolver>(std::move(omega), resolution);
  return {"geodesic-" + to_string(solver->density().kind()), [solver](Complex a, Complex b) {
            const DomainSpec& domain = solver->density().domain();
            if (!contains(domain, a) || !contains(domain, b)) return kInf;
            if (a == b) return 0.0;
            const GeodesicResult r = solver->solve(a, b);
            return r.divergent ? kInf : r.distance;
          }};
}

DistanceEvaluator distance_for(const MetricDensity& omega, double resolution) {
  if (omega.kind() == DensityKind::hyperbolic) return DistanceEvaluator::hyperbolic();
  return DistanceEvaluator::geodesic(omega, resolution);
}

double sup_lipschitz_modulus(const BoundaryTrace& trace, const DistanceEvaluator& d, double h) {
  return sup_modulus_curve(trace, d, {h}).values.front();
}

double mean_lipschitz_modulus(const BoundaryTrace& trace, const DistanceEvaluator& d, double p, double h) {
  return mean_modulus_curve(trace, d, p, {h}).values.front();
}

ModulusCurve sup_modulus_curve(const BoundaryTrace& trace, const DistanceEvaluator& d,
                               const std::vector<double>& steps) {
  check_trace(trace);
  check_steps(steps);
  Eigen::Index kmax = 0;
  for (const double h : steps) kmax = std::max(kmax, max_gap_below(trace, h));
  // best[k] = max over gaps 1..k; the sup over gaps < h is then a lookup.
  std::vector<double> best(static_cast<std::size_t>(kmax) + 1, 0.0);
  for (Eigen::Index k = 1; k <= kmax; ++k) {
    best[k] = std::max(best[k - 1], shifted_mean(trace, d, k, kInfiniteExponent));
  }
  ModulusCurve curve;
  curve.steps = steps;
  for (const double h : steps) {
    curve.values.push_back(best[max_gap_below(trace, h)]);
    curve.divergent = curve.divergent || std::isinf(curve.values.back());
  }
  return curve;
}

ModulusCurve mean_modulus_curve(const BoundaryTrace& trace, const DistanceEvaluator& d, double p,
                                const std::vector<double>& steps) {
  check_trace(trace);
  check_steps(steps);
  if (!(p >= 1.0) || std::isinf(p)) throw ConfigError("mean modulus needs a finite p >= 1");
  std::map<Eigen::Index, double> by_gap;
  ModulusCurve curve;
  curve.p = p;
  curve.steps = steps;
  for (const double h : steps) {
    double value = 0.0;
    for (const Eigen::Index k : shift_ladder(trace, h)) {
      auto it = by_gap.find(k);
      if (it == by_gap.end()) it = by_gap.emplace(k, shifted_mean(trace, d, k, p)).first;
      value = std::max(value, it->second);
    }
    curve.values.push_back(value);
    curve.divergent = curve.divergent || std::isinf(value);
  }
  return curve;
}

ExponentFit fit_exponent(const MeansCurve& curve) {
  Eigen::ArrayXd x(static_cast<Eigen::Index>(curve.radii.size()));
  for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = 1.0 - curve.radii[i];
  return fit_power_law(x, Eigen::Map<const Eigen::ArrayXd>(curve.values.data(), x.size()));
}

ExponentFit fit_exponent(const ModulusCurve& curve) {
  const auto n = static_cast<Eigen::Index>(curve.steps.size());
  return fit_power_law(Eigen::Map<const Eigen::ArrayXd>(curve.steps.data(), n),
                       Eigen::Map<const Eigen::ArrayXd>(curve.values.data(), n));
}

void write_curve(const MeansCurve& curve, const std::filesystem::path& file) {
  std::vector<double> x;
  for (const double r : curve.radii) x.push_back(1.0 - r);
  write_columns(x, curve.values, file);
}

void write_curve(const ModulusCurve& curve, const std::filesystem::path& file) {
  write_columns(curve.steps, curve.values, file);
}

}  // namespace wmlab
