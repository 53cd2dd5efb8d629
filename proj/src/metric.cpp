#include "wmlab/metric.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "metric_internal.hpp"
#include "wmlab/errors.hpp"
#include "wmlab/gauss.hpp"

namespace wmlab {

namespace {

constexpr int kSegmentSamples = 16;
constexpr double kMaxPanel = 0.05;

}  // namespace

MetricDensity MetricDensity::hyperbolic() {
  MetricDensity d;
  d.kind_ = DensityKind::hyperbolic;
  d.domain_ = DomainSpec::unit_disc();
  return d;
}

MetricDensity MetricDensity::quasihyperbolic(DomainSpec domain) {
  MetricDensity d;
  d.kind_ = DensityKind::quasihyperbolic;
  d.domain_ = std::move(domain);
  return d;
}

MetricDensity MetricDensity::bergman(std::shared_ptr<const KernelModel> model) {
  if (!model) throw ConfigError("Bergman density needs a kernel model");
  MetricDensity d;
  d.kind_ = DensityKind::bergman;
  d.domain_ = model->domain;
  d.model_ = std::move(model);
  return d;
}

MetricDensity MetricDensity::constant(DomainSpec domain, double c) {
  if (!(c > 0.0) || !std::isfinite(c)) throw ConfigError("constant density must be positive and finite");
  MetricDensity d;
  d.kind_ = DensityKind::constant;
  d.domain_ = std::move(domain);
  d.c_ = c;
  return d;
}

double MetricDensity::operator()(Complex z) const {
  switch (kind_) {
    case DensityKind::hyperbolic: {
      const double r2 = std::norm(z);
      if (!(r2 < 1.0)) throw DomainError("hyperbolic density outside the unit disc");
      return 1.0 / (1.0 - r2);
    }
    case DensityKind::quasihyperbolic:
      return 1.0 / boundary_distance(domain_, z);
    case DensityKind::bergman:
      return bergman_density(*model_, z);
    case DensityKind::constant:
      if (!contains(domain_, z)) throw DomainError("density evaluated outside its domain");
      return c_;
  }
  return 0.0;
}

double MetricDensity::boundary_gap(Complex z) const {
  if (kind_ == DensityKind::hyperbolic) return 1.0 - std::abs(z);
  return contains(domain_, z) ? curve_distance(domain_, z) : -curve_distance(domain_, z);
}

double density_eval(const MetricDensity& omega, Complex z) { return omega(z); }

std::string to_string(DensityKind kind) {
  switch (kind) {
    case DensityKind::hyperbolic: return "hyperbolic";
    case DensityKind::quasihyperbolic: return "quasihyperbolic";
    case DensityKind::bergman: return "bergman";
    case DensityKind::constant: return "constant";
  }
  return "";
}

namespace detail {

bool segment_inside(const DomainSpec& domain, Complex a, Complex b) {
  if (!contains(domain, a) || !contains(domain, b)) return false;
  if (a == b) return true;
  for (int k = 1; k <= kSegmentSamples; ++k) {
    if (!contains(domain, a + (b - a) * (static_cast<double>(k) / (kSegmentSamples + 1)))) return false;
  }
  return true;
}

double segment_cost(const MetricDensity& omega, Complex a, Complex b) {
  const double len = std::abs(b - a);
  if (len == 0.0) return 0.0;
  double panel = kMaxPanel;
  if (omega.blows_up()) {
    const double gap = std::min({omega.boundary_gap(a), omega.boundary_gap(b), omega.boundary_gap(0.5 * (a + b))});
    panel = std::min(panel, 0.25 * gap);
  }
  if (!(panel > 0.0)) throw InvalidPathError("path segment touches the boundary");
  const auto panels = static_cast<long>(std::ceil(len / panel));
  const GaussRule& rule = gauss_legendre(5);
  double total = 0.0;
  for (long p = 0; p < panels; ++p) {
    double acc = 0.0;
    for (Eigen::Index q = 0; q < rule.nodes.size(); ++q) {
      const double t = (static_cast<double>(p) + rule.nodes(q)) / static_cast<double>(panels);
      acc += rule.weights(q) * omega(a + (b - a) * t);
    }
    total += acc;
  }
  return total * len / static_cast<double>(panels);
}

double segment_cost_or_inf(const MetricDensity& omega, Complex a, Complex b) {
  if (!segment_inside(omega.domain(), a, b)) return std::numeric_limits<double>::infinity();
  try {
    return segment_cost(omega, a, b);
  } catch (const DomainError&) {
    return std::numeric_limits<double>::infinity();
  } catch (const InvalidPathError&) {
    return std::numeric_limits<double>::infinity();
  }
}

}  // namespace detail

void validate_path(const DomainSpec& domain, const PolylinePath& path) {
  if (path.vertices.empty()) throw InvalidPathError("empty path");
  if (path.vertices.size() == 1 && !contains(domain, path.vertices.front())) {
    throw InvalidPathError("path vertex outside the domain");
  }
  for (std::size_t k = 1; k < path.vertices.size(); ++k) {
    if (!detail::segment_inside(domain, path.vertices[k - 1], path.vertices[k])) {
      throw InvalidPathError("path segment " + std::to_string(k - 1) + " leaves the domain");
    }
  }
}

double path_length(const MetricDensity& omega, const PolylinePath& path) {
  validate_path(omega.domain(), path);
  double total = 0.0;
  try {
    for (std::size_t k = 1; k < path.vertices.size(); ++k) {
      total += detail::segment_cost(omega, path.vertices[k - 1], path.vertices[k]);
    }
  } catch (const DomainError&) {
    throw InvalidPathError("path leaves the domain between samples");
  }
  return total;
}

double hyperbolic_distance_closed(Complex z, Complex w) {
  if (!(std::norm(z) < 1.0) || !(std::norm(w) < 1.0)) return std::numeric_limits<double>::infinity();
  const double x = std::abs(z - w) / std::abs(1.0 - std::conj(z) * w);
  if (!(x < 1.0)) return std::numeric_limits<double>::infinity();
  return std::atanh(x);  // (1/2) log((1 + x) / (1 - x))
}

DiscAutomorphism::DiscAutomorphism(Complex a, double theta)
  : a_(a), theta_(theta), rotation_(std::polar(1.0, theta)) {
  if (!(std::norm(a) < 1.0)) throw ConfigError("automorphism parameter must lie in the unit disc");
}

Complex DiscAutomorphism::operator()(Complex z) const { return rotation_ * (a_ - z) / (1.0 - std::conj(a_) * z); }

Complex DiscAutomorphism::derivative(Complex z) const {
  const Complex q = 1.0 - std::conj(a_) * z;
  return rotation_ * (std::norm(a_) - 1.0) / (q * q);
}

DiscAutomorphism disc_automorphism(Complex a, double theta) { return {a, theta}; }

void write_path(const PolylinePath& path, const std::filesystem::path& file) {
  std::ofstream out(file);
  if (!out) throw IoError("cannot write " + file.string());
  char buf[96];
  for (const Complex v : path.vertices) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g\n", v.real(), v.imag());
    out << buf;
  }
  if (!out) throw IoError("failed writing " + file.string());
}

}  // namespace wmlab
