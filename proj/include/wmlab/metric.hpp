#pragma once

#include <cstdint>
#include <filesystem>
#include <limits>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "wmlab/bergman.hpp"
#include "wmlab/domain.hpp"

namespace wmlab {

enum class DensityKind { hyperbolic, quasihyperbolic, bergman, constant };

/// Positive continuous weight omega on a domain.
class MetricDensity {
public:
  /// 1 / (1 - |z|^2) on the unit disc.
  static MetricDensity hyperbolic();
  /// 1 / d(z, boundary).
  static MetricDensity quasihyperbolic(DomainSpec domain);
  /// Bergman density of a fitted kernel; the domain is the kernel's.
  static MetricDensity bergman(std::shared_ptr<const KernelModel> model);
  static MetricDensity constant(DomainSpec domain, double c);

  DensityKind kind() const { return kind_; }
  const DomainSpec& domain() const { return domain_; }
  double constant_value() const { return c_; }
  const KernelModel* kernel() const { return model_.get(); }

  /// True when omega tends to infinity at the boundary.
  bool blows_up() const { return kind_ != DensityKind::constant; }

  /// Throws DomainError outside the domain.
  double operator()(Complex z) const;

  /// Distance to the boundary in the form the kind needs it (1 - |z| on the disc).
  double boundary_gap(Complex z) const;

private:
  DensityKind kind_ = DensityKind::constant;
  DomainSpec domain_;
  double c_ = 1.0;
  std::shared_ptr<const KernelModel> model_;
};

double density_eval(const MetricDensity& omega, Complex z);

std::string to_string(DensityKind kind);

struct PolylinePath {
  std::vector<Complex> vertices;
};

/// Throws InvalidPathError unless every vertex and 16 interior samples per segment lie in the domain.
void validate_path(const DomainSpec& domain, const PolylinePath& path);

/// Weighted length: composite 5-point Gauss-Legendre per segment, with panels no longer than
/// 0.05 and, for blow-up densities, no longer than a quarter of the distance to the boundary.
/// Throws InvalidPathError if the path leaves the domain.
double path_length(const MetricDensity& omega, const PolylinePath& path);

struct GeodesicResult {
  double distance = 0.0;  // path_length of `path`; +inf when divergent
  PolylinePath path;
  double resolution = 0.0;
  double refinement_gain = 0.0;  // relative decrease from the best initial candidate
  bool divergent = false;        // an endpoint lies within one resolution step of the boundary
};

/// Shortest weighted paths on an implicit lattice of spacing `resolution` anchored at the
/// bounding-box corner, with 16-neighbour connectivity (king plus knight moves). Lattice
/// nodes closer than one step to the boundary are excluded. Edge costs use Simpson's rule,
/// so every density sample lies on the half-step lattice and is cached across queries.
///
/// Not thread-safe: the cache is mutated by queries. Use one solver per thread.
class GeodesicSolver {
public:
  GeodesicSolver(MetricDensity omega, double resolution);

  const MetricDensity& density() const { return omega_; }
  double resolution() const { return h_; }

  /// `hint`, when given, is an additional feasible candidate path from z to w.
  GeodesicResult solve(Complex z, Complex w, const PolylinePath* hint = nullptr);

  std::size_t cached_samples() const { return cache_.size(); }

private:
  struct Sample {
    double gap = -1.0;                                          // boundary distance; < 0 outside
    double value = std::numeric_limits<double>::quiet_NaN();  // density, filled on demand
  };

  GeodesicResult solve_ordered(Complex z, Complex w, const PolylinePath* hint);
  Sample& sample(std::int64_t i2, std::int64_t j2);
  double sample_value(Sample& s, std::int64_t i2, std::int64_t j2);
  Complex half_point(std::int64_t i2, std::int64_t j2) const;
  bool admissible(std::int64_t i, std::int64_t j);
  std::vector<Complex> graph_path(Complex z, Complex w);

  MetricDensity omega_;
  double h_;
  Complex origin_;
  std::unordered_map<std::uint64_t, Sample> cache_;
};

/// One-off query; builds a fresh solver.
GeodesicResult weighted_distance(const MetricDensity& omega, Complex z, Complex w, double resolution);

/// Recomputes at half the previous resolution with the previous path as a candidate,
/// so the returned distance never exceeds the previous one.
GeodesicResult refine(const MetricDensity& omega, const GeodesicResult& previous);

/// Hyperbolic distance with respect to the density 1 / (1 - |z|^2):
/// (1/2) log((|1 - conj(z) w| + |z - w|) / (|1 - conj(z) w| - |z - w|)).
/// Returns +inf if either point is not in the open unit disc.
double hyperbolic_distance_closed(Complex z, Complex w);

/// phi(z) = e^{i theta} (a - z) / (1 - conj(a) z).
class DiscAutomorphism {
public:
  DiscAutomorphism(Complex a, double theta);

  Complex operator()(Complex z) const;
  Complex derivative(Complex z) const;
  Complex a() const { return a_; }
  double theta() const { return theta_; }

private:
  Complex a_;
  double theta_;
  Complex rotation_;
};

DiscAutomorphism disc_automorphism(Complex a, double theta);

/// Two columns "x y" at 17 significant digits.
void write_path(const PolylinePath& path, const std::filesystem::path& file);

}  // namespace wmlab
