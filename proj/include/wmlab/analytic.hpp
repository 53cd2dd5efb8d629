#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "wmlab/domain.hpp"
#include "wmlab/metric.hpp"
#include "wmlab/polynomial.hpp"

namespace wmlab {

class AnalyticMap;

struct PolynomialMap {
  Polynomial p;
};

/// prod_k (z - a_k) / (1 - conj(a_k) z); a single zero at 0 is the identity.
struct BlaschkeMap {
  std::vector<Complex> zeros;
};

/// w0 + c (1 - z)^alpha, principal branch (cut on [1, inf)).
struct PowerCuspMap {
  Complex base;
  Complex scale;
  double alpha = 1.0;
};

/// center + contraction * radius * inner(z), where center is the target's bounding-box
/// center and radius its distance to the boundary; `inner` maps the disc into itself.
struct AffineIntoMap {
  std::shared_ptr<const AnalyticMap> inner;
  double contraction = 1.0;
  Complex center;
  double radius = 1.0;
};

/// Analytic map from the unit disc into a target domain. Every variant extends
/// continuously to the closed disc. Construction verifies image containment on
/// |z| <= 1 - 1e-4 and the derivative formula against forward differences.
class AnalyticMap {
public:
  using Variant = std::variant<PolynomialMap, BlaschkeMap, PowerCuspMap, AffineIntoMap>;

  static AnalyticMap polynomial(Polynomial p, DomainSpec target = DomainSpec::unit_disc());
  static AnalyticMap blaschke(std::vector<Complex> zeros);
  static AnalyticMap power_cusp(Complex base, Complex scale, double alpha,
                                DomainSpec target = DomainSpec::unit_disc());
  static AnalyticMap affine_into(DomainSpec target, const AnalyticMap& inner, double contraction);

  const Variant& variant() const { return variant_; }
  const DomainSpec& target() const { return target_; }

  /// Throws DomainError for |z| > 1.
  Complex operator()(Complex z) const;
  /// Throws DomainError for |z| > 1 and DivergenceError at the tip of a cusp with alpha < 1.
  Complex derivative(Complex z) const;

  bool continuous_on_closed_disc() const { return true; }

private:
  AnalyticMap(Variant v, DomainSpec target);
  void verify() const;

  Variant variant_;
  DomainSpec target_;
};

Complex map_eval(const AnalyticMap& f, Complex z);
Complex map_derivative(const AnalyticMap& f, Complex z);

/// identity, half (z/2), square (z^2), constant (0), blaschke2, cusp_aXX
/// (power_cusp(0, 1/4, XX/100), e.g. cusp_a50). Throws ConfigError for unknown names.
AnalyticMap catalog_map(std::string_view name);
std::vector<std::string> catalog_names();

/// f*(z) = omega(f(z)) |f'(z)|. Throws DomainError when f(z) is outside omega's domain.
double weighted_derivative(const AnalyticMap& f, const MetricDensity& omega, Complex z);

struct UpperBoundCheck {
  double lhs = 0.0;  // d_omega(f(z), f(w))
  double rhs = 0.0;  // integral of f* along the segment [z, w]
};

/// lhs <= rhs up to the solver tolerance. Throws InvalidPathError when the image of the
/// segment leaves omega's domain.
UpperBoundCheck path_upper_bound_check(const AnalyticMap& f, GeodesicSolver& solver, Complex z, Complex w);
UpperBoundCheck path_upper_bound_check(const AnalyticMap& f, const MetricDensity& omega, Complex z, Complex w,
                                       double resolution = 0.01);

/// Samples f(radius e^{i t_j}), t_j = 2 pi j / n.
struct BoundaryTrace {
  int n = 0;
  double radius = 1.0;
  bool exact = true;  // radius == 1: true boundary values
  Eigen::VectorXcd values;

  double angle(Eigen::Index j) const;
};

BoundaryTrace boundary_trace(const AnalyticMap& f, int n, double radius = 1.0);

/// Columns "t re im" at 17 significant digits.
void write_trace(const BoundaryTrace& trace, const std::filesystem::path& file);

}  // namespace wmlab
