#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Core>

namespace wmlab {

using Complex = std::complex<double>;

/// Axis-aligned rectangle.
struct Box {
  double xmin = 0.0;
  double xmax = 0.0;
  double ymin = 0.0;
  double ymax = 0.0;

  Complex center() const { return {0.5 * (xmin + xmax), 0.5 * (ymin + ymax)}; }
  double half_diagonal() const { return 0.5 * std::hypot(xmax - xmin, ymax - ymin); }
  bool contains(Complex z) const {
    return z.real() >= xmin && z.real() <= xmax && z.imag() >= ymin && z.imag() <= ymax;
  }
};

enum class DomainKind { unit_disc, ellipse, polygon, smoothed_polygon };

/// Straight boundary piece from `a` to `b`.
struct Segment {
  Complex a;
  Complex b;
};

/// Circular boundary piece: center + radius * exp(i (start + s * sweep)), s in [0, 1].
/// A positive sweep runs counterclockwise; |sweep| < pi. `from` and `to` are the end
/// points bit-identical to those of the adjacent segments.
struct Arc {
  Complex center;
  double radius = 0.0;
  double start = 0.0;
  double sweep = 0.0;
  Complex from;
  Complex to;
};

using BoundaryPiece = std::variant<Segment, Arc>;

/// A bounded, simply connected plane domain. Immutable once constructed.
///
/// The ellipse is centered at the origin with its major axis on the real line.
/// Polygons are given counterclockwise; a smoothed polygon replaces every corner
/// by a circular fillet of the given radius tangent to both adjacent edges.
class DomainSpec {
public:
  /// The unit disc.
  DomainSpec() = default;

  static DomainSpec unit_disc();
  static DomainSpec ellipse(double a, double b);
  static DomainSpec polygon(std::vector<Complex> vertices);
  static DomainSpec smoothed_polygon(std::vector<Complex> vertices, double radius);

  DomainKind kind() const { return kind_; }
  const Box& bounding_box() const { return box_; }

  double semi_major() const { return a_; }
  double semi_minor() const { return b_; }
  const std::vector<Complex>& vertices() const { return vertices_; }
  double corner_radius() const { return radius_; }

  /// Boundary pieces in counterclockwise order (polygon kinds only).
  const std::vector<BoundaryPiece>& pieces() const { return pieces_; }
  double perimeter() const { return perimeter_; }

private:
  void finish_pieces();

  DomainKind kind_ = DomainKind::unit_disc;
  Box box_{-1.0, 1.0, -1.0, 1.0};
  double a_ = 1.0;
  double b_ = 1.0;
  double radius_ = 0.0;
  std::vector<Complex> vertices_;
  std::vector<BoundaryPiece> pieces_;
  std::vector<double> piece_offsets_;  // cumulative arclength at the start of each piece
  double perimeter_ = 2.0 * std::numbers::pi;

  friend Complex boundary_point(const DomainSpec&, double);
};

/// Open-set membership; boundary points return false.
bool contains(const DomainSpec& domain, Complex z);

/// Euclidean distance from an interior point to the boundary. Throws DomainError outside.
double boundary_distance(const DomainSpec& domain, Complex z);

/// Unsigned distance from any point of the plane to the boundary curve.
double curve_distance(const DomainSpec& domain, Complex z);

/// 2*pi-periodic counterclockwise parametrization of the boundary.
/// Polygon kinds are parametrized proportionally to arclength starting at the first piece.
Complex boundary_point(const DomainSpec& domain, double t);

/// Exact area.
double area(const DomainSpec& domain);

/// Sub-intervals [lo, hi] of the vertical line Re z = x lying in the domain, ascending.
std::vector<std::pair<double, double>> vertical_chord(const DomainSpec& domain, double x);

/// Abscissae where the vertical chord changes analytic form (vertices, arc joints,
/// vertical tangents), sorted, including the extreme left and right values.
std::vector<double> chord_breakpoints(const DomainSpec& domain);

/// "disc", "ellipse 1.5 1", "polygon x0 y0 x1 y1 ...", "smoothed_polygon r x0 y0 ...".
DomainSpec parse_domain(std::string_view text);
std::string to_string(const DomainSpec& domain);

enum class QuadratureRule { midpoint, gauss };

/// Nodes strictly inside a domain with positive area weights.
struct QuadratureGrid {
  DomainSpec domain;
  Eigen::VectorXcd nodes;
  Eigen::VectorXd weights;
  double resolution = 0.0;
  QuadratureRule rule = QuadratureRule::midpoint;
  int order = 1;

  Eigen::Index size() const { return nodes.size(); }
  double total_weight() const { return weights.sum(); }
};

/// Midpoint rule on the axis-aligned lattice of side `resolution` anchored at the
/// bounding-box corner. Cells whose center lies within one cell diagonal of the
/// boundary are split once into four subcells. Throws ConfigError when empty.
QuadratureGrid quadrature_grid(const DomainSpec& domain, double resolution);

/// High-order product rule: the domain is cut into vertical columns of width at most
/// `resolution` (with columns next to chord breakpoints mapped by x = x_b + w s^2 to
/// absorb square-root chord behaviour), and each chord is split into panels of
/// length at most `resolution`; both directions use `order`-point Gauss-Legendre.
QuadratureGrid gauss_grid(const DomainSpec& domain, double resolution, int order = 6);

std::string to_string(QuadratureRule rule);

}  // namespace wmlab
