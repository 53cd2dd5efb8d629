#include "wmlab/domain.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "wmlab/errors.hpp"
#include "wmlab/gauss.hpp"

namespace wmlab {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double cross(Complex u, Complex v) { return u.real() * v.imag() - u.imag() * v.real(); }
double dot(Complex u, Complex v) { return u.real() * v.real() + u.imag() * v.imag(); }

double wrap_angle(double a) {
  a = std::fmod(a, kTwoPi);
  return a < 0.0 ? a + kTwoPi : a;
}

double segment_distance(const Segment& s, Complex z) {
  const Complex d = s.b - s.a;
  const double len2 = std::norm(d);
  double t = len2 > 0.0 ? dot(z - s.a, d) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::abs(z - (s.a + t * d));
}

bool arc_spans(const Arc& arc, double angle) {
  if (arc.sweep >= 0.0) return wrap_angle(angle - arc.start) <= arc.sweep;
  return wrap_angle(arc.start - angle) <= -arc.sweep;
}

Complex arc_point(const Arc& arc, double s) {
  return arc.center + std::polar(arc.radius, arc.start + s * arc.sweep);
}

double arc_distance(const Arc& arc, Complex z) {
  const Complex rel = z - arc.center;
  if (std::abs(rel) > 0.0 && arc_spans(arc, std::arg(rel))) {
    return std::abs(std::abs(rel) - arc.radius);
  }
  return std::min(std::abs(z - arc_point(arc, 0.0)), std::abs(z - arc_point(arc, 1.0)));
}

double piece_length(const BoundaryPiece& piece) {
  if (const auto* s = std::get_if<Segment>(&piece)) return std::abs(s->b - s->a);
  const auto& arc = std::get<Arc>(piece);
  return arc.radius * std::abs(arc.sweep);
}

double piece_distance(const BoundaryPiece& piece, Complex z) {
  if (const auto* s = std::get_if<Segment>(&piece)) return segment_distance(*s, z);
  return arc_distance(std::get<Arc>(piece), z);
}

Complex piece_point(const BoundaryPiece& piece, double s) {
  if (const auto* seg = std::get_if<Segment>(&piece)) return seg->a + s * (seg->b - seg->a);
  return arc_point(std::get<Arc>(piece), s);
}

// Ordinates where the vertical line Re z = x crosses the piece. Every piece uses the
// half-open rule on the abscissae of its end points so shared junctions are counted once.
void piece_crossings(const BoundaryPiece& piece, double x, std::vector<double>& ys) {
  if (const auto* s = std::get_if<Segment>(&piece)) {
    const double ax = s->a.real();
    const double bx = s->b.real();
    if ((ax <= x) != (bx <= x)) {
      const double t = (x - ax) / (bx - ax);
      ys.push_back(s->a.imag() + t * (s->b.imag() - s->a.imag()));
    }
    return;
  }
  // Split the arc where it has vertical tangents; each x-monotone part then follows the
  // segment rule, using the exact junction points at its outer ends.
  const auto& arc = std::get<Arc>(piece);
  std::vector<double> angles{arc.start};
  std::vector<Complex> points{arc.from};
  const double lo = std::min(arc.start, arc.start + arc.sweep);
  const double hi = std::max(arc.start, arc.start + arc.sweep);
  std::vector<double> splits;
  for (double a = std::ceil(lo / kPi) * kPi; a < hi; a += kPi) {
    if (a > lo) splits.push_back(a);
  }
  if (arc.sweep < 0.0) std::reverse(splits.begin(), splits.end());
  for (const double a : splits) {
    angles.push_back(a);
    points.push_back(arc.center + Complex(std::cos(a) > 0.0 ? arc.radius : -arc.radius, 0.0));
  }
  angles.push_back(arc.start + arc.sweep);
  points.push_back(arc.to);
  for (std::size_t k = 1; k < points.size(); ++k) {
    if ((points[k - 1].real() <= x) == (points[k].real() <= x)) continue;
    const double dx = x - arc.center.real();
    const double dy = std::sqrt(std::max(0.0, arc.radius * arc.radius - dx * dx));
    const double side = std::sin(0.5 * (angles[k - 1] + angles[k])) > 0.0 ? 1.0 : -1.0;
    ys.push_back(arc.center.imag() + side * dy);
  }
}

void piece_breakpoints(const BoundaryPiece& piece, std::vector<double>& xs) {
  if (const auto* s = std::get_if<Segment>(&piece)) {
    xs.push_back(s->a.real());
    xs.push_back(s->b.real());
    return;
  }
  const auto& arc = std::get<Arc>(piece);
  xs.push_back(arc_point(arc, 0.0).real());
  xs.push_back(arc_point(arc, 1.0).real());
  if (arc_spans(arc, 0.0)) xs.push_back(arc.center.real() + arc.radius);
  if (arc_spans(arc, kPi)) xs.push_back(arc.center.real() - arc.radius);
}

// Distance from (y0, y1), y0, y1 >= 0, to the ellipse x0^2/e0^2 + x1^2/e1^2 = 1 with
// e0 >= e1. The footpoint parameter solves a monotone convex secular equation; we
// use Newton safeguarded by the bracket and fall back to bisection.
double ellipse_quadrant_distance(double e0, double e1, double y0, double y1) {
  if (y1 > 0.0) {
    if (y0 > 0.0) {
      const double z0 = y0 / e0;
      const double z1 = y1 / e1;
      const double g = z0 * z0 + z1 * z1 - 1.0;
      if (g == 0.0) return 0.0;
      const double r0 = (e0 / e1) * (e0 / e1);
      const double n0 = r0 * z0;
      auto secular = [&](double s) {
        const double q0 = n0 / (s + r0);
        const double q1 = z1 / (s + 1.0);
        return q0 * q0 + q1 * q1 - 1.0;
      };
      auto secular_slope = [&](double s) {
        const double q0 = n0 / (s + r0);
        const double q1 = z1 / (s + 1.0);
        return -2.0 * (q0 * q0 / (s + r0) + q1 * q1 / (s + 1.0));
      };
      double lo = z1 - 1.0;
      double hi = g < 0.0 ? 0.0 : std::hypot(n0, z1) - 1.0;
      double s = lo;
      for (int iter = 0; iter < 200; ++iter) {
        const double value = secular(s);
        if (value == 0.0) break;
        if (value > 0.0) lo = s; else hi = s;
        double next = s - value / secular_slope(s);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - s) <= 1e-17 * std::max(1.0, std::abs(s)) || hi - lo <= 0.0) {
          s = next;
          break;
        }
        s = next;
      }
      const double x0 = r0 * y0 / (s + r0);
      const double x1 = y1 / (s + 1.0);
      return std::hypot(x0 - y0, x1 - y1);
    }
    return std::abs(y1 - e1);
  }
  const double denom = e0 * e0 - e1 * e1;
  if (y0 * e0 < denom) {
    const double x0 = e0 * e0 * y0 / denom;
    const double ratio = x0 / e0;
    const double x1 = e1 * std::sqrt(std::max(0.0, 1.0 - ratio * ratio));
    return std::hypot(x0 - y0, x1);
  }
  return std::abs(y0 - e0);
}

bool segments_intersect(Complex p1, Complex p2, Complex q1, Complex q2) {
  const double d1 = cross(q2 - q1, p1 - q1);
  const double d2 = cross(q2 - q1, p2 - q1);
  const double d3 = cross(p2 - p1, q1 - p1);
  const double d4 = cross(p2 - p1, q2 - p1);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) {
    return true;
  }
  auto on_segment = [](Complex a, Complex b, Complex p) {
    return std::min(a.real(), b.real()) <= p.real() && p.real() <= std::max(a.real(), b.real()) &&
           std::min(a.imag(), b.imag()) <= p.imag() && p.imag() <= std::max(a.imag(), b.imag());
  };
  return (d1 == 0 && on_segment(q1, q2, p1)) || (d2 == 0 && on_segment(q1, q2, p2)) ||
         (d3 == 0 && on_segment(p1, p2, q1)) || (d4 == 0 && on_segment(p1, p2, q2));
}

void validate_polygon(const std::vector<Complex>& v) {
  const std::size_t n = v.size();
  if (n < 3) throw ConfigError("polygon needs at least 3 vertices");
  double twice_area = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    twice_area += cross(v[i], v[(i + 1) % n]);
    if (v[i] == v[(i + 1) % n]) throw ConfigError("polygon has repeated vertices");
  }
  if (!(twice_area > 0.0)) throw ConfigError("polygon vertices must be counterclockwise");
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool adjacent = j == i + 1 || (i == 0 && j == n - 1);
      const Complex a1 = v[i], a2 = v[(i + 1) % n], b1 = v[j], b2 = v[(j + 1) % n];
      if (adjacent) {
        // Adjacent edges may only share their common vertex.
        const Complex shared = (j == i + 1) ? a2 : a1;
        const Complex other_a = (j == i + 1) ? a1 : a2;
        const Complex other_b = (j == i + 1) ? b2 : b1;
        if (cross(other_a - shared, other_b - shared) == 0.0 &&
            dot(other_a - shared, other_b - shared) > 0.0) {
          throw ConfigError("polygon has overlapping adjacent edges");
        }
        continue;
      }
      if (segments_intersect(a1, a2, b1, b2)) throw ConfigError("polygon is not simple");
    }
  }
}

double polygon_area(const std::vector<Complex>& v) {
  double twice = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) twice += cross(v[i], v[(i + 1) % v.size()]);
  return 0.5 * twice;
}

Box polygon_box(const std::vector<Complex>& v) {
  Box box{v[0].real(), v[0].real(), v[0].imag(), v[0].imag()};
  for (const Complex& p : v) {
    box.xmin = std::min(box.xmin, p.real());
    box.xmax = std::max(box.xmax, p.real());
    box.ymin = std::min(box.ymin, p.imag());
    box.ymax = std::max(box.ymax, p.imag());
  }
  return box;
}

}  // namespace

DomainSpec DomainSpec::unit_disc() {
  DomainSpec d;
  d.kind_ = DomainKind::unit_disc;
  d.box_ = {-1.0, 1.0, -1.0, 1.0};
  d.perimeter_ = kTwoPi;
  return d;
}

DomainSpec DomainSpec::ellipse(double a, double b) {
  if (!(b > 0.0) || !(a >= b) || !std::isfinite(a)) {
    throw ConfigError("ellipse requires semi-axes a >= b > 0");
  }
  DomainSpec d;
  d.kind_ = DomainKind::ellipse;
  d.a_ = a;
  d.b_ = b;
  d.box_ = {-a, a, -b, b};
  return d;
}

DomainSpec DomainSpec::polygon(std::vector<Complex> vertices) {
  validate_polygon(vertices);
  DomainSpec d;
  d.kind_ = DomainKind::polygon;
  d.box_ = polygon_box(vertices);
  const std::size_t n = vertices.size();
  for (std::size_t i = 0; i < n; ++i) d.pieces_.push_back(Segment{vertices[i], vertices[(i + 1) % n]});
  d.vertices_ = std::move(vertices);
  d.finish_pieces();
  return d;
}

DomainSpec DomainSpec::smoothed_polygon(std::vector<Complex> vertices, double radius) {
  validate_polygon(vertices);
  if (!(radius > 0.0)) throw ConfigError("smoothed polygon needs a positive corner radius");
  DomainSpec d;
  d.kind_ = DomainKind::smoothed_polygon;
  d.radius_ = radius;
  d.box_ = polygon_box(vertices);

  const std::size_t n = vertices.size();
  std::vector<Complex> t_in(n), t_out(n);
  std::vector<Arc> arcs(n);
  std::vector<double> setback(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Complex prev = vertices[(i + n - 1) % n];
    const Complex v = vertices[i];
    const Complex next = vertices[(i + 1) % n];
    const Complex u_in = (v - prev) / std::abs(v - prev);
    const Complex u_out = (next - v) / std::abs(next - v);
    const double turn = std::atan2(cross(u_in, u_out), dot(u_in, u_out));
    setback[i] = radius * std::tan(0.5 * std::abs(turn));
    t_in[i] = v - setback[i] * u_in;
    t_out[i] = v + setback[i] * u_out;
    const Complex normal = (turn >= 0.0 ? Complex(0.0, 1.0) : Complex(0.0, -1.0)) * u_in;
    const Complex center = t_in[i] + radius * normal;
    arcs[i] = Arc{center, radius, std::arg(t_in[i] - center), turn, t_in[i], t_out[i]};
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double edge = std::abs(vertices[(i + 1) % n] - vertices[i]);
    if (setback[i] + setback[(i + 1) % n] > edge * (1.0 - 1e-12)) {
      throw ConfigError("corner radius too large for polygon edge " + std::to_string(i));
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (arcs[i].sweep != 0.0) d.pieces_.push_back(arcs[i]);
    d.pieces_.push_back(Segment{t_out[i], t_in[(i + 1) % n]});
  }
  d.vertices_ = std::move(vertices);
  d.finish_pieces();
  return d;
}

void DomainSpec::finish_pieces() {
  piece_offsets_.clear();
  perimeter_ = 0.0;
  for (const auto& piece : pieces_) {
    piece_offsets_.push_back(perimeter_);
    perimeter_ += piece_length(piece);
  }
}

double curve_distance(const DomainSpec& domain, Complex z) {
  switch (domain.kind()) {
    case DomainKind::unit_disc:
      return std::abs(std::abs(z) - 1.0);
    case DomainKind::ellipse:
      if (domain.semi_major() == domain.semi_minor()) {
        return std::abs(std::abs(z) - domain.semi_major());
      }
      return ellipse_quadrant_distance(domain.semi_major(), domain.semi_minor(),
                                       std::abs(z.real()), std::abs(z.imag()));
    case DomainKind::polygon:
    case DomainKind::smoothed_polygon: {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& piece : domain.pieces()) best = std::min(best, piece_distance(piece, z));
      return best;
    }
  }
  return 0.0;
}

bool contains(const DomainSpec& domain, Complex z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  switch (domain.kind()) {
    case DomainKind::unit_disc:
      return std::norm(z) < 1.0;
    case DomainKind::ellipse: {
      const double u = z.real() / domain.semi_major();
      const double v = z.imag() / domain.semi_minor();
      return u * u + v * v < 1.0;
    }
    case DomainKind::polygon:
    case DomainKind::smoothed_polygon: {
      if (!domain.bounding_box().contains(z)) return false;
      std::vector<double> ys;
      for (const auto& piece : domain.pieces()) piece_crossings(piece, z.real(), ys);
      const auto above = std::count_if(ys.begin(), ys.end(), [&](double y) { return y > z.imag(); });
      if (above % 2 == 0) return false;
      // Points on an edge can land a rounding error away from it.
      return curve_distance(domain, z) > 1e-14 * domain.bounding_box().half_diagonal();
    }
  }
  return false;
}

double boundary_distance(const DomainSpec& domain, Complex z) {
  if (!contains(domain, z)) throw DomainError("boundary_distance: point outside the domain");
  return curve_distance(domain, z);
}

Complex boundary_point(const DomainSpec& domain, double t) {
  switch (domain.kind()) {
    case DomainKind::unit_disc:
      return std::polar(1.0, t);
    case DomainKind::ellipse:
      return {domain.semi_major() * std::cos(t), domain.semi_minor() * std::sin(t)};
    case DomainKind::polygon:
    case DomainKind::smoothed_polygon: {
      const double s = wrap_angle(t) / kTwoPi * domain.perimeter_;
      const auto& offsets = domain.piece_offsets_;
      auto it = std::upper_bound(offsets.begin(), offsets.end(), s);
      const std::size_t k = static_cast<std::size_t>(std::distance(offsets.begin(), it)) - 1;
      const double len = piece_length(domain.pieces_[k]);
      return piece_point(domain.pieces_[k], std::clamp((s - offsets[k]) / len, 0.0, 1.0));
    }
  }
  return {};
}

double area(const DomainSpec& domain) {
  switch (domain.kind()) {
    case DomainKind::unit_disc:
      return kPi;
    case DomainKind::ellipse:
      return kPi * domain.semi_major() * domain.semi_minor();
    case DomainKind::polygon:
      return polygon_area(domain.vertices());
    case DomainKind::smoothed_polygon: {
      double result = polygon_area(domain.vertices());
      const double r = domain.corner_radius();
      for (const auto& piece : domain.pieces()) {
        if (const auto* arc = std::get_if<Arc>(&piece)) {
          // Kite (vertex, tangent points, center) minus the sector it contains.
          const double turn = std::abs(arc->sweep);
          const double corner = r * r * std::tan(0.5 * turn) - 0.5 * r * r * turn;
          result += arc->sweep > 0.0 ? -corner : corner;
        }
      }
      return result;
    }
  }
  return 0.0;
}

std::vector<std::pair<double, double>> vertical_chord(const DomainSpec& domain, double x) {
  std::vector<std::pair<double, double>> chord;
  switch (domain.kind()) {
    case DomainKind::unit_disc:
      if (std::abs(x) < 1.0) {
        const double h = std::sqrt((1.0 - x) * (1.0 + x));
        chord.emplace_back(-h, h);
      }
      return chord;
    case DomainKind::ellipse: {
      const double u = x / domain.semi_major();
      if (std::abs(u) < 1.0) {
        const double h = domain.semi_minor() * std::sqrt((1.0 - u) * (1.0 + u));
        chord.emplace_back(-h, h);
      }
      return chord;
    }
    case DomainKind::polygon:
    case DomainKind::smoothed_polygon: {
      std::vector<double> ys;
      for (const auto& piece : domain.pieces()) piece_crossings(piece, x, ys);
      std::sort(ys.begin(), ys.end());
      for (std::size_t i = 0; i + 1 < ys.size(); i += 2) {
        if (ys[i + 1] > ys[i]) chord.emplace_back(ys[i], ys[i + 1]);
      }
      return chord;
    }
  }
  return chord;
}

std::vector<double> chord_breakpoints(const DomainSpec& domain) {
  std::vector<double> xs;
  switch (domain.kind()) {
    case DomainKind::unit_disc:
      xs = {-1.0, 1.0};
      break;
    case DomainKind::ellipse:
      xs = {-domain.semi_major(), domain.semi_major()};
      break;
    case DomainKind::polygon:
    case DomainKind::smoothed_polygon:
      for (const auto& piece : domain.pieces()) piece_breakpoints(piece, xs);
      break;
  }
  std::sort(xs.begin(), xs.end());
  const double tol = 1e-12 * std::max(1.0, domain.bounding_box().half_diagonal());
  std::vector<double> unique;
  for (double x : xs) {
    if (unique.empty() || x - unique.back() > tol) unique.push_back(x);
  }
  return unique;
}

DomainSpec parse_domain(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string kind;
  in >> kind;
  std::vector<double> numbers;
  std::string token;
  while (in >> token) {
    try {
      std::size_t used = 0;
      numbers.push_back(std::stod(token, &used));
      if (used != token.size()) throw ConfigError("");
    } catch (const std::exception&) {
      throw ConfigError("domain: bad number '" + token + "'");
    }
  }
  auto points = [&](std::size_t first) {
    if ((numbers.size() - first) % 2 != 0) throw ConfigError("domain: odd coordinate count");
    std::vector<Complex> v;
    for (std::size_t i = first; i + 1 < numbers.size(); i += 2) v.emplace_back(numbers[i], numbers[i + 1]);
    return v;
  };
  if (kind == "disc" || kind == "unit_disc") {
    if (!numbers.empty()) throw ConfigError("domain: disc takes no parameters");
    return DomainSpec::unit_disc();
  }
  if (kind == "ellipse") {
    if (numbers.size() != 2) throw ConfigError("domain: ellipse takes a and b");
    return DomainSpec::ellipse(numbers[0], numbers[1]);
  }
  if (kind == "polygon") return DomainSpec::polygon(points(0));
  if (kind == "smoothed_polygon") {
    if (numbers.empty()) throw ConfigError("domain: smoothed_polygon needs a radius");
    return DomainSpec::smoothed_polygon(points(1), numbers[0]);
  }
  throw ConfigError("domain: unknown kind '" + kind + "'");
}

std::string to_string(const DomainSpec& domain) {
  std::ostringstream out;
  out.precision(17);
  switch (domain.kind()) {
    case DomainKind::unit_disc:
      out << "disc";
      break;
    case DomainKind::ellipse:
      out << "ellipse " << domain.semi_major() << ' ' << domain.semi_minor();
      break;
    case DomainKind::polygon:
      out << "polygon";
      break;
    case DomainKind::smoothed_polygon:
      out << "smoothed_polygon " << domain.corner_radius();
      break;
  }
  for (const Complex& v : domain.vertices()) out << ' ' << v.real() << ' ' << v.imag();
  return out.str();
}

std::string to_string(QuadratureRule rule) {
  return rule == QuadratureRule::midpoint ? "midpoint" : "gauss";
}

QuadratureGrid quadrature_grid(const DomainSpec& domain, double resolution) {
  if (!(resolution > 0.0)) throw ConfigError("quadrature_grid: resolution must be positive");
  const Box& box = domain.bounding_box();
  const auto nx = static_cast<long>(std::ceil((box.xmax - box.xmin) / resolution - 1e-9));
  const auto ny = static_cast<long>(std::ceil((box.ymax - box.ymin) / resolution - 1e-9));
  const double diagonal = resolution * std::numbers::sqrt2;
  const double cell = resolution * resolution;

  std::vector<Complex> nodes;
  std::vector<double> weights;
  for (long i = 0; i < nx; ++i) {
    for (long j = 0; j < ny; ++j) {
      const Complex c(box.xmin + (i + 0.5) * resolution, box.ymin + (j + 0.5) * resolution);
      if (curve_distance(domain, c) < diagonal) {
        for (const double sx : {-0.25, 0.25}) {
          for (const double sy : {-0.25, 0.25}) {
            const Complex sub = c + Complex(sx, sy) * resolution;
            if (contains(domain, sub)) {
              nodes.push_back(sub);
              weights.push_back(0.25 * cell);
            }
          }
        }
      } else if (contains(domain, c)) {
        nodes.push_back(c);
        weights.push_back(cell);
      }
    }
  }
  if (nodes.empty()) throw ConfigError("quadrature_grid: no node falls inside the domain");
  QuadratureGrid grid;
  grid.domain = domain;
  grid.nodes = Eigen::Map<const Eigen::VectorXcd>(nodes.data(), static_cast<Eigen::Index>(nodes.size()));
  grid.weights = Eigen::Map<const Eigen::VectorXd>(weights.data(), static_cast<Eigen::Index>(weights.size()));
  grid.resolution = resolution;
  grid.rule = QuadratureRule::midpoint;
  grid.order = 1;
  return grid;
}

QuadratureGrid gauss_grid(const DomainSpec& domain, double resolution, int order) {
  if (!(resolution > 0.0)) throw ConfigError("gauss_grid: resolution must be positive");
  const GaussRule& rule = gauss_legendre(order);
  const std::vector<double> breaks = chord_breakpoints(domain);

  // Abscissae and weights in x; end columns of each span are graded quadratically
  // towards the breakpoint so that square-root chord behaviour integrates smoothly.
  std::vector<double> xs, wxs;
  for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
    const double left = breaks[k];
    const double right = breaks[k + 1];
    const double len = right - left;
    if (!(len > 0.0)) continue;
    const long columns = std::max(2L, static_cast<long>(std::ceil(len / resolution)));
    const double width = len / static_cast<double>(columns);
    for (long c = 0; c < columns; ++c) {
      for (int g = 0; g < order; ++g) {
        const double s = rule.nodes(g);
        const double w = rule.weights(g);
        if (c == 0) {
          xs.push_back(left + width * s * s);
          wxs.push_back(2.0 * width * s * w);
        } else if (c == columns - 1) {
          xs.push_back(right - width * s * s);
          wxs.push_back(2.0 * width * s * w);
        } else {
          xs.push_back(left + width * (static_cast<double>(c) + s));
          wxs.push_back(width * w);
        }
      }
    }
  }

  std::vector<Complex> nodes;
  std::vector<double> weights;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (const auto& [lo, hi] : vertical_chord(domain, xs[i])) {
      const double len = hi - lo;
      const long panels = std::max(1L, static_cast<long>(std::ceil(len / resolution)));
      const double width = len / static_cast<double>(panels);
      for (long p = 0; p < panels; ++p) {
        for (int g = 0; g < order; ++g) {
          const Complex z(xs[i], lo + width * (static_cast<double>(p) + rule.nodes(g)));
          nodes.push_back(z);
          weights.push_back(wxs[i] * width * rule.weights(g));
        }
      }
    }
  }
  if (nodes.empty()) throw ConfigError("gauss_grid: no node falls inside the domain");
  QuadratureGrid grid;
  grid.domain = domain;
  grid.nodes = Eigen::Map<const Eigen::VectorXcd>(nodes.data(), static_cast<Eigen::Index>(nodes.size()));
  grid.weights = Eigen::Map<const Eigen::VectorXd>(weights.data(), static_cast<Eigen::Index>(weights.size()));
  grid.resolution = resolution;
  grid.rule = QuadratureRule::gauss;
  grid.order = order;
  return grid;
}

}  // namespace wmlab
