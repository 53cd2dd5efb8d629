#include "wmlab/analytic.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <random>

#include "wmlab/errors.hpp"
#include "wmlab/gauss.hpp"

namespace wmlab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kContainmentRadius = 1.0 - 1e-4;
constexpr double kDifferenceStep = 1e-6;

template <class... Fs>
struct Overloaded : Fs... {
  using Fs::operator()...;
};

void require_closed_disc(Complex z) {
  // Rounding slack so that std::polar(1, t) counts as a boundary point.
  if (!(std::norm(z) <= 1.0 + 4e-16)) throw DomainError("analytic maps are defined on the closed unit disc");
}

Complex eval_variant(const AnalyticMap::Variant& v, Complex z) {
  return std::visit(Overloaded{
                        [&](const PolynomialMap& m) { return m.p(z); },
                        [&](const BlaschkeMap& m) {
                          Complex acc = 1.0;
                          for (const Complex a : m.zeros) acc *= (z - a) / (1.0 - std::conj(a) * z);
                          return acc;
                        },
                        [&](const PowerCuspMap& m) {
                          const Complex base = 1.0 - z;
                          if (base == 0.0) return m.base;
                          return m.base + m.scale * std::pow(base, m.alpha);
                        },
                        [&](const AffineIntoMap& m) { return m.center + m.contraction * m.radius * (*m.inner)(z); },
                    },
                    v);
}

Complex derivative_variant(const AnalyticMap::Variant& v, Complex z) {
  return std::visit(Overloaded{
                        [&](const PolynomialMap& m) { return m.p.derivative(z); },
                        [&](const BlaschkeMap& m) {
                          // Product rule with prefix/suffix products, valid at the zeros too.
                          const std::size_t n = m.zeros.size();
                          std::vector<Complex> factor(n), prefix(n + 1, 1.0), suffix(n + 1, 1.0);
                          for (std::size_t k = 0; k < n; ++k) {
                            const Complex a = m.zeros[k];
                            factor[k] = (z - a) / (1.0 - std::conj(a) * z);
                            prefix[k + 1] = prefix[k] * factor[k];
                          }
                          for (std::size_t k = n; k-- > 0;) suffix[k] = suffix[k + 1] * factor[k];
                          Complex acc = 0.0;
                          for (std::size_t k = 0; k < n; ++k) {
                            const Complex a = m.zeros[k];
                            const Complex q = 1.0 - std::conj(a) * z;
                            acc += prefix[k] * ((1.0 - std::norm(a)) / (q * q)) * suffix[k + 1];
                          }
                          return acc;
                        },
                        [&](const PowerCuspMap& m) {
                          const Complex base = 1.0 - z;
                          if (base == 0.0) {
                            if (m.alpha < 1.0) throw DivergenceError("cusp derivative diverges at z = 1");
                            return -m.scale;
                          }
                          return -m.alpha * m.scale * std::pow(base, m.alpha - 1.0);
                        },
                        [&](const AffineIntoMap& m) { return m.contraction * m.radius * m.inner->derivative(z); },
                    },
                    v);
}

}  // namespace

AnalyticMap::AnalyticMap(Variant v, DomainSpec target) : variant_(std::move(v)), target_(std::move(target)) {}

Complex AnalyticMap::operator()(Complex z) const {
  require_closed_disc(z);
  return eval_variant(variant_, z);
}

Complex AnalyticMap::derivative(Complex z) const {
  require_closed_disc(z);
  return derivative_variant(variant_, z);
}

void AnalyticMap::verify() const {
  constexpr int kRadii = 64, kAngles = 256;
  for (int i = 1; i <= kRadii; ++i) {
    const double r = kContainmentRadius * i / kRadii;
    for (int k = 0; k < kAngles; ++k) {
      const Complex z = std::polar(r, kTwoPi * (k + 0.5 * (i % 2)) / kAngles);
      if (!contains(target_, (*this)(z))) throw ConfigError("map image leaves its target domain");
    }
  }
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-0.9, 0.9);
  for (int k = 0; k < 16;) {
    const Complex z(u(rng), u(rng));
    if (std::abs(z) > 0.9) continue;
    ++k;
    const Complex exact = derivative(z);
    const Complex fd = ((*this)(z + kDifferenceStep) - (*this)(z)) / kDifferenceStep;
    if (!(std::abs(fd - exact) <= 1e-4 * (1.0 + std::abs(exact)))) {
      throw ConfigError("map derivative disagrees with its difference quotient");
    }
  }
}

AnalyticMap AnalyticMap::polynomial(Polynomial p, DomainSpec target) {
  if (p.coefficients.empty()) throw ConfigError("polynomial map needs coefficients");
  AnalyticMap f(PolynomialMap{std::move(p)}, std::move(target));
  f.verify();
  return f;
}

AnalyticMap AnalyticMap::blaschke(std::vector<Complex> zeros) {
  if (zeros.empty()) throw ConfigError("Blaschke product needs at least one zero");
  for (const Complex a : zeros) {
    if (!(std::norm(a) < 1.0)) throw ConfigError("Blaschke zeros must lie in the open unit disc");
  }
  AnalyticMap f(BlaschkeMap{std::move(zeros)}, DomainSpec::unit_disc());
  f.verify();
  return f;
}

AnalyticMap AnalyticMap::power_cusp(Complex base, Complex scale, double alpha, DomainSpec target) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ConfigError("cusp exponent must lie in (0, 1]");
  AnalyticMap f(PowerCuspMap{base, scale, alpha}, std::move(target));
  f.verify();
  return f;
}

AnalyticMap AnalyticMap::affine_into(DomainSpec target, const AnalyticMap& inner, double contraction) {
  if (!(contraction > 0.0 && contraction < 1.0)) throw ConfigError("contraction must lie in (0, 1)");
  if (inner.target().kind() != DomainKind::unit_disc) throw ConfigError("inner map must take values in the unit disc");
  const Complex center = target.bounding_box().center();
  if (!contains(target, center)) throw ConfigError("target bounding-box center is not in the domain");
  const double radius = boundary_distance(target, center);
  AnalyticMap f(AffineIntoMap{std::make_shared<const AnalyticMap>(inner), contraction, center, radius},
                std::move(target));
  f.verify();
  return f;
}

Complex map_eval(const AnalyticMap& f, Complex z) { return f(z); }
Complex map_derivative(const AnalyticMap& f, Complex z) { return f.derivative(z); }

AnalyticMap catalog_map(std::string_view name) {
  if (name == "identity") return AnalyticMap::polynomial({{0.0, 1.0}});
  if (name == "half") return AnalyticMap::polynomial({{0.0, 0.5}});
  if (name == "square") return AnalyticMap::polynomial({{0.0, 0.0, 1.0}});
  if (name == "constant") return AnalyticMap::polynomial({{0.0}});
  if (name == "blaschke2") return AnalyticMap::blaschke({Complex(0.5, 0.0), Complex(0.0, -0.3)});
  if (name.starts_with("cusp_a") && name.size() > 6) {
    int percent = 0;
    for (const char c : name.substr(6)) {
      if (c < '0' || c > '9') throw ConfigError("unknown map '" + std::string(name) + "'");
      percent = 10 * percent + (c - '0');
      if (percent > 100) break;
    }
    if (percent < 1 || percent > 100) throw ConfigError("cusp exponent out of range in '" + std::string(name) + "'");
    return AnalyticMap::power_cusp(0.0, 0.25, percent / 100.0);
  }
  throw ConfigError("unknown map '" + std::string(name) + "'");
}

std::vector<std::string> catalog_names() {
  return {"identity", "half", "square", "constant", "blaschke2", "cusp_a30", "cusp_a50", "cusp_a70", "cusp_a100"};
}

double weighted_derivative(const AnalyticMap& f, const MetricDensity& omega, Complex z) {
  const Complex fz = f(z);
  if (!contains(omega.domain(), fz)) throw DomainError("f(z) lies outside the density's domain");
  return omega(fz) * std::abs(f.derivative(z));
}

UpperBoundCheck path_upper_bound_check(const AnalyticMap& f, GeodesicSolver& solver, Complex z, Complex w) {
  const MetricDensity& omega = solver.density();
  UpperBoundCheck out;
  const double len = std::abs(w - z);
  if (len == 0.0) return out;
  // Image of the segment must stay in the domain.
  constexpr int kSamples = 64;
  for (int k = 0; k <= kSamples; ++k) {
    if (!contains(omega.domain(), f(z + (w - z) * (static_cast<double>(k) / kSamples)))) {
      throw InvalidPathError("image of the segment leaves the domain");
    }
  }
  const double edge = std::max(std::abs(z), std::abs(w));
  const double panel = std::min(0.02, std::max(0.25 * (1.0 - edge), 1e-4));
  const auto panels = static_cast<long>(std::ceil(len / panel));
  const GaussRule& rule = gauss_legendre(5);
  double rhs = 0.0;
  for (long p = 0; p < panels; ++p) {
    for (Eigen::Index q = 0; q < rule.nodes.size(); ++q) {
      const double t = (static_cast<double>(p) + rule.nodes(q)) / static_cast<double>(panels);
      rhs += rule.weights(q) * weighted_derivative(f, omega, z + (w - z) * t);
    }
  }
  out.rhs = rhs * len / static_cast<double>(panels);
  out.lhs = solver.solve(f(z), f(w)).distance;
  return out;
}

UpperBoundCheck path_upper_bound_check(const AnalyticMap& f, const MetricDensity& omega, Complex z, Complex w,
                                       double resolution) {
  GeodesicSolver solver(omega, resolution);
  return path_upper_bound_check(f, solver, z, w);
}

double BoundaryTrace::angle(Eigen::Index j) const { return kTwoPi * static_cast<double>(j) / n; }

BoundaryTrace boundary_trace(const AnalyticMap& f, int n, double radius) {
  if (n < 1) throw ConfigError("trace needs at least one sample");
  if (!(radius > 0.0 && radius <= 1.0)) throw ConfigError("trace radius must lie in (0, 1]");
  if (radius == 1.0 && !f.continuous_on_closed_disc()) {
    throw ConfigError("exact boundary values need a map continuous on the closed disc");
  }
  BoundaryTrace trace;
  trace.n = n;
  trace.radius = radius;
  trace.exact = radius == 1.0;
  trace.values.resize(n);
  for (int j = 0; j < n; ++j) {
    // Exact unit-circle samples at the quarter angles keep the identity trace exact.
    const int quarter = 4 * j % n == 0 ? 4 * j / n : -1;
    const Complex e = quarter >= 0 ? std::array<Complex, 4>{1.0, {0, 1}, -1.0, {0, -1}}[quarter]
                                   : std::polar(1.0, trace.angle(j));
    trace.values(j) = f(radius * e);
  }
  return trace;
}

void write_trace(const BoundaryTrace& trace, const std::filesystem::path& file) {
  std::ofstream out(file);
  if (!out) throw IoError("cannot write " + file.string());
  char buf[128];
  for (Eigen::Index j = 0; j < trace.values.size(); ++j) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g\n", trace.angle(j), trace.values(j).real(),
                  trace.values(j).imag());
    out << buf;
  }
  if (!out) throw IoError("failed writing " + file.string());
}

}  // namespace wmlab
