#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "doctest.h"
#include "wmlab/gauss.hpp"
#include "wmlab/growth.hpp"

using namespace wmlab;
using std::numbers::pi;

namespace {

std::vector<double> radius_ladder() {
  std::vector<double> radii;
  for (int k = 2; k <= 9; ++k) radii.push_back(1.0 - std::ldexp(1.0, -k));
  return radii;
}

std::vector<double> step_ladder() {
  std::vector<double> steps;
  for (int k = 3; k <= 8; ++k) steps.push_back(std::ldexp(1.0, -k));
  return steps;
}

// (1/2pi) int_0^{2pi} g(r e^{it})^p dt by 10-point Gauss on panels graded geometrically
// toward t = 0, where the cusp integrand peaks.
double graded_mean(const CircleFunction& g, double r, double p) {
  const GaussRule& rule = gauss_legendre(10);
  double acc = 0.0;
  auto panel = [&](double a, double b) {
    for (Eigen::Index q = 0; q < rule.nodes.size(); ++q) {
      acc += (b - a) * rule.weights(q) * std::pow(g(std::polar(r, a + (b - a) * rule.nodes(q))), p);
    }
  };
  double hi = pi;
  while (hi > 1e-12) {
    for (int k = 0; k < 4; ++k) panel(hi * (1 - (k + 1) / 8.0), hi * (1 - k / 8.0));
    hi *= 0.5;
  }
  panel(0.0, hi);
  return std::pow(2.0 * acc / (2.0 * pi), 1.0 / p);  // the integrand is even in t
}

BoundaryTrace circle_trace(double eps, int n) { return boundary_trace(AnalyticMap::polynomial({{0.0, eps}}), n); }

}  // namespace

TEST_CASE("integral_means examples") {
  const CircleFunction five = [](Complex) { return 5.0; };
  for (const double p : {1.0, 2.0, 3.5, kInfiniteExponent}) CHECK(integral_means(five, 0.4, p, 64) == doctest::Approx(5.0).epsilon(1e-15));
  const CircleFunction modulus = [](Complex z) { return std::abs(z); };
  CHECK(integral_means(modulus, 0.7, 2.0, 256) == doctest::Approx(0.7).epsilon(1e-15));

  CHECK_THROWS_AS(integral_means(five, 1.0, 1.0, 64), ConfigError);
  CHECK_THROWS_AS(integral_means(five, 0.5, 0.5, 64), ConfigError);
  CHECK_THROWS_AS(integral_means(five, 0.5, 1.0, 63), ConfigError);
  const CircleFunction blow = [](Complex z) { return z.real() > 0.49 ? std::numeric_limits<double>::infinity() : 1.0; };
  CHECK(std::isinf(integral_means(blow, 0.5, 2.0, 64)));
}

TEST_CASE("cusp means match a graded quadrature oracle") {
  const auto hyp = MetricDensity::hyperbolic();
  const auto g = weighted_derivative_function(AnalyticMap::power_cusp(0.0, 0.25, 0.5), hyp);
  for (const double r : {0.9, 0.99, 0.999}) {
    for (const double p : {1.0, 2.0}) {
      CAPTURE(r);
      CAPTURE(p);
      CHECK(integral_means(g, r, p, 1 << 16) == doctest::Approx(graded_mean(g, r, p)).epsilon(1e-3));
    }
  }
  // m_1(r, f*) stays bounded for alpha = 1/2: the integrand |1 - r e^{it}|^{-1/2} is
  // integrable up to r = 1, so the slope against 1 - r is 0, not alpha - 1.
  const auto m1 = means_curve(g, {0.9, 0.99, 0.999, 0.9999}, 1.0, 1 << 16);
  CHECK(m1.values.back() < 0.16);
  const double slope = std::log(m1.values[2] / m1.values[0]) / std::log(1e-3 / 1e-1);
  CHECK(std::abs(slope) < 0.05);
  // The sup carries the alpha - 1 growth.
  const auto sup = means_curve(g, radius_ladder(), kInfiniteExponent, 4096);
  CHECK(std::abs(fit_exponent(sup).slope + 0.5) < 0.05);
}

TEST_CASE("finite-p means of the cusp grow like (1-r)^(alpha - 1 + 1/p)") {
  const auto hyp = MetricDensity::hyperbolic();
  const auto g = weighted_derivative_function(AnalyticMap::power_cusp(0.0, 0.25, 0.3), hyp);
  const auto m2 = means_curve(g, radius_ladder(), 2.0, 4096);
  CHECK(std::abs(fit_exponent(m2).slope - (0.3 - 1.0 + 0.5)) < 0.02);
}

TEST_CASE("sup_lipschitz_modulus examples") {
  const auto euclid = DistanceEvaluator::euclidean();
  const auto flat = boundary_trace(AnalyticMap::polynomial({{Complex(0.1, 0.2)}}), 512);
  CHECK(sup_lipschitz_modulus(flat, euclid, 0.3) == 0.0);

  const auto id = boundary_trace(catalog_map("identity"), 4096);
  const double gap = 2 * pi / 4096;
  for (const double h : {0.05, 0.3, 1.0}) {
    const double m = sup_lipschitz_modulus(id, euclid, h);
    CHECK(m <= 2 * std::sin(h / 2));
    CHECK(m >= 2 * std::sin((h - gap) / 2) - 1e-14);
  }

  // Hyperbolic chord of a small circle: about eps h / (1 - eps^2).
  const auto circle = circle_trace(0.3, 8192);
  const auto hyp = DistanceEvaluator::hyperbolic();
  for (const double h : {0.02, 0.01}) {
    CHECK(sup_lipschitz_modulus(circle, hyp, h) == doctest::Approx(0.3 / 0.91 * h).epsilon(0.05));
  }
  const auto curve = sup_modulus_curve(circle, hyp, step_ladder());
  CHECK(fit_exponent(curve).slope == doctest::Approx(1.0).epsilon(0.01));

  CHECK_THROWS_AS(sup_lipschitz_modulus(id, euclid, 4.0), ConfigError);
}

TEST_CASE("mean_lipschitz_modulus examples") {
  const auto euclid = DistanceEvaluator::euclidean();
  const auto flat = boundary_trace(AnalyticMap::polynomial({{Complex(-0.3)}}), 512);
  CHECK(mean_lipschitz_modulus(flat, euclid, 2.0, 0.3) == 0.0);

  // Every shift is a whole number of gaps here, so the value is exact.
  const int n = 1024;
  const auto circle = circle_trace(0.3, n);
  const double h = 2 * pi * 64 / n;
  for (const double p : {1.0, 2.0, 5.0}) {
    CHECK(mean_lipschitz_modulus(circle, euclid, p, h) == doctest::Approx(0.6 * std::sin(h / 2)).epsilon(1e-13));
  }
  CHECK_THROWS_AS(mean_lipschitz_modulus(circle, euclid, 1.0, 1e-4), ConfigError);
  CHECK_THROWS_AS(mean_lipschitz_modulus(circle, euclid, 0.5, 0.1), ConfigError);
}

TEST_CASE("cusp mean modulus is Lipschitz for p = 1") {
  // |phi(t+s) - phi(t)| ~ s |t|^{alpha - 1} away from the tip is integrable for alpha = 1/2,
  // so the p = 1 modulus decays like s: exponent min(alpha + 1/p, 1) = 1.
  const auto trace = boundary_trace(AnalyticMap::power_cusp(0.0, 0.25, 0.5), 4096);
  const auto hyp = DistanceEvaluator::hyperbolic();
  const std::vector<double> steps{0.2, 0.1, 0.05, 0.025};
  const auto curve = mean_modulus_curve(trace, hyp, 1.0, steps);
  const double slope = std::log(curve.values[0] / curve.values[3]) / std::log(steps[0] / steps[3]);
  CHECK(slope > 0.95);
  CHECK(slope < 1.05);
  // The sup modulus sees the tip and decays like s^alpha.
  const auto sup = sup_modulus_curve(boundary_trace(AnalyticMap::power_cusp(0.0, 0.25, 0.5), 16384), hyp, step_ladder());
  CHECK(std::abs(fit_exponent(sup).slope - 0.5) < 0.02);
}

TEST_CASE("modulus orderings") {
  const auto hyp = DistanceEvaluator::hyperbolic();
  for (const auto& name : {"cusp_a30", "blaschke2", "half", "square"}) {
    const auto f = catalog_map(name);
    const auto trace = boundary_trace(f, 2048, std::string(name) == "blaschke2" ? 0.99 : 1.0);
    const auto steps = step_ladder();
    const auto sup = sup_modulus_curve(trace, hyp, steps);
    std::vector<double> previous(steps.size(), 0.0);
    for (const double p : {1.0, 1.5, 2.0, 4.0}) {
      const auto mean = mean_modulus_curve(trace, hyp, p, steps);
      for (std::size_t j = 0; j < steps.size(); ++j) {
        CAPTURE(name);
        CAPTURE(p);
        CHECK(mean.values[j] <= sup.values[j] * (1.0 + 1e-12));
        CHECK(mean.values[j] >= previous[j] * (1.0 - 1e-12));
        if (j > 0) CHECK(mean.values[j] <= mean.values[j - 1] * (1.0 + 1e-12));  // steps decrease
      }
      previous = mean.values;
    }
    for (std::size_t j = 1; j < steps.size(); ++j) CHECK(sup.values[j] <= sup.values[j - 1]);
  }
}

TEST_CASE("means of a constant-modulus function are that constant") {
  const CircleFunction g = [](Complex z) { return 4.0 * std::abs(z); };
  for (const double p : {1.0, 1.7, 3.0, kInfiniteExponent}) {
    const auto curve = means_curve(g, radius_ladder(), p, 128);
    for (std::size_t i = 0; i < curve.radii.size(); ++i) {
      CHECK(curve.values[i] == doctest::Approx(4.0 * curve.radii[i]).epsilon(1e-14));
    }
  }
}

TEST_CASE("divergent traces") {
  const auto id = boundary_trace(catalog_map("identity"), 256);
  const auto curve = sup_modulus_curve(id, DistanceEvaluator::hyperbolic(), {0.5, 0.25, 0.125, 0.0625});
  CHECK(curve.divergent);
  CHECK(std::isinf(curve.values.front()));
  CHECK(mean_modulus_curve(id, DistanceEvaluator::hyperbolic(), 1.0, {0.5}).divergent);
  CHECK_FALSE(mean_modulus_curve(id, DistanceEvaluator::euclidean(), 1.0, {0.5}).divergent);
}

TEST_CASE("geodesic-backed evaluator") {
  const auto geo = DistanceEvaluator::geodesic(MetricDensity::hyperbolic(), 0.01);
  CHECK(geo.name() == "geodesic-hyperbolic");
  CHECK(std::isinf(geo(0.0, 1.0)));
  CHECK(geo(Complex(0.1, 0.2), Complex(0.1, 0.2)) == 0.0);
  const double exact = hyperbolic_distance_closed(Complex(-0.2, 0.1), Complex(0.4, 0.3));
  CHECK(geo(Complex(-0.2, 0.1), Complex(0.4, 0.3)) == doctest::Approx(exact).epsilon(0.01));
  CHECK(distance_for(MetricDensity::hyperbolic(), 0.01).name() == "hyperbolic");
  CHECK(distance_for(MetricDensity::quasihyperbolic(DomainSpec::unit_disc()), 0.01).name() == "geodesic-quasihyperbolic");
}

TEST_CASE("fit_exponent recovers exact power laws") {
  const auto radii = radius_ladder();
  MeansCurve m;
  m.radii = radii;
  for (const double r : radii) m.values.push_back(std::pow(1.0 - r, -0.5));
  const auto fm = fit_exponent(m);
  CHECK(std::abs(fm.slope + 0.5) < 1e-12);
  CHECK(fm.r_squared == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fm.count == 8);

  ModulusCurve M;
  M.steps = step_ladder();
  for (const double h : M.steps) M.values.push_back(3.0 * h);
  const auto fM = fit_exponent(M);
  CHECK(std::abs(fM.slope - 1.0) < 1e-12);
  CHECK(std::abs(fM.intercept - std::log(3.0)) < 1e-12);
  CHECK(fM.max_residual < 1e-12);

  for (const double alpha : {0.1, 0.37, 0.9}) {
    Eigen::ArrayXd x = Eigen::ArrayXd::LinSpaced(12, -6.0, -1.0).exp();
    const Eigen::ArrayXd y = 0.7 * x.pow(alpha);
    CHECK(std::abs(fit_power_law(x, y).slope - alpha) < 1e-12);
  }
}

TEST_CASE("fit_exponent data requirements") {
  ModulusCurve M;
  M.steps = {0.1, 0.05, 0.025, 0.0125, 0.00625, 0.003125};
  M.values = {0.3, 0.0, 0.2, 0.1, 0.07, 0.05};
  const auto fit = fit_exponent(M);
  CHECK(fit.excluded == 1);
  CHECK(fit.count == 5);

  M.values = {0.3, 0.0, 0.0, 0.0, 0.07, 0.05};
  CHECK_THROWS_AS(fit_exponent(M), InsufficientDataError);
  // Only 1.2 decades.
  M.steps = {0.125, 0.0625, 0.03125, 0.015625, 0.0078125};
  M.values = {1, 2, 3, 4, 5};
  CHECK_THROWS_AS(fit_exponent(M), InsufficientDataError);
}

TEST_CASE("curves export as two columns") {
  MeansCurve m;
  m.radii = {0.5, 0.75, 0.875};
  m.values = {1.0 / 3.0, 2.0 / 7.0, std::sqrt(2.0)};
  const auto file = std::filesystem::temp_directory_path() / "wmlab_test_curve.dat";
  write_curve(m, file);
  std::ifstream in(file);
  double x, y;
  std::size_t i = 0;
  while (in >> x >> y) {
    CHECK(x == 1.0 - m.radii[i]);
    CHECK(y == m.values[i]);
    ++i;
  }
  std::filesystem::remove(file);
  CHECK(i == 3);
}
