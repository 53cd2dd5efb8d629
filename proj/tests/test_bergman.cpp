#include <cmath>
#include <filesystem>
#include <numbers>

#include "doctest.h"
#include "wmlab/bergman.hpp"
#include "wmlab/errors.hpp"

using namespace wmlab;
using std::numbers::pi;

namespace {

// Closed-form kernel and density of the unit disc.
Complex disc_kernel(Complex z, Complex w) { return 1.0 / (pi * std::pow(1.0 - z * std::conj(w), 2)); }
double disc_density(Complex z) { return std::sqrt(2.0) / (1.0 - std::norm(z)); }

const KernelModel& disc_model() {
  static const KernelModel model = fit_bergman_kernel(DomainSpec::unit_disc(), 40, 0.01);
  return model;
}

const QuadratureGrid& disc_grid() {
  static const QuadratureGrid grid = gauss_grid(DomainSpec::unit_disc(), 0.01, 4);
  return grid;
}

}  // namespace

TEST_CASE("disc Gram matrix in monomials") {
  const auto gram = compute_gram(gauss_grid(DomainSpec::unit_disc(), 0.02, 6), 8);
  for (int j = 0; j <= 8; ++j) {
    for (int k = 0; k <= 8; ++k) {
      // Polar integral of r^{j+k+1} e^{i(j-k)t}.
      const double expected = j == k ? pi / (j + 1) : 0.0;
      CHECK(std::abs(gram.entries(j, k) - expected) < 1e-11);
    }
  }
}

TEST_CASE("Gram matrix is exactly Hermitian") {
  const auto domain = DomainSpec::smoothed_polygon({{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}}, 0.2);
  const auto gram = compute_gram(quadrature_grid(domain, 0.03), 10, basis_frame(domain));
  CHECK((gram.entries - gram.entries.adjoint()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("square Gram matrix has vanishing odd moments") {
  const auto square = DomainSpec::polygon({{-1, -1}, {1, -1}, {1, 1}, {-1, 1}});
  for (const auto& grid : {quadrature_grid(square, 0.1), gauss_grid(square, 0.1, 4)}) {
    const auto gram = compute_gram(grid, 4);
    CHECK(std::abs(gram.entries(0, 1)) < 1e-14);
    CHECK(gram.entries(0, 0).real() == doctest::Approx(4.0).epsilon(1e-12));
  }
}

TEST_CASE("Chebyshev frame diagonalizes the ellipse Gram matrix") {
  const auto ellipse = DomainSpec::ellipse(1.5, 1.0);
  const auto gram = compute_gram(gauss_grid(ellipse, 0.02, 10), 30, basis_frame(ellipse));
  double worst = 0.0;
  for (int j = 0; j <= 30; ++j) {
    for (int k = 0; k < j; ++k) {
      const double scale = std::sqrt(gram.entries(j, j).real() * gram.entries(k, k).real());
      worst = std::max(worst, std::abs(gram.entries(j, k)) / scale);
    }
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("fit_kernel on the disc") {
  const auto gram = compute_gram(gauss_grid(DomainSpec::unit_disc(), 0.02, 6), 12);
  const auto model = fit_kernel(gram);
  CHECK(model.coefficients(0, 0).real() == doctest::Approx(1.0 / std::sqrt(pi)).epsilon(1e-10));
  for (int j = 0; j <= 12; ++j) {
    CHECK(std::abs(model.coefficients(j, j) - std::sqrt((j + 1) / pi)) < 1e-9);
    for (int k = 0; k < j; ++k) CHECK(std::abs(model.coefficients(j, k)) < 1e-9);
  }
  CHECK(orthonormality_defect(model, gram) < 1e-8);
  CHECK((model.pivots.array() > 0.0).all());
}

TEST_CASE("fit_kernel on a diagonal Gram matrix") {
  GramMatrix gram;
  gram.degree = 3;
  gram.entries = Eigen::VectorXcd::LinSpaced(4, 1.0, 4.0).asDiagonal();
  const auto model = fit_kernel(gram);
  for (int j = 0; j < 4; ++j) {
    CHECK(model.coefficients(j, j).real() == doctest::Approx(1.0 / std::sqrt(j + 1.0)).epsilon(1e-15));
  }
  CHECK(model.coefficients.isDiagonal());
}

TEST_CASE("fit_kernel reports the degree where positivity fails") {
  // Three nodes cannot separate polynomials of degree 3.
  QuadratureGrid grid;
  grid.nodes = Eigen::VectorXcd(3);
  grid.nodes << Complex(0.1, 0.0), Complex(-0.2, 0.1), Complex(0.0, -0.3);
  grid.weights = Eigen::VectorXd::Constant(3, 0.1);
  const auto gram = compute_gram(grid, 5);
  try {
    fit_kernel(gram);
    FAIL("expected a factorization error");
  } catch (const FactorizationError& e) {
    CHECK(e.degree() == 3);
  }
}

TEST_CASE("orthonormality on the source grid") {
  const auto l_shape = DomainSpec::smoothed_polygon({{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}}, 0.2);
  for (const auto& [domain, degree] : {std::pair{DomainSpec::ellipse(1.5, 1.0), 60},
                                       std::pair{l_shape, 16},
                                       std::pair{DomainSpec::unit_disc(), 40}}) {
    const auto gram = compute_gram(gauss_grid(domain, 0.02, 4), degree, basis_frame(domain));
    CHECK(orthonormality_defect(fit_kernel(gram), gram) < 1e-8);
  }
}

TEST_CASE("disc kernel values") {
  const auto& model = disc_model();
  CHECK(std::abs(kernel_eval(model, 0.0, 0.0) - 1.0 / pi) < 1e-6);
  CHECK(std::abs(kernel_eval(model, 0.5, 0.5) - 1.0 / (pi * 0.75 * 0.75)) < 1e-5);
  const Complex z(0.3, -0.2), w(-0.1, 0.55);
  CHECK(std::abs(kernel_eval(model, z, w) - std::conj(kernel_eval(model, w, z))) < 1e-15);
  CHECK(std::abs(kernel_eval(model, z, w) - disc_kernel(z, w)) < 1e-8);
  CHECK_THROWS_AS(kernel_eval(model, 1.2, 0.0), DomainError);
}

TEST_CASE("disc density values") {
  const auto& model = disc_model();
  CHECK(bergman_density(model, 0.0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-3));
  CHECK(bergman_density(model, 0.5) == doctest::Approx(std::sqrt(2.0) / 0.75).epsilon(1e-3));
  for (const double r : {0.2, 0.45, 0.7}) {
    const double ref = bergman_density(model, r);
    for (int k = 1; k < 12; ++k) CHECK(std::abs(bergman_density(model, std::polar(r, k * 0.5)) - ref) < 1e-6);
  }
  double worst = 0.0;
  for (int i = 0; i <= 40; ++i) {
    for (int j = 0; j <= 40; ++j) {
      const Complex z(-0.7 + 0.035 * i, -0.7 + 0.035 * j);
      if (std::abs(z) > 0.7) continue;
      CHECK(kernel_eval(model, z, z).real() > 0.0);
      worst = std::max(worst, std::abs(bergman_density(model, z) - disc_density(z)));
    }
  }
  CHECK(worst < 1e-3);
}

TEST_CASE("density blows up along rays toward the boundary") {
  for (const auto& domain : {DomainSpec::unit_disc(), DomainSpec::ellipse(1.5, 1.0)}) {
    const auto model = fit_bergman_kernel(domain, 40, 0.02);
    for (const double angle : {0.0, 0.7, 1.5707963267948966, 2.4}) {
      const Complex dir = std::polar(1.0, angle);
      double previous = 0.0;
      for (const double d : {0.8, 0.4, 0.2, 0.1, 0.05}) {
        // Point on the ray at boundary distance d, by bisection.
        double lo = 0.0, hi = 2.0;
        for (int it = 0; it < 60; ++it) {
          const double mid = 0.5 * (lo + hi);
          (contains(domain, mid * dir) && boundary_distance(domain, mid * dir) > d ? lo : hi) = mid;
        }
        if (!contains(domain, lo * dir)) continue;
        const double rho = bergman_density(model, lo * dir);
        CHECK(rho > previous);
        previous = rho;
      }
    }
  }
}

TEST_CASE("reproducing residual") {
  const auto& model = disc_model();
  const auto& grid = disc_grid();
  CHECK(reproducing_residual(model, grid, Polynomial{{1.0}}, 0.0) < 1e-4);
  CHECK(reproducing_residual(model, grid, Polynomial{{0.0}}, Complex(0.2, 0.1)) == 0.0);
  CHECK(reproducing_residual(model, grid, Polynomial{{0.0, 0.0, 0.0, 1.0}}, 0.3) < 1e-4);
  CHECK(reproducing_residual(model, grid, Polynomial{{Complex(1, 2), -0.5, 0.0, 0.25}}, Complex(-0.4, 0.3)) < 1e-4);
}

TEST_CASE("kernel file round trip") {
  const auto model = fit_bergman_kernel(DomainSpec::ellipse(1.5, 1.0), 12, 0.05);
  const auto path = std::filesystem::temp_directory_path() / "wmlab_test_kernel.txt";
  save_kernel(model, path);
  const auto loaded = load_kernel(path);
  std::filesystem::remove(path);
  CHECK(loaded.degree == model.degree);
  CHECK(loaded.coefficients == model.coefficients);
  CHECK(loaded.pivots == model.pivots);
  CHECK(loaded.frame.sigma == model.frame.sigma);
  CHECK(loaded.grid.node_count == model.grid.node_count);
  CHECK(loaded.domain.kind() == DomainKind::ellipse);
  CHECK(bergman_density(loaded, Complex(0.4, 0.3)) == bergman_density(model, Complex(0.4, 0.3)));
  CHECK_THROWS_AS(load_kernel("/nonexistent/kernel.txt"), IoError);
}
