#pragma once

#include <filesystem>
#include <string>

#include <Eigen/Core>

#include "wmlab/domain.hpp"
#include "wmlab/polynomial.hpp"

namespace wmlab {

/// Polynomial basis M_0 = 1, M_1 = u, M_{n+1} = u M_n - sigma M_{n-1} in the local
/// variable u = (z - center) / scale. sigma = 0 gives monomials. For an ellipse with
/// focal half-distance f, sigma = (f / scale)^2 / 4 gives monic Chebyshev polynomials of
/// the second kind, which are orthogonal in area measure on every confocal ellipse.
struct BasisFrame {
  Complex center = 0.0;
  double scale = 1.0;
  double sigma = 0.0;

  Complex to_local(Complex z) const { return (z - center) / scale; }
};

/// Bounding-box center and half-diagonal; Chebyshev recurrence for ellipses.
BasisFrame basis_frame(const DomainSpec& domain);

/// G(j, k) = sum over nodes of M_j conj(M_k) weight (u^j conj(u)^k for sigma = 0).
/// Hermitian by construction.
struct GramMatrix {
  int degree = 0;
  Eigen::MatrixXcd entries;
  BasisFrame frame;
  DomainSpec domain;
  double resolution = 0.0;
  QuadratureRule rule = QuadratureRule::midpoint;
  int order = 1;
  Eigen::Index node_count = 0;
};

/// Summary of the grid a kernel was fitted on.
struct GridDescriptor {
  QuadratureRule rule = QuadratureRule::midpoint;
  double resolution = 0.0;
  int order = 1;
  Eigen::Index node_count = 0;
};

/// Orthonormal polynomial basis phi_j(z) = sum_{k <= j} B(j, k) M_k(u), u = frame.to_local(z).
/// B is lower triangular with positive diagonal; B = L^{-1} where G = L L^H.
struct KernelModel {
  int degree = 0;
  Eigen::MatrixXcd coefficients;
  BasisFrame frame;
  DomainSpec domain;
  GridDescriptor grid;
  Eigen::VectorXd pivots;  // squared diagonal of L
};

GramMatrix compute_gram(const QuadratureGrid& grid, int degree, BasisFrame frame = {});

/// Throws FactorizationError carrying the first degree whose pivot is not safely positive.
KernelModel fit_kernel(const GramMatrix& gram);

/// fit_kernel(compute_gram(gauss_grid(domain, resolution, order), degree, basis_frame(domain))).
KernelModel fit_bergman_kernel(const DomainSpec& domain, int degree = 40, double resolution = 0.01,
                               int order = 4);

/// max |B G B^H - I|.
double orthonormality_defect(const KernelModel& model, const GramMatrix& gram);

/// Basis values phi_j(z) and derivatives phi_j'(z), j = 0..N.
struct BasisValues {
  Eigen::VectorXcd value;
  Eigen::VectorXcd derivative;
};
BasisValues basis_values(const KernelModel& model, Complex z);

/// K(z, w) = sum_j phi_j(z) conj(phi_j(w)). Throws DomainError outside the domain.
Complex kernel_eval(const KernelModel& model, Complex z, Complex w);

/// rho(z) with rho^2 = d^2/dz dzbar log K(z, z), from the termwise derivative series.
/// Throws InstabilityError when K(z, z) or the radicand is not positive.
double bergman_density(const KernelModel& model, Complex z);

/// |f(z) - sum over nodes of K(z, node) f(node) weight|.
double reproducing_residual(const KernelModel& model, const QuadratureGrid& grid, const Polynomial& f,
                            Complex z);

/// Plain-text format: see docs/kernel_format.md.
void save_kernel(const KernelModel& model, const std::filesystem::path& path);
KernelModel load_kernel(const std::filesystem::path& path);

}  // namespace wmlab
