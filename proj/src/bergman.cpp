#include "wmlab/bergman.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "wmlab/errors.hpp"

namespace wmlab {

namespace {

constexpr Eigen::Index kChunk = 4096;

// Pivots below this multiple of the diagonal entry are treated as loss of positivity.
constexpr double kPivotFloor = 1e-13;

void fill_basis(Eigen::Ref<Eigen::MatrixXcd> V, const Eigen::Ref<const Eigen::VectorXcd>& u, double sigma) {
  V.col(0).setOnes();
  if (V.cols() > 1) V.col(1) = u;
  for (Eigen::Index j = 2; j < V.cols(); ++j) V.col(j) = V.col(j - 1).cwiseProduct(u) - sigma * V.col(j - 2);
}

void require_inside(const KernelModel& model, Complex z) {
  if (!contains(model.domain, z)) throw DomainError("kernel evaluated outside its domain");
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

BasisFrame basis_frame(const DomainSpec& domain) {
  const Box& box = domain.bounding_box();
  BasisFrame frame{box.center(), box.half_diagonal(), 0.0};
  if (domain.kind() == DomainKind::ellipse) {
    const double a = domain.semi_major(), b = domain.semi_minor();
    const double f = std::sqrt((a - b) * (a + b)) / frame.scale;
    frame.sigma = 0.25 * f * f;
  }
  return frame;
}

GramMatrix compute_gram(const QuadratureGrid& grid, int degree, BasisFrame frame) {
  if (degree < 0) throw ConfigError("Gram degree must be nonnegative");
  if (grid.size() == 0) throw ConfigError("Gram matrix of an empty grid");
  if (!(frame.scale > 0.0)) throw ConfigError("basis frame scale must be positive");
  const Eigen::Index m = degree + 1;
  Eigen::MatrixXcd G = Eigen::MatrixXcd::Zero(m, m);
  Eigen::MatrixXcd V(kChunk, m);
  for (Eigen::Index start = 0; start < grid.size(); start += kChunk) {
    const Eigen::Index len = std::min(kChunk, grid.size() - start);
    const Eigen::VectorXcd u = (grid.nodes.segment(start, len).array() - frame.center) / frame.scale;
    auto block = V.topRows(len);
    fill_basis(block, u, frame.sigma);
    const Eigen::MatrixXcd weighted_conj = grid.weights.segment(start, len).asDiagonal() * block.conjugate();
    G.noalias() += block.transpose() * weighted_conj;
  }
  GramMatrix gram;
  gram.degree = degree;
  gram.entries = 0.5 * (G + G.adjoint());
  gram.frame = frame;
  gram.domain = grid.domain;
  gram.resolution = grid.resolution;
  gram.rule = grid.rule;
  gram.order = grid.order;
  gram.node_count = grid.size();
  return gram;
}

KernelModel fit_kernel(const GramMatrix& gram) {
  const Eigen::Index m = gram.degree + 1;
  const Eigen::MatrixXcd& G = gram.entries;
  // Left-looking Cholesky G = L L^H.
  Eigen::MatrixXcd L = Eigen::MatrixXcd::Zero(m, m);
  Eigen::VectorXd pivots(m);
  for (Eigen::Index j = 0; j < m; ++j) {
    double pivot = G(j, j).real();
    for (Eigen::Index k = 0; k < j; ++k) pivot -= std::norm(L(j, k));
    pivots(j) = pivot;
    if (!(pivot > kPivotFloor * G(j, j).real())) throw FactorizationError(static_cast<int>(j), pivot);
    const double ljj = std::sqrt(pivot);
    L(j, j) = ljj;
    for (Eigen::Index i = j + 1; i < m; ++i) {
      Complex s = G(i, j);
      for (Eigen::Index k = 0; k < j; ++k) s -= L(i, k) * std::conj(L(j, k));
      L(i, j) = s / ljj;
    }
  }
  KernelModel model;
  model.degree = gram.degree;
  model.coefficients = L.triangularView<Eigen::Lower>().solve(Eigen::MatrixXcd::Identity(m, m));
  model.coefficients.triangularView<Eigen::StrictlyUpper>().setZero();
  model.frame = gram.frame;
  model.domain = gram.domain;
  model.grid = {gram.rule, gram.resolution, gram.order, gram.node_count};
  model.pivots = pivots;
  return model;
}

KernelModel fit_bergman_kernel(const DomainSpec& domain, int degree, double resolution, int order) {
  return fit_kernel(compute_gram(gauss_grid(domain, resolution, order), degree, basis_frame(domain)));
}

double orthonormality_defect(const KernelModel& model, const GramMatrix& gram) {
  const Eigen::MatrixXcd& B = model.coefficients;
  const Eigen::MatrixXcd E = B * gram.entries * B.adjoint() - Eigen::MatrixXcd::Identity(B.rows(), B.rows());
  return E.cwiseAbs().maxCoeff();
}

BasisValues basis_values(const KernelModel& model, Complex z) {
  const Eigen::Index m = model.degree + 1;
  const Complex u = model.frame.to_local(z);
  Eigen::VectorXcd v(m), dv(m);
  const double sigma = model.frame.sigma;
  v(0) = 1.0;
  dv(0) = 0.0;
  if (m > 1) {
    v(1) = u;
    dv(1) = 1.0;
  }
  for (Eigen::Index j = 2; j < m; ++j) {
    v(j) = u * v(j - 1) - sigma * v(j - 2);
    dv(j) = v(j - 1) + u * dv(j - 1) - sigma * dv(j - 2);
  }
  const auto B = model.coefficients.triangularView<Eigen::Lower>();
  BasisValues out;
  out.value = B * v;
  out.derivative = (B * dv) / model.frame.scale;
  return out;
}

Complex kernel_eval(const KernelModel& model, Complex z, Complex w) {
  require_inside(model, z);
  require_inside(model, w);
  const Eigen::VectorXcd pz = basis_values(model, z).value;
  const Eigen::VectorXcd pw = basis_values(model, w).value;
  return pw.dot(pz);  // dot conjugates its left operand
}

double bergman_density(const KernelModel& model, Complex z) {
  require_inside(model, z);
  const BasisValues b = basis_values(model, z);
  const double K = b.value.squaredNorm();
  if (!(K > 0.0) || !std::isfinite(K)) throw InstabilityError("K(z, z) is not positive");
  // K K_zz - |K_z|^2 = K * |phi' - (K_z / K) phi|^2, which avoids the cancellation of the
  // expanded form.
  const Complex Kz = b.value.dot(b.derivative);
  const double radicand = (b.derivative - (Kz / K) * b.value).squaredNorm() / K;
  if (!(radicand > 0.0) || !std::isfinite(radicand)) {
    throw InstabilityError("Bergman density radicand " + format_double(radicand) +
                           " is not positive; degree or grid too coarse");
  }
  return std::sqrt(radicand);
}

double reproducing_residual(const KernelModel& model, const QuadratureGrid& grid, const Polynomial& f,
                            Complex z) {
  require_inside(model, z);
  const Eigen::Index m = model.degree + 1;
  // sum_n K(z, n) f(n) w_n = phi(z)^T conj(B) mom, mom_k = sum_n conj(M_k(u_n)) f(n) w_n.
  Eigen::VectorXcd mom = Eigen::VectorXcd::Zero(m);
  Eigen::MatrixXcd V(kChunk, m);
  Eigen::VectorXcd fw(kChunk);
  for (Eigen::Index start = 0; start < grid.size(); start += kChunk) {
    const Eigen::Index len = std::min(kChunk, grid.size() - start);
    const Eigen::VectorXcd u =
        (grid.nodes.segment(start, len).array() - model.frame.center) / model.frame.scale;
    auto block = V.topRows(len);
    fill_basis(block, u, model.frame.sigma);
    for (Eigen::Index i = 0; i < len; ++i) fw(i) = f(grid.nodes(start + i)) * grid.weights(start + i);
    mom.noalias() += block.adjoint() * fw.head(len);
  }
  const Eigen::VectorXcd phi = basis_values(model, z).value;
  const Complex reproduced = phi.transpose() * (model.coefficients.conjugate() * mom);
  return std::abs(f(z) - reproduced);
}

void save_kernel(const KernelModel& model, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write kernel file " + path.string());
  out << "wmlab-kernel 1\n";
  out << "domain " << to_string(model.domain) << '\n';
  out << "degree " << model.degree << '\n';
  out << "frame " << format_double(model.frame.center.real()) << ' '
      << format_double(model.frame.center.imag()) << ' ' << format_double(model.frame.scale) << ' '
      << format_double(model.frame.sigma) << '\n';
  out << "grid " << to_string(model.grid.rule) << ' ' << format_double(model.grid.resolution) << ' '
      << model.grid.order << ' ' << model.grid.node_count << '\n';
  out << "pivots";
  for (Eigen::Index j = 0; j < model.pivots.size(); ++j) out << ' ' << format_double(model.pivots(j));
  out << '\n';
  out << "coefficients\n";
  const Eigen::Index m = model.degree + 1;
  for (Eigen::Index j = 0; j < m; ++j) {
    for (Eigen::Index k = 0; k < m; ++k) {
      if (k) out << ' ';
      out << format_double(model.coefficients(j, k).real()) << ' '
          << format_double(model.coefficients(j, k).imag());
    }
    out << '\n';
  }
  if (!out) throw IoError("failed writing kernel file " + path.string());
}

KernelModel load_kernel(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read kernel file " + path.string());
  auto expect_line = [&](const std::string& key) {
    std::string line;
    if (!std::getline(in, line) || line.rfind(key, 0) != 0) {
      throw ConfigError("kernel file " + path.string() + ": expected '" + key + "'");
    }
    return std::istringstream(line.substr(key.size()));
  };
  auto bad = [&](const std::string& what) {
    return ConfigError("kernel file " + path.string() + ": malformed " + what);
  };

  KernelModel model;
  {
    auto s = expect_line("wmlab-kernel");
    int version = 0;
    if (!(s >> version) || version != 1) throw bad("version");
  }
  {
    auto s = expect_line("domain ");
    model.domain = parse_domain(s.str());
  }
  {
    auto s = expect_line("degree");
    if (!(s >> model.degree) || model.degree < 0) throw bad("degree");
  }
  {
    auto s = expect_line("frame");
    double cx, cy;
    if (!(s >> cx >> cy >> model.frame.scale >> model.frame.sigma)) throw bad("frame");
    model.frame.center = {cx, cy};
  }
  {
    auto s = expect_line("grid");
    std::string rule;
    if (!(s >> rule >> model.grid.resolution >> model.grid.order >> model.grid.node_count)) throw bad("grid");
    if (rule == "midpoint") model.grid.rule = QuadratureRule::midpoint;
    else if (rule == "gauss") model.grid.rule = QuadratureRule::gauss;
    else throw bad("grid rule");
  }
  const Eigen::Index m = model.degree + 1;
  {
    auto s = expect_line("pivots");
    model.pivots.resize(m);
    for (Eigen::Index j = 0; j < m; ++j) {
      if (!(s >> model.pivots(j))) throw bad("pivots");
    }
  }
  expect_line("coefficients");
  model.coefficients.resize(m, m);
  for (Eigen::Index j = 0; j < m; ++j) {
    for (Eigen::Index k = 0; k < m; ++k) {
      double re, im;
      if (!(in >> re >> im)) throw bad("coefficient matrix");
      model.coefficients(j, k) = {re, im};
    }
  }
  return model;
}

}  // namespace wmlab
