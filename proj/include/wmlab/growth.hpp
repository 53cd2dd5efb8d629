#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "wmlab/analytic.hpp"
#include "wmlab/errors.hpp"
#include "wmlab/metric.hpp"

namespace wmlab {

inline constexpr double kInfiniteExponent = std::numeric_limits<double>::infinity();

/// m_p(r_i, g) on increasing radii in (0, 1). `divergent` when a circle sample was not finite.
struct MeansCurve {
  double p = 1.0;  // kInfiniteExponent for the sup
  std::vector<double> radii;
  std::vector<double> values;
  bool divergent = false;
};

/// Lipschitz modulus M(h_j) on steps h_j. `divergent` when some pair distance was infinite,
/// which means the trace touches the boundary of the metric's domain.
struct ModulusCurve {
  double p = kInfiniteExponent;  // kInfiniteExponent for the sup modulus
  std::vector<double> steps;
  std::vector<double> values;
  bool divergent = false;
};

struct ExponentFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  double max_residual = 0.0;
  int count = 0;     // points used
  int excluded = 0;  // zero-valued points dropped
};

using CircleFunction = std::function<double(Complex)>;

/// (sum_j g(r e^{i t_j})^p / n)^{1/p} on n uniform angles; the maximum for p = inf.
/// Returns +inf if any sample is not finite. Requires r in (0, 1), p >= 1, n >= 64.
double integral_means(const CircleFunction& g, double r, double p, int n);

MeansCurve means_curve(const CircleFunction& g, const std::vector<double>& radii, double p, int n);

/// g = f* = omega(f) |f'|.
CircleFunction weighted_derivative_function(const AnalyticMap& f, const MetricDensity& omega);

/// Metric on trace values. Returns +inf for points where the metric is undefined.
class DistanceEvaluator {
public:
  static DistanceEvaluator euclidean();
  /// Closed form for the density 1 / (1 - |z|^2).
  static DistanceEvaluator hyperbolic();
  /// Geodesic solver at the given lattice step; not thread-safe (shares the solver cache).
  static DistanceEvaluator geodesic(MetricDensity omega, double resolution);

  double operator()(Complex a, Complex b) const { return fn_(a, b); }
  const std::string& name() const { return name_; }

private:
  DistanceEvaluator(std::string name, std::function<double(Complex, Complex)> fn);

  std::string name_;
  std::function<double(Complex, Complex)> fn_;
};

/// Evaluator matching a density: closed form for hyperbolic, geodesic solver otherwise.
DistanceEvaluator distance_for(const MetricDensity& omega, double resolution);

/// Shifts are realized as whole sample gaps, so they are multiples of 2 pi / n.

/// max of d(trace(t), trace(s)) over sample pairs with circular gap < h. Requires h in (0, pi].
double sup_lipschitz_modulus(const BoundaryTrace& trace, const DistanceEvaluator& d, double h);

/// max over shifts s in {h/8, h/4, h/2, h} of (sum_t d(trace(t + s), trace(t))^p / n)^{1/p}.
/// Each shift is rounded down to a whole number of gaps; shifts below one gap are skipped
/// (h must be at least one gap).
double mean_lipschitz_modulus(const BoundaryTrace& trace, const DistanceEvaluator& d, double p, double h);

/// Curves share distance evaluations across steps. Steps must be strictly monotone.
ModulusCurve sup_modulus_curve(const BoundaryTrace& trace, const DistanceEvaluator& d, const std::vector<double>& steps);
ModulusCurve mean_modulus_curve(const BoundaryTrace& trace, const DistanceEvaluator& d, double p,
                                const std::vector<double>& steps);

/// Least squares line through (log x_i, log y_i) over points with y_i > 0. Throws
/// InsufficientDataError with fewer than 4 such points or when they span under 1.5 decades in x.
template <class DerivedX, class DerivedY>
ExponentFit fit_power_law(const Eigen::DenseBase<DerivedX>& x, const Eigen::DenseBase<DerivedY>& y) {
  if (x.size() != y.size()) throw InsufficientDataError("abscissa and values differ in length");
  const Eigen::Index n = x.size();
  Eigen::ArrayXd lx(n), ly(n);
  Eigen::Index m = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double xi = x.derived().coeff(i), yi = y.derived().coeff(i);
    if (!(xi > 0.0) || !std::isfinite(xi)) throw InsufficientDataError("abscissa must be positive and finite");
    if (!std::isfinite(yi)) throw InsufficientDataError("values must be finite");
    if (yi > 0.0) {
      lx(m) = std::log(xi);
      ly(m) = std::log(yi);
      ++m;
    }
  }
  ExponentFit fit;
  fit.count = static_cast<int>(m);
  fit.excluded = static_cast<int>(n - m);
  if (m < 4) throw InsufficientDataError("power-law fit needs at least 4 positive values");
  lx.conservativeResize(m);
  ly.conservativeResize(m);
  if ((lx.maxCoeff() - lx.minCoeff()) < 1.5 * std::log(10.0) * (1.0 - 1e-12)) {
    throw InsufficientDataError("power-law fit needs at least 1.5 decades in the abscissa");
  }
  const double mx = lx.mean(), my = ly.mean();
  const Eigen::ArrayXd dx = lx - mx, dy = ly - my;
  fit.slope = (dx * dy).sum() / dx.square().sum();
  fit.intercept = my - fit.slope * mx;
  const Eigen::ArrayXd residual = ly - (fit.intercept + fit.slope * lx);
  fit.max_residual = residual.abs().maxCoeff();
  const double ss_tot = dy.square().sum(), ss_res = residual.square().sum();
  fit.r_squared = ss_tot > 0.0 ? std::clamp(1.0 - ss_res / ss_tot, 0.0, 1.0) : 1.0;
  return fit;
}

/// Slope against 1 - r (estimates alpha - 1).
ExponentFit fit_exponent(const MeansCurve& curve);
/// Slope against h (estimates alpha).
ExponentFit fit_exponent(const ModulusCurve& curve);

/// Two columns "abscissa value" at 17 significant digits (1 - r for means, h for moduli).
void write_curve(const MeansCurve& curve, const std::filesystem::path& file);
void write_curve(const ModulusCurve& curve, const std::filesystem::path& file);

}  // namespace wmlab
