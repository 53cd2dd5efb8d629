#pragma once

#include <Eigen/Core>

namespace wmlab {

/// Gauss-Legendre rule on [0, 1]: nodes and weights summing to one.
struct GaussRule {
  Eigen::ArrayXd nodes;
  Eigen::ArrayXd weights;
};

/// Rules are computed once per order by Newton iteration on the Legendre polynomial.
const GaussRule& gauss_legendre(int order);

}  // namespace wmlab
