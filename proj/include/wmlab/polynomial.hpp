#pragma once

#include <complex>
#include <vector>

namespace wmlab {

/// Polynomial in ascending powers: coefficients[k] multiplies z^k.
struct Polynomial {
  std::vector<std::complex<double>> coefficients;

  int degree() const { return static_cast<int>(coefficients.size()) - 1; }

  std::complex<double> operator()(std::complex<double> z) const {
    std::complex<double> acc = 0.0;
    for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) acc = acc * z + *it;
    return acc;
  }

  std::complex<double> derivative(std::complex<double> z) const {
    std::complex<double> acc = 0.0;
    for (int k = degree(); k >= 1; --k) acc = acc * z + static_cast<double>(k) * coefficients[k];
    return acc;
  }
};

}  // namespace wmlab
