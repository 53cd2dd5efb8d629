#pragma once

#include "wmlab/metric.hpp"

namespace wmlab::detail {

/// Every endpoint and 16 interior samples lie in the domain.
bool segment_inside(const DomainSpec& domain, Complex a, Complex b);

/// Weighted length of [a, b] by the path_length rule; the segment must be valid.
double segment_cost(const MetricDensity& omega, Complex a, Complex b);

/// segment_cost, or +inf when the segment leaves the domain.
double segment_cost_or_inf(const MetricDensity& omega, Complex a, Complex b);

}  // namespace wmlab::detail
