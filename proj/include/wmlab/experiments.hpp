#pragma once

#include <memory>
#include <random>

#include "wmlab/analytic.hpp"
#include "wmlab/bergman.hpp"
#include "wmlab/config.hpp"
#include "wmlab/growth.hpp"
#include "wmlab/metric.hpp"
#include "wmlab/report.hpp"

namespace wmlab {

/// Shared state between experiments: a kernel fitted once can serve several runs on the
/// same domain. A kernel whose domain or degree differs from the config is ignored.
struct ExperimentContext {
  std::shared_ptr<const KernelModel> kernel;
};

/// Catalog map, wrapped by affine_into(domain, map, contraction) when a contraction is set.
AnalyticMap experiment_map(const ExperimentConfig& config);

/// Density named by the config on its domain; fits a Bergman kernel unless the context has one.
MetricDensity experiment_density(const ExperimentConfig& config, const ExperimentContext& context = {});

std::shared_ptr<const KernelModel> experiment_kernel(const ExperimentConfig& config,
                                                     const ExperimentContext& context = {});

/// Trace sample count: the override if positive, else the smallest power of two >= 4096
/// whose spacing resolves the smallest step / 8.
int trace_sample_count(const std::vector<double>& steps, int override_count);

/// Deterministic uniform double in [0, 1) from a 64-bit engine, identical on every platform.
double unit_uniform(std::mt19937_64& rng);

/// Sup form: sup-means of f* against 1 - r and the sup modulus of the trace.
VerificationReport run_theorem1_check(const ExperimentConfig& config, const ExperimentContext& context = {});

/// Finite-p form: p-means of f* and the p-mean modulus. The converse
/// criterion is recorded only for the disc with hyperbolic or Bergman density.
VerificationReport run_theorem23_check(const ExperimentConfig& config, const ExperimentContext& context = {});

/// Unit disc with the hyperbolic density; sup or finite-p pipeline by the config's p, plus a
/// check that f* equals |f'| / (1 - |f|^2).
VerificationReport run_yamashita_check(const ExperimentConfig& config, const ExperimentContext& context = {});

/// rho(z) d(z, boundary) along rays at dyadic boundary distances, and distance ratios to the
/// quasihyperbolic metric on seeded random pairs.
VerificationReport run_qh_comparability(const ExperimentConfig& config, const ExperimentContext& context = {});

/// Smallest c >= 1 with sqrt2 log(1 + x / c) <= beta <= sqrt2 log(1 + c x), x = |z - w| / sqrt(d(z) d(w)),
/// over seeded random pairs.
VerificationReport run_nt_bound_fit(const ExperimentConfig& config, const ExperimentContext& context = {});

/// Dispatches on config.experiment after filling defaults and validating.
VerificationReport run_experiment(const ExperimentConfig& config, const ExperimentContext& context = {});

}  // namespace wmlab
