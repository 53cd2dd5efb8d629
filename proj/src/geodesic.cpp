#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "metric_internal.hpp"
#include "wmlab/errors.hpp"
#include "wmlab/metric.hpp"

namespace wmlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kRelativeTolerance = 1e-6;
constexpr int kMaxSweeps = 200;
// Finest refined segments are no shorter than the resolution and no more than this many.
constexpr int kMaxRefinedSegments = 64;
// Edge midpoints need this fraction of a step of clearance; with endpoints at least one
// step from the boundary this keeps knight-move edges inside the domain.
constexpr double kMidpointClearance = 0.125;

constexpr std::uint64_t kSource = std::numeric_limits<std::uint64_t>::max() - 1;
constexpr std::uint64_t kTarget = std::numeric_limits<std::uint64_t>::max();

constexpr int kNeighbours[16][2] = {{1, 0},  {-1, 0}, {0, 1},  {0, -1}, {1, 1},  {1, -1}, {-1, 1}, {-1, -1},
                                    {1, 2},  {1, -2}, {-1, 2}, {-1, -2}, {2, 1}, {2, -1}, {-2, 1}, {-2, -1}};

std::uint64_t pack(std::int64_t i, std::int64_t j) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(i)) << 32) | static_cast<std::uint32_t>(j);
}
std::int64_t unpack_i(std::uint64_t key) { return static_cast<std::int32_t>(key >> 32); }
std::int64_t unpack_j(std::uint64_t key) { return static_cast<std::int32_t>(key & 0xffffffffu); }

double polyline_cost(const MetricDensity& omega, const std::vector<Complex>& v) {
  double total = 0.0;
  for (std::size_t k = 1; k < v.size(); ++k) {
    total += detail::segment_cost_or_inf(omega, v[k - 1], v[k]);
    if (!std::isfinite(total)) return kInf;
  }
  return total;
}

// Replaces runs of vertices by chords whenever the chord is no more expensive.
std::vector<Complex> shortcut(const MetricDensity& omega, const std::vector<Complex>& v) {
  const std::size_t n = v.size();
  if (n < 3) return v;
  std::vector<double> prefix(n, 0.0);
  for (std::size_t k = 1; k < n; ++k) prefix[k] = prefix[k - 1] + detail::segment_cost_or_inf(omega, v[k - 1], v[k]);
  constexpr std::size_t kLookahead = 8;
  std::vector<Complex> out{v.front()};
  std::size_t i = 0;
  while (i + 1 < n) {
    std::size_t best = i + 1;
    for (std::size_t j = i + 2; j < n && j <= best + kLookahead; ++j) {
      if (detail::segment_cost_or_inf(omega, v[i], v[j]) <= prefix[j] - prefix[i]) best = j;
    }
    out.push_back(v[best]);
    i = best;
  }
  return out;
}

// Moves interior vertices along the local chord normal with a parabolic line search until a
// sweep improves the total by less than the relative tolerance.
void optimize_vertices(const MetricDensity& omega, std::vector<Complex>& v) {
  const std::size_t n = v.size();
  if (n < 3) return;
  std::vector<double> seg(n - 1), step(n, 0.0);
  for (std::size_t k = 0; k + 1 < n; ++k) seg[k] = detail::segment_cost_or_inf(omega, v[k], v[k + 1]);
  for (std::size_t i = 1; i + 1 < n; ++i) step[i] = 0.25 * std::min(std::abs(v[i] - v[i - 1]), std::abs(v[i + 1] - v[i]));
  double total = 0.0;
  for (const double s : seg) total += s;

  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    const double before = total;
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const Complex chord = v[i + 1] - v[i - 1];
      const double chord_len = std::abs(chord);
      if (chord_len == 0.0 || step[i] <= 1e-14 * chord_len) continue;
      const Complex normal = Complex(0.0, 1.0) * chord / chord_len;
      struct Trial {
        double t, a, b;
        double f() const { return a + b; }
      };
      auto eval = [&](double t) {
        const Complex p = v[i] + t * normal;
        const double a = detail::segment_cost_or_inf(omega, v[i - 1], p);
        const double b = std::isfinite(a) ? detail::segment_cost_or_inf(omega, p, v[i + 1]) : kInf;
        return Trial{t, a, b};
      };
      const Trial zero{0.0, seg[i - 1], seg[i]};
      const double d = step[i];
      const Trial plus = eval(d), minus = eval(-d);
      Trial best = zero;
      for (const Trial& tr : {plus, minus}) {
        if (tr.f() < best.f()) best = tr;
      }
      const double curvature = plus.f() + minus.f() - 2.0 * zero.f();
      if (std::isfinite(curvature) && curvature > 0.0) {
        const double t = std::clamp(0.5 * d * (minus.f() - plus.f()) / curvature, -2.0 * d, 2.0 * d);
        if (t != 0.0 && t != d && t != -d) {
          const Trial para = eval(t);
          if (para.f() < best.f()) best = para;
        }
      }
      if (best.t != 0.0) {
        v[i] += best.t * normal;
        seg[i - 1] = best.a;
        seg[i] = best.b;
        step[i] = std::max(std::abs(best.t), 0.5 * d);
      } else {
        step[i] = 0.25 * d;
      }
    }
    total = 0.0;
    for (const double s : seg) total += s;
    if (!(before - total > kRelativeTolerance * total)) break;
  }
}

std::vector<Complex> subdivide(const std::vector<Complex>& v, double max_len) {
  std::vector<Complex> out{v.front()};
  for (std::size_t k = 1; k < v.size(); ++k) {
    if (std::abs(v[k] - v[k - 1]) > max_len) out.push_back(0.5 * (v[k - 1] + v[k]));
    out.push_back(v[k]);
  }
  return out;
}

double max_segment(const std::vector<Complex>& v) {
  double m = 0.0;
  for (std::size_t k = 1; k < v.size(); ++k) m = std::max(m, std::abs(v[k] - v[k - 1]));
  return m;
}

bool lexicographically_less(Complex a, Complex b) {
  return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
}

}  // namespace

GeodesicSolver::GeodesicSolver(MetricDensity omega, double resolution)
  : omega_(std::move(omega)), h_(resolution) {
  if (!(resolution > 0.0) || !std::isfinite(resolution)) throw ConfigError("resolution must be positive");
  const Box& box = omega_.domain().bounding_box();
  origin_ = {box.xmin, box.ymin};
  const double span = std::max(box.xmax - box.xmin, box.ymax - box.ymin);
  if (span / resolution > 1e8) throw ConfigError("resolution too fine for the lattice index range");
}

Complex GeodesicSolver::half_point(std::int64_t i2, std::int64_t j2) const {
  return origin_ + Complex(0.5 * h_ * static_cast<double>(i2), 0.5 * h_ * static_cast<double>(j2));
}

GeodesicSolver::Sample& GeodesicSolver::sample(std::int64_t i2, std::int64_t j2) {
  const auto [it, inserted] = cache_.try_emplace(pack(i2, j2));
  if (inserted) {
    const Complex p = half_point(i2, j2);
    it->second.gap = contains(omega_.domain(), p) ? curve_distance(omega_.domain(), p) : -1.0;
  }
  return it->second;
}

double GeodesicSolver::sample_value(Sample& s, std::int64_t i2, std::int64_t j2) {
  if (std::isnan(s.value)) s.value = omega_(half_point(i2, j2));
  return s.value;
}

bool GeodesicSolver::admissible(std::int64_t i, std::int64_t j) { return sample(2 * i, 2 * j).gap >= h_; }

std::vector<Complex> GeodesicSolver::graph_path(Complex z, Complex w) {
  using Entry = std::pair<double, std::uint64_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
  std::unordered_map<std::uint64_t, double> dist;
  std::unordered_map<std::uint64_t, std::uint64_t> parent;
  std::unordered_map<std::uint64_t, double> target_links;

  auto nearby = [&](Complex p, auto&& visit) {
    const Complex q = (p - origin_) / h_;
    const auto i0 = static_cast<std::int64_t>(std::floor(q.real())), j0 = static_cast<std::int64_t>(std::floor(q.imag()));
    for (std::int64_t i = i0 - 2; i <= i0 + 3; ++i) {
      for (std::int64_t j = j0 - 2; j <= j0 + 3; ++j) {
        const Complex node = half_point(2 * i, 2 * j);
        if (std::abs(node - p) > 2.0 * h_ || !admissible(i, j)) continue;
        const double c = detail::segment_cost_or_inf(omega_, p, node);
        if (std::isfinite(c)) visit(pack(i, j), c);
      }
    }
  };
  auto relax = [&](std::uint64_t key, std::uint64_t from, double d) {
    const auto [it, inserted] = dist.try_emplace(key, d);
    if (!inserted) {
      if (d >= it->second) return;
      it->second = d;
    }
    parent[key] = from;
    queue.emplace(d, key);
  };

  nearby(w, [&](std::uint64_t key, double c) { target_links[key] = c; });
  if (target_links.empty()) return {};
  nearby(z, [&](std::uint64_t key, double c) { relax(key, kSource, c); });

  while (!queue.empty()) {
    const auto [d, key] = queue.top();
    queue.pop();
    if (key == kTarget) break;
    if (d > dist[key]) continue;
    if (const auto link = target_links.find(key); link != target_links.end()) relax(kTarget, key, d + link->second);
    const std::int64_t i = unpack_i(key), j = unpack_j(key);
    Sample& here = sample(2 * i, 2 * j);
    const double w_here = sample_value(here, 2 * i, 2 * j);
    for (const auto& off : kNeighbours) {
      const std::int64_t ni = i + off[0], nj = j + off[1];
      if (!admissible(ni, nj)) continue;
      Sample& mid = sample(2 * i + off[0], 2 * j + off[1]);
      if (mid.gap < kMidpointClearance * h_) continue;
      Sample& there = sample(2 * ni, 2 * nj);
      const double len = h_ * std::hypot(off[0], off[1]);
      const double cost = len / 6.0 *
                          (w_here + 4.0 * sample_value(mid, 2 * i + off[0], 2 * j + off[1]) +
                           sample_value(there, 2 * ni, 2 * nj));
      relax(pack(ni, nj), key, d + cost);
    }
  }
  if (!dist.contains(kTarget)) return {};

  std::vector<Complex> path{w};
  for (std::uint64_t key = parent[kTarget]; key != kSource; key = parent[key]) {
    path.push_back(half_point(2 * unpack_i(key), 2 * unpack_j(key)));
  }
  path.push_back(z);
  std::reverse(path.begin(), path.end());
  return path;
}

GeodesicResult GeodesicSolver::solve(Complex z, Complex w, const PolylinePath* hint) {
  if (!contains(omega_.domain(), z) || !contains(omega_.domain(), w)) {
    throw DomainError("distance endpoints must lie in the domain");
  }
  if (!lexicographically_less(w, z)) return solve_ordered(z, w, hint);
  PolylinePath reversed_hint;
  if (hint) reversed_hint.vertices.assign(hint->vertices.rbegin(), hint->vertices.rend());
  GeodesicResult r = solve_ordered(w, z, hint ? &reversed_hint : nullptr);
  std::reverse(r.path.vertices.begin(), r.path.vertices.end());
  return r;
}

GeodesicResult GeodesicSolver::solve_ordered(Complex z, Complex w, const PolylinePath* hint) {
  GeodesicResult result;
  result.resolution = h_;
  if (z == w) {
    result.path.vertices = {z};
    return result;
  }
  if (omega_.blows_up() && (omega_.boundary_gap(z) < h_ || omega_.boundary_gap(w) < h_)) {
    result.distance = kInf;
    result.path.vertices = {z, w};
    result.divergent = true;
    return result;
  }

  std::vector<std::vector<Complex>> candidates;
  candidates.push_back({z, w});
  if (auto g = graph_path(z, w); !g.empty()) candidates.push_back(shortcut(omega_, g));
  if (hint && hint->vertices.size() >= 2 && hint->vertices.front() == z && hint->vertices.back() == w) {
    candidates.push_back(hint->vertices);
  }
  double best_cost = kInf;
  std::vector<Complex> best;
  for (auto& c : candidates) {
    const double cost = polyline_cost(omega_, c);
    if (cost < best_cost) {
      best_cost = cost;
      best = std::move(c);
    }
  }
  if (!std::isfinite(best_cost)) {
    throw ResolutionError("no lattice path connects the endpoints at resolution " + std::to_string(h_));
  }

  const double finest = std::max(h_, std::abs(w - z) / kMaxRefinedSegments);
  optimize_vertices(omega_, best);
  while (max_segment(best) > finest) {
    best = subdivide(best, finest);
    optimize_vertices(omega_, best);
  }

  result.path.vertices = std::move(best);
  result.distance = path_length(omega_, result.path);
  result.refinement_gain = (best_cost - result.distance) / best_cost;
  return result;
}

GeodesicResult weighted_distance(const MetricDensity& omega, Complex z, Complex w, double resolution) {
  GeodesicSolver solver(omega, resolution);
  return solver.solve(z, w);
}

GeodesicResult refine(const MetricDensity& omega, const GeodesicResult& previous) {
  if (previous.path.vertices.empty()) throw ConfigError("cannot refine an empty result");
  GeodesicSolver solver(omega, 0.5 * previous.resolution);
  const Complex z = previous.path.vertices.front(), w = previous.path.vertices.back();
  return solver.solve(z, w, previous.divergent ? nullptr : &previous.path);
}

}  // namespace wmlab
