#include <algorithm>
#include <limits>

#include "goat/error.hpp"
#include "goat/eval.hpp"
#include "goat/kernels.hpp"

namespace goat {
namespace {

struct Run {
  std::vector<int> assignments;
  std::vector<double> trace;
  double inertia = 0.0;
  std::size_t iterations = 0;
};

std::vector<double> seed_centers(const PointSet& pts, std::size_t k, Rng& rng) {
  const auto& kern = simd::active();
  const std::size_t d = pts.dim;
  std::vector<double> centers(k * d);
  std::uniform_int_distribution<std::size_t> first(0, pts.count - 1);
  const std::size_t c0 = first(rng);
  std::copy_n(pts.values.data() + c0 * d, d, centers.begin());

  std::vector<double> nearest(pts.count);
  for (std::size_t i = 0; i < pts.count; ++i)
    nearest[i] = kern.sqdist(pts.values.data() + i * d, centers.data(), d);
  for (std::size_t c = 1; c < k; ++c) {
    double total = 0.0;
    for (double x : nearest) total += x;
    std::size_t pick = 0;
    if (total > 0.0) {
      std::uniform_real_distribution<double> u(0.0, total);
      double target = u(rng);
      for (pick = 0; pick + 1 < pts.count; ++pick) {
        target -= nearest[pick];
        if (target < 0.0) break;
      }
    } else {
      pick = first(rng);
    }
    double* center = centers.data() + c * d;
    std::copy_n(pts.values.data() + pick * d, d, center);
    for (std::size_t i = 0; i < pts.count; ++i)
      nearest[i] = std::min(nearest[i], kern.sqdist(pts.values.data() + i * d, center, d));
  }
  return centers;
}

Run lloyd(const PointSet& pts, std::size_t k, std::size_t max_iter, Rng& rng) {
  const auto& kern = simd::active();
  const std::size_t d = pts.dim;
  std::vector<double> centers = seed_centers(pts, k, rng);
  Run run;
  run.assignments.assign(pts.count, -1);
  std::vector<double> dist(pts.count);
  std::vector<std::size_t> sizes(k);

  for (std::size_t iter = 0; iter < std::max<std::size_t>(max_iter, 1); ++iter) {
    bool changed = false;
    double inertia = 0.0;
    for (std::size_t i = 0; i < pts.count; ++i) {
      const double* p = pts.values.data() + i * d;
      double best = std::numeric_limits<double>::infinity();
      int arg = 0;
      for (std::size_t c = 0; c < k; ++c) {
        const double dd = kern.sqdist(p, centers.data() + c * d, d);
        if (dd < best) {
          best = dd;
          arg = static_cast<int>(c);
        }
      }
      if (run.assignments[i] != arg) changed = true;
      run.assignments[i] = arg;
      dist[i] = best;
      inertia += best;
    }
    run.trace.push_back(inertia);
    run.inertia = inertia;
    run.iterations = iter + 1;
    if (!changed && iter > 0) break;

    std::fill(centers.begin(), centers.end(), 0.0);
    std::fill(sizes.begin(), sizes.end(), 0);
    for (std::size_t i = 0; i < pts.count; ++i) {
      const auto c = static_cast<std::size_t>(run.assignments[i]);
      kern.axpy(1.0, pts.values.data() + i * d, centers.data() + c * d, d);
      ++sizes[c];
    }
    for (std::size_t c = 0; c < k; ++c) {
      double* center = centers.data() + c * d;
      if (sizes[c] == 0) {
        // Empty cluster: move it onto the worst-served point.
        const auto far = static_cast<std::size_t>(std::max_element(dist.begin(), dist.end()) - dist.begin());
        std::copy_n(pts.values.data() + far * d, d, center);
        dist[far] = 0.0;
        continue;
      }
      const double inv = 1.0 / static_cast<double>(sizes[c]);
      for (std::size_t j = 0; j < d; ++j) center[j] *= inv;
    }
  }
  return run;
}

}  // namespace

ClusterResult kmeans(const PointSet& points, const KMeansOptions& opts, Rng& rng) {
  if (opts.k == 0) throw ValidationError("k must be >= 1");
  if (opts.k > points.count)
    throw ValidationError("k = " + std::to_string(opts.k) + " exceeds the number of points (" +
                          std::to_string(points.count) + ")");
  ClusterResult best;
  best.inertia = std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < std::max<std::size_t>(opts.restarts, 1); ++r) {
    Run run = lloyd(points, opts.k, opts.max_iter, rng);
    if (run.inertia < best.inertia) {
      best.assignments = std::move(run.assignments);
      best.inertia = run.inertia;
      best.iterations = run.iterations;
      best.inertia_trace = std::move(run.trace);
    }
  }
  best.k = opts.k;
  return best;
}

}  // namespace goat
