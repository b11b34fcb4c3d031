#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include "srdm/parallel.hpp"

namespace srdm {

struct KMeansResult {
  std::vector<std::vector<double>> centroids;  // k centroids of dimension d
  std::vector<int> assignments;                // per point, in [0, k)
  double objective = 0.0;                      // within-cluster sum of squared distances
  int iterations = 0;
};

namespace detail {

inline double sq_dist(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t d = 0; d < a.size(); ++d) {
    double diff = a[d] - b[d];
    s += diff * diff;
  }
  return s;
}

}  // namespace detail

// Lloyd's algorithm with k-means++ seeding. Nearest-centroid ties break toward
// the lowest centroid index; an empty cluster is re-seeded to the point
// farthest from its currently assigned centroid. Stops when the largest
// centroid movement falls below 1e-4 or after 100 iterations.
inline KMeansResult kmeans(const std::vector<std::vector<double>>& points, int k,
                           std::uint64_t seed) {
  if (k < 1) throw std::invalid_argument("kmeans: k must be >= 1");
  if (static_cast<std::size_t>(k) > points.size())
    throw std::invalid_argument("kmeans: k exceeds number of points");
  const std::size_t n = points.size();

  std::mt19937_64 rng(seed);
  KMeansResult res;
  res.centroids.reserve(k);

  // k-means++ seeding.
  {
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    res.centroids.push_back(points[pick(rng)]);
    std::vector<double> d2(n);
    for (int c = 1; c < k; ++c) {
      double total = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& ctr : res.centroids)
          best = std::min(best, detail::sq_dist(points[i], ctr));
        d2[i] = best;
        total += best;
      }
      if (total == 0.0) {
        // All points coincide with existing centroids; duplicate any point.
        res.centroids.push_back(points[pick(rng)]);
        continue;
      }
      std::uniform_real_distribution<double> u(0.0, total);
      double target = u(rng);
      std::size_t chosen = n - 1;
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        acc += d2[i];
        if (acc >= target) {
          chosen = i;
          break;
        }
      }
      res.centroids.push_back(points[chosen]);
    }
  }

  res.assignments.assign(n, 0);
  std::vector<double> point_d2(n);
  double prev_objective = std::numeric_limits<double>::infinity();

  for (int iter = 0; iter < 100; ++iter) {
    // Assignment (parallel, per-index writes).
    parallel_for(n, [&](std::size_t i) {
      int best = 0;
      double best_d = detail::sq_dist(points[i], res.centroids[0]);
      for (int c = 1; c < k; ++c) {
        double d = detail::sq_dist(points[i], res.centroids[c]);
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      res.assignments[i] = best;
      point_d2[i] = best_d;
    });

    // Re-seed empty clusters to the point farthest from its current centroid.
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < n; ++i) ++counts[res.assignments[i]];
    for (int c = 0; c < k; ++c) {
      if (counts[c] != 0) continue;
      std::size_t far = 0;
      for (std::size_t i = 0; i < n; ++i)
        if (point_d2[i] > point_d2[far]) far = i;
      --counts[res.assignments[far]];
      res.assignments[far] = c;
      counts[c] = 1;
      res.centroids[c] = points[far];
      point_d2[far] = 0.0;
    }

    double objective = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      objective += detail::sq_dist(points[i], res.centroids[res.assignments[i]]);
    // Lloyd guarantees monotone objective up to FP noise.
    if (objective > prev_objective + 1e-9 * (1.0 + prev_objective))
      throw std::logic_error("kmeans: objective increased");
    prev_objective = objective;

    // Update (serial, fixed order).
    const std::size_t dim = points[0].size();
    std::vector<std::vector<double>> sums(k, std::vector<double>(dim, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
      auto& s = sums[res.assignments[i]];
      for (std::size_t d = 0; d < dim; ++d) s[d] += points[i][d];
    }
    double max_move = 0.0;
    for (int c = 0; c < k; ++c) {
      if (counts[c] == 0) continue;
      double move = 0.0;
      for (std::size_t d = 0; d < dim; ++d) {
        double nc = sums[c][d] / static_cast<double>(counts[c]);
        double diff = nc - res.centroids[c][d];
        move += diff * diff;
        res.centroids[c][d] = nc;
      }
      max_move = std::max(max_move, std::sqrt(move));
    }
    res.iterations = iter + 1;
    if (max_move < 1e-4) break;
  }

  // Final assignment against the converged centroids.
  parallel_for(n, [&](std::size_t i) {
    int best = 0;
    double best_d = detail::sq_dist(points[i], res.centroids[0]);
    for (int c = 1; c < k; ++c) {
      double d = detail::sq_dist(points[i], res.centroids[c]);
      if (d < best_d) {
        best_d = d;
        best = c;
      }
    }
    res.assignments[i] = best;
    point_d2[i] = best_d;
  });
  res.objective = 0.0;
  for (std::size_t i = 0; i < n; ++i) res.objective += point_d2[i];
  return res;
}

}  // namespace srdm
