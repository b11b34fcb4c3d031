#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace srdm {

// First principal component of a point cloud by power iteration on the
// mean-centered covariance (matrix-free). Converges when the direction change
// between iterations drops below 1e-10, capped at 1000 iterations. The sign is
// fixed so the largest-magnitude component is positive.
inline std::vector<double> first_principal_component(const std::vector<std::vector<double>>& points) {
  if (points.size() < 2)
    throw std::invalid_argument("first_principal_component: need at least 2 points");
  const std::size_t dim = points[0].size();
  const std::size_t n = points.size();

  std::vector<double> mean(dim, 0.0);
  for (const auto& p : points) {
    if (p.size() != dim) throw std::invalid_argument("first_principal_component: ragged input");
    for (std::size_t d = 0; d < dim; ++d) mean[d] += p[d];
  }
  for (double& m : mean) m /= static_cast<double>(n);

  std::vector<std::vector<double>> centered(n, std::vector<double>(dim));
  double total_sq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t d = 0; d < dim; ++d) {
      centered[i][d] = points[i][d] - mean[d];
      total_sq += centered[i][d] * centered[i][d];
    }
  }
  if (total_sq == 0.0)
    throw std::invalid_argument("first_principal_component: degenerate input (all points equal)");

  // Deterministic start: unit vector along the axis of largest variance.
  std::vector<double> axis_var(dim, 0.0);
  for (const auto& c : centered)
    for (std::size_t d = 0; d < dim; ++d) axis_var[d] += c[d] * c[d];
  std::size_t best_axis = 0;
  for (std::size_t d = 1; d < dim; ++d)
    if (axis_var[d] > axis_var[best_axis]) best_axis = d;
  std::vector<double> v(dim, 0.0);
  v[best_axis] = 1.0;

  std::vector<double> next(dim);
  for (int iter = 0; iter < 1000; ++iter) {
    std::fill(next.begin(), next.end(), 0.0);
    for (const auto& c : centered) {
      double dot = 0.0;
      for (std::size_t d = 0; d < dim; ++d) dot += c[d] * v[d];
      for (std::size_t d = 0; d < dim; ++d) next[d] += dot * c[d];
    }
    double norm = 0.0;
    for (double x : next) norm += x * x;
    norm = std::sqrt(norm);
    if (norm == 0.0) {
      // v is orthogonal to the whole cloud; restart from the dominant axis
      // already done above, so this only happens for degenerate data.
      throw std::invalid_argument("first_principal_component: degenerate covariance");
    }
    double change = 0.0;
    for (std::size_t d = 0; d < dim; ++d) {
      next[d] /= norm;
      change += (next[d] - v[d]) * (next[d] - v[d]);
    }
    // Sign flips make |change| large even at convergence; compare against
    // both orientations.
    double change_neg = 0.0;
    for (std::size_t d = 0; d < dim; ++d) change_neg += (next[d] + v[d]) * (next[d] + v[d]);
    v = next;
    if (std::sqrt(std::min(change, change_neg)) < 1e-10) break;
  }

  std::size_t biggest = 0;
  for (std::size_t d = 1; d < dim; ++d)
    if (std::fabs(v[d]) > std::fabs(v[biggest])) biggest = d;
  if (v[biggest] < 0.0)
    for (double& x : v) x = -x;
  return v;
}

}  // namespace srdm
