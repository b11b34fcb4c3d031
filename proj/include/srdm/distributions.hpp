#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace srdm {

// Integer-count 256-bin distribution of projected HR values.
struct Histogram256 {
  std::array<std::uint64_t, 256> counts{};
  std::uint64_t total = 0;

  void add(int value) {
    if (value < 0 || value > 255) throw std::invalid_argument("Histogram256: value out of range");
    ++counts[value];
    ++total;
  }

  std::array<double, 256> pmf() const {
    if (total == 0) throw std::invalid_argument("Histogram256: empty histogram");
    std::array<double, 256> p;
    for (int i = 0; i < 256; ++i) p[i] = static_cast<double>(counts[i]) / static_cast<double>(total);
    return p;
  }
};

template <typename Range>
Histogram256 histogram(const Range& values) {
  Histogram256 h;
  for (auto v : values) h.add(static_cast<int>(v));
  if (h.total == 0) throw std::invalid_argument("histogram: empty input");
  return h;
}

enum class Distance { wasserstein, tv, js, kl };

inline Distance distance_from_string(const std::string& s) {
  if (s == "wasserstein") return Distance::wasserstein;
  if (s == "tv") return Distance::tv;
  if (s == "js") return Distance::js;
  if (s == "kl") return Distance::kl;
  throw std::invalid_argument("unknown distance: " + s);
}

inline const char* to_string(Distance d) {
  switch (d) {
    case Distance::wasserstein: return "wasserstein";
    case Distance::tv: return "tv";
    case Distance::js: return "js";
    default: return "kl";
  }
}

// W1 for 1-D distributions on the 0-255 grid: the L1 distance between CDFs,
// bin width one intensity unit. Range [0, 255].
inline double w1_distance(const Histogram256& a, const Histogram256& b) {
  auto pa = a.pmf();
  auto pb = b.pmf();
  double cdf_a = 0.0, cdf_b = 0.0, sum = 0.0;
  for (int k = 0; k < 255; ++k) {
    cdf_a += pa[k];
    cdf_b += pb[k];
    sum += std::fabs(cdf_a - cdf_b);
  }
  return sum;
}

inline double tv_distance(const Histogram256& a, const Histogram256& b) {
  auto pa = a.pmf();
  auto pb = b.pmf();
  double sum = 0.0;
  for (int k = 0; k < 256; ++k) sum += std::fabs(pa[k] - pb[k]);
  return 0.5 * sum;
}

namespace detail {

constexpr double kSmoothingEps = 1e-10;

inline std::array<double, 256> smoothed_pmf(const Histogram256& h) {
  auto p = h.pmf();
  double total = 0.0;
  for (double& x : p) {
    x += kSmoothingEps;
    total += x;
  }
  for (double& x : p) x /= total;
  return p;
}

inline double kl_on_pmfs(const std::array<double, 256>& p, const std::array<double, 256>& q) {
  double sum = 0.0;
  for (int k = 0; k < 256; ++k) {
    if (p[k] > 0.0) sum += p[k] * std::log(p[k] / q[k]);
  }
  return sum;
}

}  // namespace detail

// KL on epsilon-smoothed, renormalized pmfs (keeps disjoint supports finite).
inline double kl_divergence(const Histogram256& a, const Histogram256& b) {
  return detail::kl_on_pmfs(detail::smoothed_pmf(a), detail::smoothed_pmf(b));
}

inline double js_divergence(const Histogram256& a, const Histogram256& b) {
  auto p = detail::smoothed_pmf(a);
  auto q = detail::smoothed_pmf(b);
  std::array<double, 256> m;
  for (int k = 0; k < 256; ++k) m[k] = 0.5 * (p[k] + q[k]);
  return 0.5 * detail::kl_on_pmfs(p, m) + 0.5 * detail::kl_on_pmfs(q, m);
}

inline double distribution_distance(const Histogram256& a, const Histogram256& b, Distance d) {
  switch (d) {
    case Distance::wasserstein: return w1_distance(a, b);
    case Distance::tv: return tv_distance(a, b);
    case Distance::js: return js_divergence(a, b);
    default: return kl_divergence(a, b);
  }
}

namespace detail {

// Linear quantile interpolation of a sorted sample to a new length.
inline std::vector<double> quantile_resample(const std::vector<double>& sorted, std::size_t n) {
  if (sorted.size() == n) return sorted;
  std::vector<double> out(n);
  if (sorted.size() == 1) {
    std::fill(out.begin(), out.end(), sorted.front());
    return out;
  }
  const double step = static_cast<double>(sorted.size() - 1) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    double t = i * step;
    std::size_t lo = static_cast<std::size_t>(t);
    if (lo >= sorted.size() - 1) {
      out[i] = sorted.back();
    } else {
      double frac = t - static_cast<double>(lo);
      out[i] = sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
    }
  }
  return out;
}

}  // namespace detail

// Sliced Wasserstein-2 loss on 1-D samples: sort both sides ascending and sum
// squared differences. Unequal lengths are handled by quantile-resampling the
// shorter list to the longer's length.
inline double sliced_w2(std::vector<double> gen, std::vector<double> gt) {
  if (gen.empty() || gt.empty()) throw std::invalid_argument("sliced_w2: empty input");
  std::sort(gen.begin(), gen.end());
  std::sort(gt.begin(), gt.end());
  if (gen.size() != gt.size()) {
    if (gen.size() < gt.size())
      gen = detail::quantile_resample(gen, gt.size());
    else
      gt = detail::quantile_resample(gt, gen.size());
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < gen.size(); ++i) {
    double d = gen[i] - gt[i];
    sum += d * d;
  }
  return sum;
}

// Gradient of sliced_w2 with respect to each gen element, routed through the
// sort permutation (stable: ties keep original order).
inline std::vector<double> sliced_w2_grad(const std::vector<double>& gen,
                                          const std::vector<double>& gt) {
  if (gen.size() != gt.size())
    throw std::invalid_argument("sliced_w2_grad: length mismatch (resample gt first)");
  if (gen.empty()) throw std::invalid_argument("sliced_w2_grad: empty input");
  std::vector<std::size_t> order(gen.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&gen](std::size_t a, std::size_t b) { return gen[a] < gen[b]; });
  std::vector<double> gt_sorted = gt;
  std::sort(gt_sorted.begin(), gt_sorted.end());
  std::vector<double> grad(gen.size());
  for (std::size_t i = 0; i < order.size(); ++i)
    grad[order[i]] = 2.0 * (gen[order[i]] - gt_sorted[i]);
  return grad;
}

}  // namespace srdm
