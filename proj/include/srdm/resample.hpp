#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "srdm/image.hpp"

namespace srdm {

enum class Kernel { box, bicubic };

inline Kernel kernel_from_string(const std::string& s) {
  if (s == "box") return Kernel::box;
  if (s == "bicubic") return Kernel::bicubic;
  throw std::invalid_argument("unknown kernel: " + s);
}

inline const char* to_string(Kernel k) {
  return k == Kernel::box ? "box" : "bicubic";
}

namespace detail {

// Catmull-Rom (a = -0.5).
inline double cubic_weight(double t) {
  constexpr double a = -0.5;
  t = std::fabs(t);
  if (t <= 1.0) return ((a + 2.0) * t - (a + 3.0)) * t * t + 1.0;
  if (t < 2.0) return ((a * t - 5.0 * a) * t + 8.0 * a) * t - 4.0 * a;
  return 0.0;
}

// One antialiased bicubic tap row/column: taps at integer source positions
// around `center`, kernel stretched by `scale`, edges clamped.
struct CubicTaps {
  int first;
  std::vector<double> weights;  // normalized
};

inline CubicTaps make_taps(double center, double scale, int src_len) {
  double support = 2.0 * scale;
  int lo = static_cast<int>(std::ceil(center - support));
  int hi = static_cast<int>(std::floor(center + support));
  CubicTaps taps;
  taps.first = lo;
  taps.weights.reserve(static_cast<std::size_t>(hi - lo + 1));
  double sum = 0.0;
  for (int k = lo; k <= hi; ++k) {
    double w = cubic_weight((k - center) / scale);
    taps.weights.push_back(w);
    sum += w;
  }
  for (double& w : taps.weights) w /= sum;
  (void)src_len;
  return taps;
}

inline int clamp_index(int i, int len) { return i < 0 ? 0 : (i >= len ? len - 1 : i); }

}  // namespace detail

// Deterministic downsampling by an integer factor (the operator g).
// Box averages each s x s block; bicubic is a separable Catmull-Rom with the
// kernel width scaled by s for antialiasing and clamped edges. Both round
// half-up to 8 bits. The two agree exactly on constant images.
inline GrayImage downsample(const GrayImage& img, int s, Kernel kernel) {
  if (s < 2) throw std::invalid_argument("downsample: scale must be >= 2");
  if (img.width % s != 0 || img.height % s != 0)
    throw std::invalid_argument("downsample: dimensions not divisible by scale");
  const int ow = img.width / s;
  const int oh = img.height / s;
  GrayImage out(ow, oh);

  if (kernel == Kernel::box) {
    for (int i = 0; i < oh; ++i) {
      for (int j = 0; j < ow; ++j) {
        long sum = 0;
        for (int di = 0; di < s; ++di)
          for (int dj = 0; dj < s; ++dj) sum += img.at(i * s + di, j * s + dj);
        out.at(i, j) = quantize_intensity(static_cast<double>(sum) / (s * s));
      }
    }
    return out;
  }

  // Separable bicubic: horizontal pass into a float buffer, then vertical.
  std::vector<detail::CubicTaps> col_taps(ow), row_taps(oh);
  for (int j = 0; j < ow; ++j)
    col_taps[j] = detail::make_taps((j + 0.5) * s - 0.5, s, img.width);
  for (int i = 0; i < oh; ++i)
    row_taps[i] = detail::make_taps((i + 0.5) * s - 0.5, s, img.height);

  std::vector<double> tmp(static_cast<std::size_t>(img.height) * ow);
  for (int y = 0; y < img.height; ++y) {
    for (int j = 0; j < ow; ++j) {
      const auto& t = col_taps[j];
      double acc = 0.0;
      for (std::size_t n = 0; n < t.weights.size(); ++n)
        acc += t.weights[n] * img.at(y, detail::clamp_index(t.first + static_cast<int>(n), img.width));
      tmp[static_cast<std::size_t>(y) * ow + j] = acc;
    }
  }
  for (int i = 0; i < oh; ++i) {
    const auto& t = row_taps[i];
    for (int j = 0; j < ow; ++j) {
      double acc = 0.0;
      for (std::size_t n = 0; n < t.weights.size(); ++n)
        acc += t.weights[n] *
               tmp[static_cast<std::size_t>(detail::clamp_index(t.first + static_cast<int>(n), img.height)) * ow + j];
      out.at(i, j) = quantize_intensity(acc);
    }
  }
  return out;
}

}  // namespace srdm
