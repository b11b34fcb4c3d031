#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "srdm/distributions.hpp"

using namespace srdm;

namespace {

Histogram256 delta(int bin, std::uint64_t mass = 1) {
  Histogram256 h;
  h.counts[bin] = mass;
  h.total = mass;
  return h;
}

Histogram256 from_counts(const std::vector<std::pair<int, std::uint64_t>>& entries) {
  Histogram256 h;
  for (auto [bin, c] : entries) {
    h.counts[bin] += c;
    h.total += c;
  }
  return h;
}

// Independent W1 route: expand equal-total histograms into unit masses, sort,
// and average the absolute differences of the matched lists.
double sorted_matching_w1(const Histogram256& a, const Histogram256& b) {
  std::vector<int> xa, xb;
  for (int bin = 0; bin < 256; ++bin) {
    xa.insert(xa.end(), a.counts[bin], bin);
    xb.insert(xb.end(), b.counts[bin], bin);
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < xa.size(); ++i) sum += std::fabs(xa[i] - xb[i]);
  return sum / static_cast<double>(xa.size());
}

Histogram256 random_8bin(std::mt19937_64& rng, int total) {
  // distribute `total` unit masses over bins 0..7
  Histogram256 h;
  std::uniform_int_distribution<int> bin(0, 7);
  for (int i = 0; i < total; ++i) h.add(bin(rng));
  return h;
}

}  // namespace

TEST(Histogram, Counts) {
  Histogram256 h = histogram(std::vector<int>{0, 0, 255});
  EXPECT_EQ(h.counts[0], 2u);
  EXPECT_EQ(h.counts[255], 1u);
  EXPECT_EQ(h.total, 3u);
}

TEST(Histogram, UniformOnes) {
  std::vector<int> values(256);
  for (int i = 0; i < 256; ++i) values[i] = i;
  Histogram256 h = histogram(values);
  for (int i = 0; i < 256; ++i) EXPECT_EQ(h.counts[i], 1u);
}

TEST(Histogram, OrderIndependence) {
  std::mt19937_64 rng(2);
  std::vector<int> values(500);
  std::uniform_int_distribution<int> pix(0, 255);
  for (auto& v : values) v = pix(rng);
  auto shuffled = values;
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  EXPECT_EQ(histogram(values).counts, histogram(shuffled).counts);
}

TEST(Histogram, Errors) {
  EXPECT_THROW(histogram(std::vector<int>{}), std::invalid_argument);
  EXPECT_THROW(histogram(std::vector<int>{300}), std::invalid_argument);
}

TEST(W1, DeltaMasses) {
  EXPECT_DOUBLE_EQ(w1_distance(delta(0), delta(255)), 255.0);
  EXPECT_DOUBLE_EQ(w1_distance(delta(17), delta(40)), 23.0);
}

TEST(W1, SymmetricSplit) {
  Histogram256 p = from_counts({{0, 1}, {2, 1}});
  Histogram256 q = delta(1, 2);
  EXPECT_DOUBLE_EQ(w1_distance(p, q), 1.0);
}

TEST(W1, MatchesSortedMatchingOracle) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    Histogram256 a = random_8bin(rng, 64);
    Histogram256 b = random_8bin(rng, 64);
    EXPECT_NEAR(w1_distance(a, b), sorted_matching_w1(a, b), 1e-9);
  }
}

TEST(W1, TriangleInequality) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    Histogram256 a = random_8bin(rng, 32);
    Histogram256 b = random_8bin(rng, 48);
    Histogram256 c = random_8bin(rng, 16);
    EXPECT_LE(w1_distance(a, c), w1_distance(a, b) + w1_distance(b, c) + 1e-9);
  }
}

TEST(W1, ShiftCovariance) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 50; ++trial) {
    Histogram256 a = random_8bin(rng, 40);
    Histogram256 b = random_8bin(rng, 40);
    const int shift = 20;
    Histogram256 a_sh, b_sh;
    for (int bin = 0; bin < 8; ++bin) {
      a_sh.counts[bin + shift] = a.counts[bin];
      b_sh.counts[bin + shift] = b.counts[bin];
    }
    a_sh.total = a.total;
    b_sh.total = b.total;
    EXPECT_NEAR(w1_distance(a_sh, b_sh), w1_distance(a, b), 1e-9);
    EXPECT_LE(w1_distance(a_sh, b), w1_distance(a, b) + shift + 1e-9);
  }
}

TEST(Tv, Basics) {
  std::mt19937_64 rng(1);
  Histogram256 a = random_8bin(rng, 30);
  EXPECT_DOUBLE_EQ(tv_distance(a, a), 0.0);
  EXPECT_DOUBLE_EQ(tv_distance(delta(0), delta(200)), 1.0);  // disjoint supports
  Histogram256 p = from_counts({{0, 1}, {1, 1}});
  EXPECT_DOUBLE_EQ(tv_distance(p, delta(0, 2)), 0.5);
}

TEST(JsKl, IdenticalAreZero) {
  std::mt19937_64 rng(3);
  Histogram256 a = random_8bin(rng, 100);
  EXPECT_NEAR(js_divergence(a, a), 0.0, 1e-12);
  EXPECT_NEAR(kl_divergence(a, a), 0.0, 1e-9);
}

TEST(JsKl, DisjointSupports) {
  EXPECT_NEAR(js_divergence(delta(0), delta(255)), std::log(2.0), 1e-6);
}

TEST(JsKl, KlHalfSplit) {
  // KL(delta@0 || {0.5@0, 0.5@1}) = ln 2
  Histogram256 q = from_counts({{0, 1}, {1, 1}});
  EXPECT_NEAR(kl_divergence(delta(0), q), std::log(2.0), 1e-6);
}

TEST(JsKl, KlIsAsymmetric) {
  Histogram256 p = delta(0);
  Histogram256 q = from_counts({{0, 1}, {1, 1}});
  EXPECT_GT(std::fabs(kl_divergence(p, q) - kl_divergence(q, p)), 1.0);
}

TEST(Distances, Symmetry) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    Histogram256 a = random_8bin(rng, 25);
    Histogram256 b = random_8bin(rng, 75);
    EXPECT_NEAR(w1_distance(a, b), w1_distance(b, a), 1e-12);
    EXPECT_NEAR(tv_distance(a, b), tv_distance(b, a), 1e-12);
    EXPECT_NEAR(js_divergence(a, b), js_divergence(b, a), 1e-12);
  }
}

TEST(Distances, EmptyHistogramThrows) {
  Histogram256 empty;
  EXPECT_THROW(w1_distance(empty, delta(0)), std::invalid_argument);
  EXPECT_THROW(tv_distance(delta(0), empty), std::invalid_argument);
  EXPECT_THROW(js_divergence(empty, empty), std::invalid_argument);
  EXPECT_THROW(kl_divergence(empty, empty), std::invalid_argument);
}

TEST(SlicedW2, SimplePairs) {
  EXPECT_DOUBLE_EQ(sliced_w2({1, 3}, {2, 4}), 2.0);
  std::vector<double> x = {5, 1, 9, 2, 2};
  EXPECT_DOUBLE_EQ(sliced_w2(x, x), 0.0);
}

TEST(SlicedW2, SortInvariance) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 255.0);
  std::vector<double> x(64);
  for (auto& v : x) v = u(rng);
  auto shuffled = x;
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  EXPECT_NEAR(sliced_w2(x, shuffled), 0.0, 1e-12);
}

TEST(SlicedW2, ZeroIffSortedEqual) {
  std::vector<double> a = {1, 2, 3};
  std::vector<double> b = {1, 2, 3.5};
  EXPECT_GT(sliced_w2(a, b), 0.0);
}

TEST(SlicedW2, UnequalLengthsResampled) {
  // shorter {0, 10} resampled to {0, 5, 10} against itself-like target
  EXPECT_DOUBLE_EQ(sliced_w2({0, 10}, {0, 5, 10}), 0.0);
}

TEST(SlicedW2, EmptyThrows) {
  EXPECT_THROW(sliced_w2({}, {1.0}), std::invalid_argument);
}

TEST(SlicedW2Grad, SimplePair) {
  auto g = sliced_w2_grad({1, 3}, {2, 4});
  ASSERT_EQ(g.size(), 2u);
  EXPECT_DOUBLE_EQ(g[0], -2.0);
  EXPECT_DOUBLE_EQ(g[1], -2.0);
}

TEST(SlicedW2Grad, ZeroAtMatch) {
  std::vector<double> x = {4, 1, 7};
  for (double v : sliced_w2_grad(x, x)) EXPECT_DOUBLE_EQ(v, 0.0);
}

TEST(SlicedW2Grad, MatchesFiniteDifferences) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0.0, 255.0);
  const double h = 1e-4;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> gen(32), gt(32);
    // keep samples separated so the sort permutation is stable under +-h
    auto fill = [&](std::vector<double>& v) {
      for (;;) {
        for (auto& x : v) x = u(rng);
        auto s = v;
        std::sort(s.begin(), s.end());
        bool ok = true;
        for (std::size_t i = 1; i < s.size(); ++i)
          if (s[i] - s[i - 1] < 10 * h) ok = false;
        if (ok) return;
      }
    };
    fill(gen);
    fill(gt);
    auto grad = sliced_w2_grad(gen, gt);
    for (std::size_t i = 0; i < gen.size(); ++i) {
      auto plus = gen, minus = gen;
      plus[i] += h;
      minus[i] -= h;
      double fd = (sliced_w2(plus, gt) - sliced_w2(minus, gt)) / (2.0 * h);
      double denom = std::max(1.0, std::fabs(fd));
      EXPECT_LE(std::fabs(grad[i] - fd) / denom, 1e-4)
          << "trial " << trial << " component " << i;
    }
  }
}

TEST(SlicedW2Grad, LengthMismatchThrows) {
  EXPECT_THROW(sliced_w2_grad({1, 2}, {1, 2, 3}), std::invalid_argument);
}
