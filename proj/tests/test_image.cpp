#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <random>

#include <png.h>

#include "srdm/image.hpp"
#include "srdm/patches.hpp"
#include "srdm/resample.hpp"

using namespace srdm;

namespace {

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("srdm_test_" + name);
}

void save_png_rgb(const std::string& path, int w, int h,
                  const std::vector<std::uint8_t>& rgb) {
  std::FILE* fp = std::fopen(path.c_str(), "wb");
  ASSERT_NE(fp, nullptr);
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png_create_info_struct(png);
  ASSERT_EQ(setjmp(png_jmpbuf(png)), 0);
  png_init_io(png, fp);
  png_set_IHDR(png, info, w, h, 8, PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int y = 0; y < h; ++y)
    png_write_row(png, const_cast<png_bytep>(&rgb[static_cast<std::size_t>(y) * w * 3]));
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  std::fclose(fp);
}

GrayImage random_image(int w, int h, std::mt19937& rng) {
  GrayImage img(w, h);
  std::uniform_int_distribution<int> pix(0, 255);
  for (auto& p : img.data) p = static_cast<std::uint8_t>(pix(rng));
  return img;
}

// Full 2-D convolution reference for the antialiased bicubic path.
double bicubic_oracle_pixel(const GrayImage& img, int oi, int oj, int s) {
  auto kernel = [](double t) {
    constexpr double a = -0.5;
    t = std::fabs(t);
    if (t <= 1.0) return ((a + 2.0) * t - (a + 3.0)) * t * t + 1.0;
    if (t < 2.0) return ((a * t - 5.0 * a) * t + 8.0 * a) * t - 4.0 * a;
    return 0.0;
  };
  double cy = (oi + 0.5) * s - 0.5;
  double cx = (oj + 0.5) * s - 0.5;
  double acc = 0.0, wsum = 0.0;
  for (int y = static_cast<int>(std::ceil(cy - 2.0 * s)); y <= std::floor(cy + 2.0 * s); ++y) {
    for (int x = static_cast<int>(std::ceil(cx - 2.0 * s)); x <= std::floor(cx + 2.0 * s); ++x) {
      double w = kernel((y - cy) / s) * kernel((x - cx) / s);
      int yy = std::clamp(y, 0, img.height - 1);
      int xx = std::clamp(x, 0, img.width - 1);
      acc += w * img.at(yy, xx);
      wsum += w;
    }
  }
  return acc / wsum;
}

}  // namespace

TEST(LoadImage, PgmPassthrough) {
  GrayImage img(1, 1, 128);
  auto path = temp_path("1x1.pgm");
  save_pgm(img, path.string());
  GrayImage back = load_image(path.string());
  EXPECT_EQ(back.width, 1);
  EXPECT_EQ(back.height, 1);
  EXPECT_EQ(back.data[0], 128);
}

TEST(LoadImage, RgbWhiteToLuma) {
  auto path = temp_path("white.png");
  save_png_rgb(path.string(), 1, 1, {255, 255, 255});
  EXPECT_EQ(load_image(path.string()).data[0], 255);
}

TEST(LoadImage, RgbRedToLuma) {
  // round(0.299 * 255) = 76
  auto path = temp_path("red.png");
  save_png_rgb(path.string(), 1, 1, {255, 0, 0});
  EXPECT_EQ(load_image(path.string()).data[0], 76);
}

TEST(LoadImage, PgmRoundTripRandom) {
  std::mt19937 rng(7);
  GrayImage img = random_image(17, 9, rng);
  auto path = temp_path("rt.pgm");
  save_pgm(img, path.string());
  EXPECT_EQ(load_image(path.string()), img);
}

TEST(LoadImage, Errors) {
  EXPECT_THROW(load_image("/nonexistent/file.png"), std::runtime_error);
  auto path = temp_path("bad.txt");
  std::ofstream(path) << "not an image";
  EXPECT_THROW(load_image(path.string()), std::runtime_error);
}

TEST(Downsample, BoxConstantBlock) {
  GrayImage img(2, 2, 10);
  GrayImage out = downsample(img, 2, Kernel::box);
  EXPECT_EQ(out.width, 1);
  EXPECT_EQ(out.data[0], 10);
}

TEST(Downsample, BoxRoundHalfUp) {
  GrayImage img(2, 2, 0);
  img.at(1, 1) = 2;  // mean 0.5 rounds half-up to 1
  EXPECT_EQ(downsample(img, 2, Kernel::box).data[0], 1);
}

TEST(Downsample, BicubicMatchesConvolutionOracle) {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 5; ++trial) {
    GrayImage img = random_image(16, 12, rng);
    GrayImage out = downsample(img, 4, Kernel::bicubic);
    for (int i = 0; i < out.height; ++i)
      for (int j = 0; j < out.width; ++j) {
        double ref = bicubic_oracle_pixel(img, i, j, 4);
        EXPECT_NEAR(static_cast<double>(out.at(i, j)), ref, 1.0);
      }
  }
}

TEST(Downsample, BicubicRamp) {
  GrayImage img(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) img.at(i, j) = static_cast<std::uint8_t>(10 * (4 * i + j));
  GrayImage out = downsample(img, 4, Kernel::bicubic);
  EXPECT_NEAR(static_cast<double>(out.data[0]), bicubic_oracle_pixel(img, 0, 0, 4), 1.0);
}

TEST(Downsample, BicubicEqualsBoxOnConstant) {
  for (int v : {0, 1, 37, 255}) {
    GrayImage img(8, 8, static_cast<std::uint8_t>(v));
    EXPECT_EQ(downsample(img, 4, Kernel::bicubic), downsample(img, 4, Kernel::box));
  }
}

TEST(Downsample, BoxBlockConstantRoundTrip) {
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> pix(0, 255);
  GrayImage lr(5, 4);
  for (auto& p : lr.data) p = static_cast<std::uint8_t>(pix(rng));
  GrayImage hr(20, 16);
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 20; ++j) hr.at(i, j) = lr.at(i / 4, j / 4);
  EXPECT_EQ(downsample(hr, 4, Kernel::box), lr);
}

TEST(Downsample, Errors) {
  GrayImage img(3, 3, 0);
  EXPECT_THROW(downsample(img, 2, Kernel::box), std::invalid_argument);
  EXPECT_THROW(downsample(img, 1, Kernel::box), std::invalid_argument);
}

TEST(ExtractPatchPairs, SingleFullWindow) {
  GrayImage lr(13, 13, 50);
  GrayImage hr_gt(52, 52, 0);
  GrayImage hr_gen(52, 52, 0);
  hr_gt.at(25, 25) = 200;  // 4*6 + 1, center LR pixel (6,6), default offset (1,1)
  hr_gen.at(25, 25) = 123;
  PatchPairSet ps = extract_patch_pairs(lr, hr_gt, hr_gen, 13, 4, 1);
  ASSERT_EQ(ps.samples.size(), 1u);
  EXPECT_EQ(ps.samples[0].row, 0);
  EXPECT_EQ(ps.samples[0].col, 0);
  EXPECT_EQ(ps.samples[0].gt_value, 200);
  EXPECT_EQ(ps.samples[0].gen_value, 123);
}

TEST(ExtractPatchPairs, TwoWindows) {
  GrayImage lr(13, 14, 0);  // width 13, height 14
  GrayImage hr(52, 56, 0);
  PatchPairSet ps = extract_patch_pairs(lr, hr, hr, 13, 4, 1);
  EXPECT_EQ(ps.samples.size(), 2u);
}

TEST(ExtractPatchPairs, IdenticalHrGivesEqualValues) {
  std::mt19937 rng(5);
  GrayImage lr = random_image(20, 20, rng);
  GrayImage hr = random_image(80, 80, rng);
  PatchPairSet ps = extract_patch_pairs(lr, hr, hr, 5, 4, 2);
  for (const auto& s : ps.samples) EXPECT_EQ(s.gt_value, s.gen_value);
}

TEST(ExtractPatchPairs, WindowCountProperty) {
  std::mt19937 rng(17);
  std::uniform_int_distribution<int> dim(13, 40), stride_d(1, 5);
  for (int trial = 0; trial < 20; ++trial) {
    int w = dim(rng), h = dim(rng), stride = stride_d(rng);
    int r = 2 * std::uniform_int_distribution<int>(1, 6)(rng) + 1;
    GrayImage lr(w, h, 0);
    GrayImage hr(2 * w, 2 * h, 0);
    PatchPairSet ps = extract_patch_pairs(lr, hr, hr, r, 2, stride);
    std::size_t expect = static_cast<std::size_t>((h - r) / stride + 1) *
                         static_cast<std::size_t>((w - r) / stride + 1);
    EXPECT_EQ(ps.samples.size(), expect);
  }
}

TEST(ExtractPatchPairs, Errors) {
  GrayImage lr(13, 13, 0);
  GrayImage hr(52, 52, 0);
  EXPECT_THROW(extract_patch_pairs(lr, hr, hr, 12, 4, 1), std::invalid_argument);  // even r
  EXPECT_THROW(extract_patch_pairs(lr, hr, hr, 15, 4, 1), std::invalid_argument);  // r too big
  GrayImage wrong(51, 52, 0);
  EXPECT_THROW(extract_patch_pairs(lr, wrong, hr, 13, 4, 1), std::invalid_argument);
}

TEST(ExtractPatchPairs, PixelOffsets) {
  GrayImage lr(5, 5, 0);
  GrayImage hr_gt(20, 20, 0);
  // center LR pixel of the single r=5 window is (2,2); s*2 = 8
  hr_gt.at(8, 8) = 11;    // top-left offset
  hr_gt.at(9, 9) = 22;    // default floor((4-1)/2) = (1,1)
  hr_gt.at(11, 11) = 33;  // bottom-right
  auto at = [&](PixelOffset off) {
    return extract_patch_pairs(lr, hr_gt, hr_gt, 5, 4, 1, off).samples[0].gt_value;
  };
  EXPECT_EQ(at({0, 0}), 11);
  EXPECT_EQ(at(default_pixel_offset(4)), 22);
  EXPECT_EQ(at({3, 3}), 33);
}
