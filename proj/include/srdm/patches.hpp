#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "srdm/image.hpp"

namespace srdm {

// One aligned sample: an r x r LR patch plus the projected ground-truth and
// generated HR values (the scalar w^T Y* and w^T Y).
struct PatchSample {
  std::vector<std::uint8_t> lr_patch;  // r*r entries, row-major
  std::uint8_t gt_value = 0;
  std::uint8_t gen_value = 0;
  int image_id = 0;
  int row = 0;  // LR window top-left
  int col = 0;
};

struct PatchPairSet {
  int patch_size = 0;  // r, odd
  std::vector<PatchSample> samples;
};

struct PixelOffset {
  int dr = 0;
  int dc = 0;
};

inline PixelOffset default_pixel_offset(int s) { return {(s - 1) / 2, (s - 1) / 2}; }

// Slides an r x r window over the LR image at the given stride (windows fully
// inside, no padding). For a window with center LR pixel (i, j) the HR values
// are read at (s*i + dr, s*j + dc).
inline PatchPairSet extract_patch_pairs(const GrayImage& lr, const GrayImage& hr_gt,
                                        const GrayImage& hr_gen, int r, int s, int stride,
                                        PixelOffset offset, int image_id = 0) {
  if (r % 2 == 0) throw std::invalid_argument("extract_patch_pairs: r must be odd");
  if (stride < 1) throw std::invalid_argument("extract_patch_pairs: stride must be >= 1");
  if (hr_gt.width != lr.width * s || hr_gt.height != lr.height * s ||
      hr_gen.width != lr.width * s || hr_gen.height != lr.height * s)
    throw std::invalid_argument("extract_patch_pairs: HR dims must be s x LR dims");
  if (r > lr.width || r > lr.height)
    throw std::invalid_argument("extract_patch_pairs: r larger than image side");
  if (offset.dr < 0 || offset.dr >= s || offset.dc < 0 || offset.dc >= s)
    throw std::invalid_argument("extract_patch_pairs: pixel offset outside [0,s)");

  PatchPairSet out;
  out.patch_size = r;
  const int half = (r - 1) / 2;
  for (int row = 0; row + r <= lr.height; row += stride) {
    for (int col = 0; col + r <= lr.width; col += stride) {
      PatchSample smp;
      smp.lr_patch.reserve(static_cast<std::size_t>(r) * r);
      for (int di = 0; di < r; ++di)
        for (int dj = 0; dj < r; ++dj) smp.lr_patch.push_back(lr.at(row + di, col + dj));
      const int ci = row + half;
      const int cj = col + half;
      smp.gt_value = hr_gt.at(s * ci + offset.dr, s * cj + offset.dc);
      smp.gen_value = hr_gen.at(s * ci + offset.dr, s * cj + offset.dc);
      smp.image_id = image_id;
      smp.row = row;
      smp.col = col;
      out.samples.push_back(std::move(smp));
    }
  }
  return out;
}

inline PatchPairSet extract_patch_pairs(const GrayImage& lr, const GrayImage& hr_gt,
                                        const GrayImage& hr_gen, int r, int s, int stride,
                                        int image_id = 0) {
  return extract_patch_pairs(lr, hr_gt, hr_gen, r, s, stride, default_pixel_offset(s), image_id);
}

}  // namespace srdm
