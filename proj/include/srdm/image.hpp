#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <png.h>

namespace srdm {

// Row-major 8-bit grayscale raster. The common currency for LR/HR/SR images.
struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> data;  // size == width * height

  GrayImage() = default;
  GrayImage(int w, int h, std::uint8_t fill = 0)
      : width(w), height(h), data(static_cast<std::size_t>(w) * h, fill) {
    if (w < 1 || h < 1) throw std::invalid_argument("GrayImage: zero dimension");
  }

  std::uint8_t at(int row, int col) const {
    return data[static_cast<std::size_t>(row) * width + col];
  }
  std::uint8_t& at(int row, int col) {
    return data[static_cast<std::size_t>(row) * width + col];
  }

  bool operator==(const GrayImage& o) const = default;
};

// Round-half-up on the 0-255 scale, used everywhere intensities are produced.
inline std::uint8_t quantize_intensity(double v) {
  double r = std::floor(v + 0.5);
  return static_cast<std::uint8_t>(std::clamp(r, 0.0, 255.0));
}

// BT.601 luma, rounded to nearest integer.
inline std::uint8_t rgb_to_luma(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  return quantize_intensity(0.299 * r + 0.587 * g + 0.114 * b);
}

namespace detail {

inline GrayImage load_pgm(std::istream& in, const std::string& path) {
  std::string magic;
  in >> magic;
  if (magic != "P5") throw std::runtime_error(path + ": not a P5 PGM");
  auto next_token = [&in, &path]() -> long {
    // skip whitespace and '#' comment lines
    for (;;) {
      int c = in.peek();
      if (c == '#') {
        std::string line;
        std::getline(in, line);
      } else if (std::isspace(c)) {
        in.get();
      } else {
        break;
      }
    }
    long v;
    if (!(in >> v)) throw std::runtime_error(path + ": truncated PGM header");
    return v;
  };
  long w = next_token();
  long h = next_token();
  long maxval = next_token();
  if (w < 1 || h < 1) throw std::runtime_error(path + ": zero-dimension image");
  if (maxval != 255) throw std::runtime_error(path + ": unsupported bit depth (maxval != 255)");
  in.get();  // single whitespace after maxval
  GrayImage img(static_cast<int>(w), static_cast<int>(h));
  in.read(reinterpret_cast<char*>(img.data.data()),
          static_cast<std::streamsize>(img.data.size()));
  if (in.gcount() != static_cast<std::streamsize>(img.data.size()))
    throw std::runtime_error(path + ": truncated PGM payload");
  return img;
}

struct PngReadCloser {
  png_structp png = nullptr;
  png_infop info = nullptr;
  std::FILE* fp = nullptr;
  ~PngReadCloser() {
    if (png) png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
    if (fp) std::fclose(fp);
  }
};

inline GrayImage load_png(const std::string& path) {
  PngReadCloser s;
  s.fp = std::fopen(path.c_str(), "rb");
  if (!s.fp) throw std::runtime_error(path + ": cannot open");
  s.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!s.png) throw std::runtime_error("png_create_read_struct failed");
  s.info = png_create_info_struct(s.png);
  if (!s.info) throw std::runtime_error("png_create_info_struct failed");
  if (setjmp(png_jmpbuf(s.png))) throw std::runtime_error(path + ": PNG decode error");

  png_init_io(s.png, s.fp);
  png_read_info(s.png, s.info);

  png_uint_32 w = png_get_image_width(s.png, s.info);
  png_uint_32 h = png_get_image_height(s.png, s.info);
  int bit_depth = png_get_bit_depth(s.png, s.info);
  int color_type = png_get_color_type(s.png, s.info);
  if (w < 1 || h < 1) throw std::runtime_error(path + ": zero-dimension image");
  if (bit_depth == 16) throw std::runtime_error(path + ": unsupported bit depth 16");

  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(s.png);
  if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) png_set_expand_gray_1_2_4_to_8(s.png);
  if (png_get_valid(s.png, s.info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(s.png);
  png_set_strip_alpha(s.png);
  png_read_update_info(s.png, s.info);

  int channels = png_get_channels(s.png, s.info);
  std::vector<std::uint8_t> row(png_get_rowbytes(s.png, s.info));
  GrayImage img(static_cast<int>(w), static_cast<int>(h));
  for (png_uint_32 y = 0; y < h; ++y) {
    png_read_row(s.png, row.data(), nullptr);
    for (png_uint_32 x = 0; x < w; ++x) {
      if (channels >= 3) {
        img.at(static_cast<int>(y), static_cast<int>(x)) =
            rgb_to_luma(row[x * channels], row[x * channels + 1], row[x * channels + 2]);
      } else {
        img.at(static_cast<int>(y), static_cast<int>(x)) = row[x * channels];
      }
    }
  }
  return img;
}

}  // namespace detail

// Decodes an 8-bit PNG (gray or RGB, luma-converted) or a binary PGM (P5).
inline GrayImage load_image(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(path + ": cannot open");
  unsigned char sig[2] = {0, 0};
  in.read(reinterpret_cast<char*>(sig), 2);
  in.seekg(0);
  if (sig[0] == 'P' && sig[1] == '5') return detail::load_pgm(in, path);
  if (sig[0] == 0x89 && sig[1] == 'P') return detail::load_png(path);
  throw std::runtime_error(path + ": unsupported image format (expect PNG or PGM P5)");
}

inline void save_pgm(const GrayImage& img, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path + ": cannot open for write");
  out << "P5\n" << img.width << " " << img.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.data.data()),
            static_cast<std::streamsize>(img.data.size()));
}

}  // namespace srdm
