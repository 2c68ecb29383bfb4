#include <png.h>

#include <cmath>
#include <cstdio>
#include <memory>

#include "wsg/dataset.hpp"

namespace wsg {

namespace {

struct FileCloser {
  void operator()(FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<FILE, FileCloser>;

struct PngRaster {
  int width = 0;
  int height = 0;
  int channels = 0;
  int bit_depth = 0;
  std::vector<uint16_t> samples;  // interleaved
};

PngRaster read_png(const std::string& path) {
  FilePtr fp(std::fopen(path.c_str(), "rb"));
  if (!fp) throw Error("cannot open PNG for reading: " + path);

  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw Error("libpng init failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw Error("failed to decode PNG: " + path);
  }
  png_init_io(png, fp.get());
  png_read_info(png, info);

  png_byte color_type = png_get_color_type(png, info);
  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color_type == PNG_COLOR_TYPE_GRAY && png_get_bit_depth(png, info) < 8)
    png_set_expand_gray_1_2_4_to_8(png);
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  png_read_update_info(png, info);

  PngRaster r;
  r.width = static_cast<int>(png_get_image_width(png, info));
  r.height = static_cast<int>(png_get_image_height(png, info));
  r.channels = png_get_channels(png, info);
  r.bit_depth = png_get_bit_depth(png, info);
  if (r.bit_depth != 8 && r.bit_depth != 16) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw Error("unsupported PNG bit depth in " + path);
  }

  std::vector<png_byte> row(png_get_rowbytes(png, info));
  r.samples.resize(static_cast<size_t>(r.width) * r.height * r.channels);
  for (int i = 0; i < r.height; ++i) {
    png_read_row(png, row.data(), nullptr);
    size_t base = static_cast<size_t>(i) * r.width * r.channels;
    if (r.bit_depth == 8) {
      for (size_t s = 0; s < static_cast<size_t>(r.width) * r.channels; ++s)
        r.samples[base + s] = row[s];
    } else {
      for (size_t s = 0; s < static_cast<size_t>(r.width) * r.channels; ++s)
        r.samples[base + s] = static_cast<uint16_t>((row[2 * s] << 8) | row[2 * s + 1]);
    }
  }
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return r;
}

void write_png(const std::string& path, int width, int height, int channels,
               int bit_depth, const std::vector<uint16_t>& samples) {
  FilePtr fp(std::fopen(path.c_str(), "wb"));
  if (!fp) throw Error("cannot open PNG for writing: " + path);

  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_write_struct(&png, &info);
    throw Error("libpng init failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw Error("failed to encode PNG: " + path);
  }
  png_init_io(png, fp.get());
  int color = channels == 1   ? PNG_COLOR_TYPE_GRAY
              : channels == 3 ? PNG_COLOR_TYPE_RGB
                              : PNG_COLOR_TYPE_RGBA;
  png_set_IHDR(png, info, width, height, bit_depth, color, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);

  std::vector<png_byte> row(static_cast<size_t>(width) * channels * (bit_depth / 8));
  for (int i = 0; i < height; ++i) {
    size_t base = static_cast<size_t>(i) * width * channels;
    if (bit_depth == 8) {
      for (size_t s = 0; s < static_cast<size_t>(width) * channels; ++s)
        row[s] = static_cast<png_byte>(samples[base + s]);
    } else {
      for (size_t s = 0; s < static_cast<size_t>(width) * channels; ++s) {
        row[2 * s] = static_cast<png_byte>(samples[base + s] >> 8);
        row[2 * s + 1] = static_cast<png_byte>(samples[base + s] & 0xff);
      }
    }
    png_write_row(png, row.data());
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

}  // namespace

Image load_image(const std::string& path) {
  PngRaster r = read_png(path);
  if (r.channels != 1 && r.channels != 3 && r.channels != 4)
    throw Error("unsupported channel count in " + path);
  double maxval = (r.bit_depth == 8) ? 255.0 : 65535.0;
  Image img;
  for (int c = 0; c < r.channels; ++c) {
    Plane p(r.width, r.height);
    for (int i = 0; i < r.height; ++i)
      for (int j = 0; j < r.width; ++j)
        p.at(i, j) = r.samples[(static_cast<size_t>(i) * r.width + j) * r.channels + c] / maxval;
    img.channels.push_back(std::move(p));
  }
  return img;
}

LabelMap load_labels(const std::string& path, int class_count) {
  PngRaster r = read_png(path);
  if (r.channels != 1 || r.bit_depth != 8)
    throw Error("label map must be single-channel 8-bit PNG: " + path);
  LabelMap lm;
  lm.width = r.width;
  lm.height = r.height;
  lm.labels.resize(static_cast<size_t>(r.width) * r.height);
  for (int i = 0; i < r.height; ++i) {
    for (int j = 0; j < r.width; ++j) {
      uint16_t v = r.samples[static_cast<size_t>(i) * r.width + j];
      if (v != kVoidLabel && v >= class_count)
        throw Error("label value " + std::to_string(v) + " out of range at pixel (" +
                    std::to_string(i) + "," + std::to_string(j) + ") in " + path);
      lm.labels[static_cast<size_t>(i) * r.width + j] = static_cast<uint8_t>(v);
    }
  }
  return lm;
}

void save_labels(const std::string& path, const LabelMap& labels) {
  std::vector<uint16_t> samples(labels.labels.begin(), labels.labels.end());
  write_png(path, labels.width, labels.height, 1, 8, samples);
}

void save_image_u8(const std::string& path, const Image& image) {
  int c = static_cast<int>(image.channels.size());
  if (c != 1 && c != 3 && c != 4) throw Error("save_image_u8: unsupported channel count");
  std::vector<uint16_t> samples(static_cast<size_t>(image.width()) * image.height() * c);
  for (int ch = 0; ch < c; ++ch)
    for (int i = 0; i < image.height(); ++i)
      for (int j = 0; j < image.width(); ++j) {
        double v = std::clamp(image.channels[ch].at(i, j), 0.0, 1.0);
        samples[(static_cast<size_t>(i) * image.width() + j) * c + ch] =
            static_cast<uint16_t>(std::lround(v * 255.0));
      }
  write_png(path, image.width(), image.height(), c, 8, samples);
}

void save_plane_u16(const std::string& path, const Plane& plane) {
  std::vector<uint16_t> samples(plane.size());
  for (size_t s = 0; s < plane.size(); ++s) {
    double v = std::clamp(plane.values[s], 0.0, 1.0);
    samples[s] = static_cast<uint16_t>(std::lround(v * 65535.0));
  }
  write_png(path, plane.width, plane.height, 1, 16, samples);
}

}  // namespace wsg
