#include "chartex/png_io.hpp"

#include <png.h>

#include <vector>

namespace chartex::io {

RgbImage read_png(const std::filesystem::path& path) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&image, path.c_str()))
    throw IoError(path.string() + ": " + image.message);
  image.format = PNG_FORMAT_RGB;
  std::vector<png_byte> data(PNG_IMAGE_SIZE(image));
  const png_color white{255, 255, 255};
  if (!png_image_finish_read(&image, &white, data.data(), 0, nullptr)) {
    png_image_free(&image);
    throw IoError(path.string() + ": " + image.message);
  }
  const int w = static_cast<int>(image.width), h = static_cast<int>(image.height);
  RgbImage out(w, h);
  std::size_t i = 0;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x, i += 3) out.set(x, y, data[i], data[i + 1], data[i + 2]);
  return out;
}

namespace {

void write_buffer(const std::filesystem::path& path, int w, int h, png_uint_32 format, const void* buffer) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(w);
  image.height = static_cast<png_uint_32>(h);
  image.format = format;
  if (!png_image_write_to_file(&image, path.c_str(), 0, buffer, 0, nullptr))
    throw IoError(path.string() + ": " + image.message);
}

}  // namespace

void write_png(const std::filesystem::path& path, const RgbImage& img) {
  const int w = static_cast<int>(img.width()), h = static_cast<int>(img.height());
  std::vector<png_byte> data(static_cast<std::size_t>(w) * h * 3);
  std::size_t i = 0;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      data[i++] = img.r(y, x);
      data[i++] = img.g(y, x);
      data[i++] = img.b(y, x);
    }
  write_buffer(path, w, h, PNG_FORMAT_RGB, data.data());
}

void write_png(const std::filesystem::path& path, const GrayImage& img) {
  write_buffer(path, static_cast<int>(img.cols()), static_cast<int>(img.rows()), PNG_FORMAT_GRAY, img.data());
}

void write_png(const std::filesystem::path& path, const BinaryImage& img) { write_png(path, to_gray(img)); }

}  // namespace chartex::io
