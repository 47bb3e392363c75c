#pragma once

#include "chartex/image.hpp"

#include <filesystem>

namespace chartex::io {

class IoError : public Error {
 public:
  using Error::Error;
};

/// Decodes any 8/16-bit gray, gray+alpha, palette, RGB or RGBA PNG into RGB.
/// Alpha is composited over white.
RgbImage read_png(const std::filesystem::path& path);

void write_png(const std::filesystem::path& path, const RgbImage& img);
void write_png(const std::filesystem::path& path, const GrayImage& img);
void write_png(const std::filesystem::path& path, const BinaryImage& img);

}  // namespace chartex::io
