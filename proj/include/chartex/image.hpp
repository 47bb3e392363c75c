#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace chartex {

/// Row-major raster indexed as (y, x). Width is cols(), height is rows().
template <typename Scalar>
using Raster = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// 8-bit intensities, 0 = black, 255 = white.
using GrayImage = Raster<std::uint8_t>;
/// true = foreground (dark ink under the dark-on-light convention).
using BinaryImage = Raster<bool>;
using FloatImage = Raster<float>;
/// Summed-area table; entry (y, x) holds the sum over [0..x] x [0..y].
using IntegralImage = Raster<std::int64_t>;
/// Per-pixel component id, 0 = background.
using LabelImage = Raster<std::int32_t>;

struct RgbImage {
  GrayImage r, g, b;

  RgbImage() = default;
  RgbImage(Eigen::Index width, Eigen::Index height, std::uint8_t fill = 255)
      : r(GrayImage::Constant(height, width, fill)),
        g(GrayImage::Constant(height, width, fill)),
        b(GrayImage::Constant(height, width, fill)) {}

  Eigen::Index width() const { return r.cols(); }
  Eigen::Index height() const { return r.rows(); }

  void set(int x, int y, std::uint8_t rv, std::uint8_t gv, std::uint8_t bv) {
    r(y, x) = rv;
    g(y, x) = gv;
    b(y, x) = bv;
  }
};

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;
  friend bool operator==(const Rgb&, const Rgb&) = default;
};

struct Point {
  int x = 0;
  int y = 0;
  friend bool operator==(const Point&, const Point&) = default;
};

/// Half-open pixel rectangle [x, x+w) x [y, y+h).
struct Rect {
  int x = 0;
  int y = 0;
  int w = 0;
  int h = 0;

  int right() const { return x + w; }
  int bottom() const { return y + h; }
  int area() const { return w * h; }
  bool empty() const { return w <= 0 || h <= 0; }
  double cx() const { return x + w / 2.0; }
  double cy() const { return y + h / 2.0; }
  bool contains(int px, int py) const {
    return px >= x && px < right() && py >= y && py < bottom();
  }
  bool contains(const Rect& o) const {
    return o.x >= x && o.y >= y && o.right() <= right() && o.bottom() <= bottom();
  }

  friend bool operator==(const Rect&, const Rect&) = default;
};

inline Rect intersect(const Rect& a, const Rect& b) {
  const int x0 = std::max(a.x, b.x);
  const int y0 = std::max(a.y, b.y);
  const int x1 = std::min(a.right(), b.right());
  const int y1 = std::min(a.bottom(), b.bottom());
  if (x1 <= x0 || y1 <= y0) return {};
  return {x0, y0, x1 - x0, y1 - y0};
}

inline Rect unite(const Rect& a, const Rect& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  const int x0 = std::min(a.x, b.x);
  const int y0 = std::min(a.y, b.y);
  return {x0, y0, std::max(a.right(), b.right()) - x0, std::max(a.bottom(), b.bottom()) - y0};
}

inline Rect clip(const Rect& r, int width, int height) {
  return intersect(r, Rect{0, 0, width, height});
}

inline Rect expand(const Rect& r, int by) { return {r.x - by, r.y - by, r.w + 2 * by, r.h + 2 * by}; }

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller violated a documented precondition (dimension mismatch, bad parameter).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

template <typename Scalar>
Raster<Scalar> crop(const Raster<Scalar>& img, const Rect& r) {
  const Rect c = clip(r, static_cast<int>(img.cols()), static_cast<int>(img.rows()));
  if (c.empty()) return Raster<Scalar>(0, 0);
  return img.block(c.y, c.x, c.h, c.w);
}

inline RgbImage crop(const RgbImage& img, const Rect& r) {
  RgbImage out;
  out.r = crop(img.r, r);
  out.g = crop(img.g, r);
  out.b = crop(img.b, r);
  return out;
}

/// Foreground rendered black on white.
inline GrayImage to_gray(const BinaryImage& bin) {
  return bin.select(GrayImage::Constant(bin.rows(), bin.cols(), 0),
                    GrayImage::Constant(bin.rows(), bin.cols(), 255));
}

}  // namespace chartex
