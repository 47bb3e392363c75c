#include "chartex/imgproc.hpp"

#include <cmath>

namespace chartex::imgproc {

namespace {

inline int clampi(int v, int lo, int hi) { return v < lo ? lo : (v > hi ? hi : v); }

inline std::uint8_t to_u8(double v) {
  return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
}

}  // namespace

std::vector<double> gaussian_kernel(int kernel) {
  if (kernel < 1 || kernel % 2 == 0) throw InvalidArgument("gaussian kernel must be odd and >= 1");
  const double sigma = 0.3 * ((kernel - 1) / 2.0 - 1.0) + 0.8;
  const int r = kernel / 2;
  std::vector<double> k(kernel);
  double total = 0.0;
  for (int i = -r; i <= r; ++i) {
    k[i + r] = std::exp(-(i * i) / (2.0 * sigma * sigma));
    total += k[i + r];
  }
  for (double& v : k) v /= total;
  return k;
}

GrayImage gaussian_blur(const GrayImage& img, int kernel) {
  const auto k = gaussian_kernel(kernel);
  const int r = kernel / 2;
  const int w = static_cast<int>(img.cols()), h = static_cast<int>(img.rows());
  if (kernel == 1) return img;

  Raster<double> tmp(h, w);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int i = -r; i <= r; ++i) acc += k[i + r] * img(y, clampi(x + i, 0, w - 1));
      tmp(y, x) = acc;
    }
  GrayImage out(h, w);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int i = -r; i <= r; ++i) acc += k[i + r] * tmp(clampi(y + i, 0, h - 1), x);
      out(y, x) = to_u8(acc);
    }
  return out;
}

double sample_bilinear(const GrayImage& img, double x, double y) {
  const int w = static_cast<int>(img.cols()), h = static_cast<int>(img.rows());
  const int x0 = static_cast<int>(std::floor(x)), y0 = static_cast<int>(std::floor(y));
  const double fx = x - x0, fy = y - y0;
  auto at = [&](int xx, int yy) {
    return static_cast<double>(img(clampi(yy, 0, h - 1), clampi(xx, 0, w - 1)));
  };
  const double top = at(x0, y0) * (1 - fx) + at(x0 + 1, y0) * fx;
  const double bot = at(x0, y0 + 1) * (1 - fx) + at(x0 + 1, y0 + 1) * fx;
  return top * (1 - fy) + bot * fy;
}

namespace {

// Keys cubic convolution kernel, a = -0.5.
inline double cubic_weight(double t) {
  constexpr double a = -0.5;
  t = std::abs(t);
  if (t <= 1.0) return ((a + 2) * t - (a + 3)) * t * t + 1;
  if (t < 2.0) return ((a * t - 5 * a) * t + 8 * a) * t - 4 * a;
  return 0.0;
}

}  // namespace

GrayImage upscale(const GrayImage& img, int factor, Interpolation method) {
  if (factor < 1) throw InvalidArgument("upscale: factor must be >= 1");
  const int w = static_cast<int>(img.cols()), h = static_cast<int>(img.rows());
  const int ow = w * factor, oh = h * factor;
  GrayImage out(oh, ow);
  if (factor == 1) return img;

  switch (method) {
    case Interpolation::nearest:
      for (int y = 0; y < oh; ++y)
        for (int x = 0; x < ow; ++x) out(y, x) = img(y / factor, x / factor);
      break;
    case Interpolation::bilinear:
      for (int y = 0; y < oh; ++y) {
        const double sy = (y + 0.5) / factor - 0.5;
        for (int x = 0; x < ow; ++x) out(y, x) = to_u8(sample_bilinear(img, (x + 0.5) / factor - 0.5, sy));
      }
      break;
    case Interpolation::bicubic: {
      // Separable: horizontal pass into doubles, then vertical.
      Raster<double> tmp(h, ow);
      for (int x = 0; x < ow; ++x) {
        const double sx = (x + 0.5) / factor - 0.5;
        const int ix = static_cast<int>(std::floor(sx));
        double wts[4];
        for (int i = 0; i < 4; ++i) wts[i] = cubic_weight(sx - (ix - 1 + i));
        for (int y = 0; y < h; ++y) {
          double acc = 0.0;
          for (int i = 0; i < 4; ++i) acc += wts[i] * img(y, clampi(ix - 1 + i, 0, w - 1));
          tmp(y, x) = acc;
        }
      }
      for (int y = 0; y < oh; ++y) {
        const double sy = (y + 0.5) / factor - 0.5;
        const int iy = static_cast<int>(std::floor(sy));
        double wts[4];
        for (int i = 0; i < 4; ++i) wts[i] = cubic_weight(sy - (iy - 1 + i));
        for (int x = 0; x < ow; ++x) {
          double acc = 0.0;
          for (int i = 0; i < 4; ++i) acc += wts[i] * tmp(clampi(iy - 1 + i, 0, h - 1), x);
          out(y, x) = to_u8(acc);
        }
      }
      break;
    }
  }
  return out;
}

GrayImage subtract_mask(const GrayImage& img, const BinaryImage& mask) {
  if (img.rows() != mask.rows() || img.cols() != mask.cols())
    throw InvalidArgument("subtract_mask: image and mask dimensions differ");
  return mask.select(GrayImage::Constant(img.rows(), img.cols(), 255), img);
}

GrayImage rotate_cw(const GrayImage& img) {
  const Eigen::Index h = img.rows(), w = img.cols();
  GrayImage out(w, h);
  for (Eigen::Index y = 0; y < h; ++y)
    for (Eigen::Index x = 0; x < w; ++x) out(x, h - 1 - y) = img(y, x);
  return out;
}

GrayImage rotate_ccw(const GrayImage& img) {
  const Eigen::Index h = img.rows(), w = img.cols();
  GrayImage out(w, h);
  for (Eigen::Index y = 0; y < h; ++y)
    for (Eigen::Index x = 0; x < w; ++x) out(w - 1 - x, y) = img(y, x);
  return out;
}

}  // namespace chartex::imgproc
