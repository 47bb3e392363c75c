#include "chartex/imgproc.hpp"

#include <cmath>

namespace chartex::imgproc {

GrayImage to_grayscale(const RgbImage& rgb) {
  GrayImage out(rgb.height(), rgb.width());
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    const int v = 299 * rgb.r.data()[i] + 587 * rgb.g.data()[i] + 114 * rgb.b.data()[i];
    out.data()[i] = static_cast<std::uint8_t>((v + 500) / 1000);
  }
  return out;
}

RgbImage gray_to_rgb(const GrayImage& gray) {
  RgbImage out;
  out.r = gray;
  out.g = gray;
  out.b = gray;
  return out;
}

std::array<std::int64_t, 256> histogram(const GrayImage& img) {
  std::array<std::int64_t, 256> hist{};
  for (Eigen::Index i = 0; i < img.size(); ++i) ++hist[img.data()[i]];
  return hist;
}

namespace {

struct ClassSums {
  std::int64_t n = 0, s = 0;      // totals
  std::int64_t n0 = 0, s0 = 0;    // class below t
};

ClassSums sums_below(const std::array<std::int64_t, 256>& hist, int t) {
  ClassSums c;
  for (int v = 0; v < 256; ++v) {
    c.n += hist[v];
    c.s += hist[v] * v;
    if (v < t) {
      c.n0 += hist[v];
      c.s0 += hist[v] * v;
    }
  }
  return c;
}

}  // namespace

double between_class_variance(const std::array<std::int64_t, 256>& hist, int t) {
  const ClassSums c = sums_below(hist, t);
  const std::int64_t n1 = c.n - c.n0;
  if (c.n0 == 0 || n1 == 0) return 0.0;
  const double w0 = static_cast<double>(c.n0) / c.n;
  const double w1 = static_cast<double>(n1) / c.n;
  const double mu0 = static_cast<double>(c.s0) / c.n0;
  const double mu1 = static_cast<double>(c.s - c.s0) / n1;
  return w0 * w1 * (mu0 - mu1) * (mu0 - mu1);
}

OtsuResult otsu_binarize(const GrayImage& img) {
  if (img.size() == 0) throw InvalidArgument("otsu_binarize: empty image");
  const auto hist = histogram(img);

  // The between-class variance is proportional to (N*S0 - n0*S)^2 / (n0*n1); compare
  // those fractions exactly where 128-bit products cannot overflow.
  std::int64_t total = 0, sum = 0;
  for (int v = 0; v < 256; ++v) {
    total += hist[v];
    sum += hist[v] * v;
  }
  const bool exact = total <= (std::int64_t{1} << 17);

  int best_t = -1;
  __int128 best_num = 0, best_den = 1;
  long double best_ratio = -1.0L;
  std::int64_t n0 = 0, s0 = 0;
  for (int t = 1; t < 256; ++t) {
    n0 += hist[t - 1];
    s0 += hist[t - 1] * (t - 1);
    const std::int64_t n1 = total - n0;
    if (n0 == 0 || n1 == 0) continue;
    const __int128 diff = static_cast<__int128>(total) * s0 - static_cast<__int128>(n0) * sum;
    const __int128 num = diff * diff;
    const __int128 den = static_cast<__int128>(n0) * n1;
    bool better;
    if (exact) {
      better = best_t < 0 || num * best_den > best_num * den;
    } else {
      const long double ratio = static_cast<long double>(num) / static_cast<long double>(den);
      better = best_t < 0 || ratio > best_ratio;
      if (better) best_ratio = ratio;
    }
    if (better) {
      best_t = t;
      best_num = num;
      best_den = den;
    }
  }

  OtsuResult out;
  if (best_t < 0 || best_num == 0) {
    // Uniform image: every pixel sits at one intensity, nothing is below it.
    out.threshold = img(0, 0);
    out.binary = BinaryImage::Constant(img.rows(), img.cols(), false);
    return out;
  }
  out.threshold = best_t;
  out.binary = img.template cast<int>() < best_t;
  return out;
}

IntegralImage integral_image(const GrayImage& img) {
  IntegralImage table(img.rows(), img.cols());
  for (Eigen::Index y = 0; y < img.rows(); ++y) {
    std::int64_t row = 0;
    for (Eigen::Index x = 0; x < img.cols(); ++x) {
      row += img(y, x);
      table(y, x) = row + (y > 0 ? table(y - 1, x) : 0);
    }
  }
  return table;
}

std::int64_t rect_sum(const IntegralImage& table, int x0, int y0, int x1, int y1) {
  std::int64_t s = table(y1, x1);
  if (x0 > 0) s -= table(y1, x0 - 1);
  if (y0 > 0) s -= table(y0 - 1, x1);
  if (x0 > 0 && y0 > 0) s += table(y0 - 1, x0 - 1);
  return s;
}

BinaryImage adaptive_threshold(const GrayImage& img, int window, double t_pct) {
  const int w = static_cast<int>(img.cols());
  const int h = static_cast<int>(img.rows());
  if (window <= 0) window = std::max(3, w / 8);
  if (window < 3) throw InvalidArgument("adaptive_threshold: window must be >= 3");
  const int half = window / 2;
  const IntegralImage table = integral_image(img);
  const double keep = 100.0 - t_pct;

  BinaryImage out(h, w);
  for (int y = 0; y < h; ++y) {
    const int y0 = std::max(0, y - half), y1 = std::min(h - 1, y + half);
    for (int x = 0; x < w; ++x) {
      const int x0 = std::max(0, x - half), x1 = std::min(w - 1, x + half);
      const std::int64_t count = static_cast<std::int64_t>(x1 - x0 + 1) * (y1 - y0 + 1);
      const std::int64_t s = rect_sum(table, x0, y0, x1, y1);
      out(y, x) = static_cast<double>(img(y, x)) * static_cast<double>(count) * 100.0 <
                  static_cast<double>(s) * keep;
    }
  }
  return out;
}

}  // namespace chartex::imgproc
