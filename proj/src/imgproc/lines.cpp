#include "chartex/imgproc.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace chartex::imgproc {

double LineSegment::length() const { return std::hypot(p1.x - p0.x, p1.y - p0.y); }

double LineSegment::angle_deg() const {
  double a = std::atan2(p1.y - p0.y, p1.x - p0.x) * 180.0 / std::numbers::pi;
  if (a < 0) a += 180.0;
  if (a >= 180.0) a -= 180.0;
  return a;
}

CannyThresholds auto_canny_thresholds(const GrayImage& img) {
  const auto hist = histogram(img);
  const std::int64_t half = (img.size() + 1) / 2;
  std::int64_t acc = 0;
  int median = 0;
  for (int v = 0; v < 256; ++v) {
    acc += hist[v];
    if (acc >= half) {
      median = v;
      break;
    }
  }
  return {std::clamp(0.66 * median, 0.0, 255.0), std::clamp(1.33 * median, 0.0, 255.0)};
}

BinaryImage canny(const GrayImage& img, std::optional<CannyThresholds> thresholds) {
  const CannyThresholds th = thresholds.value_or(auto_canny_thresholds(img));
  if (th.low < 0 || th.high < th.low || th.high > 255)
    throw InvalidArgument("canny: thresholds must satisfy 0 <= low <= high <= 255");
  const int w = static_cast<int>(img.cols()), h = static_cast<int>(img.rows());
  auto at = [&](int x, int y) {
    return static_cast<int>(img(std::clamp(y, 0, h - 1), std::clamp(x, 0, w - 1)));
  };

  Raster<float> mag(h, w);
  Raster<std::uint8_t> dir(h, w);  // 0: horizontal gradient, 1: 45, 2: vertical, 3: 135
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const int gx = (at(x + 1, y - 1) + 2 * at(x + 1, y) + at(x + 1, y + 1)) -
                     (at(x - 1, y - 1) + 2 * at(x - 1, y) + at(x - 1, y + 1));
      const int gy = (at(x - 1, y + 1) + 2 * at(x, y + 1) + at(x + 1, y + 1)) -
                     (at(x - 1, y - 1) + 2 * at(x, y - 1) + at(x + 1, y - 1));
      mag(y, x) = static_cast<float>(std::sqrt(static_cast<double>(gx) * gx + static_cast<double>(gy) * gy));
      double a = std::atan2(gy, gx) * 180.0 / std::numbers::pi;
      if (a < 0) a += 180.0;
      dir(y, x) = a < 22.5 || a >= 157.5 ? 0 : (a < 67.5 ? 1 : (a < 112.5 ? 2 : 3));
    }

  // Non-maximum suppression. Ties are broken toward the negative side so that a step
  // edge produces a single-pixel line.
  static constexpr int kNx[4][2] = {{-1, 1}, {-1, 1}, {0, 0}, {1, -1}};
  static constexpr int kNy[4][2] = {{0, 0}, {-1, 1}, {-1, 1}, {-1, 1}};
  auto mag_at = [&](int x, int y) -> float {
    if (x < 0 || y < 0 || x >= w || y >= h) return 0.0f;
    return mag(y, x);
  };
  Raster<std::uint8_t> state = Raster<std::uint8_t>::Zero(h, w);  // 0 none, 1 weak, 2 strong
  std::vector<Point> strong;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const float m = mag(y, x);
      if (m <= 0.0f || m < th.low) continue;
      const int d = dir(y, x);
      const float a = mag_at(x + kNx[d][0], y + kNy[d][0]);
      const float b = mag_at(x + kNx[d][1], y + kNy[d][1]);
      if (!(m > a && m >= b)) continue;
      if (m >= th.high) {
        state(y, x) = 2;
        strong.push_back({x, y});
      } else {
        state(y, x) = 1;
      }
    }

  BinaryImage out = BinaryImage::Constant(h, w, false);
  while (!strong.empty()) {
    const Point p = strong.back();
    strong.pop_back();
    if (out(p.y, p.x)) continue;
    out(p.y, p.x) = true;
    for (int dy = -1; dy <= 1; ++dy)
      for (int dx = -1; dx <= 1; ++dx) {
        const int nx = p.x + dx, ny = p.y + dy;
        if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
        if (state(ny, nx) != 0 && !out(ny, nx)) strong.push_back({nx, ny});
      }
  }
  return out;
}

std::vector<LineSegment> hough_lines(const BinaryImage& edges, const HoughParams& params) {
  const int w = static_cast<int>(edges.cols()), h = static_cast<int>(edges.rows());
  if (params.votes <= 0 || params.max_gap < 0 || params.rho_step <= 0 || params.theta_step_deg <= 0)
    throw InvalidArgument("hough_lines: parameters must be positive");
  const int min_len = params.min_len > 0 ? params.min_len
                                         : std::max(1, static_cast<int>(0.3 * std::min(w, h)));

  std::vector<Point> points;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      if (edges(y, x)) points.push_back({x, y});
  if (points.empty()) return {};

  const int num_angle = static_cast<int>(std::lround(180.0 / params.theta_step_deg));
  const double irho = 1.0 / params.rho_step;
  const int num_rho = static_cast<int>(std::lround(((w + h) * 2 + 1) * irho));
  const int rho_offset = (num_rho - 1) / 2;
  std::vector<double> tab_cos(num_angle), tab_sin(num_angle);
  for (int n = 0; n < num_angle; ++n) {
    const double theta = n * params.theta_step_deg * std::numbers::pi / 180.0;
    tab_cos[n] = std::cos(theta) * irho;
    tab_sin[n] = std::sin(theta) * irho;
  }

  // Fisher-Yates with an explicitly seeded engine; modulo reduction keeps the order
  // identical across standard library implementations.
  std::mt19937_64 rng(params.seed);
  for (std::size_t i = points.size() - 1; i > 0; --i) std::swap(points[i], points[rng() % (i + 1)]);

  Raster<std::uint8_t> mask(h, w);
  mask = edges.cast<std::uint8_t>();
  std::vector<int> acc(static_cast<std::size_t>(num_angle) * num_rho, 0);
  auto rho_index = [&](int x, int y, int n) {
    return static_cast<int>(std::lround(x * tab_cos[n] + y * tab_sin[n])) + rho_offset;
  };

  std::vector<LineSegment> lines;
  constexpr int shift = 16;
  for (const Point& pt : points) {
    if (!mask(pt.y, pt.x)) continue;

    int max_val = params.votes - 1, max_n = 0;
    for (int n = 0; n < num_angle; ++n) {
      const int v = ++acc[static_cast<std::size_t>(n) * num_rho + rho_index(pt.x, pt.y, n)];
      if (v > max_val) {
        max_val = v;
        max_n = n;
      }
    }
    if (max_val < params.votes) continue;

    // Walk along the line direction (perpendicular to the normal) in fixed point.
    const double a = -tab_sin[max_n], b = tab_cos[max_n];
    std::int64_t x0 = pt.x, y0 = pt.y, dx0, dy0;
    const bool xflag = std::abs(a) > std::abs(b);
    if (xflag) {
      dx0 = a > 0 ? 1 : -1;
      dy0 = std::llround(b * (1 << shift) / std::abs(a));
      y0 = (y0 << shift) + (1 << (shift - 1));
    } else {
      dy0 = b > 0 ? 1 : -1;
      dx0 = std::llround(a * (1 << shift) / std::abs(b));
      x0 = (x0 << shift) + (1 << (shift - 1));
    }

    Point line_end[2] = {pt, pt};
    for (int k = 0; k < 2; ++k) {
      int gap = 0;
      std::int64_t x = x0, y = y0;
      const std::int64_t dx = k ? -dx0 : dx0, dy = k ? -dy0 : dy0;
      for (;; x += dx, y += dy) {
        const int j1 = static_cast<int>(xflag ? x : (x >> shift));
        const int i1 = static_cast<int>(xflag ? (y >> shift) : y);
        if (j1 < 0 || j1 >= w || i1 < 0 || i1 >= h) break;
        if (mask(i1, j1)) {
          gap = 0;
          line_end[k] = {j1, i1};
        } else if (++gap > params.max_gap) {
          break;
        }
      }
    }

    const bool good = std::abs(line_end[1].x - line_end[0].x) >= min_len ||
                      std::abs(line_end[1].y - line_end[0].y) >= min_len;

    for (int k = 0; k < 2; ++k) {
      std::int64_t x = x0, y = y0;
      const std::int64_t dx = k ? -dx0 : dx0, dy = k ? -dy0 : dy0;
      for (;; x += dx, y += dy) {
        const int j1 = static_cast<int>(xflag ? x : (x >> shift));
        const int i1 = static_cast<int>(xflag ? (y >> shift) : y);
        if (j1 < 0 || j1 >= w || i1 < 0 || i1 >= h) break;
        if (mask(i1, j1)) {
          if (good)
            for (int n = 0; n < num_angle; ++n)
              --acc[static_cast<std::size_t>(n) * num_rho + rho_index(j1, i1, n)];
          mask(i1, j1) = 0;
        }
        if (i1 == line_end[k].y && j1 == line_end[k].x) break;
      }
    }
    if (good) lines.push_back({line_end[1], line_end[0]});
  }

  std::stable_sort(lines.begin(), lines.end(), [](const LineSegment& l, const LineSegment& r) {
    return l.length() > r.length();
  });
  return lines;
}

}  // namespace chartex::imgproc
