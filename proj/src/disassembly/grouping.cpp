#include "chartex/disassembly.hpp"

#include <algorithm>
#include <cmath>

namespace chartex::disassembly {

namespace {

struct Signature {
  double r = 0, g = 0, b = 0;
  BinaryImage pattern;
  bool uniform = true;
};

std::uint8_t median9(std::array<std::uint8_t, 9> v) {
  std::nth_element(v.begin(), v.begin() + 4, v.end());
  return v[4];
}

Signature signature(const RgbImage& panel, const Bar& bar, const GroupParams& p) {
  const int bw = bar.width(), bh = bar.height();
  const int sw = std::max(1, static_cast<int>(std::lround(bw * p.slice_width)));
  const int sh = std::max(1, static_cast<int>(std::lround(bh * p.slice_height)));
  const Rect slice{bar.x_left + (bw - sw) / 2, bar.y_top + (bh - sh) / 2, sw, sh};
  const Rect c = clip(slice, static_cast<int>(panel.width()), static_cast<int>(panel.height()));
  Signature s;
  if (c.empty()) return s;
  const RgbImage px = crop(panel, c);

  // 3x3 median of the gray slice, then pixels far from the slice median are pattern ink.
  const GrayImage gray = imgproc::to_grayscale(px);
  const int h = static_cast<int>(gray.rows()), w = static_cast<int>(gray.cols());
  GrayImage smooth(h, w);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      std::array<std::uint8_t, 9> v{};
      int k = 0;
      for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx) v[k++] = gray(std::clamp(y + dy, 0, h - 1), std::clamp(x + dx, 0, w - 1));
      smooth(y, x) = median9(v);
    }
  std::vector<std::uint8_t> all(smooth.data(), smooth.data() + smooth.size());
  std::nth_element(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(all.size() / 2), all.end());
  const int med = all[all.size() / 2];
  s.pattern = (smooth.cast<int>() - med).abs() > p.pattern_level;
  const double frac = static_cast<double>(s.pattern.count()) / static_cast<double>(s.pattern.size());
  s.uniform = frac <= 0.05 || frac >= 0.95;

  // Fill color: mean over non-pattern pixels, so hatch phase inside the slice does not
  // move the color of hatched bars.
  const bool use_fill = frac < 0.95;
  double n = 0;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      if (!use_fill || !s.pattern(y, x)) {
        s.r += px.r(y, x);
        s.g += px.g(y, x);
        s.b += px.b(y, x);
        ++n;
      }
  s.r /= n;
  s.g /= n;
  s.b /= n;
  return s;
}

// Pearson correlation of two binary patterns over their overlap, maximized over shifts.
double pattern_correlation(const Signature& a, const Signature& b, int max_shift) {
  if (a.uniform && b.uniform) return 1.0;
  if (a.uniform != b.uniform) return 0.0;
  double best = -1.0;
  for (int dy = -max_shift; dy <= max_shift; ++dy)
    for (int dx = -max_shift; dx <= max_shift; ++dx) {
      // Overlap of a at (x, y) with b at (x + dx, y + dy).
      const int x0 = std::max(0, -dx), y0 = std::max(0, -dy);
      const int x1 = std::min(static_cast<int>(a.pattern.cols()), static_cast<int>(b.pattern.cols()) - dx);
      const int y1 = std::min(static_cast<int>(a.pattern.rows()), static_cast<int>(b.pattern.rows()) - dy);
      const int n = (x1 - x0) * (y1 - y0);
      if (x1 <= x0 || y1 <= y0 || n < 16) continue;
      double sa = 0, sb = 0, saa = 0, sbb = 0, sab = 0;
      for (int y = y0; y < y1; ++y)
        for (int x = x0; x < x1; ++x) {
          const double va = a.pattern(y, x), vb = b.pattern(y + dy, x + dx);
          sa += va;
          sb += vb;
          saa += va * va;
          sbb += vb * vb;
          sab += va * vb;
        }
      const double cov = sab - sa * sb / n;
      const double var = (saa - sa * sa / n) * (sbb - sb * sb / n);
      if (var <= 0) continue;
      best = std::max(best, cov / std::sqrt(var));
    }
  return best;
}

}  // namespace

std::vector<Bar> group_bars(const RgbImage& panel, std::vector<Bar> bars, const GroupParams& params) {
  std::sort(bars.begin(), bars.end(), [](const Bar& a, const Bar& b) { return a.x_left < b.x_left; });
  // Color is compared with the group's first bar; the template with every member, so one
  // noisy slice does not split a series.
  std::vector<std::vector<Signature>> groups;
  for (Bar& bar : bars) {
    Signature s = signature(panel, bar, params);
    bar.mean_color = {static_cast<std::uint8_t>(std::lround(s.r)), static_cast<std::uint8_t>(std::lround(s.g)),
                      static_cast<std::uint8_t>(std::lround(s.b))};
    bar.group_id = -1;
    for (std::size_t k = 0; k < groups.size() && bar.group_id < 0; ++k) {
      const Signature& rep = groups[k].front();
      const double d = std::sqrt((s.r - rep.r) * (s.r - rep.r) + (s.g - rep.g) * (s.g - rep.g) + (s.b - rep.b) * (s.b - rep.b));
      if (d > params.max_color_distance) continue;
      for (const Signature& m : groups[k])
        if (pattern_correlation(s, m, params.max_shift) >= params.min_correlation) {
          bar.group_id = static_cast<int>(k);
          break;
        }
    }
    if (bar.group_id < 0) {
      bar.group_id = static_cast<int>(groups.size());
      groups.emplace_back();
    }
    groups[static_cast<std::size_t>(bar.group_id)].push_back(std::move(s));
  }
  return bars;
}

}  // namespace chartex::disassembly
