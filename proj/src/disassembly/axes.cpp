#include "chartex/disassembly.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace chartex::disassembly {

using imgproc::LineSegment;

BinaryImage structure_binary(const GrayImage& panel_no_text) { return imgproc::otsu_binarize(panel_no_text).binary; }

BinaryImage axes_edge_map(const GrayImage& panel_no_text, const AxesParams& params) {
  return imgproc::canny(imgproc::gaussian_blur(panel_no_text, params.blur_kernel));
}

namespace {

bool is_horizontal(const LineSegment& s, double tol) {
  const double a = s.angle_deg();
  return a <= tol || a >= 180.0 - tol;
}

bool is_vertical(const LineSegment& s, double tol) { return std::abs(s.angle_deg() - 90.0) <= tol; }

}  // namespace

std::optional<std::pair<LineSegment, LineSegment>> select_axes(const std::vector<LineSegment>& segments,
                                                               const AxesParams& params) {
  auto qualifies = [&](const LineSegment& hs, const LineSegment& vs) {
    const Point left = hs.p0.x <= hs.p1.x ? hs.p0 : hs.p1;
    const Point right = hs.p0.x <= hs.p1.x ? hs.p1 : hs.p0;
    const Point foot = vs.p0.y >= vs.p1.y ? vs.p0 : vs.p1;
    const double hy = 0.5 * (hs.p0.y + hs.p1.y), vx = 0.5 * (vs.p0.x + vs.p1.x);
    return std::abs(foot.y - hy) <= params.endpoint_tolerance && left.x >= vx - params.max_corner_offset &&
           left.x <= vx + params.endpoint_tolerance && right.x - vx >= 0.5 * hs.length();
  };

  const LineSegment* best_h = nullptr;
  for (const LineSegment& hs : segments) {
    if (!is_horizontal(hs, params.angle_tolerance_deg) || hs.length() <= 0) continue;
    if (best_h && hs.length() <= best_h->length()) continue;
    for (const LineSegment& vs : segments)
      if (is_vertical(vs, params.angle_tolerance_deg) && vs.length() > 0 && qualifies(hs, vs)) {
        best_h = &hs;
        break;
      }
  }
  if (!best_h) return std::nullopt;

  // Bar sides also stand on the x-axis; the y-axis is the leftmost of the longest verticals.
  double longest = 0.0;
  for (const LineSegment& vs : segments)
    if (is_vertical(vs, params.angle_tolerance_deg) && qualifies(*best_h, vs)) longest = std::max(longest, vs.length());
  const LineSegment* best_v = nullptr;
  for (const LineSegment& vs : segments) {
    if (!is_vertical(vs, params.angle_tolerance_deg) || !qualifies(*best_h, vs) || vs.length() < 0.9 * longest)
      continue;
    if (!best_v || vs.p0.x + vs.p1.x < best_v->p0.x + best_v->p1.x) best_v = &vs;
  }
  return std::make_pair(*best_h, *best_v);
}

namespace {

bool dark(const GrayImage& img, int x, int y, int level) { return img(y, x) < level; }

// Row (or column) inside +-band of `center` with the most dark pixels over [from, to].
// Ties go to the line closest to center, then the smaller coordinate.
int densest_line(const GrayImage& img, bool row, int center, int from, int to, const AxesParams& p) {
  const int w = static_cast<int>(img.cols()), h = static_cast<int>(img.rows());
  const int limit = row ? h : w;
  int best = std::clamp(center, 0, limit - 1), best_count = -1;
  for (int off = 0; off <= p.refine_band; ++off)
    for (int c : {center - off, center + off}) {
      if (c < 0 || c >= limit) continue;
      int count = 0;
      for (int t = std::max(from, 0); t <= std::min(to, (row ? w : h) - 1); ++t)
        count += row ? dark(img, t, c, p.dark_level) : dark(img, c, t, p.dark_level);
      if (count > best_count) {
        best_count = count;
        best = c;
      }
    }
  return best;
}

}  // namespace

Axes detect_axes(const GrayImage& panel_no_text, const AxesParams& params) {
  const int w = static_cast<int>(panel_no_text.cols()), h = static_cast<int>(panel_no_text.rows());
  if (w < 3 || h < 3) throw NoAxes("panel too small for axis detection");
  const BinaryImage edges = axes_edge_map(panel_no_text, params);
  const auto pair = select_axes(imgproc::hough_lines(edges, params.hough), params);
  if (!pair) throw NoAxes("no horizontal/vertical segment pair forms a plot corner");
  const auto& [hs, vs] = *pair;

  const int hx0 = std::min(hs.p0.x, hs.p1.x), hx1 = std::max(hs.p0.x, hs.p1.x);
  const int vy0 = std::min(vs.p0.y, vs.p1.y), vy1 = std::max(vs.p0.y, vs.p1.y);
  const int axis_y = densest_line(panel_no_text, true, (hs.p0.y + hs.p1.y) / 2, hx0, hx1, params);
  const int axis_x = densest_line(panel_no_text, false, (vs.p0.x + vs.p1.x) / 2, vy0, vy1, params);

  // Trace each axis outward from the origin over dark pixels, bridging short gaps.
  auto trace = [&](int dx, int dy) {
    Point last{axis_x, axis_y};
    int gap = 0;
    for (int x = axis_x + dx, y = axis_y + dy; x >= 0 && x < w && y >= 0 && y < h; x += dx, y += dy) {
      if (dark(panel_no_text, x, y, params.dark_level)) {
        last = {x, y};
        gap = 0;
      } else if (++gap > params.max_scan_gap) {
        break;
      }
    }
    return last;
  };
  const Point origin{axis_x, axis_y};
  const Point right = trace(1, 0);
  const Point top = trace(0, -1);
  if (right.x - origin.x < 2 || origin.y - top.y < 2) throw NoAxes("axis lines vanish on the gray image");

  Axes a;
  a.origin = origin;
  a.x_axis = {origin, right};
  a.y_axis = {origin, top};
  a.plot_rect = {origin.x, top.y, right.x - origin.x + 1, origin.y - top.y + 1};
  return a;
}

PlotCrop crop_plot(const GrayImage& panel, const Axes& axes) {
  const Rect r = clip(axes.plot_rect, static_cast<int>(panel.cols()), static_cast<int>(panel.rows()));
  return {crop(panel, r), {r.x, r.y}};
}

}  // namespace chartex::disassembly
