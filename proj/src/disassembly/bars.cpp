#include "chartex/disassembly.hpp"

#include <algorithm>
#include <cmath>

namespace chartex::disassembly {

std::vector<VerticalEdge> vertical_edges(const BinaryImage& plot, const BarParams& params) {
  const BinaryImage smooth = params.majority ? imgproc::majority_filter(plot) : plot;
  const BinaryImage opened = imgproc::morphological_open(smooth, params.open_kernel);
  std::vector<VerticalEdge> edges;
  for (const imgproc::Contour& c : imgproc::find_contours(opened)) {
    const std::vector<Point> corners = imgproc::approx_corners(c, params.corner_epsilon);
    const std::size_t n = corners.size();
    if (n < 2) continue;
    for (std::size_t i = 0; i < n; ++i) {
      const Point p = corners[i], q = corners[(i + 1) % n];
      if (std::abs(p.x - q.x) > params.edge_dx) continue;
      if (std::abs(p.y - q.y) < params.min_edge_length) continue;
      // The majority filter chamfers convex corners, so the two vertices can sit one column
      // apart: keep the one that is the boundary pixel at mid-height.
      const int ymid = (p.y + q.y) / 2;
      auto boundary = [&](int x) {
        return x >= 0 && x < opened.cols() && opened(ymid, x) &&
               (x == 0 || x + 1 == opened.cols() || !opened(ymid, x - 1) || !opened(ymid, x + 1));
      };
      int x = std::min(p.x, q.x);
      if (!boundary(x) && boundary(std::max(p.x, q.x))) x = std::max(p.x, q.x);
      edges.push_back({x, std::min(p.y, q.y), std::max(p.y, q.y)});
    }
  }
  std::sort(edges.begin(), edges.end(), [](const VerticalEdge& a, const VerticalEdge& b) {
    return a.x != b.x ? a.x < b.x : a.y_top < b.y_top;
  });
  return edges;
}

std::vector<Bar> detect_bars(const BinaryImage& plot, const Axes& axes, const BarParams& params) {
  const Point offset{axes.plot_rect.x, axes.plot_rect.y};
  const int baseline = axes.origin.y - offset.y;
  // Blank the axis lines so noise specks cannot weld onto bar feet through them.
  BinaryImage body = plot;
  if (baseline >= 0 && baseline < body.rows()) body.row(baseline).setConstant(false);
  const int axis_col = axes.origin.x - offset.x;
  if (axis_col >= 0 && axis_col < body.cols()) body.col(axis_col).setConstant(false);
  const std::vector<VerticalEdge> edges = vertical_edges(body, params);
  auto grounded = [&](const VerticalEdge& e) { return std::abs(e.y_bottom - baseline) <= params.baseline_tolerance; };

  std::vector<bool> used(edges.size(), false);
  std::vector<Bar> bars;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (used[i] || !grounded(edges[i])) continue;
    for (std::size_t j = i + 1; j < edges.size(); ++j) {
      if (used[j] || !grounded(edges[j])) continue;
      if (edges[j].x <= edges[i].x + params.edge_dx) continue;
      if (std::abs(edges[j].y_top - edges[i].y_top) > params.top_tolerance) continue;
      used[i] = used[j] = true;
      Bar b;
      b.x_left = edges[i].x + offset.x;
      b.x_right = edges[j].x + 1 + offset.x;
      b.y_top = std::min(edges[i].y_top, edges[j].y_top) + offset.y;
      b.baseline_y = axes.origin.y;
      if (b.height() > 0) bars.push_back(b);
      break;
    }
  }
  std::sort(bars.begin(), bars.end(), [](const Bar& a, const Bar& b) { return a.x_left < b.x_left; });
  return bars;
}

namespace {

int median_int(std::vector<int> v) {
  std::sort(v.begin(), v.end());
  return v[(v.size() - 1) / 2];
}

}  // namespace

std::vector<Bar> refine_bars(const GrayImage& panel, std::vector<Bar> bars, const BarParams& params) {
  const int w = static_cast<int>(panel.cols()), h = static_cast<int>(panel.rows());
  const int s = params.refine_search;
  for (Bar& b : bars) {
    if (b.width() < 4 || b.height() < 4) continue;
    const int cx0 = b.x_left + b.width() / 4, cx1 = b.x_right - b.width() / 4;
    const int cy0 = b.y_top + b.height() / 4, cy1 = b.baseline_y - b.height() / 4;
    std::vector<int> core;
    for (int y = std::max(cy0, 0); y < std::min(cy1, h); ++y)
      for (int x = std::max(cx0, 0); x < std::min(cx1, w); ++x) core.push_back(panel(y, x));
    if (core.empty()) continue;
    const int m = median_int(core);
    auto fill = [&](int x, int y) {
      return x >= 0 && y >= 0 && x < w && y < h && std::abs(panel(y, x) - m) < params.refine_color_tolerance;
    };

    std::vector<int> tops, lefts, rights;
    for (int x = cx0; x < cx1; ++x)
      for (int y = b.y_top - s; y <= b.y_top + s; ++y)
        if (fill(x, y) && fill(x, y + 1)) {
          tops.push_back(y);
          break;
        }
    for (int y = cy0; y < cy1; ++y) {
      for (int x = b.x_left - s; x <= b.x_left + s; ++x)
        if (fill(x, y) && fill(x + 1, y)) {
          lefts.push_back(x);
          break;
        }
      for (int x = b.x_right - 1 + s; x >= b.x_right - 1 - s; --x)
        if (fill(x, y) && fill(x - 1, y)) {
          rights.push_back(x + 1);
          break;
        }
    }
    if (!tops.empty()) b.y_top = median_int(tops);
    if (!lefts.empty()) b.x_left = median_int(lefts);
    if (!rights.empty()) b.x_right = median_int(rights);
  }
  std::erase_if(bars, [](const Bar& b) { return b.width() <= 0 || b.height() <= 0; });
  return bars;
}

GateResult gate_bar_chart(std::size_t bars_found, bool axes_found) {
  GateResult g;
  g.is_bar_chart = axes_found && bars_found >= 2;
  g.score = axes_found ? std::min(1.0, static_cast<double>(bars_found) / 4.0) : 0.0;
  return g;
}

GateResult gate_bar_chart(const GrayImage& panel_no_text, const AxesParams& axes_params, const BarParams& bar_params) {
  if (panel_no_text.cols() < 3 || panel_no_text.rows() < 3) return {};
  Axes axes;
  try {
    axes = detect_axes(panel_no_text, axes_params);
  } catch (const NoAxes&) {
    return gate_bar_chart(0, false);
  }
  const auto bars = detect_bars(crop(structure_binary(panel_no_text), axes.plot_rect), axes, bar_params);
  return gate_bar_chart(bars.size(), true);
}

}  // namespace chartex::disassembly
