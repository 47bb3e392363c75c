#include "chartex/chartgen.hpp"

#include "chartex/font.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

namespace chartex::chartgen {

using textscan::Role;

std::string format_value(double v, double y_max) {
  char buf[64];
  std::snprintf(buf, sizeof buf, y_max <= 50.0 ? "%.1f" : "%.0f", v);
  return buf;
}

std::string format_tick(double v, double tick_step) {
  char buf[64];
  const bool integral = std::abs(tick_step - std::round(tick_step)) < 1e-9;
  std::snprintf(buf, sizeof buf, integral ? "%.0f" : "%.1f", v);
  return buf;
}

namespace {

constexpr int kMargin = 12;        // title top, x-label bottom
constexpr int kLeftMargin = 10;    // rotated y-label left edge
constexpr int kRightMargin = 20;
constexpr int kLabelGap = 24;      // axis label to tick labels
constexpr int kTickLabelGap = 10;  // y tick label right edge to the axis
constexpr int kTickMark = 4;
constexpr int kXTickOffset = 11;   // x tick label cell top below the axis
constexpr int kTitleToPlot = 40;
constexpr int kInnerPad = 12;
constexpr int kBarGap = 4;
constexpr int kValueLabelGap = 5;
constexpr int kMinTickSpacing = 30;
constexpr int kMinBarWidth = 8;
constexpr int kTextSeparation = 16;
constexpr std::uint8_t kGrid = 220;

int box_gap(const Rect& a, const Rect& b) {
  const int gx = std::max({0, a.x - b.right(), b.x - a.right()});
  const int gy = std::max({0, a.y - b.bottom(), b.y - a.bottom()});
  return std::max(gx, gy);
}

struct Canvas {
  RgbImage img;
  Point shift;

  void put(int x, int y, Rgb c) {
    x += shift.x;
    y += shift.y;
    if (x >= 0 && y >= 0 && x < img.width() && y < img.height()) img.set(x, y, c.r, c.g, c.b);
  }
  void fill(const Rect& r, Rgb c) {
    for (int y = r.y; y < r.bottom(); ++y)
      for (int x = r.x; x < r.right(); ++x) put(x, y, c);
  }
  void ink(const BinaryImage& mask, int x0, int y0) {
    for (int y = 0; y < mask.rows(); ++y)
      for (int x = 0; x < mask.cols(); ++x)
        if (mask(y, x)) put(x0 + x, y0 + y, Rgb{0, 0, 0});
  }
};

BinaryImage rotate_mask_ccw(const BinaryImage& m) {
  // Destination (y, x) takes source (x, w - 1 - y): the text reads bottom to top.
  const Eigen::Index h = m.rows(), w = m.cols();
  BinaryImage out(w, h);
  for (Eigen::Index y = 0; y < w; ++y)
    for (Eigen::Index x = 0; x < h; ++x) out(y, x) = m(x, w - 1 - y);
  return out;
}

struct PlacedText {
  Role role;
  std::string text;
  BinaryImage mask;
  Rect box;  // unshifted page coordinates
};

PlacedText place(Role role, const std::string& text, int scale, int x, int ink_top) {
  PlacedText t{role, text, font::rasterize(text, scale), {}};
  t.box = {x, ink_top, static_cast<int>(t.mask.cols()), static_cast<int>(t.mask.rows())};
  return t;
}

bool hatched(const ChartSpec& s, int series) {
  if (!s.hatching) return false;
  return s.series_count() == 1 ? series == 0 : series % 2 == 1;
}

void validate(const ChartSpec& s) {
  if (s.width <= 0 || s.height <= 0) throw InvalidArgument("canvas size must be positive");
  if (s.shift.x < 0 || s.shift.y < 0) throw InvalidArgument("shift must be non-negative");
  if (s.text_scale < 1) throw InvalidArgument("text scale must be >= 1");
  if (s.categories.empty() || s.values.size() != s.categories.size())
    throw InvalidArgument("need one value row per category");
  const std::size_t ns = s.values.front().size();
  if (ns == 0) throw InvalidArgument("need at least one series");
  for (const auto& row : s.values)
    if (row.size() != ns) throw InvalidArgument("ragged value rows");
  if (s.colors.size() < ns) throw InvalidArgument("need one color per series");
  if (!(s.y_max > 0) || !(s.tick_step > 0)) throw InvalidArgument("axis range must be positive");
  const double n = s.y_max / s.tick_step;
  if (std::abs(n - std::round(n)) > 1e-9) throw InvalidArgument("tick step must divide the axis maximum");
  if (s.noise < 0 || s.noise > 1) throw InvalidArgument("noise fraction outside [0, 1]");
  for (const std::string* t : {&s.title, &s.x_label, &s.y_label})
    if (!font::supported(*t)) throw InvalidArgument("unsupported character in '" + *t + "'");
  for (const auto& c : s.categories)
    if (c.empty() || !font::supported(c)) throw InvalidArgument("bad category label '" + c + "'");
}

}  // namespace

Rendered render(const ChartSpec& s) {
  validate(s);
  const int W = s.width, H = s.height, sc = s.text_scale;
  const int ncat = static_cast<int>(s.categories.size());
  const int ns = s.series_count();
  const int n_ticks = static_cast<int>(std::lround(s.y_max / s.tick_step));

  auto extent = [&](const std::string& t) { return t.empty() ? font::TextExtent{} : font::measure(t, sc); };

  // Vertical layout, bottom up.
  const font::TextExtent xl = extent(s.x_label);
  int tick_depth = 0;
  for (const auto& c : s.categories) {
    const font::TextExtent e = extent(c);
    tick_depth = std::max(tick_depth, e.top + e.height);
  }
  const int x_label_top = H - kMargin - xl.height;
  const int axis_y = x_label_top - (s.x_label.empty() ? 0 : kLabelGap) - tick_depth - kXTickOffset;

  const font::TextExtent tl = extent(s.title);
  const int title_bottom = s.title.empty() ? kMargin : kMargin + tl.top + tl.height;
  const int plot_top_min = title_bottom + kTitleToPlot;
  if (axis_y - plot_top_min < n_ticks * kMinTickSpacing) throw SpecInfeasible("plot too short for the tick count");
  const int plot_h = (axis_y - plot_top_min) / n_ticks * n_ticks;
  const int plot_top = axis_y - plot_h;
  const int tick_px = plot_h / n_ticks;

  // Horizontal layout, left to right.
  const font::TextExtent yl = extent(s.y_label);
  std::vector<std::string> tick_text;
  int max_tick_w = 0;
  for (int k = 0; k <= n_ticks; ++k) {
    tick_text.push_back(format_tick(k * s.tick_step, s.tick_step));
    max_tick_w = std::max(max_tick_w, extent(tick_text.back()).width);
  }
  const int y_label_w = yl.height;  // rotated
  const int axis_x = kLeftMargin + y_label_w + (s.y_label.empty() ? 0 : kLabelGap) + max_tick_w + kTickLabelGap;
  const int x_end = W - kRightMargin - 1;  // last x-axis pixel
  const int inner_x0 = axis_x + 1 + kInnerPad, inner_x1 = x_end + 1 - kInnerPad;
  if (inner_x1 - inner_x0 < ncat) throw SpecInfeasible("no room for the bars");
  const double slot = static_cast<double>(inner_x1 - inner_x0) / ncat;
  const int group_w = static_cast<int>(std::floor(0.7 * slot));
  const int bar_w = (group_w - kBarGap * (ns - 1)) / ns;
  if (bar_w < kMinBarWidth) throw SpecInfeasible("bars narrower than " + std::to_string(kMinBarWidth) + " px");
  const int group_actual = ns * bar_w + kBarGap * (ns - 1);

  Rendered out;
  GroundTruth& gt = out.truth;
  gt.spec = s;
  gt.origin = {axis_x + s.shift.x, axis_y + s.shift.y};
  gt.x_axis = {gt.origin, {x_end + s.shift.x, gt.origin.y}};
  gt.y_axis = {gt.origin, {gt.origin.x, plot_top + s.shift.y}};
  gt.plot_rect = {gt.origin.x, plot_top + s.shift.y, x_end - axis_x + 1, plot_h + 1};

  std::vector<PlacedText> texts;
  if (!s.title.empty()) texts.push_back(place(Role::title, s.title, sc, (W - tl.width) / 2, kMargin + tl.top));
  if (!s.x_label.empty()) {
    const int cx = (axis_x + x_end + 1) / 2;
    texts.push_back(place(Role::x_label, s.x_label, sc, cx - xl.width / 2, x_label_top));
  }
  if (!s.y_label.empty()) {
    PlacedText t{Role::y_label, s.y_label, rotate_mask_ccw(font::rasterize(s.y_label, sc)), {}};
    const int h = static_cast<int>(t.mask.rows());
    if (h > plot_h) throw SpecInfeasible("y label longer than the plot");
    t.box = {kLeftMargin, plot_top + (plot_h - h) / 2, static_cast<int>(t.mask.cols()), h};
    texts.push_back(std::move(t));
  }
  const int half_cap = font::kCapRows * sc / 2;
  for (int k = 0; k <= n_ticks; ++k) {
    const int row = axis_y - k * tick_px;
    const font::TextExtent e = extent(tick_text[k]);
    texts.push_back(place(Role::y_tick, tick_text[k], sc, axis_x - kTickLabelGap - e.width, row - half_cap + e.top));
    gt.y_tick_values.push_back(k * s.tick_step);
    gt.y_tick_rows.push_back(row + s.shift.y);
  }

  std::vector<Rect> bar_rects;
  for (int c = 0; c < ncat; ++c) {
    const double slot_x = inner_x0 + c * slot;
    const int gx = static_cast<int>(std::lround(slot_x + (slot - group_actual) / 2.0));
    const font::TextExtent e = extent(s.categories[c]);
    const int label_x = static_cast<int>(std::lround(slot_x + slot / 2.0 - e.width / 2.0));
    texts.push_back(place(Role::x_tick, s.categories[c], sc, label_x, axis_y + kXTickOffset + e.top));
    for (int j = 0; j < ns; ++j) {
      const double v = s.values[c][j];
      const int h = static_cast<int>(std::floor(v * plot_h / s.y_max + 0.5 + 1e-9));
      if (h < 1 || h > plot_h) throw SpecInfeasible("bar value outside the axis range");
      const Rect r{gx + j * (bar_w + kBarGap), axis_y - h, bar_w, h};
      bar_rects.push_back(r);
      gt.bars.push_back({c, j, v, {r.x + s.shift.x, r.y + s.shift.y, r.w, r.h}});
      if (s.value_labels) {
        const std::string label = format_value(v, s.y_max);
        const font::TextExtent le = extent(label);
        texts.push_back(place(Role::bar_value, label, sc, r.x + (r.w - le.width) / 2,
                              r.y - kValueLabelGap - le.height));
      }
    }
  }

  // Feasibility: text stays on the canvas, clear of other text, bars, and axis lines.
  const Rect canvas{0, 0, W, H};
  const Rect x_axis_box{axis_x - kTickMark, axis_y, x_end - axis_x + 1 + kTickMark, 1};
  const Rect y_axis_box{axis_x - kTickMark, plot_top, kTickMark + 1, plot_h + 1};
  for (std::size_t i = 0; i < texts.size(); ++i) {
    const Rect& a = texts[i].box;
    if (!canvas.contains(a)) throw SpecInfeasible("text '" + texts[i].text + "' leaves the canvas");
    for (std::size_t j = i + 1; j < texts.size(); ++j)
      if (box_gap(a, texts[j].box) < kTextSeparation)
        throw SpecInfeasible("text '" + texts[i].text + "' too close to '" + texts[j].text + "'");
    for (const Rect& b : bar_rects)
      if (!intersect(expand(a, 2), b).empty()) throw SpecInfeasible("text '" + texts[i].text + "' overlaps a bar");
    if (!intersect(expand(a, 2), x_axis_box).empty() || !intersect(expand(a, 2), y_axis_box).empty())
      throw SpecInfeasible("text '" + texts[i].text + "' touches an axis");
  }

  // Drawing order: gridlines, axes, bars, text, noise.
  Canvas cv{RgbImage(W + s.shift.x, H + s.shift.y), s.shift};
  if (s.gridlines)
    for (int k = 1; k <= n_ticks; ++k) cv.fill({axis_x + 1, axis_y - k * tick_px, x_end - axis_x, 1}, {kGrid, kGrid, kGrid});
  cv.fill({axis_x, plot_top, 1, plot_h + 1}, {0, 0, 0});
  cv.fill({axis_x, axis_y, x_end - axis_x + 1, 1}, {0, 0, 0});
  for (int k = 0; k <= n_ticks; ++k) cv.fill({axis_x - kTickMark, axis_y - k * tick_px, kTickMark, 1}, {0, 0, 0});
  for (std::size_t i = 0; i < bar_rects.size(); ++i) {
    const Rect& r = bar_rects[i];
    const int series = static_cast<int>(i) % ns;
    cv.fill(r, s.colors[series]);
    if (!hatched(s, series)) continue;
    for (int y = r.y + 3; y < r.bottom() - 3; ++y)
      for (int x = r.x + 3; x < r.right() - 3; ++x)
        if ((x + s.shift.x + y + s.shift.y) % 8 < 2) cv.put(x, y, {0, 0, 0});
  }
  for (const PlacedText& t : texts) {
    cv.ink(t.mask, t.box.x, t.box.y);
    gt.texts.push_back({t.role, t.text, {t.box.x + s.shift.x, t.box.y + s.shift.y, t.box.w, t.box.h}});
  }

  if (s.noise > 0) {
    // Exactly round(f * W * H) distinct pixels: a partial Fisher-Yates shuffle of indices.
    RgbImage& img = cv.img;
    const std::int64_t total = static_cast<std::int64_t>(img.width()) * img.height();
    const auto flips = static_cast<std::int64_t>(std::llround(s.noise * static_cast<double>(total)));
    std::vector<std::int32_t> idx(static_cast<std::size_t>(total));
    std::iota(idx.begin(), idx.end(), 0);
    std::mt19937_64 rng(s.seed);
    for (std::int64_t i = 0; i < flips; ++i) {
      const auto j = i + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(total - i));
      std::swap(idx[i], idx[j]);
      const int x = static_cast<int>(idx[i] % img.width()), y = static_cast<int>(idx[i] / img.width());
      const int luma = (299 * img.r(y, x) + 587 * img.g(y, x) + 114 * img.b(y, x)) / 1000;
      const std::uint8_t v = luma >= 128 ? 0 : 255;
      img.set(x, y, v, v, v);
    }
  }
  out.image = std::move(cv.img);
  return out;
}

}  // namespace chartex::chartgen
