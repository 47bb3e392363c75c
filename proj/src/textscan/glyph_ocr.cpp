#include "chartex/font.hpp"
#include "chartex/textscan.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>

namespace chartex::textscan {

namespace {

struct Segment {
  Rect box;
  int area = 0;
};

// Most frequent length of horizontal and vertical foreground runs: the stroke width,
// which for the shipped font equals one font unit.
int estimate_unit(const BinaryImage& bin) {
  std::map<int, int> counts;
  const int h = static_cast<int>(bin.rows()), w = static_cast<int>(bin.cols());
  for (int y = 0; y < h; ++y) {
    int run = 0;
    for (int x = 0; x <= w; ++x) {
      if (x < w && bin(y, x)) {
        ++run;
      } else if (run) {
        ++counts[run];
        run = 0;
      }
    }
  }
  for (int x = 0; x < w; ++x) {
    int run = 0;
    for (int y = 0; y <= h; ++y) {
      if (y < h && bin(y, x)) {
        ++run;
      } else if (run) {
        ++counts[run];
        run = 0;
      }
    }
  }
  int best = 1, best_count = 0;
  for (const auto& [len, n] : counts)
    if (n > best_count) {
      best = len;
      best_count = n;
    }
  return best;
}

// Components merged into glyph segments when their column ranges overlap
// (dots of 'i'/'j', the three parts of '%').
std::vector<Segment> segment(const BinaryImage& bin, int min_area) {
  const imgproc::LabelMap lm = imgproc::connected_components(bin);
  std::vector<Segment> comps(lm.count);
  for (int y = 0; y < lm.labels.rows(); ++y)
    for (int x = 0; x < lm.labels.cols(); ++x)
      if (const int id = lm.labels(y, x)) {
        Segment& s = comps[id - 1];
        s.box = unite(s.box, Rect{x, y, 1, 1});
        ++s.area;
      }
  std::sort(comps.begin(), comps.end(), [](const Segment& a, const Segment& b) {
    return a.box.x != b.box.x ? a.box.x < b.box.x : a.box.y < b.box.y;
  });
  std::erase_if(comps, [&](const Segment& c) { return c.area < min_area; });
  std::vector<Segment> out;
  for (const Segment& c : comps) {
    if (!out.empty() && c.box.x < out.back().box.right()) {
      out.back().box = unite(out.back().box, c.box);
      out.back().area += c.area;
    } else {
      out.push_back(c);
    }
  }
  return out;
}

// Peels edge rows and columns holding fewer than `limit` ink pixels: specks stuck to a
// glyph would otherwise stretch its box.
Rect trim_box(const BinaryImage& bin, Rect box, int unit, int limit) {
  auto row_ink = [&](int y) { return static_cast<int>(bin.block(y, box.x, 1, box.w).count()); };
  auto col_ink = [&](int x) { return static_cast<int>(bin.block(box.y, x, box.h, 1).count()); };
  bool changed = true;
  while (changed && box.w > unit && box.h > unit) {
    changed = false;
    if (row_ink(box.y) < limit) ++box.y, --box.h, changed = true;
    if (box.h > unit && row_ink(box.bottom() - 1) < limit) --box.h, changed = true;
    if (col_ink(box.x) < limit) ++box.x, --box.w, changed = true;
    if (box.w > unit && col_ink(box.right() - 1) < limit) --box.w, changed = true;
  }
  return box;
}

// Fraction of template cells whose majority pixel value inside the segment matches.
double agreement(const BinaryImage& bin, const Rect& box, const font::Glyph& g) {
  int match = 0;
  for (int gy = 0; gy < g.height; ++gy) {
    const int y0 = box.y + gy * box.h / g.height;
    const int y1 = std::max(y0 + 1, box.y + (gy + 1) * box.h / g.height);
    for (int gx = 0; gx < g.width; ++gx) {
      const int x0 = box.x + gx * box.w / g.width;
      const int x1 = std::max(x0 + 1, box.x + (gx + 1) * box.w / g.width);
      const int on = bin.block(y0, x0, y1 - y0, x1 - x0).count();
      const bool ink = 2 * on >= (y1 - y0) * (x1 - x0);
      match += ink == g.at(gx, gy);
    }
  }
  return static_cast<double>(match) / (g.width * g.height);
}

struct Reading {
  OcrResult result;
  int glyphs = 0;
};

Reading read_with_unit(const BinaryImage& bin, const std::vector<Segment>& segments, int unit,
                       double min_agreement) {
  Reading r;
  double conf_sum = 0.0;
  int last_right = -1;
  for (const Segment& seg : segments) {
    // A conservative box, plus one that also peels edges holding exactly one unit of
    // ink; the first wins ties so clean glyphs keep their full extent.
    std::vector<Rect> boxes = {seg.box};
    if (unit >= 3) {
      boxes = {trim_box(bin, seg.box, unit, unit), trim_box(bin, seg.box, unit, unit + 1)};
      if (boxes[1] == boxes[0]) boxes.pop_back();
    }
    // Highest agreement wins; among equal scores the template whose size in units is
    // closest to the segment's.
    const font::Glyph* best = nullptr;
    double best_score = -1.0;
    int best_dist = 0;
    Rect best_box;
    for (const Rect& box : boxes) {
      const int gw = static_cast<int>(std::lround(static_cast<double>(box.w) / unit));
      const int gh = static_cast<int>(std::lround(static_cast<double>(box.h) / unit));
      for (const font::Glyph& g : font::glyphs()) {
        const int dist = std::abs(g.width - gw) + std::abs(g.height - gh);
        if (std::abs(g.width - gw) > 1 || std::abs(g.height - gh) > 1) continue;
        if (g.width > box.w || g.height > box.h) continue;
        const double score = agreement(bin, box, g);
        if (score > best_score || (score == best_score && dist < best_dist)) {
          best_score = score;
          best = &g;
          best_dist = dist;
          best_box = box;
        }
      }
    }
    if (!best || best_score < min_agreement) continue;
    if (last_right >= 0 && best_box.x - last_right >= 2 * unit) r.result.text.push_back(' ');
    r.result.text.push_back(best->ch);
    conf_sum += best_score;
    ++r.glyphs;
    last_right = best_box.right();
  }
  r.result.confidence = r.glyphs ? conf_sum / r.glyphs : 0.0;
  return r;
}

// Majority vote of every u x u cell on the grid starting at (px, py): the unit-level
// bitmap of text drawn at an integer scale. Isolated flipped pixels never win a cell.
struct GridDecode {
  BinaryImage cells;
  double purity = 0.0;  ///< mean |2 * ink - u^2| / u^2 over cells, 1 for a clean render
};

GridDecode decode_grid(const BinaryImage& bin, int u, int px, int py) {
  const int h = static_cast<int>(bin.rows()), w = static_cast<int>(bin.cols());
  const int gw = (w - px + u - 1) / u, gh = (h - py + u - 1) / u;
  GridDecode d;
  d.cells = BinaryImage::Constant(gh, gw, false);
  double purity = 0.0;
  for (int cy = 0; cy < gh; ++cy)
    for (int cx = 0; cx < gw; ++cx) {
      const int x0 = px + cx * u, y0 = py + cy * u;
      const int cw = std::min(u, w - x0), ch = std::min(u, h - y0);
      const int on = static_cast<int>(bin.block(y0, x0, ch, cw).count());
      d.cells(cy, cx) = 2 * on > u * u;
      purity += std::abs(2.0 * on - u * u) / (u * u);
    }
  d.purity = purity / std::max(1, gw * gh);
  return d;
}

Reading read_cells(const BinaryImage& cells, double min_agreement) {
  Reading r;
  // Single cells survive only as part of a glyph (the dot of 'i').
  std::vector<Segment> segments = segment(cells, 1);
  std::erase_if(segments, [](const Segment& sg) { return sg.area < 2; });
  double conf_sum = 0.0;
  int last_right = -1;
  for (Segment& seg : segments) {
    const font::Glyph* best = nullptr;
    double best_score = -1.0;
    int best_dist = 0;
    for (const font::Glyph& g : font::glyphs()) {
      const int dw = seg.box.w - g.width, dh = seg.box.h - g.height;
      if (std::abs(dw) > 1 || std::abs(dh) > 1) continue;
      const int uw = std::max(seg.box.w, g.width), uh = std::max(seg.box.h, g.height);
      // Slide the smaller of the two over the larger when sizes differ by one unit.
      for (int oy = std::min(0, dh); oy <= std::max(0, dh); ++oy)
        for (int ox = std::min(0, dw); ox <= std::max(0, dw); ++ox) {
          int match = 0;
          for (int y = 0; y < uh; ++y)
            for (int x = 0; x < uw; ++x) {
              const int sx = x + std::min(0, ox), sy = y + std::min(0, oy);
              const int tx = x - std::max(0, ox), ty = y - std::max(0, oy);
              const bool s_on = sx >= 0 && sy >= 0 && sx < seg.box.w && sy < seg.box.h &&
                                cells(seg.box.y + sy, seg.box.x + sx);
              const bool t_on = tx >= 0 && ty >= 0 && tx < g.width && ty < g.height && g.at(tx, ty);
              match += s_on == t_on;
            }
          const double score = static_cast<double>(match) / (uw * uh);
          const int dist = std::abs(dw) + std::abs(dh);
          if (score > best_score || (score == best_score && dist < best_dist)) {
            best_score = score;
            best = &g;
            best_dist = dist;
          }
        }
    }
    if (!best || best_score < min_agreement) continue;
    if (last_right >= 0 && seg.box.x - last_right >= 2) r.result.text.push_back(' ');
    r.result.text.push_back(best->ch);
    conf_sum += best_score;
    ++r.glyphs;
    last_right = seg.box.right();
  }
  r.result.confidence = r.glyphs ? conf_sum / r.glyphs : 0.0;
  return r;
}

// Best grid reading over candidate units and all phases of each.
std::optional<Reading> read_grid(const BinaryImage& bin, const std::vector<int>& units, double min_agreement,
                                 double& best_purity) {
  std::optional<Reading> best;
  best_purity = -1.0;
  for (int u : units) {
    if (u < 2) continue;
    GridDecode top;
    for (int py = 0; py < u; ++py)
      for (int px = 0; px < u; ++px) {
        GridDecode d = decode_grid(bin, u, px, py);
        if (d.purity > top.purity) top = std::move(d);
      }
    // A grid finer than the true unit is just as pure, so template agreement decides.
    Reading r = read_cells(top.cells, min_agreement);
    if (r.glyphs == 0) continue;
    if (best && (r.result.confidence < best->result.confidence ||
                 (r.result.confidence == best->result.confidence && top.purity <= best_purity)))
      continue;
    best_purity = top.purity;
    best = std::move(r);
  }
  return best;
}

}  // namespace

OcrResult builtin_glyph_ocr(const GrayImage& region, double min_agreement) {
  if (region.size() == 0) return {};
  BinaryImage bin = imgproc::otsu_binarize(region).binary;
  if (!bin.any()) return {};

  const int unit = estimate_unit(bin);
  // Text drawn on an integer grid decodes cell by cell; a clean, confident grid reading
  // wins outright.
  constexpr double kGridPurity = 0.8, kGridConfidence = 0.9;
  double grid_purity = 0.0;
  std::optional<Reading> grid = read_grid(bin, {unit, unit - 1, unit + 1}, min_agreement, grid_purity);

  // Closing then opening with a kernel just under one font unit fills pinholes and
  // removes specks without touching strokes or inter-glyph gaps.
  if (unit >= 3) {
    const int k = unit - 1;
    BinaryImage padded = BinaryImage::Constant(bin.rows() + 2 * k, bin.cols() + 2 * k, false);
    padded.block(k, k, bin.rows(), bin.cols()) = bin;
    padded = imgproc::erode(imgproc::dilate(padded, k), k);
    bin = imgproc::morphological_open(padded.block(k, k, bin.rows(), bin.cols()), k);
  }
  if (grid && grid_purity >= kGridPurity && grid->result.confidence >= kGridConfidence) return grid->result;
  const std::vector<Segment> segments = segment(bin, std::max(1, unit * unit / 2));
  if (segments.empty()) return grid && grid_purity >= kGridPurity ? grid->result : OcrResult{};

  int tallest = 0;
  for (const Segment& s : segments) tallest = std::max(tallest, s.box.h);
  std::vector<int> units = {unit, unit - 1, unit + 1, static_cast<int>(std::lround(tallest / 7.0))};

  Reading best;
  bool have = false;
  if (grid && grid_purity >= kGridPurity) {
    best = *grid;
    have = true;
  }
  for (int u : units) {
    if (u < 1) continue;
    Reading r = read_with_unit(bin, segments, u, min_agreement);
    if (!have || r.glyphs > best.glyphs ||
        (r.glyphs == best.glyphs && r.result.confidence > best.result.confidence)) {
      best = std::move(r);
      have = true;
    }
  }
  return best.result;
}

OcrResult BuiltinGlyphOcr::recognize(const GrayImage& region) const {
  return builtin_glyph_ocr(region, min_agreement_);
}

}  // namespace chartex::textscan
