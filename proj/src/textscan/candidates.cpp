#include "chartex/textscan.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace chartex::textscan {

std::string_view to_string(Role role) {
  switch (role) {
    case Role::unassigned: return "unassigned";
    case Role::title: return "title";
    case Role::x_tick: return "x_tick";
    case Role::y_tick: return "y_tick";
    case Role::x_label: return "x_label";
    case Role::y_label: return "y_label";
    case Role::bar_value: return "bar_value";
  }
  return "unassigned";
}

Role role_from_string(std::string_view name) {
  for (Role r : {Role::unassigned, Role::title, Role::x_tick, Role::y_tick, Role::x_label, Role::y_label,
                 Role::bar_value})
    if (to_string(r) == name) return r;
  throw InvalidArgument("unknown text role: " + std::string(name));
}

namespace {

double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

std::vector<TextCandidate> detect_text_candidates(const BinaryImage& binary, const CandidateParams& params) {
  const BinaryImage clean = imgproc::despeckle(binary, params.despeckle_area);
  const std::vector<imgproc::Contour> contours = imgproc::find_contours(clean);

  double lo = -INFINITY, hi = INFINITY;
  if (contours.size() >= 2) {
    double mean = 0.0;
    for (const auto& c : contours) mean += c.area;
    mean /= static_cast<double>(contours.size());
    double var = 0.0;
    for (const auto& c : contours) var += (c.area - mean) * (c.area - mean);
    const double sd = std::sqrt(var / static_cast<double>(contours.size()));
    lo = mean - params.sigma_band * sd;
    hi = mean + params.sigma_band * sd;
  }

  std::vector<TextCandidate> kept;
  std::vector<const imgproc::Contour*> small;  // failed only the lower area bound
  for (const auto& c : contours) {
    if (c.area > hi) continue;
    if (c.fill_ratio < params.min_fill) continue;
    if (std::max(c.bbox.w, c.bbox.h) > params.max_aspect * std::min(c.bbox.w, c.bbox.h)) continue;
    if (c.area < lo)
      small.push_back(&c);
    else
      kept.push_back({c, c.bbox});
  }

  if (params.max_size_vs_median > 0.0 && !kept.empty()) {
    std::vector<double> heights;
    for (const auto& k : kept) heights.push_back(k.bbox.h);
    const double limit = params.max_size_vs_median * median_of(heights);
    std::erase_if(kept, [&](const TextCandidate& k) { return k.bbox.h > limit || k.bbox.w > limit; });
  }

  // The area band drops thin glyphs ('i', 'l', '1', '.') and despeckling drops the dots of
  // 'i' and 'j'; both come back when they sit within one font unit of a kept glyph,
  // repeatedly so that runs of thin glyphs rejoin.
  if (!kept.empty()) {
    std::vector<double> heights;
    for (const auto& k : kept) heights.push_back(k.bbox.h);
    const int reach = std::max(params.attach_min_gap, static_cast<int>(std::lround(median_of(heights) / 7.0)));
    const std::vector<imgproc::Contour> raw = params.despeckle_area > 1 ? imgproc::find_contours(binary)
                                                                         : std::vector<imgproc::Contour>{};
    for (const auto& c : raw)
      if (c.area < params.despeckle_area && c.area >= 2) small.push_back(&c);
    auto near_glyph = [&](const Rect& b) {
      return std::any_of(kept.begin(), kept.end(), [&](const TextCandidate& k) {
        const Rect& g = k.bbox;
        const int gx = std::max({0, g.x - b.right(), b.x - g.right()});
        const int gy = std::max({0, g.y - b.bottom(), b.y - g.bottom()});
        return std::max(gx, gy) <= reach;
      });
    };
    for (bool added = true; added;) {
      added = false;
      for (auto& c : small)
        if (c && near_glyph(c->bbox)) {
          kept.push_back({*c, c->bbox});
          c = nullptr;
          added = true;
        }
    }
  }
  return kept;
}

BinaryImage build_text_mask(int width, int height, const std::vector<Rect>& boxes) {
  BinaryImage mask = BinaryImage::Constant(height, width, false);
  for (const Rect& b : boxes) {
    const Rect c = clip(b, width, height);
    if (!c.empty()) mask.block(c.y, c.x, c.h, c.w).setConstant(true);
  }
  return mask;
}

BinaryImage build_text_mask(int width, int height, const std::vector<TextCandidate>& candidates) {
  std::vector<Rect> boxes;
  boxes.reserve(candidates.size());
  for (const auto& c : candidates) boxes.push_back(c.bbox);
  return build_text_mask(width, height, boxes);
}

namespace {

struct DisjointSet {
  std::vector<std::size_t> parent;
  explicit DisjointSet(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

double overlap_fraction(int a0, int a1, int b0, int b1) {
  const int ov = std::min(a1, b1) - std::max(a0, b0);
  const int shorter = std::min(a1 - a0, b1 - b0);
  if (shorter <= 0) return 0.0;
  return static_cast<double>(std::max(ov, 0)) / shorter;
}

}  // namespace

std::vector<Rect> group_glyphs(const std::vector<Rect>& boxes, const GroupParams& params) {
  if (boxes.empty()) return {};
  std::vector<double> widths;
  for (const Rect& b : boxes) widths.push_back(b.w);
  const double max_gap = params.gap_vs_median_width * median_of(widths);

  DisjointSet sets(boxes.size());
  for (std::size_t i = 0; i < boxes.size(); ++i)
    for (std::size_t j = i + 1; j < boxes.size(); ++j) {
      const Rect& a = boxes[i];
      const Rect& b = boxes[j];
      const int gap_x = std::max(a.x, b.x) - std::min(a.right(), b.right());
      const int gap_y = std::max(a.y, b.y) - std::min(a.bottom(), b.bottom());
      const bool horizontal =
          gap_x <= max_gap && gap_y < 0 && overlap_fraction(a.y, a.bottom(), b.y, b.bottom()) >= params.min_overlap;
      const bool vertical =
          gap_y <= max_gap && gap_x < 0 && overlap_fraction(a.x, a.right(), b.x, b.right()) >= params.min_overlap;
      if (horizontal || vertical) sets.unite(i, j);
    }

  std::vector<Rect> merged(boxes.size());
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    const std::size_t r = sets.find(i);
    merged[r] = unite(merged[r], boxes[i]);
  }
  std::vector<Rect> out;
  for (std::size_t i = 0; i < boxes.size(); ++i)
    if (sets.find(i) == i) out.push_back(merged[i]);
  std::sort(out.begin(), out.end(), [](const Rect& a, const Rect& b) {
    return a.y != b.y ? a.y < b.y : a.x < b.x;
  });
  return out;
}

std::vector<Rect> group_glyphs(const std::vector<TextCandidate>& candidates, const GroupParams& params) {
  std::vector<Rect> boxes;
  boxes.reserve(candidates.size());
  for (const auto& c : candidates) boxes.push_back(c.bbox);
  return group_glyphs(boxes, params);
}

std::vector<Rect> detect_word_boxes(const GrayImage& gray, const CandidateParams& candidates,
                                    const GroupParams& grouping) {
  if (gray.size() == 0) return {};
  return group_glyphs(detect_text_candidates(imgproc::otsu_binarize(gray).binary, candidates), grouping);
}

}  // namespace chartex::textscan
