#include "chartex/disassembly.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace chartex::disassembly {

namespace {

double overlap_of_smaller(const Rect& a, const Rect& b) {
  const Rect i = intersect(a, b);
  const int smaller = std::min(a.area(), b.area());
  return smaller > 0 ? static_cast<double>(i.area()) / smaller : 0.0;
}

// Chebyshev gap between two boxes; 0 when they touch or overlap.
int box_gap(const Rect& a, const Rect& b) {
  const int gx = std::max({0, a.x - b.right(), b.x - a.right()});
  const int gy = std::max({0, a.y - b.bottom(), b.y - a.bottom()});
  return std::max(gx, gy);
}

}  // namespace

std::vector<Rect> segment_panels(const GrayImage& page, const PanelParams& params) {
  if (page.size() == 0) return {};
  const int w = static_cast<int>(page.cols()), h = static_cast<int>(page.rows());
  const BinaryImage ink = imgproc::despeckle(imgproc::otsu_binarize(page).binary, params.despeckle_area);
  if (!ink.any()) return {};
  const BinaryImage grown = imgproc::dilate(ink, 2 * params.dilate_radius + 1);
  const imgproc::LabelMap lm = imgproc::connected_components(grown);

  // Tight bounds of the original ink inside each grown component.
  std::vector<Rect> boxes(lm.count);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      if (ink(y, x)) {
        Rect& b = boxes[lm.labels(y, x) - 1];
        b = unite(b, Rect{x, y, 1, 1});
      }

  const double min_area = params.min_area_fraction * static_cast<double>(w) * h;
  std::vector<Rect> panels, small;
  for (const Rect& b : boxes) {
    if (b.empty()) continue;
    (b.area() >= min_area ? panels : small).push_back(b);
  }

  // Merge heavily overlapping panels until stable.
  for (bool merged = true; merged;) {
    merged = false;
    for (std::size_t i = 0; i < panels.size() && !merged; ++i)
      for (std::size_t j = i + 1; j < panels.size() && !merged; ++j)
        if (overlap_of_smaller(panels[i], panels[j]) > params.merge_overlap) {
          panels[i] = unite(panels[i], panels[j]);
          panels.erase(panels.begin() + static_cast<std::ptrdiff_t>(j));
          merged = true;
        }
  }

  // Titles and axis labels separated from the plot by more than the dilation reach.
  std::vector<Rect> grown_panels = panels;
  for (const Rect& s : small) {
    int best = -1, best_gap = std::numeric_limits<int>::max();
    for (std::size_t i = 0; i < panels.size(); ++i) {
      const int gap = box_gap(s, panels[i]);
      if (gap <= params.attach_distance && gap < best_gap) {
        best_gap = gap;
        best = static_cast<int>(i);
      }
    }
    if (best >= 0) grown_panels[best] = unite(grown_panels[best], s);
  }

  for (Rect& p : grown_panels) p = clip(expand(p, params.pad), w, h);
  std::sort(grown_panels.begin(), grown_panels.end(), [](const Rect& a, const Rect& b) {
    return a.y != b.y ? a.y < b.y : a.x < b.x;
  });
  return grown_panels;
}

}  // namespace chartex::disassembly
