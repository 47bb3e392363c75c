#include "chartex/imgproc.hpp"

#include <cmath>

namespace chartex::imgproc {

namespace {

// Clockwise neighbor order in image coordinates (y down), starting west.
constexpr int kDx[8] = {-1, -1, 0, 1, 1, 1, 0, -1};
constexpr int kDy[8] = {0, -1, -1, -1, 0, 1, 1, 1};

int direction_of(int dx, int dy) {
  for (int d = 0; d < 8; ++d)
    if (kDx[d] == dx && kDy[d] == dy) return d;
  return -1;
}

}  // namespace

LabelMap connected_components(const BinaryImage& img) {
  const int w = static_cast<int>(img.cols()), h = static_cast<int>(img.rows());
  LabelMap out;
  out.labels = LabelImage::Zero(h, w);
  std::vector<Point> stack;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      if (!img(y, x) || out.labels(y, x) != 0) continue;
      const int id = ++out.count;
      out.labels(y, x) = id;
      stack.push_back({x, y});
      while (!stack.empty()) {
        const Point p = stack.back();
        stack.pop_back();
        for (int d = 0; d < 8; ++d) {
          const int nx = p.x + kDx[d], ny = p.y + kDy[d];
          if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
          if (img(ny, nx) && out.labels(ny, nx) == 0) {
            out.labels(ny, nx) = id;
            stack.push_back({nx, ny});
          }
        }
      }
    }
  return out;
}

BinaryImage despeckle(const BinaryImage& img, int min_area) {
  if (min_area <= 1) return img;
  const LabelMap cc = connected_components(img);
  std::vector<int> sizes(cc.count + 1, 0);
  for (Eigen::Index i = 0; i < cc.labels.size(); ++i) ++sizes[cc.labels.data()[i]];
  BinaryImage out = img;
  for (Eigen::Index i = 0; i < cc.labels.size(); ++i) {
    const int id = cc.labels.data()[i];
    if (id != 0 && sizes[id] < min_area) out.data()[i] = false;
  }
  return out;
}

std::vector<Contour> find_contours(const BinaryImage& img) {
  const int w = static_cast<int>(img.cols()), h = static_cast<int>(img.rows());
  const LabelMap cc = connected_components(img);
  std::vector<Contour> out(cc.count);
  std::vector<Point> start(cc.count, Point{-1, -1});
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const int id = cc.labels(y, x);
      if (id == 0) continue;
      ++out[id - 1].area;
      if (start[id - 1].x < 0) start[id - 1] = {x, y};
    }

  auto inside = [&](int x, int y, int id) {
    return x >= 0 && y >= 0 && x < w && y < h && cc.labels(y, x) == id;
  };

  for (int i = 0; i < cc.count; ++i) {
    const int id = i + 1;
    const Point s = start[i];
    Contour& c = out[i];
    c.boundary.push_back(s);

    // Moore-neighbor tracing. The start pixel is topmost-leftmost, so its west neighbor is
    // background and serves as the initial backtrack.
    Point cur = s;
    int back_dir = 0;  // direction from cur to its backtrack pixel
    Point first_step{-1, -1};
    for (;;) {
      int found = -1;
      for (int k = 1; k <= 8; ++k) {
        const int d = (back_dir + k) % 8;
        if (inside(cur.x + kDx[d], cur.y + kDy[d], id)) {
          found = d;
          break;
        }
      }
      if (found < 0) break;  // isolated pixel
      const Point next{cur.x + kDx[found], cur.y + kDy[found]};
      const int prev_dir = (found + 7) % 8;
      const Point back{cur.x + kDx[prev_dir], cur.y + kDy[prev_dir]};
      if (cur == s) {
        if (first_step.x < 0)
          first_step = next;
        else if (next == first_step)
          break;  // Jacob's stopping criterion: same entry into the start pixel
      }
      back_dir = direction_of(back.x - next.x, back.y - next.y);
      cur = next;
      c.boundary.push_back(cur);
    }
    if (c.boundary.size() > 1 && c.boundary.back() == s) c.boundary.pop_back();

    int x0 = s.x, x1 = s.x, y0 = s.y, y1 = s.y;
    for (const Point& p : c.boundary) {
      x0 = std::min(x0, p.x);
      x1 = std::max(x1, p.x);
      y0 = std::min(y0, p.y);
      y1 = std::max(y1, p.y);
    }
    c.bbox = {x0, y0, x1 - x0 + 1, y1 - y0 + 1};
    c.fill_ratio = static_cast<double>(c.area) / c.bbox.area();
  }
  return out;
}

namespace {

double point_segment_distance(const Point& p, const Point& a, const Point& b) {
  const double vx = b.x - a.x, vy = b.y - a.y;
  const double wx = p.x - a.x, wy = p.y - a.y;
  const double len2 = vx * vx + vy * vy;
  if (len2 == 0.0) return std::hypot(wx, wy);
  const double t = std::clamp((wx * vx + wy * vy) / len2, 0.0, 1.0);
  return std::hypot(wx - t * vx, wy - t * vy);
}

// Endpoint fit over boundary indices [first, last] (last may exceed n and wraps).
void endpoint_fit(const std::vector<Point>& pts, std::size_t first, std::size_t last, double eps,
                  std::vector<std::size_t>& keep) {
  const std::size_t n = pts.size();
  const Point& a = pts[first % n];
  const Point& b = pts[last % n];
  double best = -1.0;
  std::size_t best_i = first;
  for (std::size_t i = first + 1; i < last; ++i) {
    const double d = point_segment_distance(pts[i % n], a, b);
    if (d > best) {
      best = d;
      best_i = i;
    }
  }
  if (best > eps) {
    endpoint_fit(pts, first, best_i, eps, keep);
    keep.push_back(best_i % n);
    endpoint_fit(pts, best_i, last, eps, keep);
  }
}

}  // namespace

std::vector<Point> approx_corners(const Contour& c, double epsilon) {
  const auto& pts = c.boundary;
  const std::size_t n = pts.size();
  if (n < 3) return pts;

  // Split the closed curve at the start point and the point farthest from it.
  std::size_t far = 0;
  double far_d = -1.0;
  for (std::size_t i = 1; i < n; ++i) {
    const double d = std::hypot(pts[i].x - pts[0].x, pts[i].y - pts[0].y);
    if (d > far_d) {
      far_d = d;
      far = i;
    }
  }
  std::vector<std::size_t> keep{0};
  endpoint_fit(pts, 0, far, epsilon, keep);
  keep.push_back(far);
  endpoint_fit(pts, far, n, epsilon, keep);

  std::vector<Point> poly;
  for (std::size_t i : keep) poly.push_back(pts[i]);

  // The start point need not be a true corner; drop vertices that sit on the chord
  // of their neighbors.
  bool changed = true;
  while (changed && poly.size() > 3) {
    changed = false;
    for (std::size_t i = 0; i < poly.size() && poly.size() > 3; ++i) {
      const Point& prev = poly[(i + poly.size() - 1) % poly.size()];
      const Point& next = poly[(i + 1) % poly.size()];
      if (point_segment_distance(poly[i], prev, next) <= epsilon) {
        poly.erase(poly.begin() + static_cast<std::ptrdiff_t>(i));
        changed = true;
        break;
      }
    }
  }
  return poly;
}

}  // namespace chartex::imgproc
