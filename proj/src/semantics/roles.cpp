#include "chartex/semantics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace chartex::semantics {

using textscan::Role;
using textscan::TextBlock;

std::optional<std::size_t> assign_title(std::vector<TextBlock>& blocks, int width, int height,
                                        const SemanticsParams& params) {
  std::optional<std::size_t> best;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const TextBlock& b = blocks[i];
    if (b.role != Role::unassigned || b.bbox.cy() >= params.title_band * height) continue;
    const double d = std::hypot(b.bbox.cx() - width / 2.0, b.bbox.cy());
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  if (best) blocks[*best].role = Role::title;
  return best;
}

void classify_axis_text(std::vector<TextBlock>& blocks, const disassembly::Axes& axes,
                        const SemanticsParams& params) {
  const double axis_x = axes.origin.x, axis_y = axes.origin.y;
  const double top = std::min(axes.y_axis.p0.y, axes.y_axis.p1.y);
  const double x_end = std::max(axes.x_axis.p0.x, axes.x_axis.p1.x);
  auto free = [](const TextBlock& b) { return b.role == Role::unassigned; };
  auto in_rows = [&](const TextBlock& b) { return b.bbox.cy() >= top - b.bbox.h / 2.0 && b.bbox.cy() <= axis_y + b.bbox.h / 2.0; };
  auto in_cols = [&](const TextBlock& b) { return b.bbox.cx() >= axis_x - b.bbox.w / 2.0 && b.bbox.cx() <= x_end + b.bbox.w / 2.0; };

  // Band widths come from the horizontal text on each side of the axes, so a long title
  // or a rotated axis label does not widen the band.
  double max_w = 0.0, max_h = 0.0;
  for (const TextBlock& b : blocks) {
    if (!free(b) || b.vertical) continue;
    if (b.bbox.right() <= axis_x && in_rows(b)) max_w = std::max(max_w, static_cast<double>(b.bbox.w));
    if (b.bbox.y >= axis_y && in_cols(b)) max_h = std::max(max_h, static_cast<double>(b.bbox.h));
  }

  for (TextBlock& b : blocks) {
    if (!free(b) || b.vertical) continue;
    const double dx = axis_x - b.bbox.cx();
    if (dx > 0 && dx <= params.tick_band * max_w && in_rows(b)) b.role = Role::y_tick;
  }
  for (TextBlock& b : blocks) {
    if (!free(b) || b.vertical) continue;
    const double dy = b.bbox.cy() - axis_y;
    if (dy > 0 && dy <= params.tick_band * max_h && in_cols(b)) b.role = Role::x_tick;
  }

  int y_tick_left = std::numeric_limits<int>::max(), x_tick_bottom = std::numeric_limits<int>::min();
  bool any_y = false, any_x = false;
  for (const TextBlock& b : blocks) {
    if (b.role == Role::y_tick) y_tick_left = std::min(y_tick_left, b.bbox.x), any_y = true;
    if (b.role == Role::x_tick) x_tick_bottom = std::max(x_tick_bottom, b.bbox.bottom()), any_x = true;
  }
  for (TextBlock& b : blocks) {
    if (!free(b)) continue;
    if (any_y && b.bbox.right() <= y_tick_left)
      b.role = Role::y_label;
    else if (any_x && b.bbox.y >= x_tick_bottom)
      b.role = Role::x_label;
  }
  for (TextBlock& b : blocks)
    if (free(b) && b.bbox.cx() > axis_x && b.bbox.cx() <= x_end && b.bbox.cy() < axis_y) b.role = Role::bar_value;
}

}  // namespace chartex::semantics
