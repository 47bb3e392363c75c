#include "chartex/semantics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>

namespace chartex::semantics {

using textscan::Role;
using textscan::TextBlock;

std::string_view to_string(ValueSource source) {
  switch (source) {
    case ValueSource::label: return "label";
    case ValueSource::calibrated: return "calibrated";
    case ValueSource::none: return "none";
  }
  return "none";
}

bool ChartModel::has_valueless_bars() const {
  return std::any_of(bars.begin(), bars.end(), [](const ModelBar& b) { return b.source == ValueSource::none; });
}

std::optional<double> value_from_label(const disassembly::Bar& bar, const std::vector<TextBlock>& blocks,
                                       const SemanticsParams& params) {
  std::optional<double> best;
  int best_gap = std::numeric_limits<int>::max();
  for (const TextBlock& b : blocks) {
    if (b.role != Role::bar_value) continue;
    if (b.bbox.cx() < bar.x_left || b.bbox.cx() > bar.x_right) continue;
    const int gap = bar.y_top - b.bbox.bottom();
    if (gap < 0 || gap > params.label_gap || gap >= best_gap) continue;
    if (const auto v = parse_number(b.text)) {
      best = v;
      best_gap = gap;
    }
  }
  return best;
}

double value_from_height(const disassembly::Bar& bar, const Calibration& cal) { return cal.value_at(bar.y_top); }

namespace {

std::optional<TextItem> joined(const std::vector<TextBlock>& blocks, Role role) {
  std::vector<const TextBlock*> hits;
  for (const TextBlock& b : blocks)
    if (b.role == role) hits.push_back(&b);
  if (hits.empty()) return std::nullopt;
  // Rotated text reads bottom to top, horizontal text left to right.
  std::sort(hits.begin(), hits.end(), [](const TextBlock* a, const TextBlock* b) {
    if (a->vertical && b->vertical) return a->bbox.bottom() > b->bbox.bottom();
    return a->bbox.x < b->bbox.x;
  });
  TextItem item;
  for (const TextBlock* b : hits) {
    if (!item.text.empty()) item.text.push_back(' ');
    item.text += b->text;
    item.box = unite(item.box, b->bbox);
  }
  return item;
}

}  // namespace

ChartModel assemble(std::vector<TextBlock> blocks, const disassembly::Axes& axes,
                    const std::vector<disassembly::Bar>& bars, int width, int height, const SemanticsParams& params) {
  ChartModel m;
  // Noise specks read as punctuation would otherwise take a role (and shift categories).
  std::erase_if(blocks, [](const TextBlock& b) {
    return std::none_of(b.text.begin(), b.text.end(), [](unsigned char c) { return std::isalnum(c); });
  });
  assign_title(blocks, width, height, params);
  classify_axis_text(blocks, axes, params);
  m.title = joined(blocks, Role::title);
  m.x_label = joined(blocks, Role::x_label);
  m.y_label = joined(blocks, Role::y_label);

  std::vector<const TextBlock*> x_ticks;
  for (const TextBlock& b : blocks)
    if (b.role == Role::x_tick) x_ticks.push_back(&b);
  std::sort(x_ticks.begin(), x_ticks.end(), [](const TextBlock* a, const TextBlock* b) { return a->bbox.cx() < b->bbox.cx(); });
  for (const TextBlock* b : x_ticks) m.x_ticks.push_back({b->text, b->bbox});

  try {
    m.y_ticks = parse_ticks(blocks, params);
    for (const Tick& t : m.y_ticks)
      if (t.suspect) m.warnings.push_back("suspect y tick '" + t.source_text + "'" + (t.repaired ? " repaired" : " excluded"));
    m.calibration = calibrate(m.y_ticks, axes.origin.y, params);
  } catch (const LogarithmicAxis& e) {
    m.warnings.push_back(std::string("logarithmic axis: ") + e.what());
  } catch (const CalibrationImpossible& e) {
    m.warnings.push_back(std::string("calibration impossible: ") + e.what());
  }

  std::vector<disassembly::Bar> sorted = bars;
  std::sort(sorted.begin(), sorted.end(), [](const disassembly::Bar& a, const disassembly::Bar& b) { return a.x_left < b.x_left; });
  if (m.x_ticks.empty() && !sorted.empty())
    m.warnings.push_back("no x tick text: categories assigned by position");
  int fallback_category = -1, last_group = std::numeric_limits<int>::max();
  int valueless = 0;
  for (const disassembly::Bar& b : sorted) {
    ModelBar mb;
    mb.geometry = b;
    mb.group = b.group_id;
    const double cx = 0.5 * (b.x_left + b.x_right);
    if (!m.x_ticks.empty()) {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < m.x_ticks.size(); ++i)
        if (std::abs(m.x_ticks[i].box.cx() - cx) < best) {
          best = std::abs(m.x_ticks[i].box.cx() - cx);
          mb.category = static_cast<int>(i);
        }
    } else {
      // A new category starts whenever the series sequence restarts.
      if (b.group_id <= last_group) ++fallback_category;
      last_group = b.group_id;
      mb.category = fallback_category;
    }
    if (const auto v = value_from_label(b, blocks, params)) {
      mb.value = *v;
      mb.source = ValueSource::label;
    } else if (m.calibration) {
      mb.value = value_from_height(b, *m.calibration);
      mb.source = ValueSource::calibrated;
    } else {
      mb.value = std::numeric_limits<double>::quiet_NaN();
      ++valueless;
    }
    m.bars.push_back(mb);
  }
  if (valueless) m.warnings.push_back(std::to_string(valueless) + " bar(s) without a value");
  return m;
}

ChartModel translated(ChartModel m, Point d) {
  auto move = [&](Rect& r) { r = {r.x + d.x, r.y + d.y, r.w, r.h}; };
  for (auto* t : {&m.title, &m.x_label, &m.y_label})
    if (*t) move((*t)->box);
  for (TextItem& t : m.x_ticks) move(t.box);
  for (Tick& t : m.y_ticks) {
    t.pixel += d.y;
    move(t.box);
  }
  for (ModelBar& b : m.bars) {
    b.geometry.x_left += d.x;
    b.geometry.x_right += d.x;
    b.geometry.y_top += d.y;
    b.geometry.baseline_y += d.y;
  }
  if (m.calibration) m.calibration->baseline_y += d.y;
  return m;
}

}  // namespace chartex::semantics
