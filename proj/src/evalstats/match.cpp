#include "chartex/evalstats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace chartex::evalstats {

using textscan::Role;

std::string_view to_string(ObjectClass c) {
  switch (c) {
    case ObjectClass::bar_value: return "bar_value";
    case ObjectClass::x_tick: return "x_tick";
    case ObjectClass::y_tick: return "y_tick";
    case ObjectClass::x_label: return "x_label";
    case ObjectClass::y_label: return "y_label";
    case ObjectClass::title: return "title";
  }
  return "bar_value";
}

void MatchResult::merge(const MatchResult& other) {
  pairs.insert(pairs.end(), other.pairs.begin(), other.pairs.end());
  for (std::size_t i = 0; i < kClasses.size(); ++i) {
    misses[i] += other.misses[i];
    truth_counts[i] += other.truth_counts[i];
  }
}

namespace {

struct Item {
  std::string text;
  double cx = 0.0, cy = 0.0;
};

// Greedy in truth order: each truth item takes the nearest unused candidate in range.
void match_text(ObjectClass cls, const std::vector<Item>& truth, const std::vector<Item>& found, double radius,
                MatchResult& out) {
  const auto k = static_cast<std::size_t>(cls);
  std::vector<bool> used(found.size(), false);
  for (const Item& t : truth) {
    ++out.truth_counts[k];
    std::size_t best = found.size();
    double best_d = radius;
    for (std::size_t i = 0; i < found.size(); ++i) {
      if (used[i]) continue;
      const double d = std::hypot(found[i].cx - t.cx, found[i].cy - t.cy);
      if (d <= best_d) {
        best_d = d;
        best = i;
      }
    }
    if (best == found.size()) {
      ++out.misses[k];
      continue;
    }
    used[best] = true;
    MatchedPair p;
    p.object_class = cls;
    p.truth_text = t.text;
    p.extracted_text = found[best].text;
    out.pairs.push_back(std::move(p));
  }
}

Item item(const std::string& text, const Rect& box) { return {text, box.cx(), box.cy()}; }

// (category, group) -> group relabeled by first occurrence in (category, x) order.
template <typename Bar, typename Cat, typename Group, typename X>
std::map<int, int> canonical_groups(const std::vector<Bar>& bars, Cat cat, Group group, X x) {
  std::vector<const Bar*> order;
  for (const Bar& b : bars) order.push_back(&b);
  std::stable_sort(order.begin(), order.end(), [&](const Bar* a, const Bar* b) {
    return cat(*a) != cat(*b) ? cat(*a) < cat(*b) : x(*a) < x(*b);
  });
  std::map<int, int> ids;
  for (const Bar* b : order) ids.emplace(group(*b), static_cast<int>(ids.size()));
  return ids;
}

}  // namespace

MatchResult match(const semantics::ChartModel& model, const chartgen::GroundTruth& truth, const MatchParams& params) {
  MatchResult out;

  // Bars.
  const auto tmap = canonical_groups(
      truth.bars, [](const chartgen::TruthBar& b) { return b.category; },
      [](const chartgen::TruthBar& b) { return b.series; }, [](const chartgen::TruthBar& b) { return b.rect.x; });
  const auto pmap = canonical_groups(
      model.bars, [](const semantics::ModelBar& b) { return b.category; },
      [](const semantics::ModelBar& b) { return b.group; },
      [](const semantics::ModelBar& b) { return b.geometry.x_left; });
  std::map<std::pair<int, int>, const semantics::ModelBar*> found;
  for (const semantics::ModelBar& b : model.bars)
    if (b.source != semantics::ValueSource::none && std::isfinite(b.value))
      found.emplace(std::make_pair(b.category, pmap.at(b.group)), &b);
  const auto kb = static_cast<std::size_t>(ObjectClass::bar_value);
  for (const chartgen::TruthBar& t : truth.bars) {
    ++out.truth_counts[kb];
    const auto it = found.find({t.category, tmap.at(t.series)});
    if (it == found.end()) {
      ++out.misses[kb];
      continue;
    }
    MatchedPair p;
    p.truth = t.value;
    p.extracted = it->second->value;
    out.pairs.push_back(p);
    found.erase(it);
  }

  // Text.
  std::map<Role, std::vector<Item>> truth_items;
  for (const chartgen::TruthText& t : truth.texts) truth_items[t.role].push_back(item(t.text, t.box));
  auto one = [](const std::optional<semantics::TextItem>& t) {
    return t ? std::vector<Item>{item(t->text, t->box)} : std::vector<Item>{};
  };
  std::vector<Item> x_ticks, y_ticks;
  for (const semantics::TextItem& t : model.x_ticks) x_ticks.push_back(item(t.text, t.box));
  for (const semantics::Tick& t : model.y_ticks) y_ticks.push_back(item(t.text, t.box));
  match_text(ObjectClass::x_tick, truth_items[Role::x_tick], x_ticks, params.text_radius, out);
  match_text(ObjectClass::y_tick, truth_items[Role::y_tick], y_ticks, params.text_radius, out);
  match_text(ObjectClass::x_label, truth_items[Role::x_label], one(model.x_label), params.text_radius, out);
  match_text(ObjectClass::y_label, truth_items[Role::y_label], one(model.y_label), params.text_radius, out);
  match_text(ObjectClass::title, truth_items[Role::title], one(model.title), params.text_radius, out);
  return out;
}

}  // namespace chartex::evalstats
