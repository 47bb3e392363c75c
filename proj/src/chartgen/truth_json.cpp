#include "chartex/chartgen.hpp"
#include "chartex/jsonio.hpp"

namespace chartex::chartgen {

using nlohmann::json;
using namespace jsonio;

namespace {

json segment_json(const imgproc::LineSegment& s) { return json::array({to_json(s.p0), to_json(s.p1)}); }
imgproc::LineSegment segment_from(const json& j) { return {point_from(j.at(0)), point_from(j.at(1))}; }

json spec_json(const ChartSpec& s) {
  json colors = json::array();
  for (const Rgb& c : s.colors) colors.push_back(to_json(c));
  return {{"width", s.width},         {"height", s.height},         {"shift", to_json(s.shift)},
          {"title", s.title},         {"x_label", s.x_label},       {"y_label", s.y_label},
          {"categories", s.categories}, {"values", s.values},        {"y_max", s.y_max},
          {"tick_step", s.tick_step}, {"colors", colors},           {"value_labels", s.value_labels},
          {"gridlines", s.gridlines}, {"hatching", s.hatching},     {"noise", s.noise},
          {"seed", s.seed},           {"text_scale", s.text_scale}};
}

ChartSpec spec_from(const json& j) {
  ChartSpec s;
  s.width = j.at("width");
  s.height = j.at("height");
  s.shift = point_from(j.at("shift"));
  s.title = j.at("title");
  s.x_label = j.at("x_label");
  s.y_label = j.at("y_label");
  s.categories = j.at("categories").get<std::vector<std::string>>();
  s.values = j.at("values").get<std::vector<std::vector<double>>>();
  s.y_max = j.at("y_max");
  s.tick_step = j.at("tick_step");
  for (const json& c : j.at("colors")) s.colors.push_back(rgb_from(c));
  s.value_labels = j.at("value_labels");
  s.gridlines = j.at("gridlines");
  s.hatching = j.at("hatching");
  s.noise = j.at("noise");
  s.seed = j.at("seed");
  s.text_scale = j.at("text_scale");
  return s;
}

}  // namespace

json truth_to_json(const GroundTruth& t) {
  const ChartSpec& s = t.spec;
  json doc;
  doc["title"] = s.title;
  doc["x_label"] = s.x_label;
  doc["y_label"] = s.y_label;

  json x_ticks = json::array(), y_ticks = json::array(), blocks = json::array();
  std::size_t yk = 0;
  for (const TruthText& tx : t.texts) {
    blocks.push_back({{"role", textscan::to_string(tx.role)}, {"text", tx.text}, {"bbox", to_json(tx.box)}});
    if (tx.role == textscan::Role::x_tick)
      x_ticks.push_back({{"text", tx.text}, {"pixel", number(tx.box.cx())}, {"bbox", to_json(tx.box)}});
    if (tx.role == textscan::Role::y_tick && yk < t.y_tick_values.size()) {
      y_ticks.push_back({{"text", tx.text},
                         {"value", number(t.y_tick_values[yk])},
                         {"pixel", t.y_tick_rows[yk]},
                         {"bbox", to_json(tx.box)}});
      ++yk;
    }
  }
  doc["x_ticks"] = x_ticks;
  doc["y_ticks"] = y_ticks;
  doc["text_blocks"] = blocks;

  json bars = json::array();
  for (const TruthBar& b : t.bars) {
    json jb = {{"category", s.categories.at(static_cast<std::size_t>(b.category))},
               {"category_index", b.category},
               {"group", b.series},
               {"value", b.value},
               {"geometry", to_json(b.rect)}};
    jb["value_label"] = s.value_labels ? json(format_value(b.value, s.y_max)) : json(nullptr);
    bars.push_back(jb);
  }
  doc["bars"] = bars;
  doc["axes"] = {{"origin", to_json(t.origin)},
                 {"x_axis", segment_json(t.x_axis)},
                 {"y_axis", segment_json(t.y_axis)},
                 {"plot_rect", to_json(t.plot_rect)}};
  doc["spec"] = spec_json(s);
  return doc;
}

GroundTruth truth_from_json(const json& j) {
  GroundTruth t;
  t.spec = spec_from(j.at("spec"));
  for (const json& b : j.at("bars"))
    t.bars.push_back({b.at("category_index"), b.at("group"), b.at("value"), rect_from(b.at("geometry"))});
  for (const json& tx : j.at("text_blocks"))
    t.texts.push_back({textscan::role_from_string(tx.at("role").get<std::string>()), tx.at("text"), rect_from(tx.at("bbox"))});
  for (const json& y : j.at("y_ticks")) {
    t.y_tick_values.push_back(y.at("value"));
    t.y_tick_rows.push_back(y.at("pixel"));
  }
  const json& a = j.at("axes");
  t.origin = point_from(a.at("origin"));
  t.x_axis = segment_from(a.at("x_axis"));
  t.y_axis = segment_from(a.at("y_axis"));
  t.plot_rect = rect_from(a.at("plot_rect"));
  return t;
}

}  // namespace chartex::chartgen
