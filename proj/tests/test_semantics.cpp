#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "chartex/chartgen.hpp"
#include "chartex/semantics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

using namespace chartex;
using namespace chartex::semantics;
using textscan::Role;
using textscan::TextBlock;

namespace {

TextBlock block(const std::string& text, Rect box, Role role = Role::unassigned, bool vertical = false) {
  TextBlock b;
  b.text = text;
  b.bbox = box;
  b.role = role;
  b.vertical = vertical;
  b.confidence = 1.0;
  return b;
}

// Corner at (100, 400), x-axis to 700, y-axis up to 50.
disassembly::Axes axes_at(int ox = 100, int oy = 400, int right = 700, int top = 50) {
  disassembly::Axes a;
  a.origin = {ox, oy};
  a.x_axis = {{ox, oy}, {right, oy}};
  a.y_axis = {{ox, oy}, {ox, top}};
  a.plot_rect = {ox, top, right - ox + 1, oy - top + 1};
  return a;
}

// Tick text centered on the row for each value; 0..100 in 20s over 400 px -> 0.25 per px.
std::vector<TextBlock> y_tick_blocks(const std::vector<std::string>& texts, double px_per_step = 70.0, int oy = 400) {
  std::vector<TextBlock> out;
  for (std::size_t i = 0; i < texts.size(); ++i) {
    const int row = oy - static_cast<int>(std::lround(i * px_per_step));
    out.push_back(block(texts[i], {70, row - 6, 24, 12}, Role::y_tick));
  }
  return out;
}

disassembly::Bar bar(int x0, int x1, int top, int base = 400, int group = 0) {
  disassembly::Bar b;
  b.x_left = x0;
  b.x_right = x1;
  b.y_top = top;
  b.baseline_y = base;
  b.group_id = group;
  return b;
}

disassembly::Axes truth_axes(const chartgen::GroundTruth& t) {
  disassembly::Axes a;
  a.origin = t.origin;
  a.x_axis = t.x_axis;
  a.y_axis = t.y_axis;
  a.plot_rect = t.plot_rect;
  return a;
}

chartgen::ChartSpec labeled_spec() {
  chartgen::ChartSpec s;
  s.title = "Quarterly Sales";
  s.x_label = "Region";
  s.y_label = "Units";
  s.categories = {"North", "South", "East", "West"};
  s.values = {{30, 45}, {62.5, 20}, {80, 55}, {12, 90}};
  s.colors = {{200, 40, 40}, {40, 40, 200}};
  s.value_labels = true;
  return s;
}

}  // namespace

TEST_CASE("parse_number accepts decorated numbers only") {
  CHECK(*parse_number("42") == 42.0);
  CHECK(*parse_number("+1,250") == 1250.0);
  CHECK(*parse_number("12.5%") == 12.5);
  CHECK(*parse_number("-3") == -3.0);
  CHECK_FALSE(parse_number(""));
  CHECK_FALSE(parse_number("7a"));
  CHECK_FALSE(parse_number("North"));
  CHECK_FALSE(parse_number("1.2.3"));
}

TEST_CASE("title is the top-band block nearest the top middle") {
  std::vector<TextBlock> blocks = {block("Left", {10, 10, 60, 12}), block("Middle", {360, 20, 80, 12}),
                                   block("Below", {380, 200, 40, 12})};
  const auto t = assign_title(blocks, 800, 600);
  REQUIRE(t);
  CHECK(*t == 1);
  CHECK(blocks[1].role == Role::title);
  CHECK(blocks[0].role == Role::unassigned);

  std::vector<TextBlock> none = {block("Low", {360, 300, 80, 12})};
  CHECK_FALSE(assign_title(none, 800, 600));
  CHECK(none[0].role == Role::unassigned);
}

TEST_CASE("roles of rendered text match the generator's roles") {
  const chartgen::Rendered r = chartgen::render(labeled_spec());
  std::vector<TextBlock> blocks;
  for (const chartgen::TruthText& t : r.truth.texts)
    blocks.push_back(block(t.text, t.box, Role::unassigned, t.role == Role::y_label));
  assign_title(blocks, r.image.width(), r.image.height());
  classify_axis_text(blocks, truth_axes(r.truth));
  REQUIRE(blocks.size() == r.truth.texts.size());
  std::map<Role, int> seen;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    INFO(r.truth.texts[i].text);
    CHECK(blocks[i].role == r.truth.texts[i].role);
    ++seen[blocks[i].role];
  }
  CHECK(seen[Role::title] == 1);
  CHECK(seen[Role::x_tick] == 4);
  CHECK(seen[Role::bar_value] == 8);
}

TEST_CASE("text far from the axes stays unassigned") {
  std::vector<TextBlock> blocks = y_tick_blocks({"0", "20", "40"});
  blocks.push_back(block("Legend", {740, 200, 50, 12}));
  classify_axis_text(blocks, axes_at());
  CHECK(blocks.back().role == Role::unassigned);

  // Without y ticks nothing can be a y label.
  std::vector<TextBlock> lone = {block("Units", {20, 150, 12, 50}, Role::unassigned, true)};
  classify_axis_text(lone, axes_at());
  CHECK(lone[0].role != Role::y_label);
}

TEST_CASE("parse_ticks flags and repairs a 2<->7 misread") {
  const auto clean = parse_ticks(y_tick_blocks({"0", "20", "40", "60", "80", "100"}));
  REQUIRE(clean.size() == 6);
  for (const Tick& t : clean) CHECK_FALSE(t.suspect);
  CHECK(clean.front().value == 100.0);  // sorted by pixel, top first

  const auto fixed = parse_ticks(y_tick_blocks({"0", "20", "40", "60", "80", "100", "170"}));
  const Tick& t = fixed.front();
  CHECK(t.suspect);
  CHECK(t.repaired);
  CHECK(t.value == 120.0);
  CHECK(t.text == "120");
  CHECK(t.source_text == "170");

  // A 7 read as 2 is repaired too.
  const auto back = parse_ticks(y_tick_blocks({"0", "10", "20", "30", "40", "50", "60", "20"}));
  CHECK(back.front().repaired);
  CHECK(back.front().value == 70.0);

  // A misread that no swap explains stays suspect and unrepaired.
  const auto bad = parse_ticks(y_tick_blocks({"0", "20", "40", "90", "80"}));
  int suspects = 0;
  for (const Tick& k : bad) suspects += k.suspect && !k.repaired;
  CHECK(suspects == 1);

  // Two misreads out of six: both repaired, no correct tick touched.
  const auto two = parse_ticks(y_tick_blocks({"0", "40", "80", "170", "160", "700"}));
  std::vector<double> values;
  for (const Tick& k : two) {
    values.push_back(k.value);
    CHECK(k.suspect == k.repaired);
  }
  std::sort(values.begin(), values.end());
  CHECK(values == std::vector<double>{0, 40, 80, 120, 160, 200});

  CHECK_THROWS_AS(parse_ticks(y_tick_blocks({"50"})), CalibrationImpossible);
  CHECK_THROWS_AS(parse_ticks(y_tick_blocks({"a", "b"})), CalibrationImpossible);
}

TEST_CASE("calibrate fits value against pixel") {
  std::vector<Tick> two = {{400, 0}, {0, 100}};
  const Calibration c = calibrate(two, 400);
  CHECK(c.slope == doctest::Approx(-0.25));
  CHECK(c.value_at(200) == doctest::Approx(50.0));
  CHECK(c.intercept == doctest::Approx(0.0));
  CHECK(c.rms_residual == doctest::Approx(0.0));

  // Evenly spaced ticks: least squares agrees with the average-spacing rule.
  std::vector<Tick> even;
  for (int i = 0; i < 6; ++i) even.push_back({400.0 - 64.0 * i, 20.0 * i});
  CHECK(std::abs(calibrate(even, 400).slope - average_spacing_slope(even)) <= 1e-12);

  // Jittered rows: nonzero residual, slope within 1%.
  std::vector<Tick> jitter = even;
  const double d[] = {0.5, -0.5, 0.4, -0.3, 0.2, -0.4};
  for (int i = 0; i < 6; ++i) jitter[i].pixel += d[i];
  const Calibration j = calibrate(jitter, 400);
  CHECK(j.rms_residual > 0.0);
  CHECK(std::abs(j.slope / -0.3125 - 1.0) <= 0.01);

  std::vector<Tick> log = {{400, 1}, {300, 10}, {200, 100}, {100, 1000}};
  CHECK_THROWS_AS(calibrate(log, 400), LogarithmicAxis);
  std::vector<Tick> zigzag = {{400, 0}, {300, 20}, {200, 10}};
  CHECK_THROWS_AS(calibrate(zigzag, 400), CalibrationImpossible);
  std::vector<Tick> same_row = {{300, 0}, {300, 20}};
  CHECK_THROWS_AS(calibrate(same_row, 400), CalibrationImpossible);

  // Unrepaired suspects are left out of the fit.
  std::vector<Tick> with_bad = even;
  with_bad.push_back({100.0, 999.0, "999", "999", true, false, {}});
  CHECK(calibrate(with_bad, 400).slope == doctest::Approx(-0.3125));
}

TEST_CASE("value labels sit just above the bar") {
  const disassembly::Bar b = bar(200, 240, 150);
  std::vector<TextBlock> blocks = {block("62.5", {205, 130, 30, 12}, Role::bar_value)};
  CHECK(*value_from_label(b, blocks) == 62.5);

  std::vector<TextBlock> far = {block("62.5", {205, 100, 30, 12}, Role::bar_value)};
  CHECK_FALSE(value_from_label(b, far));
  // A label centered over the gap between two bars belongs to neither.
  std::vector<TextBlock> gap = {block("10", {235, 130, 30, 12}, Role::bar_value)};
  CHECK_FALSE(value_from_label(b, gap));
  CHECK_FALSE(value_from_label(b, {}));
}

TEST_CASE("value_from_height reads the bar top") {
  Calibration c;
  c.slope = -0.25;
  c.baseline_y = 400;
  CHECK(value_from_height(bar(0, 10, 150), c) == doctest::Approx(62.5));
}

TEST_CASE("assemble picks label, then calibration, then nothing") {
  const auto axes = axes_at();
  std::vector<TextBlock> ticks = y_tick_blocks({"0", "20", "40", "60", "80", "100"}, 64.0);
  ticks.push_back(block("A", {210, 410, 10, 12}));
  ticks.push_back(block("B", {310, 410, 10, 12}));
  const std::vector<disassembly::Bar> bars = {bar(200, 240, 160), bar(300, 340, 272)};

  std::vector<TextBlock> labeled = ticks;
  labeled.push_back(block("75", {210, 145, 20, 12}));
  labeled.push_back(block("40", {310, 257, 20, 12}));
  const ChartModel m1 = assemble(labeled, axes, bars, 800, 600);
  REQUIRE(m1.bars.size() == 2);
  CHECK(m1.bars[0].source == ValueSource::label);
  CHECK(m1.bars[0].value == 75.0);
  CHECK(m1.bars[1].value == 40.0);
  CHECK(m1.bars[0].category == 0);
  CHECK(m1.bars[1].category == 1);
  CHECK(m1.x_ticks.size() == 2);

  const ChartModel m2 = assemble(ticks, axes, bars, 800, 600);
  CHECK(m2.bars[0].source == ValueSource::calibrated);
  CHECK(m2.bars[0].value == doctest::Approx(75.0));
  CHECK(m2.bars[1].value == doctest::Approx(40.0));
  CHECK_FALSE(m2.has_valueless_bars());

  const ChartModel m3 = assemble({}, axes, bars, 800, 600);
  CHECK(m3.has_valueless_bars());
  CHECK(std::isnan(m3.bars[0].value));
  CHECK_FALSE(m3.warnings.empty());
}

TEST_CASE("calibrated values survive shifts and rescaling of the tick values") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    const int dx = static_cast<int>(rng() % 200), dy = static_cast<int>(rng() % 200);
    const double k = (1 + static_cast<double>(rng() % 40)) / 4.0;  // keeps every tick an integer
    std::vector<std::string> texts;
    for (int i = 0; i <= 5; ++i) texts.push_back(std::to_string(static_cast<long long>(std::lround(20 * i * k))));
    std::vector<TextBlock> blocks = y_tick_blocks(texts, 64.0, 400 + dy);
    for (TextBlock& b : blocks) b.bbox.x += dx;
    const int top = 400 + dy - static_cast<int>(rng() % 300);
    const ChartModel m = assemble(blocks, axes_at(100 + dx, 400 + dy, 700 + dx, 50 + dy),
                                  {bar(200 + dx, 240 + dx, top, 400 + dy)}, 900, 800);
    REQUIRE(m.calibration);
    const double want = k * 20.0 * (400 + dy - top) / 64.0;
    CHECK(std::abs(m.bars[0].value - want) <= 0.005 * std::max(std::abs(want), 1.0));
  }
}

TEST_CASE("translated moves every pixel quantity") {
  ChartModel m;
  m.title = TextItem{"T", {10, 10, 20, 10}};
  m.y_ticks.push_back({100.0, 5.0, "5", "5", false, false, {0, 95, 10, 10}});
  ModelBar b;
  b.geometry = bar(20, 30, 40, 100);
  m.bars.push_back(b);
  m.calibration = Calibration{-0.5, 0.0, 0.0, 100};
  const ChartModel t = translated(m, {7, 3});
  CHECK(t.title->box.x == 17);
  CHECK(t.y_ticks[0].pixel == 103.0);
  CHECK(t.bars[0].geometry.x_left == 27);
  CHECK(t.bars[0].geometry.baseline_y == 103);
  CHECK(t.calibration->value_at(t.bars[0].geometry.y_top) == m.calibration->value_at(m.bars[0].geometry.y_top));
}
