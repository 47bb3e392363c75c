#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "chartex/chartgen.hpp"
#include "chartex/font.hpp"

#include <cmath>

using namespace chartex;
using namespace chartex::chartgen;

namespace {

ChartSpec basic_spec() {
  ChartSpec s;
  s.title = "Mean change";
  s.x_label = "Quarter";
  s.y_label = "Score";
  s.categories = {"Q1", "Q2", "Q3", "Q4"};
  s.values = {{12, 40}, {55, 80}, {100, 23}, {67, 10}};
  s.y_max = 100;
  s.tick_step = 20;
  s.colors = {{31, 119, 180}, {230, 110, 0}};
  return s;
}

Rgb pixel(const RgbImage& img, int x, int y) { return {img.r(y, x), img.g(y, x), img.b(y, x)}; }

int count_diff(const RgbImage& a, const RgbImage& b) {
  return static_cast<int>(((a.r.cast<int>() - b.r.cast<int>()).abs() + (a.g.cast<int>() - b.g.cast<int>()).abs() +
                           (a.b.cast<int>() - b.b.cast<int>()).abs() > 0)
                              .count());
}

}  // namespace

TEST_CASE("value and tick formatting") {
  CHECK(format_value(12.5, 50) == "12.5");
  CHECK(format_value(7, 10) == "7.0");
  CHECK(format_value(62, 100) == "62");
  CHECK(format_value(999, 1000) == "999");
  CHECK(format_tick(40, 20) == "40");
  CHECK(format_tick(2.5, 0.5) == "2.5");
}

TEST_CASE("bars carry their series color and stop above the axis") {
  const Rendered r = render(basic_spec());
  const GroundTruth& t = r.truth;
  REQUIRE(t.bars.size() == 8);
  for (const TruthBar& b : t.bars) {
    const Rgb want = t.spec.colors[static_cast<std::size_t>(b.series)];
    int same = 0;
    for (int y = b.rect.y; y < b.rect.bottom(); ++y)
      for (int x = b.rect.x; x < b.rect.right(); ++x) same += pixel(r.image, x, y) == want;
    CHECK(same >= 0.95 * b.rect.area());
    CHECK(b.rect.bottom() == t.origin.y);
  }
  // Row below the axis line holds no bar color at all.
  for (int x = 0; x < r.image.width(); ++x)
    for (const Rgb& c : t.spec.colors) CHECK_FALSE(pixel(r.image, x, t.origin.y + 1) == c);
}

TEST_CASE("bar heights map back through the linear scale") {
  const Rendered r = render(basic_spec());
  const int plot_h = r.truth.plot_rect.h - 1;
  for (const TruthBar& b : r.truth.bars) {
    const int expect = static_cast<int>(std::floor(b.value * plot_h / r.truth.spec.y_max + 0.5));
    CHECK(b.rect.h == expect);
  }
  // Full-scale bar reaches the top tick row.
  const TruthBar& top = r.truth.bars[4];
  CHECK(top.value == 100);
  CHECK(top.rect.y == r.truth.y_tick_rows.back());
  CHECK(r.truth.y_tick_rows.front() == r.truth.origin.y);
}

TEST_CASE("rendered text matches the font bitmaps") {
  ChartSpec s = basic_spec();
  s.value_labels = true;
  const Rendered r = render(s);
  int checked = 0;
  for (const TruthText& tx : r.truth.texts) {
    BinaryImage want = font::rasterize(tx.text, s.text_scale);
    if (tx.role == textscan::Role::y_label) {
      // Rotated counter-clockwise: reads bottom to top.
      BinaryImage rot(want.cols(), want.rows());
      for (Eigen::Index y = 0; y < rot.rows(); ++y)
        for (Eigen::Index x = 0; x < rot.cols(); ++x) rot(y, x) = want(x, want.cols() - 1 - y);
      want = rot;
    }
    REQUIRE(want.cols() == tx.box.w);
    REQUIRE(want.rows() == tx.box.h);
    for (int y = 0; y < tx.box.h; ++y)
      for (int x = 0; x < tx.box.w; ++x)
        if (want(y, x)) CHECK(pixel(r.image, tx.box.x + x, tx.box.y + y) == Rgb{0, 0, 0});
    ++checked;
  }
  // title, two axis labels, 6 y ticks, 4 categories, 8 value labels
  CHECK(checked == 21);
}

TEST_CASE("noise flips an exact pixel count") {
  ChartSpec s = basic_spec();
  const Rendered clean = render(s);
  s.noise = 0.01;
  s.seed = 99;
  const Rendered noisy = render(s);
  CHECK(count_diff(clean.image, noisy.image) == std::lround(0.01 * 800 * 600));
  CHECK(count_diff(render(s).image, noisy.image) == 0);
}

TEST_CASE("hatching follows page coordinates") {
  ChartSpec s = basic_spec();
  s.hatching = true;
  const Rendered r = render(s);
  for (const TruthBar& b : r.truth.bars) {
    const Rect in{b.rect.x + 3, b.rect.y + 3, b.rect.w - 6, b.rect.h - 6};
    for (int y = in.y; y < in.bottom(); ++y)
      for (int x = in.x; x < in.right(); ++x) {
        const bool black = pixel(r.image, x, y) == Rgb{0, 0, 0};
        CHECK(black == (b.series == 1 && (x + y) % 8 < 2));
      }
  }
  s.colors.resize(1);
  for (auto& row : s.values) row.resize(1);
  const Rendered single = render(s);
  const TruthBar& b = single.truth.bars.front();
  int black = 0;
  for (int y = b.rect.y + 3; y < b.rect.bottom() - 3; ++y)
    for (int x = b.rect.x + 3; x < b.rect.right() - 3; ++x) black += pixel(single.image, x, y) == Rgb{0, 0, 0};
  CHECK(black > 0);
}

TEST_CASE("gridlines are light gray and under the bars") {
  ChartSpec s = basic_spec();
  s.gridlines = true;
  const Rendered r = render(s);
  const int row = r.truth.y_tick_rows[1];
  CHECK(pixel(r.image, r.truth.x_axis.p1.x, row) == Rgb{220, 220, 220});
  for (const TruthBar& b : r.truth.bars)
    if (b.rect.y < row) CHECK(pixel(r.image, b.rect.x + 1, row) == s.colors[static_cast<std::size_t>(b.series)]);
}

TEST_CASE("shift translates the whole chart") {
  ChartSpec s = basic_spec();
  const Rendered base = render(s);
  s.shift = {30, 20};
  const Rendered moved = render(s);
  CHECK(moved.image.width() == 830);
  CHECK(moved.image.height() == 620);
  CHECK(count_diff(crop(moved.image, {30, 20, 800, 600}), base.image) == 0);
  CHECK(moved.truth.origin == Point{base.truth.origin.x + 30, base.truth.origin.y + 20});
  for (std::size_t i = 0; i < base.truth.bars.size(); ++i) {
    CHECK(moved.truth.bars[i].rect.x == base.truth.bars[i].rect.x + 30);
    CHECK(moved.truth.bars[i].rect.y == base.truth.bars[i].rect.y + 20);
  }
}

TEST_CASE("infeasible and invalid specs") {
  ChartSpec s = basic_spec();
  s.categories.clear();
  s.values.clear();
  for (int i = 0; i < 40; ++i) {
    s.categories.push_back("C" + std::to_string(i));
    s.values.push_back({10, 20});
  }
  CHECK_THROWS_AS(render(s), SpecInfeasible);

  ChartSpec ragged = basic_spec();
  ragged.values[1].pop_back();
  CHECK_THROWS_AS(render(ragged), InvalidArgument);

  ChartSpec glyph = basic_spec();
  glyph.title = "caf\xc3\xa9";
  CHECK_THROWS_AS(render(glyph), InvalidArgument);

  ChartSpec step = basic_spec();
  step.tick_step = 30;
  CHECK_THROWS_AS(render(step), InvalidArgument);
}

TEST_CASE("truth json round trip") {
  ChartSpec s = basic_spec();
  s.value_labels = true;
  s.noise = 0.02;
  s.seed = 5;
  const Rendered r = render(s);
  const nlohmann::json j = truth_to_json(r.truth);
  CHECK(j["bars"].size() == 8);
  CHECK(j["bars"][0]["value_label"] == "12");
  CHECK(j["y_ticks"].size() == 6);
  CHECK(truth_to_json(truth_from_json(j)) == j);
  const Rendered again = render(truth_from_json(j).spec);
  CHECK(count_diff(again.image, r.image) == 0);
}

TEST_CASE("corpus is deterministic and inside the ranges") {
  const CorpusRanges ranges;
  const auto a = generate_corpus(6, 7, ranges);
  const auto b = generate_corpus(6, 7, ranges);
  const auto c = generate_corpus(6, 8, ranges);
  int differs = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(truth_to_json(a[i].truth) == truth_to_json(b[i].truth));
    differs += truth_to_json(a[i].truth) != truth_to_json(c[i].truth);
    const ChartSpec& s = a[i].truth.spec;
    const int bars = static_cast<int>(s.categories.size()) * s.series_count();
    CHECK(bars >= ranges.min_bars);
    CHECK(bars <= ranges.max_bars);
    CHECK(s.series_count() <= ranges.max_series);
    for (const auto& row : s.values)
      for (double v : row) {
        CHECK(v >= 0.1 * s.y_max - 1e-9);
        CHECK(v <= s.y_max);
      }
  }
  CHECK(differs > 0);
  CHECK(mix_seed(7, 0) != mix_seed(7, 1));
}
