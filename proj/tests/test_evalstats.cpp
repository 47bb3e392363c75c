#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "chartex/evalstats.hpp"

#include <cmath>
#include <random>

using namespace chartex;
using namespace chartex::evalstats;
using textscan::Role;

namespace {

// Two categories by two series; x ticks "A", "B"; one y tick; title.
chartgen::GroundTruth truth_fixture() {
  chartgen::GroundTruth t;
  t.bars = {{0, 0, 10.0, {100, 200, 20, 100}},
            {0, 1, 20.0, {120, 100, 20, 200}},
            {1, 0, 30.0, {200, 50, 20, 250}},
            {1, 1, 40.0, {220, 150, 20, 150}}};
  t.texts = {{Role::x_tick, "A", {115, 310, 10, 12}},
             {Role::x_tick, "B", {215, 310, 10, 12}},
             {Role::y_tick, "20", {60, 94, 20, 12}},
             {Role::title, "Sales", {150, 10, 60, 14}}};
  return t;
}

semantics::ModelBar model_bar(int category, int group, double value, int x) {
  semantics::ModelBar b;
  b.category = category;
  b.group = group;
  b.value = value;
  b.source = semantics::ValueSource::label;
  b.geometry.x_left = x;
  b.geometry.x_right = x + 20;
  return b;
}

semantics::ChartModel model_fixture() {
  semantics::ChartModel m;
  m.bars = {model_bar(0, 0, 10.0, 100), model_bar(0, 1, 20.0, 120), model_bar(1, 0, 30.0, 200),
            model_bar(1, 1, 40.0, 220)};
  m.x_ticks = {{"A", {115, 310, 10, 12}}, {"B", {215, 310, 10, 12}}};
  semantics::Tick tick;
  tick.text = "20";
  tick.box = {61, 95, 20, 12};
  m.y_ticks = {tick};
  m.title = semantics::TextItem{"Sales", {150, 10, 60, 14}};
  return m;
}

// Textbook formulas written out independently of the library.
struct Reference {
  double bias, sd;
};
Reference reference(const std::vector<double>& t, const std::vector<double>& e) {
  const double n = static_cast<double>(t.size());
  double s = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) s += e[i] - t[i];
  const double bias = s / n;
  double ss = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) ss += std::pow(e[i] - t[i] - bias, 2);
  return {bias, std::sqrt(ss / (n - 1))};
}

}  // namespace

TEST_CASE("a perfect model matches everything") {
  const MatchResult r = match(model_fixture(), truth_fixture());
  const AccuracyReport a = accuracy(r);
  CHECK(a.bar_pairs == 4);
  CHECK(a.within_1 == 4);
  CHECK(a.x_tick.n == 2);
  CHECK(a.x_tick.exact == 2);
  CHECK(a.y_tick.exact == 1);
  CHECK(a.title.exact == 1);
  CHECK(*a.bars_detected_percent() == 100.0);
  CHECK(*a.text_detected_percent() == 100.0);
  CHECK_FALSE(a.x_label.percent());
}

TEST_CASE("missing and valueless bars count as misses") {
  semantics::ChartModel m = model_fixture();
  m.bars.erase(m.bars.begin() + 2);
  m.bars[0].source = semantics::ValueSource::none;
  m.bars[0].value = std::nan("");
  const MatchResult r = match(m, truth_fixture());
  CHECK(r.misses_of(ObjectClass::bar_value) == 2);
  CHECK(r.truth_of(ObjectClass::bar_value) == 4);
  CHECK(accuracy(r).bar_pairs == 2);
}

TEST_CASE("consistently permuted group ids still match") {
  semantics::ChartModel m = model_fixture();
  for (auto& b : m.bars) b.group = 7 - b.group;
  const AccuracyReport a = accuracy(match(m, truth_fixture()));
  CHECK(a.bar_pairs == 4);
  CHECK(a.within_1 == 4);
}

TEST_CASE("text outside the radius is a miss, wrong text a mismatch") {
  semantics::ChartModel m = model_fixture();
  m.x_ticks[0].text = "R";
  m.title->box.x += 100;
  const MatchResult r = match(m, truth_fixture());
  const AccuracyReport a = accuracy(r);
  CHECK(a.x_tick.n == 2);
  CHECK(a.x_tick.exact == 1);
  CHECK(*a.x_tick.percent() == 50.0);
  CHECK(r.misses_of(ObjectClass::title) == 1);
}

TEST_CASE("percentages are exact counts over pairs") {
  AccuracyReport a;
  a.y_tick.n = 100;
  a.y_tick.exact = 88;
  CHECK(*a.y_tick.percent() == 88.0);

  // Hand-made relative errors against thresholds (inclusive).
  const double truth[] = {100, 100, 100, 100, 100, 100, 100, 100, 100, 0.5};
  const double got[] = {100, 100.5, 101, 101.5, 102, 103, 105, 106, 90, 0.5};
  MatchResult r;
  for (int i = 0; i < 10; ++i) {
    MatchedPair p;
    p.truth = truth[i];
    p.extracted = got[i];
    r.pairs.push_back(p);
  }
  const AccuracyReport b = accuracy(r);
  CHECK(b.bar_pairs == 10);
  CHECK(b.within_1 == 4);
  CHECK(b.within_2 == 6);
  CHECK(b.within_5 == 8);
  CHECK(relative_error(0.0, 0.0) == 0.0);
}

TEST_CASE("Bland-Altman reference fixtures") {
  const BlandAltman same = bland_altman({1, 2, 3}, {1, 2, 3});
  CHECK(same.bias == 0.0);
  CHECK(same.sd == 0.0);
  CHECK(same.pct_within == 100.0);

  const auto [lo, hi] = limits_of_agreement(-0.544, 1.652);
  CHECK(lo == doctest::Approx(-3.848).epsilon(1e-9));
  CHECK(hi == doctest::Approx(2.760).epsilon(1e-9));

  // Differences 1, -1, 2, -2, 0.
  const BlandAltman five = bland_altman({10, 10, 10, 10, 10}, {11, 9, 12, 8, 10});
  CHECK(five.n == 5);
  CHECK(std::abs(five.bias) < 1e-12);
  CHECK(five.sd == doctest::Approx(1.5811).epsilon(1e-4));
  CHECK(five.loa_low == doctest::Approx(-3.162).epsilon(1e-3));
  CHECK(five.loa_high == doctest::Approx(3.162).epsilon(1e-3));
  REQUIRE(five.scatter.size() == 5);
  CHECK(five.scatter[0].first == 10.5);
  CHECK(five.scatter[0].second == 1.0);

  const BlandAltman pop = bland_altman({10, 10, 10, 10, 10}, {11, 9, 12, 8, 10}, {2.0, false});
  CHECK(pop.sd == doctest::Approx(std::sqrt(2.0)));

  CHECK_THROWS_AS(bland_altman({1}, {1}), InsufficientData);
  CHECK_THROWS_AS(bland_altman(std::vector<double>{}, std::vector<double>{}), InsufficientData);
  CHECK_THROWS_AS(bland_altman({1, 2}, {1}), InvalidArgument);
}

TEST_CASE("Bland-Altman matches the textbook and is shift and negation invariant") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-100.0, 100.0);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 40);
    std::vector<double> t(n), e(n);
    for (int i = 0; i < n; ++i) {
      t[i] = u(rng);
      e[i] = t[i] + 0.1 * u(rng);
    }
    const BlandAltman ba = bland_altman(t, e);
    const Reference ref = reference(t, e);
    CHECK(ba.bias == doctest::Approx(ref.bias).epsilon(1e-9));
    CHECK(ba.sd == doctest::Approx(ref.sd).epsilon(1e-9));

    const double c = u(rng);
    std::vector<double> ts = t, es = e;
    for (int i = 0; i < n; ++i) ts[i] += c, es[i] += c;
    const BlandAltman shifted = bland_altman(ts, es);
    CHECK(std::abs(shifted.bias - ba.bias) <= 1e-9);
    CHECK(std::abs(shifted.sd - ba.sd) <= 1e-9);

    const BlandAltman swapped = bland_altman(e, t);
    CHECK(std::abs(swapped.bias + ba.bias) <= 1e-12);
    CHECK(std::abs(swapped.sd - ba.sd) <= 1e-12);
    CHECK(std::abs(swapped.loa_low + ba.loa_high) <= 1e-9);
  }
}

TEST_CASE("report text lists rows in order and marks empty classes") {
  const MatchResult r = match(model_fixture(), truth_fixture());
  const AccuracyReport a = accuracy(r);
  const std::string text = report_text(a, bland_altman(r));
  const char* rows[] = {"X-TICK VALUE", "X-AXIS LABEL", "Y-TICK VALUE", "Y-AXIS LABEL",
                        "BAR VALUE (<1% ERR)", "BAR VALUE (<2% ERR)", "BAR VALUE (<5% ERR)"};
  std::size_t at = 0;
  for (const char* row : rows) {
    const std::size_t p = text.find(row, at);
    CHECK(p != std::string::npos);
    at = p;
  }
  const std::size_t label = text.find("X-AXIS LABEL");
  CHECK(text.substr(label, text.find('\n', label) - label).find("n/a") != std::string::npos);
  CHECK(report_text(a, std::nullopt).find("Bland-Altman: n/a") != std::string::npos);
}

TEST_CASE("report JSON round-trips the counts") {
  const MatchResult r = match(model_fixture(), truth_fixture());
  const AccuracyReport a = accuracy(r);
  const nlohmann::json j = report_json(a, bland_altman(r));
  CHECK(j["strings"]["x_label"]["percent"].is_null());
  const AccuracyReport b = report_from_json(nlohmann::json::parse(j.dump()));
  CHECK(b.x_tick.exact == a.x_tick.exact);
  CHECK(b.bar_pairs == a.bar_pairs);
  CHECK(b.within_5 == a.within_5);
  CHECK(b.text_truth == a.text_truth);
  CHECK(report_json(b, bland_altman(r)) == j);
}

TEST_CASE("merging results pools counts") {
  MatchResult a = match(model_fixture(), truth_fixture());
  const MatchResult b = a;
  a.merge(b);
  CHECK(a.pairs.size() == 2 * b.pairs.size());
  CHECK(a.truth_of(ObjectClass::bar_value) == 8);
  CHECK(bland_altman_csv(bland_altman(a)).rfind("mean,difference\n", 0) == 0);
}
