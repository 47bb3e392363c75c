#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "chartex/app.hpp"
#include "chartex/chartgen.hpp"
#include "chartex/png_io.hpp"

#include <cmath>
#include <filesystem>
#include <random>

using namespace chartex;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("chartex_test_app_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

chartgen::ChartSpec spec() {
  chartgen::ChartSpec s;
  s.title = "Visits";
  s.x_label = "Clinic";
  s.y_label = "Count";
  s.categories = {"North", "South", "East"};
  s.values = {{40}, {75}, {20}};
  s.colors = {{60, 120, 200}};
  return s;
}

}  // namespace

TEST_CASE("config parses, validates and hashes") {
  const app::Config d;
  CHECK(d.get("bars.open_kernel") == "5");
  CHECK(d.get("ocr.interpolation") == "bicubic");
  CHECK(d.get("eval.loa_z") == "2");

  const app::Config c = app::Config::parse("# comment\n bars.open_kernel = 7  # trailing\n\neval.sample_sd=false\n");
  CHECK(c.bars.open_kernel == 7);
  CHECK_FALSE(c.agreement.sample_sd);
  CHECK(c.hash() != d.hash());

  CHECK_THROWS_AS(app::Config::parse("no.such.key = 1\n"), app::ConfigError);
  CHECK_THROWS_AS(app::Config::parse("bars.open_kernel = 0\n"), app::ConfigError);
  CHECK_THROWS_AS(app::Config::parse("axes.dark_level = 300\n"), app::ConfigError);
  CHECK_THROWS_AS(app::Config::parse("bars.majority = maybe\n"), app::ConfigError);
  CHECK_THROWS_AS(app::Config::parse("semantics.tick_band = abc\n"), app::ConfigError);
  CHECK_THROWS_AS(app::Config::parse("just words\n"), app::ConfigError);

  // The canonical dump reproduces the config, so the hash is a function of values only.
  const app::Config again = app::Config::parse(c.canonical());
  CHECK(again.canonical() == c.canonical());
  CHECK(again.hash() == c.hash());
  CHECK(app::Config::parse(d.canonical()).hash() == d.hash());
  CHECK(app::Config::parse("bars.open_kernel = 5\n").hash() == d.hash());
  CHECK(d.hash().size() == 16);
}

TEST_CASE("every key round-trips and changes the hash") {
  const app::Config d;
  for (const std::string& key : app::Config::keys()) {
    INFO(key);
    app::Config c;
    c.set(key, d.get(key));
    CHECK(c.hash() == d.hash());
  }
  app::Config c;
  c.set("semantics.label_gap", "16");
  CHECK(c.hash() != d.hash());
  c.set("semantics.label_gap", "15");
  CHECK(c.hash() == d.hash());
}

TEST_CASE("fnv1a64 reference values") {
  CHECK(app::fnv1a64("") == 0xcbf29ce484222325ull);
  CHECK(app::fnv1a64("a") == 0xaf63dc4c8601ec8cull);
  CHECK(app::fnv1a64("foobar") == 0x85944171f73967e8ull);
}

TEST_CASE("a rendered chart extracts to its ground truth") {
  const chartgen::Rendered r = chartgen::render(spec());
  const app::Config config;
  const auto ocr = app::make_ocr(config);
  const auto panels = app::extract_page(r.image, config, *ocr);
  REQUIRE(panels.size() == 1);
  REQUIRE(panels[0].model);
  CHECK(panels[0].status == app::PanelStatus::extracted);
  const semantics::ChartModel& m = *panels[0].model;
  REQUIRE(m.bars.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(m.bars[i].category == static_cast<int>(i));
    CHECK(std::abs(m.bars[i].value - r.truth.bars[i].value) <= 0.02 * r.truth.bars[i].value);
  }
  CHECK(m.title->text == "Visits");
  CHECK(m.x_label->text == "Clinic");
  CHECK(m.y_label->text == "Count");
  REQUIRE(panels[0].axes);
  CHECK(panels[0].axes->origin == r.truth.origin);

  const evalstats::AccuracyReport a = evalstats::accuracy(evalstats::match(m, r.truth));
  CHECK(a.bar_pairs == 3);
  CHECK(*a.x_tick.percent() == 100.0);
}

TEST_CASE("a chart without ticks or labels leaves bars valueless") {
  // Erase the y tick text; the chart has no value labels either.
  chartgen::Rendered r = chartgen::render(spec());
  for (const chartgen::TruthText& t : r.truth.texts)
    if (t.role == textscan::Role::y_tick) {
      r.image.r.block(t.box.y, t.box.x, t.box.h, t.box.w).setConstant(255);
      r.image.g.block(t.box.y, t.box.x, t.box.h, t.box.w).setConstant(255);
      r.image.b.block(t.box.y, t.box.x, t.box.h, t.box.w).setConstant(255);
    }
  const app::Config config;
  const auto ocr = app::make_ocr(config);
  const auto panels = app::extract_page(r.image, config, *ocr);
  REQUIRE(panels.size() == 1);
  CHECK(panels[0].status == app::PanelStatus::partial);
  REQUIRE(panels[0].model);
  CHECK(panels[0].model->has_valueless_bars());
  app::FileOutcome f;
  f.panels = panels;
  CHECK(app::exit_code({f}) == 2);
}

TEST_CASE("a blank page has no panels") {
  const RgbImage blank(200, 100);
  const app::Config config;
  const auto ocr = app::make_ocr(config);
  CHECK(app::extract_page(blank, config, *ocr).empty());
  app::FileOutcome f;
  CHECK(app::exit_code({f}) == 2);
  f.io_error = "unreadable";
  CHECK(app::exit_code({f}) == 1);
}

TEST_CASE("chart JSON round-trips") {
  const chartgen::Rendered r = chartgen::render(spec());
  const app::Config config;
  const auto ocr = app::make_ocr(config);
  const auto panels = app::extract_page(r.image, config, *ocr);
  REQUIRE(panels.size() == 1);
  const nlohmann::json j = app::model_to_json(*panels[0].model, panels[0], config.hash());
  for (const char* key : {"title", "x_label", "y_label", "x_ticks", "y_ticks", "bars", "provenance"})
    CHECK(j.contains(key));
  CHECK(j["provenance"]["config_hash"] == config.hash());
  CHECK(j["bars"][0].contains("value_source"));
  CHECK(j["y_ticks"][0].contains("suspect"));

  const semantics::ChartModel back = app::model_from_json(nlohmann::json::parse(app::dump(j)));
  CHECK(app::dump(app::model_to_json(back, panels[0], config.hash())) == app::dump(j));
  CHECK(back.x_label->box == panels[0].model->x_label->box);

  semantics::ChartModel none = back;
  none.bars[0].value = std::nan("");
  none.bars[0].source = semantics::ValueSource::none;
  const nlohmann::json jn = app::model_to_json(none, panels[0], config.hash());
  CHECK(jn["bars"][0]["value"].is_null());
  CHECK(std::isnan(app::model_from_json(jn).bars[0].value));
  CHECK(app::model_csv(none).find("0,North,0,,none\n") != std::string::npos);
}

TEST_CASE("pipeline writes predictions, manifest and reports") {
  const fs::path dir = scratch("pipeline");
  app::write_corpus(dir, 3, chartgen::kDefaultCorpusSeed, 2);
  CHECK(fs::exists(dir / "0002.png"));
  CHECK(fs::exists(dir / "0002.truth.json"));

  const app::Config config;
  const app::PipelineResult a = app::run_pipeline(dir, dir / "a", config, 1);
  const app::PipelineResult b = app::run_pipeline(dir, dir / "b", config, 3);
  CHECK(a.exit_code == 0);
  REQUIRE(a.eval);
  CHECK(a.eval->charts == 3);
  for (const char* name : {"0000.chart.json", "0001.chart.json", "0002.chart.json", "manifest.json", "report.json",
                           "report.txt", "bland_altman.csv"}) {
    INFO(name);
    REQUIRE(fs::exists(dir / "a" / name));
    CHECK(app::read_text(dir / "a" / name) == app::read_text(dir / "b" / name));
  }

  // A missing prediction is skipped with a warning.
  fs::remove(dir / "a" / "0001.chart.json");
  const app::EvalOutcome e = app::evaluate_dirs(dir / "a", dir, config);
  CHECK(e.charts == 2);
  CHECK(e.warnings.size() == 1);
  fs::remove_all(dir);
}

TEST_CASE("unreadable inputs are I/O errors naming the file") {
  const fs::path dir = scratch("io");
  app::write_text(dir / "bad.png", "not a png");
  const auto files = app::extract_files({dir / "bad.png"}, app::Config{}, {});
  REQUIRE(files.size() == 1);
  CHECK(files[0].io_error.find("bad.png") != std::string::npos);
  CHECK(app::exit_code(files) == 1);
  fs::remove_all(dir);
}
