// Acceptance suite: one PASS/FAIL line per criterion, exit status 0 only if all pass.

#include "chartex/app.hpp"
#include "chartex/chartgen.hpp"
#include "chartex/evalstats.hpp"
#include "chartex/imgproc.hpp"
#include "chartex/semantics.hpp"
#include "oracles.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <string>
#include <thread>

using namespace chartex;
namespace fs = std::filesystem;

namespace {

// Tolerances and floors.
constexpr int kRandomImages = 100;
constexpr double kPrimitiveSeconds = 30.0;
constexpr int kGeometryFixtures = 50;
constexpr int kAxisTolerancePx = 1;
constexpr int kBarTolerancePx = 2;
constexpr double kGeometrySeconds = 60.0;
constexpr int kCorpusSize = 200;
constexpr double kBarsDetectedFloor = 95.0;
constexpr double kWithin5Floor = 88.0;
constexpr double kWithin2Floor = 67.5;
constexpr double kWithin1Floor = 46.6;
constexpr double kStringFloor = 90.0;
constexpr double kCorpusSeconds = 300.0;
constexpr double kSlopeRelTolerance = 1e-12;
constexpr double kBlandAltmanTolerance = 1e-12;
constexpr double kInvarianceTolerance = 1e-9;
constexpr double kInjectionRate = 0.10;
constexpr double kRepairFloor = 0.90;
constexpr int kInjectionRounds = 10;
constexpr double kChartSeconds = 1.0;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

int failures = 0;

void report(int id, const char* name, const std::function<Verdict()>& run) {
  Verdict v;
  try {
    v = run();
  } catch (const std::exception& e) {
    v = {false, std::string("exception: ") + e.what()};
  }
  failures += !v.pass;
  std::printf("criterion %d %s  %s: %s\n", id, v.pass ? "PASS" : "FAIL", name, v.detail.c_str());
  std::fflush(stdout);
}

const std::vector<chartgen::GroundTruth>& corpus_truths() {
  static const std::vector<chartgen::GroundTruth> truths = [] {
    std::vector<chartgen::GroundTruth> out;
    for (int i = 0; i < kCorpusSize; ++i) out.push_back(chartgen::generate_item(chartgen::kDefaultCorpusSeed, i).truth);
    return out;
  }();
  return truths;
}

const semantics::ChartModel* first_model(const std::vector<app::PanelOutcome>& panels) {
  for (const app::PanelOutcome& p : panels)
    if (p.model) return &*p.model;
  return nullptr;
}

Verdict primitive_oracles() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(101);
  int otsu = 0, adaptive = 0, components = 0, opening = 0;
  for (int i = 0; i < kRandomImages; ++i) {
    const GrayImage gray = oracle::random_gray(rng, 32, 32);
    otsu += imgproc::otsu_binarize(gray).threshold == oracle::otsu_threshold(gray);
    const int window = 3 + 2 * static_cast<int>(rng() % 7);
    adaptive += (imgproc::adaptive_threshold(gray, window, 15.0) == oracle::adaptive_threshold(gray, window, 15.0)).all();
    const BinaryImage bin = oracle::random_binary(rng, 32, 32, 0.45);
    components += (imgproc::connected_components(bin).labels == oracle::flood_fill_labels(bin)).all();
    const int k = 3 + 2 * static_cast<int>(rng() % 2);
    const BinaryImage once = imgproc::morphological_open(bin, k);
    opening += (imgproc::morphological_open(once, k) == once).all() && (once == oracle::open(bin, k)).all();
  }
  const double secs = seconds_since(t0);
  const bool pass = otsu == kRandomImages && adaptive == kRandomImages && components == kRandomImages &&
                    opening == kRandomImages && secs < kPrimitiveSeconds;
  return {pass, fmt("otsu %d/%d, adaptive %d/%d, components %d/%d, opening %d/%d, %.2f s (< %.0f s)", otsu,
                    kRandomImages, adaptive, kRandomImages, components, kRandomImages, opening, kRandomImages, secs,
                    kPrimitiveSeconds)};
}

Verdict geometry() {
  const auto t0 = Clock::now();
  chartgen::CorpusRanges ranges;
  ranges.noise_choices = {0.0};
  const app::Config config;
  const auto ocr = app::make_ocr(config);
  int axes_ok = 0, bars_total = 0, bars_ok = 0;
  for (int i = 0; i < kGeometryFixtures; ++i) {
    const chartgen::Rendered r = chartgen::generate_item(chartgen::kDefaultCorpusSeed, i, ranges);
    const auto panels = app::extract_page(r.image, config, *ocr);
    const app::PanelOutcome* p = nullptr;
    for (const app::PanelOutcome& o : panels)
      if (o.axes) p = &o;
    bars_total += static_cast<int>(r.truth.bars.size());
    if (!p) continue;
    auto near = [](Point a, Point b) { return std::abs(a.x - b.x) <= kAxisTolerancePx && std::abs(a.y - b.y) <= kAxisTolerancePx; };
    axes_ok += near(p->axes->origin, r.truth.origin) && near(p->axes->x_axis.p1, r.truth.x_axis.p1) &&
               near(p->axes->y_axis.p1, r.truth.y_axis.p1);
    if (!p->model) continue;
    for (const chartgen::TruthBar& t : r.truth.bars) {
      const bool found = std::any_of(p->model->bars.begin(), p->model->bars.end(), [&](const semantics::ModelBar& m) {
        const disassembly::Bar& b = m.geometry;
        return std::abs(b.x_left - t.rect.x) <= kBarTolerancePx && std::abs(b.x_right - t.rect.right()) <= kBarTolerancePx &&
               std::abs(b.height() - t.rect.h) <= kBarTolerancePx;
      });
      bars_ok += found;
    }
  }
  const double secs = seconds_since(t0);
  const bool pass = axes_ok == kGeometryFixtures && bars_ok == bars_total && secs < kGeometrySeconds;
  return {pass, fmt("axes within %d px on %d/%d fixtures, bars within %d px %d/%d, %.1f s (< %.0f s)",
                    kAxisTolerancePx, axes_ok, kGeometryFixtures, kBarTolerancePx, bars_ok, bars_total, secs,
                    kGeometrySeconds)};
}

double slowest_chart = 0.0;

Verdict corpus_accuracy() {
  const auto t0 = Clock::now();
  const app::Config config;
  const auto ocr = app::make_ocr(config);
  evalstats::MatchResult pooled;
  for (int i = 0; i < kCorpusSize; ++i) {
    const chartgen::Rendered r = chartgen::generate_item(chartgen::kDefaultCorpusSeed, i);
    const auto c0 = Clock::now();
    const auto panels = app::extract_page(r.image, config, *ocr);
    slowest_chart = std::max(slowest_chart, seconds_since(c0));
    if (const semantics::ChartModel* m = first_model(panels)) {
      pooled.merge(evalstats::match(*m, r.truth, config.match));
    } else {
      // Nothing extracted: every truth object is a miss.
      pooled.merge(evalstats::match(semantics::ChartModel{}, r.truth, config.match));
    }
  }
  const double secs = seconds_since(t0);
  const evalstats::AccuracyReport a = evalstats::accuracy(pooled);
  const double det = a.bars_detected_percent().value_or(0.0);
  const double w5 = a.bar_percent(a.within_5).value_or(0.0), w2 = a.bar_percent(a.within_2).value_or(0.0),
               w1 = a.bar_percent(a.within_1).value_or(0.0);
  double worst_string = 100.0;
  for (const evalstats::ClassAccuracy* c : {&a.x_tick, &a.x_label, &a.y_tick, &a.y_label})
    worst_string = std::min(worst_string, c->percent().value_or(0.0));
  const bool pass = det >= kBarsDetectedFloor && w5 >= kWithin5Floor && w2 >= kWithin2Floor && w1 >= kWithin1Floor &&
                    worst_string >= kStringFloor && secs < kCorpusSeconds;
  return {pass, fmt("bars detected %.1f%% (>= %.1f), within 5%% %.1f (>= %.1f), 2%% %.1f (>= %.1f), 1%% %.1f (>= %.1f); "
                    "x_tick %.1f, x_label %.1f, y_tick %.1f, y_label %.1f (>= %.1f); %.1f s (< %.0f s)",
                    det, kBarsDetectedFloor, w5, kWithin5Floor, w2, kWithin2Floor, w1, kWithin1Floor,
                    a.x_tick.percent().value_or(0.0), a.x_label.percent().value_or(0.0),
                    a.y_tick.percent().value_or(0.0), a.y_label.percent().value_or(0.0), kStringFloor, secs,
                    kCorpusSeconds)};
}

Verdict calibration_exactness() {
  // Two ticks at integer rows from every corpus chart; each bar top must read back within
  // one pixel's worth of slope.
  int bars = 0, within = 0;
  double worst_px = 0.0;
  for (const chartgen::GroundTruth& t : corpus_truths()) {
    const std::size_t last = t.y_tick_rows.size() - 1;
    std::vector<semantics::Tick> ticks(2);
    ticks[0].pixel = t.y_tick_rows[0];
    ticks[0].value = t.y_tick_values[0];
    ticks[1].pixel = t.y_tick_rows[last];
    ticks[1].value = t.y_tick_values[last];
    const semantics::Calibration c = semantics::calibrate(ticks, t.origin.y);
    for (const chartgen::TruthBar& b : t.bars) {
      disassembly::Bar bar;
      bar.y_top = b.rect.y;
      bar.baseline_y = b.rect.bottom();
      const double err_px = std::abs(semantics::value_from_height(bar, c) - b.value) / std::abs(c.slope);
      worst_px = std::max(worst_px, err_px);
      ++bars;
      within += err_px <= 1.0 + 1e-9;
    }
  }
  // Evenly spaced ticks: least squares equals the average-spacing slope.
  std::mt19937_64 rng(404);
  double worst_rel = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const int n = 2 + static_cast<int>(rng() % 11), start = 300 + static_cast<int>(rng() % 300);
    const int spacing = 10 + static_cast<int>(rng() % 60);
    const double v0 = static_cast<double>(rng() % 100), step = 1.0 + static_cast<double>(rng() % 50);
    std::vector<semantics::Tick> ticks(n);
    for (int j = 0; j < n; ++j) {
      ticks[j].pixel = start - j * spacing;
      ticks[j].value = v0 + j * step;
    }
    const double lsq = semantics::calibrate(ticks, start).slope, avg = semantics::average_spacing_slope(ticks);
    worst_rel = std::max(worst_rel, std::abs(lsq - avg) / std::abs(avg));
  }
  const bool pass = within == bars && worst_rel <= kSlopeRelTolerance;
  return {pass, fmt("two-tick readback within one pixel %d/%d (worst %.3f px); LSQ vs average spacing worst "
                    "relative %.2e (<= %.0e)",
                    within, bars, worst_px, worst_rel, kSlopeRelTolerance)};
}

Verdict bland_altman() {
  // Differences 1, -1, 2, -2, 0 by hand: bias 0, sd sqrt(10 / 4), limits -/+ 2 sd.
  const evalstats::BlandAltman five = evalstats::bland_altman({5, 5, 5, 5, 5}, {6, 4, 7, 3, 5});
  const double sd = std::sqrt(2.5);
  const double fixture_err = std::max({std::abs(five.bias), std::abs(five.sd - sd), std::abs(five.loa_low + 2 * sd),
                                       std::abs(five.loa_high - 2 * sd)});
  const auto [lo, hi] = evalstats::limits_of_agreement(-0.544, 1.652, 2.0);
  const double quoted_err = std::max(std::abs(lo + 3.848), std::abs(hi - 2.760));

  std::mt19937_64 rng(505);
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  int invariant = 0;
  for (int k = 0; k < 100; ++k) {
    const int n = 2 + static_cast<int>(rng() % 50);
    std::vector<double> t(n), e(n), ts(n), es(n);
    const double shift = u(rng);
    for (int j = 0; j < n; ++j) {
      t[j] = u(rng);
      e[j] = t[j] + 0.2 * u(rng);
      ts[j] = t[j] + shift;
      es[j] = e[j] + shift;
    }
    const auto base = evalstats::bland_altman(t, e), shifted = evalstats::bland_altman(ts, es),
               negated = evalstats::bland_altman(e, t);
    invariant += std::abs(shifted.bias - base.bias) <= kInvarianceTolerance &&
                 std::abs(shifted.sd - base.sd) <= kInvarianceTolerance &&
                 std::abs(negated.bias + base.bias) <= kInvarianceTolerance &&
                 std::abs(negated.sd - base.sd) <= kInvarianceTolerance &&
                 std::abs(negated.loa_low + base.loa_high) <= kInvarianceTolerance;
  }
  const bool pass = fixture_err <= kBlandAltmanTolerance && quoted_err <= kBlandAltmanTolerance && invariant == 100;
  return {pass, fmt("5-pair fixture max error %.1e, (-0.544, 1.652) -> (%.6f, %.6f) error %.1e (<= %.0e); "
                    "shift/negation invariant on %d/100 datasets",
                    fixture_err, lo, hi, quoted_err, kBlandAltmanTolerance, invariant)};
}

Verdict repair_drill() {
  std::mt19937_64 rng(606);
  int injected = 0, repaired = 0, corrupted = 0, unaffected = 0;
  auto drill = [&](const chartgen::GroundTruth& t) {
    std::vector<textscan::TextBlock> blocks;
    std::vector<bool> hit;
    for (const chartgen::TruthText& tx : t.texts) {
      if (tx.role != textscan::Role::y_tick) continue;
      textscan::TextBlock b;
      b.bbox = tx.box;
      b.text = tx.text;
      b.role = textscan::Role::y_tick;
      std::vector<std::size_t> slots;
      for (std::size_t k = 0; k < b.text.size(); ++k)
        if (b.text[k] == '2' || b.text[k] == '7') slots.push_back(k);
      const bool inject = !slots.empty() && static_cast<double>(rng() % 1000) < kInjectionRate * 1000.0;
      if (inject) {
        const std::size_t k = slots[rng() % slots.size()];
        b.text[k] = b.text[k] == '2' ? '7' : '2';
      }
      blocks.push_back(b);
      hit.push_back(inject);
    }
    const std::vector<semantics::Tick> ticks = semantics::parse_ticks(blocks);
    for (std::size_t k = 0; k < blocks.size(); ++k) {
      const double want = *semantics::parse_number(
          std::find_if(t.texts.begin(), t.texts.end(), [&](const chartgen::TruthText& x) {
            return x.role == textscan::Role::y_tick && x.box == blocks[k].bbox;
          })->text);
      const auto tick = std::find_if(ticks.begin(), ticks.end(), [&](const semantics::Tick& x) { return x.box == blocks[k].bbox; });
      const bool right = tick != ticks.end() && tick->value == want && (!tick->suspect || tick->repaired);
      if (hit[k]) {
        ++injected;
        repaired += right;
      } else {
        ++unaffected;
        corrupted += !right;
      }
    }
  };
  for (int round = 0; round < kInjectionRounds; ++round)
    for (const chartgen::GroundTruth& t : corpus_truths()) drill(t);
  const double rate = injected ? static_cast<double>(repaired) / injected : 0.0;
  const bool pass = injected > 0 && rate >= kRepairFloor && corrupted == 0;
  return {pass, fmt("%d rounds over the corpus: %d ticks injected at %.0f%%, %d repaired (%.1f%%, >= %.0f%%); %d of %d unaffected ticks corrupted",
                    kInjectionRounds, injected, 100 * kInjectionRate, repaired, 100 * rate, 100 * kRepairFloor, corrupted, unaffected)};
}

std::vector<fs::path> files_in(const fs::path& dir) {
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file()) out.push_back(e.path().filename());
  std::sort(out.begin(), out.end());
  return out;
}

Verdict determinism() {
  const fs::path root = fs::temp_directory_path() / "chartex_acceptance";
  fs::remove_all(root);
  const fs::path corpus = root / "corpus";
  const int jobs = std::max(4, static_cast<int>(std::thread::hardware_concurrency()));
  app::write_corpus(corpus, kCorpusSize, chartgen::kDefaultCorpusSeed, jobs);
  const app::Config config;
  app::run_pipeline(corpus, root / "run1", config, 1);
  app::run_pipeline(corpus, root / "run2", config, jobs);
  const auto a = files_in(root / "run1"), b = files_in(root / "run2");
  int differing = 0;
  for (const fs::path& f : a)
    differing += !fs::exists(root / "run2" / f) || app::read_text(root / "run1" / f) != app::read_text(root / "run2" / f);
  const bool pass = a == b && differing == 0 && a.size() > static_cast<std::size_t>(kCorpusSize);
  fs::remove_all(root);
  return {pass, fmt("%zu output files (1 thread vs %d threads), %d differ", a.size(), jobs, differing)};
}

Verdict throughput() {
  const bool pass = slowest_chart > 0.0 && slowest_chart < kChartSeconds;
  return {pass, fmt("slowest of %d 800x600 charts %.3f s (< %.1f s), single-threaded", kCorpusSize, slowest_chart,
                    kChartSeconds)};
}

}  // namespace

int main() {
  report(1, "primitive oracles", primitive_oracles);
  report(2, "geometry on noise-free fixtures", geometry);
  report(3, "end-to-end accuracy on the default corpus", corpus_accuracy);
  report(4, "calibration exactness", calibration_exactness);
  report(5, "Bland-Altman correctness", bland_altman);
  report(6, "2<->7 repair drill", repair_drill);
  report(7, "determinism of the pipeline command", determinism);
  report(8, "per-chart throughput", throughput);
  std::printf("%d of 8 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
