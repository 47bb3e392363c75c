#include "chartex/app.hpp"
#include "chartex/imgproc.hpp"
#include "chartex/jsonio.hpp"
#include "chartex/png_io.hpp"

#include <chrono>

namespace chartex::app {

using nlohmann::json;

std::string_view to_string(PanelStatus status) {
  switch (status) {
    case PanelStatus::extracted: return "extracted";
    case PanelStatus::partial: return "partial";
    case PanelStatus::gated_out: return "gated_out";
    case PanelStatus::failed: return "failed";
  }
  return "failed";
}

namespace {

class Stopwatch {
 public:
  explicit Stopwatch(std::map<std::string, double>& sink) : sink_(sink) {}
  void lap(const std::string& stage) {
    const auto now = std::chrono::steady_clock::now();
    sink_[stage] += std::chrono::duration<double, std::milli>(now - last_).count();
    last_ = now;
  }

 private:
  std::map<std::string, double>& sink_;
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

json debug_json(const disassembly::Axes& axes, const std::vector<disassembly::Bar>& bars,
                const std::vector<textscan::TextBlock>& blocks) {
  json j;
  j["origin"] = jsonio::to_json(axes.origin);
  j["plot_rect"] = jsonio::to_json(axes.plot_rect);
  j["bars"] = json::array();
  for (const disassembly::Bar& b : bars)
    j["bars"].push_back({{"x_left", b.x_left}, {"x_right", b.x_right}, {"y_top", b.y_top},
                         {"baseline_y", b.baseline_y}, {"group", b.group_id}});
  j["blocks"] = json::array();
  for (const textscan::TextBlock& b : blocks)
    j["blocks"].push_back({{"text", b.text}, {"bbox", jsonio::to_json(b.bbox)}, {"role", textscan::to_string(b.role)},
                           {"vertical", b.vertical}, {"confidence", jsonio::number(b.confidence)}});
  return j;
}

disassembly::Axes translated(disassembly::Axes a, Point d) {
  for (imgproc::LineSegment* s : {&a.x_axis, &a.y_axis}) {
    s->p0 = {s->p0.x + d.x, s->p0.y + d.y};
    s->p1 = {s->p1.x + d.x, s->p1.y + d.y};
  }
  a.origin = {a.origin.x + d.x, a.origin.y + d.y};
  a.plot_rect = {a.plot_rect.x + d.x, a.plot_rect.y + d.y, a.plot_rect.w, a.plot_rect.h};
  return a;
}

void outline(RgbImage& img, const Rect& r, Rgb c) {
  const Rect b = clip(r, static_cast<int>(img.width()), static_cast<int>(img.height()));
  if (b.empty()) return;
  auto put = [&](int x, int y) {
    img.r(y, x) = c.r;
    img.g(y, x) = c.g;
    img.b(y, x) = c.b;
  };
  for (int x = b.x; x < b.right(); ++x) put(x, b.y), put(x, b.bottom() - 1);
  for (int y = b.y; y < b.bottom(); ++y) put(b.x, y), put(b.right() - 1, y);
}

// Axes in red, bars in green.
RgbImage overlay(const RgbImage& panel, const disassembly::Axes& axes, const std::vector<disassembly::Bar>& bars) {
  RgbImage img = panel;
  for (const imgproc::LineSegment& s : {axes.x_axis, axes.y_axis})
    outline(img, unite(Rect{s.p0.x, s.p0.y, 1, 1}, Rect{s.p1.x, s.p1.y, 1, 1}), {255, 0, 0});
  for (const disassembly::Bar& b : bars)
    outline(img, {b.x_left, b.y_top, b.width() + 1, b.height() + 1}, {0, 200, 0});
  return img;
}

}  // namespace

PanelOutcome extract_panel(const RgbImage& panel, const Config& config, const textscan::OcrEngine& ocr,
                           const DebugSink& debug, int panel_index) {
  PanelOutcome out;
  const int width = static_cast<int>(panel.width()), height = static_cast<int>(panel.height());
  out.panel = {0, 0, width, height};
  Stopwatch watch(out.stage_ms);
  const std::string prefix = debug.stem + ".panel" + std::to_string(panel_index);
  auto dump_png = [&](const std::string& name, const auto& img) {
    if (debug.enabled()) io::write_png(debug.dir / (prefix + "." + name + ".png"), img);
  };
  try {
    const GrayImage gray = imgproc::to_grayscale(panel);
    const std::vector<Rect> words = textscan::detect_word_boxes(gray, config.candidates, config.words);
    const BinaryImage mask = textscan::build_text_mask(width, height, words);
    const GrayImage clean = imgproc::subtract_mask(gray, mask);
    watch.lap("text_detection");
    dump_png("gray", gray);
    dump_png("text_mask", mask);
    dump_png("clean", clean);

    disassembly::Axes axes;
    try {
      axes = disassembly::detect_axes(gray, config.axes);
    } catch (const disassembly::NoAxes&) {
      watch.lap("axes");
      out.status = PanelStatus::gated_out;
      out.gated_by = "structural: no axes";
      return out;
    }
    out.axes = axes;
    dump_png("edges", disassembly::axes_edge_map(gray, config.axes));
    const BinaryImage structure = crop(disassembly::structure_binary(clean), axes.plot_rect);
    dump_png("plot_binary", structure);
    std::vector<disassembly::Bar> bars = disassembly::detect_bars(structure, axes, config.bars);
    watch.lap("axes_and_bars");
    const disassembly::GateResult gate = disassembly::gate_bar_chart(bars.size(), true);
    out.gate_score = gate.score;
    out.gated_by = "structural: axes and " + std::to_string(bars.size()) + " bars";
    if (!gate.is_bar_chart) {
      out.status = PanelStatus::gated_out;
      return out;
    }
    bars = disassembly::refine_bars(clean, std::move(bars), config.bars);
    bars = disassembly::group_bars(panel, std::move(bars), config.grouping);
    watch.lap("grouping");

    std::vector<textscan::TextBlock> blocks =
        textscan::recognize(gray, mask, words, ocr, config.recognize, axes.origin.x);
    watch.lap("recognition");
    semantics::ChartModel model =
        semantics::assemble(blocks, axes, bars, width, height, config.semantics);
    watch.lap("semantics");
    if (debug.enabled()) {
      io::write_png(debug.dir / (prefix + ".overlay.png"), overlay(panel, axes, bars));
      // Roles as assigned inside assemble, for inspection.
      semantics::assign_title(blocks, width, height, config.semantics);
      semantics::classify_axis_text(blocks, axes, config.semantics);
      write_text(debug.dir / (prefix + ".stages.json"), dump(debug_json(axes, bars, blocks)));
    }
    out.status = model.has_valueless_bars() ? PanelStatus::partial : PanelStatus::extracted;
    out.model = std::move(model);
  } catch (const Error& e) {
    out.status = PanelStatus::failed;
    out.error = e.what();
  }
  return out;
}

std::vector<PanelOutcome> extract_page(const RgbImage& page, const Config& config, const textscan::OcrEngine& ocr,
                                       const DebugSink& debug) {
  const GrayImage gray = imgproc::to_grayscale(page);
  const std::vector<Rect> panels = disassembly::segment_panels(gray, config.panels);
  std::vector<PanelOutcome> out;
  for (std::size_t k = 0; k < panels.size(); ++k) {
    const Rect& r = panels[k];
    PanelOutcome o = extract_panel(crop(page, r), config, ocr, debug, static_cast<int>(k));
    o.panel = r;
    if (o.model) o.model = semantics::translated(std::move(*o.model), {r.x, r.y});
    if (o.axes) o.axes = translated(*o.axes, {r.x, r.y});
    out.push_back(std::move(o));
  }
  return out;
}

}  // namespace chartex::app
