#include "chartex/app.hpp"
#include "chartex/jsonio.hpp"
#include "chartex/png_io.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

namespace chartex::app {

namespace fs = std::filesystem;
using nlohmann::json;
using semantics::ChartModel;

namespace {

const char* const kGateNote = "structural rule (axes found and at least two bars) in place of an image classifier";

json text_or_null(const std::optional<semantics::TextItem>& t) { return t ? json(t->text) : json(nullptr); }

std::optional<semantics::TextItem> text_from(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  semantics::TextItem t;
  t.text = j.at(key).get<std::string>();
  if (j.contains("boxes") && j.at("boxes").contains(key)) t.box = jsonio::rect_from(j.at("boxes").at(key));
  return t;
}

double number_or_nan(const json& j) { return j.is_null() ? std::nan("") : j.get<double>(); }

semantics::ValueSource source_from(const std::string& s) {
  if (s == "label") return semantics::ValueSource::label;
  if (s == "calibrated") return semantics::ValueSource::calibrated;
  if (s == "none") return semantics::ValueSource::none;
  throw InvalidArgument("unknown value_source '" + s + "'");
}

}  // namespace

json model_to_json(const ChartModel& m, const PanelOutcome& outcome, const std::string& config_hash) {
  json j;
  j["title"] = text_or_null(m.title);
  j["x_label"] = text_or_null(m.x_label);
  j["y_label"] = text_or_null(m.y_label);
  j["boxes"] = json::object();
  if (m.title) j["boxes"]["title"] = jsonio::to_json(m.title->box);
  if (m.x_label) j["boxes"]["x_label"] = jsonio::to_json(m.x_label->box);
  if (m.y_label) j["boxes"]["y_label"] = jsonio::to_json(m.y_label->box);

  j["x_ticks"] = json::array();
  for (const semantics::TextItem& t : m.x_ticks)
    j["x_ticks"].push_back({{"text", t.text}, {"pixel", jsonio::number(t.box.cx())}, {"bbox", jsonio::to_json(t.box)}});
  j["y_ticks"] = json::array();
  for (const semantics::Tick& t : m.y_ticks)
    j["y_ticks"].push_back({{"pixel", jsonio::number(t.pixel)},
                            {"value", jsonio::number(t.value)},
                            {"suspect", t.suspect},
                            {"repaired", t.repaired},
                            {"text", t.text},
                            {"source_text", t.source_text},
                            {"bbox", jsonio::to_json(t.box)}});
  j["bars"] = json::array();
  for (const semantics::ModelBar& b : m.bars) {
    const bool labeled = b.category >= 0 && b.category < static_cast<int>(m.x_ticks.size());
    j["bars"].push_back({{"category", b.category},
                         {"category_label", labeled ? json(m.x_ticks[b.category].text) : json(nullptr)},
                         {"group", b.group},
                         {"value", jsonio::number(b.value)},
                         {"value_source", semantics::to_string(b.source)},
                         {"geometry",
                          {{"x_left", b.geometry.x_left},
                           {"x_right", b.geometry.x_right},
                           {"y_top", b.geometry.y_top},
                           {"baseline_y", b.geometry.baseline_y},
                           {"color", jsonio::to_json(b.geometry.mean_color)}}}});
  }
  if (m.calibration)
    j["calibration"] = {{"slope", jsonio::number(m.calibration->slope)},
                        {"intercept", jsonio::number(m.calibration->intercept)},
                        {"baseline_y", m.calibration->baseline_y},
                        {"rms_residual", jsonio::number(m.calibration->rms_residual)}};
  else
    j["calibration"] = nullptr;
  j["provenance"] = {{"config_hash", config_hash},
                     {"gated_by", outcome.gated_by},
                     {"gate_score", jsonio::number(outcome.gate_score)},
                     {"panel", jsonio::to_json(outcome.panel)},
                     {"warnings", m.warnings}};
  return j;
}

ChartModel model_from_json(const json& j) {
  ChartModel m;
  m.title = text_from(j, "title");
  m.x_label = text_from(j, "x_label");
  m.y_label = text_from(j, "y_label");
  for (const json& t : j.at("x_ticks")) m.x_ticks.push_back({t.at("text").get<std::string>(), jsonio::rect_from(t.at("bbox"))});
  for (const json& t : j.at("y_ticks")) {
    semantics::Tick k;
    k.pixel = t.at("pixel").get<double>();
    k.value = number_or_nan(t.at("value"));
    k.suspect = t.at("suspect").get<bool>();
    k.repaired = t.value("repaired", false);
    k.text = t.at("text").get<std::string>();
    k.source_text = t.value("source_text", k.text);
    k.box = jsonio::rect_from(t.at("bbox"));
    m.y_ticks.push_back(k);
  }
  for (const json& b : j.at("bars")) {
    semantics::ModelBar mb;
    mb.category = b.at("category").get<int>();
    mb.group = b.at("group").get<int>();
    mb.value = number_or_nan(b.at("value"));
    mb.source = source_from(b.at("value_source").get<std::string>());
    const json& g = b.at("geometry");
    mb.geometry.x_left = g.at("x_left").get<int>();
    mb.geometry.x_right = g.at("x_right").get<int>();
    mb.geometry.y_top = g.at("y_top").get<int>();
    mb.geometry.baseline_y = g.at("baseline_y").get<int>();
    mb.geometry.group_id = mb.group;
    if (g.contains("color")) mb.geometry.mean_color = jsonio::rgb_from(g.at("color"));
    m.bars.push_back(mb);
  }
  if (j.contains("calibration") && !j.at("calibration").is_null()) {
    const json& c = j.at("calibration");
    m.calibration = semantics::Calibration{c.at("slope").get<double>(), c.at("intercept").get<double>(),
                                           c.at("rms_residual").get<double>(), c.at("baseline_y").get<int>()};
  }
  if (j.contains("provenance")) m.warnings = j.at("provenance").value("warnings", std::vector<std::string>{});
  return m;
}

std::string model_csv(const ChartModel& m) {
  std::string s = "category,category_label,group,value,value_source\n";
  for (const semantics::ModelBar& b : m.bars) {
    std::string label;
    if (b.category >= 0 && b.category < static_cast<int>(m.x_ticks.size())) label = m.x_ticks[b.category].text;
    if (label.find_first_of(",\"") != std::string::npos) {
      std::string q = "\"";
      for (char c : label) q += c == '"' ? std::string("\"\"") : std::string(1, c);
      label = q + "\"";
    }
    char value[32] = "";
    if (std::isfinite(b.value)) std::snprintf(value, sizeof value, "%.6g", b.value);
    s += std::to_string(b.category) + "," + label + "," + std::to_string(b.group) + "," + value + "," +
         std::string(semantics::to_string(b.source)) + "\n";
  }
  return s;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f || !(f << text) || !f.flush()) throw io::IoError("cannot write " + path.string());
}

std::string read_text(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw io::IoError("cannot read " + path.string());
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

std::vector<fs::path> collect_pngs(const std::vector<fs::path>& inputs) {
  std::vector<fs::path> out;
  for (const fs::path& in : inputs) {
    if (!fs::is_directory(in)) {
      out.push_back(in);
      continue;
    }
    std::vector<fs::path> found;
    for (const auto& e : fs::directory_iterator(in))
      if (e.is_regular_file() && e.path().extension() == ".png") found.push_back(e.path());
    std::sort(found.begin(), found.end());
    out.insert(out.end(), found.begin(), found.end());
  }
  return out;
}

namespace {

FileOutcome extract_one(const fs::path& input, const Config& config, const textscan::OcrEngine& ocr,
                        const ExtractOptions& options) {
  FileOutcome out;
  out.input = input;
  const std::string stem = input.stem().string();
  try {
    const RgbImage page = io::read_png(input);
    out.panels = extract_page(page, config, ocr, {options.debug_dir, stem});
    const fs::path dir = options.out_dir.empty() ? input.parent_path() : options.out_dir;
    const std::string hash = config.hash();
    bool first = true;
    for (std::size_t k = 0; k < out.panels.size(); ++k) {
      const PanelOutcome& p = out.panels[k];
      if (!p.model) continue;
      const std::string base = first ? stem : stem + ".panel" + std::to_string(k);
      first = false;
      const fs::path json_path = dir / (base + ".chart.json");
      write_text(json_path, dump(model_to_json(*p.model, p, hash)));
      out.outputs.push_back(json_path);
      if (options.csv) {
        const fs::path csv_path = dir / (base + ".chart.csv");
        write_text(csv_path, model_csv(*p.model));
        out.outputs.push_back(csv_path);
      }
    }
  } catch (const io::IoError& e) {
    out.io_error = e.what();
  }
  return out;
}

}  // namespace

std::vector<FileOutcome> extract_files(const std::vector<fs::path>& inputs, const Config& config,
                                       const ExtractOptions& options) {
  std::vector<FileOutcome> out(inputs.size());
  const int jobs = std::clamp(options.jobs, 1, std::max(1, static_cast<int>(inputs.size())));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    const auto ocr = make_ocr(config);
    for (std::size_t i = next++; i < inputs.size(); i = next++) out[i] = extract_one(inputs[i], config, *ocr, options);
  };
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  return out;
}

int exit_code(const std::vector<FileOutcome>& outcomes) {
  bool extracted = false;
  for (const FileOutcome& f : outcomes) {
    if (!f.io_error.empty()) return 1;
    for (const PanelOutcome& p : f.panels) extracted = extracted || p.status == PanelStatus::extracted;
  }
  return extracted ? 0 : 2;
}

json manifest(const std::vector<FileOutcome>& outcomes, const Config& config, bool timings) {
  json files = json::array();
  std::map<std::string, int> counts = {{"extracted", 0}, {"partial", 0}, {"gated_out", 0}, {"failed", 0}};
  int io_errors = 0;
  for (const FileOutcome& f : outcomes) {
    json jf = {{"input", f.input.generic_string()}, {"outputs", json::array()}, {"panels", json::array()}};
    for (const fs::path& o : f.outputs) jf["outputs"].push_back(o.filename().generic_string());
    if (!f.io_error.empty()) {
      jf["error"] = f.io_error;
      ++io_errors;
    }
    for (const PanelOutcome& p : f.panels) {
      ++counts[std::string(to_string(p.status))];
      json jp = {{"panel", jsonio::to_json(p.panel)},
                 {"status", to_string(p.status)},
                 {"gated_by", p.gated_by},
                 {"gate_score", jsonio::number(p.gate_score)},
                 {"bars", p.model ? static_cast<int>(p.model->bars.size()) : 0},
                 {"warnings", p.model ? p.model->warnings : std::vector<std::string>{}}};
      if (!p.error.empty()) jp["error"] = p.error;
      if (timings) {
        json ms = json::object();
        for (const auto& [stage, t] : p.stage_ms) ms[stage] = jsonio::number(t);
        jp["stage_ms"] = ms;
      }
      jf["panels"].push_back(jp);
    }
    files.push_back(jf);
  }
  json summary = {{"files", outcomes.size()}, {"io_errors", io_errors}};
  for (const auto& [k, v] : counts) summary[k] = v;
  return {{"config_hash", config.hash()}, {"files", files}, {"gate", kGateNote}, {"summary", summary}};
}

EvalOutcome evaluate_dirs(const fs::path& pred_dir, const fs::path& truth_dir, const Config& config) {
  static const std::string kTruth = ".truth.json";
  std::vector<fs::path> truths;
  for (const auto& e : fs::directory_iterator(truth_dir)) {
    const std::string name = e.path().filename().string();
    if (e.is_regular_file() && name.size() > kTruth.size() && name.ends_with(kTruth)) truths.push_back(e.path());
  }
  std::sort(truths.begin(), truths.end());
  EvalOutcome out;
  for (const fs::path& t : truths) {
    const std::string name = t.filename().string();
    const std::string stem = name.substr(0, name.size() - kTruth.size());
    const fs::path pred = pred_dir / (stem + ".chart.json");
    if (!fs::exists(pred)) {
      out.warnings.push_back("no prediction for " + stem);
      continue;
    }
    const chartgen::GroundTruth truth = chartgen::truth_from_json(json::parse(read_text(t)));
    const ChartModel model = model_from_json(json::parse(read_text(pred)));
    out.pooled.merge(evalstats::match(model, truth, config.match));
    ++out.charts;
  }
  out.report = evalstats::accuracy(out.pooled);
  try {
    out.agreement = evalstats::bland_altman(out.pooled, config.agreement);
  } catch (const evalstats::InsufficientData& e) {
    out.warnings.push_back(std::string("agreement: ") + e.what());
  }
  return out;
}

void write_reports(const EvalOutcome& outcome, const fs::path& out_dir) {
  json report = evalstats::report_json(outcome.report, outcome.agreement);
  report["charts"] = outcome.charts;
  report["gate"] = kGateNote;
  report["warnings"] = outcome.warnings;
  write_text(out_dir / "report.json", dump(report));
  write_text(out_dir / "report.txt", evalstats::report_text(outcome.report, outcome.agreement) + "Gate: " + kGateNote + "\n");
  write_text(out_dir / "bland_altman.csv",
             outcome.agreement ? evalstats::bland_altman_csv(*outcome.agreement) : std::string("mean,difference\n"));
}

std::vector<fs::path> write_corpus(const fs::path& out_dir, int n, std::uint64_t seed, int jobs) {
  fs::create_directories(out_dir);
  std::vector<fs::path> written(2 * static_cast<std::size_t>(std::max(n, 0)));
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next++; i < n; i = next++) {
      const chartgen::Rendered r = chartgen::generate_item(seed, i);
      char stem[16];
      std::snprintf(stem, sizeof stem, "%04d", i);
      const fs::path png = out_dir / (std::string(stem) + ".png");
      const fs::path truth = out_dir / (std::string(stem) + ".truth.json");
      io::write_png(png, r.image);
      write_text(truth, dump(chartgen::truth_to_json(r.truth)));
      written[2 * i] = png;
      written[2 * i + 1] = truth;
    }
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < std::clamp(jobs, 1, std::max(n, 1)); ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();
  return written;
}

PipelineResult run_pipeline(const fs::path& dir, const fs::path& out_dir, const Config& config, int jobs) {
  PipelineResult out;
  fs::create_directories(out_dir);
  ExtractOptions options;
  options.out_dir = out_dir;
  options.jobs = jobs;
  out.files = extract_files(collect_pngs({dir}), config, options);
  write_text(out_dir / "manifest.json", dump(manifest(out.files, config, false)));
  out.exit_code = exit_code(out.files);

  bool has_truth = false;
  for (const auto& e : fs::directory_iterator(dir))
    has_truth = has_truth || e.path().filename().string().ends_with(".truth.json");
  if (has_truth) {
    out.eval = evaluate_dirs(out_dir, dir, config);
    write_reports(*out.eval, out_dir);
    if (out.eval->charts == 0 && out.exit_code == 0) out.exit_code = 2;
  }
  return out;
}

}  // namespace chartex::app
