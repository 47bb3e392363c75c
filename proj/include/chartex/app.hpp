#pragma once

#include "chartex/disassembly.hpp"
#include "chartex/evalstats.hpp"
#include "chartex/semantics.hpp"
#include "chartex/textscan.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace chartex::app {

class ConfigError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// Every tunable of the pipeline. Defaults are compiled in; a config file overrides
/// individual keys.
struct Config {
  disassembly::PanelParams panels;
  textscan::CandidateParams candidates;
  textscan::GroupParams words;
  textscan::RecognizeParams recognize;
  double ocr_min_agreement = 0.6;
  std::string ocr_command;  ///< empty selects the built-in recognizer
  disassembly::AxesParams axes;
  disassembly::BarParams bars;
  disassembly::GroupParams grouping;
  semantics::SemanticsParams semantics;
  evalstats::MatchParams match;
  evalstats::BlandAltmanParams agreement;

  /// Flat `key = value` lines; '#' starts a comment. Unknown keys and out-of-range
  /// values throw ConfigError naming the line.
  static Config parse(std::string_view text);
  static Config load(const std::filesystem::path& path);

  void set(std::string_view key, std::string_view value);
  std::string get(std::string_view key) const;
  static std::vector<std::string> keys();

  /// Every key in sorted order, one `key=value` per line.
  std::string canonical() const;
  /// FNV-1a 64 of the canonical text, 16 lowercase hex digits.
  std::string hash() const;
};

std::uint64_t fnv1a64(std::string_view bytes);

std::unique_ptr<textscan::OcrEngine> make_ocr(const Config& config);

enum class PanelStatus { extracted, partial, gated_out, failed };
std::string_view to_string(PanelStatus status);

struct PanelOutcome {
  Rect panel;  ///< page coordinates
  PanelStatus status = PanelStatus::failed;
  double gate_score = 0.0;
  std::string gated_by;
  std::string error;
  std::optional<disassembly::Axes> axes;       ///< page coordinates
  std::optional<semantics::ChartModel> model;  ///< page coordinates
  std::map<std::string, double> stage_ms;
};

/// Where intermediate images go; empty directory disables dumping.
struct DebugSink {
  std::filesystem::path dir;
  std::string stem;
  bool enabled() const { return !dir.empty(); }
};

/// Full pipeline on one panel image (panel coordinates).
PanelOutcome extract_panel(const RgbImage& panel, const Config& config, const textscan::OcrEngine& ocr,
                           const DebugSink& debug = {}, int panel_index = 0);

/// Segments the page into panels and extracts each one. Models come back in page coordinates.
std::vector<PanelOutcome> extract_page(const RgbImage& page, const Config& config, const textscan::OcrEngine& ocr,
                                       const DebugSink& debug = {});

/// Chart document: title, labels, ticks, bars and provenance.
nlohmann::json model_to_json(const semantics::ChartModel& model, const PanelOutcome& outcome,
                             const std::string& config_hash);
semantics::ChartModel model_from_json(const nlohmann::json& j);
/// `category,category_label,group,value,value_source` rows with a header.
std::string model_csv(const semantics::ChartModel& model);

/// Pretty-printed with a trailing newline.
std::string dump(const nlohmann::json& j);
void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

/// PNG files directly inside each directory argument, plus plain file arguments, in
/// lexicographic order per directory.
std::vector<std::filesystem::path> collect_pngs(const std::vector<std::filesystem::path>& inputs);

struct FileOutcome {
  std::filesystem::path input;
  std::vector<std::filesystem::path> outputs;
  std::vector<PanelOutcome> panels;
  std::string io_error;
};

struct ExtractOptions {
  std::filesystem::path out_dir;  ///< empty writes next to each input
  bool csv = false;
  std::filesystem::path debug_dir;
  int jobs = 1;
};

/// Reads, extracts and writes `<stem>.chart.json` (extra panels `<stem>.panel<k>.chart.json`).
/// Files are processed on `jobs` threads; results keep input order.
std::vector<FileOutcome> extract_files(const std::vector<std::filesystem::path>& inputs, const Config& config,
                                       const ExtractOptions& options);

/// 0 when some panel was fully extracted, 1 on any unreadable input, else 2.
int exit_code(const std::vector<FileOutcome>& outcomes);

/// Inputs, config hash and per-panel outcomes. Stage timings only when asked, so the
/// default manifest is byte-stable.
nlohmann::json manifest(const std::vector<FileOutcome>& outcomes, const Config& config, bool timings);

struct EvalOutcome {
  evalstats::MatchResult pooled;
  evalstats::AccuracyReport report;
  std::optional<evalstats::BlandAltman> agreement;
  int charts = 0;
  std::vector<std::string> warnings;
};

/// Pairs `<stem>.truth.json` in truth_dir with `<stem>.chart.json` in pred_dir. Missing
/// predictions are warned about and skipped.
EvalOutcome evaluate_dirs(const std::filesystem::path& pred_dir, const std::filesystem::path& truth_dir,
                          const Config& config);
/// report.json, report.txt and bland_altman.csv.
void write_reports(const EvalOutcome& outcome, const std::filesystem::path& out_dir);

/// Writes NNNN.png and NNNN.truth.json for corpus items 0..n-1; returns the written paths.
std::vector<std::filesystem::path> write_corpus(const std::filesystem::path& out_dir, int n, std::uint64_t seed,
                                                int jobs = 1);

struct PipelineResult {
  std::vector<FileOutcome> files;
  std::optional<EvalOutcome> eval;  ///< when the directory holds truth files
  int exit_code = 0;
};

/// Extracts every PNG in `dir` into `out_dir`, writes manifest.json, and evaluates against
/// any `<stem>.truth.json` in `dir`. Exit code as for extraction; 2 as well when truth
/// files exist but no chart could be paired.
PipelineResult run_pipeline(const std::filesystem::path& dir, const std::filesystem::path& out_dir,
                            const Config& config, int jobs = 1);

}  // namespace chartex::app
