#pragma once

#include "chartex/disassembly.hpp"
#include "chartex/textscan.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace chartex::semantics {

class CalibrationImpossible : public Error {
 public:
  using Error::Error;
};

class LogarithmicAxis : public Error {
 public:
  using Error::Error;
};

struct SemanticsParams {
  double title_band = 0.2;     ///< fraction of panel height searched for the title
  double tick_band = 1.5;      ///< tick text within this multiple of the max block size from an axis
  int label_gap = 15;          ///< value label bottom at most this far above the bar top
  double suspect_step = 0.25;  ///< residual above this fraction of the median tick step is suspect
  double log_ratio_tolerance = 0.01;
};

struct Tick {
  double pixel = 0.0;  ///< y of the text block's vertical center
  double value = 0.0;
  std::string source_text;  ///< as recognized
  std::string text;         ///< source_text after any repair
  bool suspect = false;
  bool repaired = false;  ///< suspect and fixed by a 2<->7 swap
  Rect box;
};

/// value(p) = intercept + slope * (p - baseline_y)
struct Calibration {
  double slope = 0.0;
  double intercept = 0.0;
  double rms_residual = 0.0;
  int baseline_y = 0;

  double value_at(double pixel) const { return intercept + slope * (pixel - baseline_y); }
};

enum class ValueSource { label, calibrated, none };
std::string_view to_string(ValueSource source);

struct ModelBar {
  int category = -1;
  int group = -1;
  double value = 0.0;  ///< NaN when source is none
  ValueSource source = ValueSource::none;
  disassembly::Bar geometry;
};

struct TextItem {
  std::string text;
  Rect box;
};

struct ChartModel {
  std::optional<TextItem> title, x_label, y_label;
  std::vector<TextItem> x_ticks;  ///< left to right; a bar's category indexes this list
  std::vector<Tick> y_ticks;
  std::vector<ModelBar> bars;
  std::optional<Calibration> calibration;
  std::vector<std::string> warnings;

  bool has_valueless_bars() const;
};

/// Moves every pixel quantity by (dx, dy): panel to page coordinates.
ChartModel translated(ChartModel model, Point offset);

/// Strips '%', ',' and whitespace, then requires the rest to be one finite number.
std::optional<double> parse_number(std::string_view text);

/// Title = the block in the top band closest to the panel's top-middle. Sets its role and
/// returns its index.
std::optional<std::size_t> assign_title(std::vector<textscan::TextBlock>& blocks, int width, int height,
                                        const SemanticsParams& params = {});

/// Roles for the still-unassigned blocks: y ticks, x ticks, y label, x label, then bar
/// values (any other block over the plot, above the x-axis).
void classify_axis_text(std::vector<textscan::TextBlock>& blocks, const disassembly::Axes& axes,
                        const SemanticsParams& params = {});

/// Parses y-tick blocks, flags ticks off a consensus provisional line and tries a single
/// 2<->7 digit swap on each. Sorted by pixel. Throws CalibrationImpossible below two
/// parseable ticks.
std::vector<Tick> parse_ticks(const std::vector<textscan::TextBlock>& y_tick_blocks,
                              const SemanticsParams& params = {});

/// Least-squares value-against-pixel over the usable ticks (unrepaired suspects excluded).
/// Throws CalibrationImpossible (too few ticks, no pixel spread, non-monotonic values)
/// or LogarithmicAxis.
Calibration calibrate(const std::vector<Tick>& ticks, int baseline_y, const SemanticsParams& params = {});

/// Average tick spacing rule: mean value step over mean pixel step between consecutive
/// ticks sorted by pixel.
double average_spacing_slope(const std::vector<Tick>& ticks);

std::optional<double> value_from_label(const disassembly::Bar& bar, const std::vector<textscan::TextBlock>& blocks,
                                       const SemanticsParams& params = {});

double value_from_height(const disassembly::Bar& bar, const Calibration& cal);

/// Roles, ticks, calibration, categories and values. Blocks without a letter or digit are
/// dropped first. Never throws on missing calibration:
/// bars without a label then stay valueless and a warning is recorded.
ChartModel assemble(std::vector<textscan::TextBlock> blocks, const disassembly::Axes& axes,
                    const std::vector<disassembly::Bar>& bars, int width, int height,
                    const SemanticsParams& params = {});

}  // namespace chartex::semantics
