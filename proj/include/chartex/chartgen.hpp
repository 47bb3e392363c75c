#pragma once

#include "chartex/image.hpp"
#include "chartex/imgproc.hpp"
#include "chartex/textscan.hpp"

#include <json.hpp>

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace chartex::chartgen {

class SpecInfeasible : public Error {
 public:
  using Error::Error;
};

struct ChartSpec {
  int width = 800;
  int height = 600;
  Point shift;  ///< extra white margin at the left/top; the canvas grows by the same amount
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<std::string> categories;      ///< x tick labels, one per category
  std::vector<std::vector<double>> values;  ///< values[category][series]
  double y_max = 100.0;
  double tick_step = 20.0;
  std::vector<Rgb> colors;  ///< one per series
  bool value_labels = false;
  bool gridlines = false;
  bool hatching = false;
  double noise = 0.0;  ///< salt-and-pepper fraction of pixels flipped
  std::uint64_t seed = 0;
  int text_scale = 2;

  int series_count() const { return values.empty() ? 0 : static_cast<int>(values.front().size()); }
};

struct TruthBar {
  int category = 0;
  int series = 0;
  double value = 0.0;
  Rect rect;  ///< rendered pixels, half-open; rect.bottom() is the x-axis row
};

struct TruthText {
  textscan::Role role = textscan::Role::unassigned;
  std::string text;
  Rect box;  ///< ink bounds, half-open
};

struct GroundTruth {
  ChartSpec spec;
  std::vector<TruthBar> bars;  ///< category-major, then series
  std::vector<TruthText> texts;
  Point origin;  ///< axis corner pixel
  imgproc::LineSegment x_axis;  ///< from the origin to the right end
  imgproc::LineSegment y_axis;  ///< from the origin to the top end
  Rect plot_rect;
  std::vector<double> y_tick_values;
  std::vector<int> y_tick_rows;
};

struct Rendered {
  RgbImage image;
  GroundTruth truth;
};

/// Formatting used for value labels and tick labels of a given axis maximum.
std::string format_value(double v, double y_max);
std::string format_tick(double v, double tick_step);

/// Draws the chart and its ground truth in one pass. Throws SpecInfeasible when the layout
/// does not fit (overlapping text, bars too narrow, tick spacing too tight).
Rendered render(const ChartSpec& spec);

struct CorpusRanges {
  int min_bars = 2;
  int max_bars = 12;
  int min_series = 1;
  int max_series = 3;
  std::vector<double> y_max_choices = {10, 50, 100, 200, 1000};
  std::vector<double> noise_choices = {0.0, 0.01, 0.02};
  double flag_probability = 0.5;
  int width = 800;
  int height = 600;
};

/// Seed of the default evaluation corpus.
inline constexpr std::uint64_t kDefaultCorpusSeed = 7;

/// One spec drawn from the ranges (may still be infeasible; see generate_item).
ChartSpec sample_spec(std::mt19937_64& rng, const CorpusRanges& ranges);

/// The i-th corpus spec for a seed: resamples with derived sub-seeds until renderable.
Rendered generate_item(std::uint64_t seed, int index, const CorpusRanges& ranges = {});

std::vector<Rendered> generate_corpus(int n, std::uint64_t seed, const CorpusRanges& ranges = {});

/// Ground-truth document: the ChartModel fields plus pixel geometry.
nlohmann::json truth_to_json(const GroundTruth& truth);
GroundTruth truth_from_json(const nlohmann::json& j);

/// Deterministic 64-bit mixer used to derive per-item seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace chartex::chartgen
