#pragma once

#include "chartex/image.hpp"
#include "chartex/imgproc.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace chartex::textscan {

enum class Role { unassigned, title, x_tick, y_tick, x_label, y_label, bar_value };

std::string_view to_string(Role role);
Role role_from_string(std::string_view name);

struct TextCandidate {
  imgproc::Contour contour;
  Rect bbox;
};

struct TextBlock {
  Rect bbox;  ///< original-image coordinates
  std::string text;
  double confidence = 0.0;
  Role role = Role::unassigned;
  bool vertical = false;  ///< recognized after rotation
};

struct OcrResult {
  std::string text;
  double confidence = 0.0;
};

/// Recognizer boundary. Implementations must be deterministic for a fixed input and
/// must not throw on arbitrary pixel content (external engines may throw OcrEngineError
/// when the engine itself fails).
class OcrEngine {
 public:
  virtual ~OcrEngine() = default;
  virtual OcrResult recognize(const GrayImage& region) const = 0;
  virtual std::string name() const = 0;
};

class OcrEngineError : public Error {
 public:
  using Error::Error;
};

struct CandidateParams {
  double min_fill = 0.25;       ///< density filter
  double sigma_band = 1.0;      ///< area filter half-width, in standard deviations
  int despeckle_area = 5;       ///< components below this pixel count are noise
  /// Small components (dots, periods) rejoin when within max(attach_min_gap, median height / 7)
  /// of a kept candidate.
  int attach_min_gap = 2;
  /// Reject candidates taller, or wider, than this multiple of the median candidate height.
  /// 0 disables the filter.
  double max_size_vs_median = 2.0;
  /// Longer side over shorter side above this is a line fragment (axis, tick), not a glyph.
  double max_aspect = 4.0;
};

/// Contours of the binarized panel that pass the area and density filters.
std::vector<TextCandidate> detect_text_candidates(const BinaryImage& binary,
                                                  const CandidateParams& params = {});

/// Union of candidate boxes set to 1.
BinaryImage build_text_mask(int width, int height, const std::vector<TextCandidate>& candidates);
BinaryImage build_text_mask(int width, int height, const std::vector<Rect>& boxes);

struct GroupParams {
  double gap_vs_median_width = 1.0;
  double min_overlap = 0.5;
};

/// Merges glyph boxes into word boxes: horizontally for regular text, vertically for
/// rotated text. Output sorted top-to-bottom, then left-to-right.
std::vector<Rect> group_glyphs(const std::vector<TextCandidate>& candidates, const GroupParams& params = {});
std::vector<Rect> group_glyphs(const std::vector<Rect>& boxes, const GroupParams& params = {});

/// Otsu, candidate filters, and word grouping in one call: the word boxes of a gray panel.
std::vector<Rect> detect_word_boxes(const GrayImage& gray, const CandidateParams& candidates = {},
                                    const GroupParams& grouping = {});

/// Deterministic template recognizer over the shipped bitmap font.
class BuiltinGlyphOcr final : public OcrEngine {
 public:
  explicit BuiltinGlyphOcr(double min_agreement = 0.6) : min_agreement_(min_agreement) {}
  OcrResult recognize(const GrayImage& region) const override;
  std::string name() const override { return "builtin-glyph"; }

 private:
  double min_agreement_;
};

OcrResult builtin_glyph_ocr(const GrayImage& region, double min_agreement = 0.6);

/// Runs an external command per crop: `<command> <png-path>`; parses
/// `x\ty\tw\th\tconfidence\ttext` lines from standard output.
class ExternalOcr final : public OcrEngine {
 public:
  explicit ExternalOcr(std::string command) : command_(std::move(command)) {}
  OcrResult recognize(const GrayImage& region) const override;
  std::string name() const override { return "external:" + command_; }

  struct Line {
    Rect box;
    double confidence = 0.0;
    std::string text;
  };
  /// Parses the plugin's standard output. Throws OcrEngineError on malformed lines.
  static std::vector<Line> parse_output(std::string_view out);

 private:
  std::string command_;
};

struct RecognizeParams {
  int upscale = 2;
  imgproc::Interpolation method = imgproc::Interpolation::bicubic;
  int pad = 2;
  double vertical_aspect = 2.0;  ///< height > aspect * width marks a block as vertical
};

/// Crops each block from the masked image, upscales, and recognizes it. When y_axis_x is
/// known, only blocks left of it are considered for vertical reading. Blocks that produce
/// no text are dropped. Output boxes are in original-image coordinates.
std::vector<TextBlock> recognize(const GrayImage& img, const BinaryImage& mask, const std::vector<Rect>& blocks,
                                 const OcrEngine& engine, const RecognizeParams& params = {},
                                 std::optional<int> y_axis_x = std::nullopt);

}  // namespace chartex::textscan
