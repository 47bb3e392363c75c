#include "chartex/textscan.hpp"

#include <algorithm>
#include <cctype>

namespace chartex::textscan {

namespace {

std::string trim(std::string s) {
  auto space = [](unsigned char c) { return std::isspace(c) != 0; };
  s.erase(s.begin(), std::find_if_not(s.begin(), s.end(), space));
  s.erase(std::find_if_not(s.rbegin(), s.rend(), space).base(), s.end());
  return s;
}

std::size_t ink_count(const std::string& s) {
  return static_cast<std::size_t>(std::count_if(s.begin(), s.end(), [](unsigned char c) { return !std::isspace(c); }));
}

}  // namespace

std::vector<TextBlock> recognize(const GrayImage& img, const BinaryImage& mask, const std::vector<Rect>& blocks,
                                 const OcrEngine& engine, const RecognizeParams& params,
                                 std::optional<int> y_axis_x) {
  if (img.rows() != mask.rows() || img.cols() != mask.cols())
    throw InvalidArgument("recognize: image and mask dimensions differ");
  if (params.upscale < 1) throw InvalidArgument("recognize: upscale factor must be >= 1");
  const int w = static_cast<int>(img.cols()), h = static_cast<int>(img.rows());
  const GrayImage masked = mask.select(img, GrayImage::Constant(h, w, 255));

  std::vector<TextBlock> out;
  for (const Rect& block : blocks) {
    const Rect box = clip(block, w, h);
    if (box.empty()) continue;
    const GrayImage region = crop(masked, expand(box, params.pad));
    const GrayImage up = imgproc::upscale(region, params.upscale, params.method);

    OcrResult best = engine.recognize(up);
    best.text = trim(best.text);
    bool vertical = false;
    const bool tall = box.h > params.vertical_aspect * box.w;
    if (tall && (!y_axis_x || box.cx() < *y_axis_x)) {
      OcrResult rotated = engine.recognize(imgproc::rotate_cw(up));
      rotated.text = trim(rotated.text);
      const std::size_t a = ink_count(rotated.text), b = ink_count(best.text);
      if (a > b || (a == b && a > 0 && rotated.confidence > best.confidence)) {
        best = std::move(rotated);
        vertical = true;
      }
    }
    if (best.text.empty()) continue;
    TextBlock tb;
    tb.bbox = box;
    tb.text = std::move(best.text);
    tb.confidence = std::clamp(best.confidence, 0.0, 1.0);
    tb.vertical = vertical;
    out.push_back(std::move(tb));
  }
  return out;
}

}  // namespace chartex::textscan
