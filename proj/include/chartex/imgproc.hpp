#pragma once

#include "chartex/image.hpp"

#include <array>
#include <optional>
#include <vector>

namespace chartex::imgproc {

// ---------------------------------------------------------------------------
// Types

/// Outer border of one 8-connected foreground component.
struct Contour {
  std::vector<Point> boundary;  ///< closed, ordered (Moore tracing), first != last
  Rect bbox;                    ///< tight bound of the boundary
  int area = 0;                 ///< filled pixel count of the component
  double fill_ratio = 0.0;      ///< area / bbox.area()
};

struct LineSegment {
  Point p0;
  Point p1;

  double length() const;
  /// Orientation in degrees folded into [0, 180): 0 = horizontal, 90 = vertical.
  double angle_deg() const;
};

struct LabelMap {
  LabelImage labels;  ///< 0 = background, components numbered 1..count
  int count = 0;
};

enum class Interpolation { nearest, bilinear, bicubic };

// ---------------------------------------------------------------------------
// Color and thresholding

/// Luma round(0.299 R + 0.587 G + 0.114 B).
GrayImage to_grayscale(const RgbImage& rgb);
RgbImage gray_to_rgb(const GrayImage& gray);

/// 256-bin intensity histogram.
std::array<std::int64_t, 256> histogram(const GrayImage& img);

/// Between-class variance of threshold t: class 0 = intensities < t, class 1 = intensities >= t.
double between_class_variance(const std::array<std::int64_t, 256>& hist, int t);

struct OtsuResult {
  BinaryImage binary;
  int threshold = 0;
};

/// Global Otsu threshold. Pixels strictly below the threshold become foreground.
/// A uniform image yields threshold = its intensity and an all-background output.
OtsuResult otsu_binarize(const GrayImage& img);

IntegralImage integral_image(const GrayImage& img);

/// Sum over the inclusive pixel rectangle [x0..x1] x [y0..y1] (coordinates must be in range).
std::int64_t rect_sum(const IntegralImage& table, int x0, int y0, int x1, int y1);

/// Local-mean threshold over a square window clipped at the borders. Foreground iff
/// intensity * 100 < mean * (100 - t_pct). window <= 0 selects width/8 (min 3).
BinaryImage adaptive_threshold(const GrayImage& img, int window = 0, double t_pct = 15.0);

// ---------------------------------------------------------------------------
// Filtering and resampling

/// Separable Gaussian with sigma = 0.3 * ((kernel - 1) / 2 - 1) + 0.8, clamp-to-edge borders.
GrayImage gaussian_blur(const GrayImage& img, int kernel = 5);

/// 1-D normalized Gaussian weights used by gaussian_blur.
std::vector<double> gaussian_kernel(int kernel);

GrayImage upscale(const GrayImage& img, int factor = 2, Interpolation method = Interpolation::bicubic);

/// Bilinear sample at continuous pixel-center coordinates (clamp-to-edge).
double sample_bilinear(const GrayImage& img, double x, double y);

/// Pixels under mask become white. Throws InvalidArgument on dimension mismatch.
GrayImage subtract_mask(const GrayImage& img, const BinaryImage& mask);

/// 90 degree clockwise rotation.
GrayImage rotate_cw(const GrayImage& img);
/// 90 degree counter-clockwise rotation.
GrayImage rotate_ccw(const GrayImage& img);

// ---------------------------------------------------------------------------
// Morphology

BinaryImage erode(const BinaryImage& img, int kernel);
BinaryImage dilate(const BinaryImage& img, int kernel);
/// Erosion then dilation with a kernel x kernel square. Outside the image counts as background.
BinaryImage morphological_open(const BinaryImage& img, int kernel = 5);
/// Dilation then erosion; fills holes and notches narrower than the kernel.
BinaryImage morphological_close(const BinaryImage& img, int kernel = 3);
/// 3x3 binary median: foreground iff at least 5 of the 9 neighborhood pixels are.
BinaryImage majority_filter(const BinaryImage& img);

// ---------------------------------------------------------------------------
// Components and contours

/// 8-connected labeling; ids follow raster-scan first-encounter order.
LabelMap connected_components(const BinaryImage& img);

/// Drops foreground components smaller than min_area pixels.
BinaryImage despeckle(const BinaryImage& img, int min_area);

/// One outer contour per 8-connected component, ordered by the raster position of the
/// component's topmost-leftmost pixel. Holes are ignored.
std::vector<Contour> find_contours(const BinaryImage& img);

/// Closed-polygon endpoint-fit simplification of the contour boundary.
std::vector<Point> approx_corners(const Contour& c, double epsilon = 2.0);

// ---------------------------------------------------------------------------
// Edges and lines

struct CannyThresholds {
  double low = 0.0;
  double high = 0.0;
};

/// Median-based thresholds: low = 0.66 m, high = 1.33 m, clamped to [0, 255].
CannyThresholds auto_canny_thresholds(const GrayImage& img);

/// Sobel gradients, non-maximum suppression and hysteresis. Without explicit thresholds the
/// median-based automatic mode is used.
BinaryImage canny(const GrayImage& img, std::optional<CannyThresholds> thresholds = std::nullopt);

struct HoughParams {
  int votes = 50;
  int min_len = 0;  ///< <= 0 selects 0.3 * min(width, height)
  int max_gap = 5;
  double rho_step = 1.0;
  double theta_step_deg = 1.0;
  std::uint64_t seed = 0x9E3779B97F4A7C15ull;
};

/// Probabilistic Hough transform. Segments are sorted by length, longest first.
std::vector<LineSegment> hough_lines(const BinaryImage& edges, const HoughParams& params = {});

}  // namespace chartex::imgproc
