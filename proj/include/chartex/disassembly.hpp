#pragma once

#include "chartex/image.hpp"
#include "chartex/imgproc.hpp"

#include <optional>
#include <vector>

namespace chartex::disassembly {

class NoAxes : public Error {
 public:
  using Error::Error;
};

struct PanelParams {
  int despeckle_area = 8;
  int dilate_radius = 10;
  double min_area_fraction = 0.05;  ///< of the page area
  double merge_overlap = 0.2;       ///< of the smaller box
  int attach_distance = 60;         ///< small components within this gap join the nearest panel
  int pad = 4;
};

/// Panel boxes in page coordinates, sorted top-to-bottom then left-to-right.
std::vector<Rect> segment_panels(const GrayImage& page, const PanelParams& params = {});

/// Both segments start at the origin: x_axis runs right, y_axis runs up.
struct Axes {
  imgproc::LineSegment x_axis;
  imgproc::LineSegment y_axis;
  Point origin;
  Rect plot_rect;  ///< spanned by the two segments, axis lines included
};

struct AxesParams {
  int blur_kernel = 5;  ///< smoothing before Canny
  imgproc::HoughParams hough{.max_gap = 10};  ///< noise pinholes break the axis edges
  double angle_tolerance_deg = 2.0;
  int endpoint_tolerance = 10;
  int max_corner_offset = 40;  ///< horizontal may start this far left of the vertical (tick marks, labels)
  int refine_band = 4;   ///< search radius around the Hough line
  int dark_level = 64;   ///< gray below this counts as axis ink
  int max_scan_gap = 5;  ///< tolerated breaks while tracing an axis (noise pinholes)
};

/// Otsu binary of the unblurred text-free panel: the binary bar detection runs on. Solid fills
/// stay solid, gridlines lighter than the threshold drop out.
BinaryImage structure_binary(const GrayImage& panel_no_text);

/// Edge map the axis search runs on: Canny over the blurred gray panel.
BinaryImage axes_edge_map(const GrayImage& panel_no_text, const AxesParams& params = {});

/// Near-horizontal / near-vertical pair forming the lower-left corner of a plot: the
/// vertical's foot lies on the horizontal's row, near its left end, with most of the
/// horizontal to its right. Picks the longest horizontal, then the leftmost vertical at
/// least 0.9x as long as the longest qualifying one. nullopt when no pair qualifies.
std::optional<std::pair<imgproc::LineSegment, imgproc::LineSegment>> select_axes(
    const std::vector<imgproc::LineSegment>& segments, const AxesParams& params = {});

/// Hough pair selection, then each axis snapped to the densest dark line nearby and traced
/// outward from the origin on the gray image. Throws NoAxes when no qualifying pair exists.
Axes detect_axes(const GrayImage& panel_no_text, const AxesParams& params = {});

struct PlotCrop {
  GrayImage image;
  Point offset;  ///< crop (x, y) + offset = panel (x, y)
};

PlotCrop crop_plot(const GrayImage& panel, const Axes& axes);

struct VerticalEdge {
  int x = 0;
  int y_top = 0;
  int y_bottom = 0;
};

/// Geometry in panel coordinates; x_right is exclusive, height = baseline_y - y_top.
struct Bar {
  int x_left = 0;
  int x_right = 0;
  int y_top = 0;
  int baseline_y = 0;
  int group_id = -1;
  Rgb mean_color;

  int height() const { return baseline_y - y_top; }
  int width() const { return x_right - x_left; }
};

struct BarParams {
  bool majority = true;  ///< 3x3 majority filter first: drops specks, fills pinholes
  int open_kernel = 5;
  double corner_epsilon = 2.0;
  int edge_dx = 1;
  int min_edge_length = 3;
  int top_tolerance = 2;
  int baseline_tolerance = 3;
  int refine_color_tolerance = 40;
  int refine_search = 3;
};

/// Vertical edges of the corner polygons of every contour in a binary plot crop, after a
/// majority filter and an opening.
std::vector<VerticalEdge> vertical_edges(const BinaryImage& plot, const BarParams& params = {});

/// Bars from a binary crop of plot_rect (gridlines still present). Output in panel coordinates.
std::vector<Bar> detect_bars(const BinaryImage& plot, const Axes& axes, const BarParams& params = {});

/// Snaps bar sides and tops onto the unblurred gray image: each edge moves to where the
/// bar's own color begins, judged by the median over the bar's central band.
std::vector<Bar> refine_bars(const GrayImage& panel, std::vector<Bar> bars, const BarParams& params = {});

struct GroupParams {
  double slice_width = 0.5;
  double slice_height = 0.2;
  double max_color_distance = 20.0;
  double min_correlation = 0.8;
  int pattern_level = 48;  ///< |v - slice median| above this marks pattern ink
  int max_shift = 4;
};

/// Assigns group ids by color and center-slice pattern, 0.. in left-to-right first occurrence.
std::vector<Bar> group_bars(const RgbImage& panel, std::vector<Bar> bars, const GroupParams& params = {});

struct GateResult {
  bool is_bar_chart = false;
  double score = 0.0;
};

/// Structural stand-in for a chart classifier: axes found and at least two bars.
/// score = min(1, bars / 4).
GateResult gate_bar_chart(std::size_t bars_found, bool axes_found);
/// Runs axis and bar detection on a text-free panel and applies the rule above.
GateResult gate_bar_chart(const GrayImage& panel_no_text, const AxesParams& axes = {}, const BarParams& bars = {});

}  // namespace chartex::disassembly
