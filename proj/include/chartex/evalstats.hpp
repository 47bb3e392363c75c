#pragma once

#include "chartex/chartgen.hpp"
#include "chartex/semantics.hpp"

#include <json.hpp>

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace chartex::evalstats {

class InsufficientData : public Error {
 public:
  using Error::Error;
};

enum class ObjectClass { bar_value, x_tick, y_tick, x_label, y_label, title };
inline constexpr std::array<ObjectClass, 6> kClasses = {ObjectClass::bar_value, ObjectClass::x_tick,
                                                        ObjectClass::y_tick,    ObjectClass::x_label,
                                                        ObjectClass::y_label,   ObjectClass::title};
std::string_view to_string(ObjectClass c);

/// Bar pairs carry numbers, text pairs carry strings.
struct MatchedPair {
  ObjectClass object_class = ObjectClass::bar_value;
  double truth = 0.0;
  double extracted = 0.0;
  std::string truth_text;
  std::string extracted_text;
};

struct MatchResult {
  std::vector<MatchedPair> pairs;
  std::array<int, kClasses.size()> misses{};
  std::array<int, kClasses.size()> truth_counts{};

  int misses_of(ObjectClass c) const { return misses[static_cast<std::size_t>(c)]; }
  int truth_of(ObjectClass c) const { return truth_counts[static_cast<std::size_t>(c)]; }
  /// Pools another chart's result (associative and order-independent up to pair order).
  void merge(const MatchResult& other);
};

struct MatchParams {
  double text_radius = 25.0;  ///< px between box centers
};

/// Bars by (category, canonical group); text by role and nearest unused box center.
/// Group ids on both sides are relabeled by first occurrence left to right, so a
/// consistent permutation of group ids does not break matching.
MatchResult match(const semantics::ChartModel& model, const chartgen::GroundTruth& truth, const MatchParams& params = {});

struct ClassAccuracy {
  int n = 0;      ///< matched pairs
  int exact = 0;  ///< string classes only
  std::optional<double> percent() const;
};

struct AccuracyReport {
  ClassAccuracy x_tick, x_label, y_tick, y_label, title;
  int bar_pairs = 0;
  int within_1 = 0, within_2 = 0, within_5 = 0;
  int bars_truth = 0, bars_detected = 0;
  int text_truth = 0, text_detected = 0;

  std::optional<double> bar_percent(int count) const;
  std::optional<double> bars_detected_percent() const;
  std::optional<double> text_detected_percent() const;
};

double relative_error(double truth, double extracted);
AccuracyReport accuracy(const MatchResult& result);

struct BlandAltmanParams {
  double z = 2.0;
  bool sample_sd = true;  ///< n - 1 denominator; false for population sd
};

struct BlandAltman {
  int n = 0;
  double bias = 0.0;
  double sd = 0.0;
  double loa_low = 0.0;
  double loa_high = 0.0;
  double pct_within = 0.0;
  double z = 2.0;
  std::vector<std::pair<double, double>> scatter;  ///< (mean, difference) per pair
};

/// bias -/+ z * sd
std::pair<double, double> limits_of_agreement(double bias, double sd, double z = 2.0);

/// Differences are extracted - truth. Throws InsufficientData below two pairs.
BlandAltman bland_altman(const std::vector<double>& truth, const std::vector<double>& extracted,
                         const BlandAltmanParams& params = {});
/// Over the bar-value pairs of a match result.
BlandAltman bland_altman(const MatchResult& result, const BlandAltmanParams& params = {});

nlohmann::json report_json(const AccuracyReport& report, const std::optional<BlandAltman>& ba);
AccuracyReport report_from_json(const nlohmann::json& j);
/// Fixed-width table in the order X-TICK VALUE, X-AXIS LABEL, Y-TICK VALUE, Y-AXIS LABEL,
/// BAR VALUE (<1/2/5% ERR), followed by detection rates and agreement.
std::string report_text(const AccuracyReport& report, const std::optional<BlandAltman>& ba);
/// `mean,difference` rows with a header line.
std::string bland_altman_csv(const BlandAltman& ba);

}  // namespace chartex::evalstats
