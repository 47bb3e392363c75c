#include "chartex/evalstats.hpp"
#include "chartex/jsonio.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace chartex::evalstats {

using nlohmann::json;

namespace {

std::optional<double> pct(int k, int n) {
  if (n <= 0) return std::nullopt;
  return 100.0 * k / n;
}

}  // namespace

std::optional<double> ClassAccuracy::percent() const { return pct(exact, n); }
std::optional<double> AccuracyReport::bar_percent(int count) const { return pct(count, bar_pairs); }
std::optional<double> AccuracyReport::bars_detected_percent() const { return pct(bars_detected, bars_truth); }
std::optional<double> AccuracyReport::text_detected_percent() const { return pct(text_detected, text_truth); }

double relative_error(double truth, double extracted) {
  return std::abs(extracted - truth) / std::max(std::abs(truth), 1e-9);
}

AccuracyReport accuracy(const MatchResult& result) {
  AccuracyReport r;
  auto slot = [&](ObjectClass c) -> ClassAccuracy* {
    switch (c) {
      case ObjectClass::x_tick: return &r.x_tick;
      case ObjectClass::x_label: return &r.x_label;
      case ObjectClass::y_tick: return &r.y_tick;
      case ObjectClass::y_label: return &r.y_label;
      case ObjectClass::title: return &r.title;
      case ObjectClass::bar_value: return nullptr;
    }
    return nullptr;
  };
  for (const MatchedPair& p : result.pairs) {
    if (p.object_class == ObjectClass::bar_value) {
      ++r.bar_pairs;
      const double e = relative_error(p.truth, p.extracted);
      r.within_1 += e <= 0.01;
      r.within_2 += e <= 0.02;
      r.within_5 += e <= 0.05;
    } else {
      ClassAccuracy* a = slot(p.object_class);
      ++a->n;
      a->exact += p.truth_text == p.extracted_text;
    }
  }
  for (ObjectClass c : kClasses) {
    const int truth = result.truth_of(c), found = truth - result.misses_of(c);
    if (c == ObjectClass::bar_value) {
      r.bars_truth += truth;
      r.bars_detected += found;
    } else {
      r.text_truth += truth;
      r.text_detected += found;
    }
  }
  return r;
}

std::pair<double, double> limits_of_agreement(double bias, double sd, double z) { return {bias - z * sd, bias + z * sd}; }

BlandAltman bland_altman(const std::vector<double>& truth, const std::vector<double>& extracted,
                         const BlandAltmanParams& params) {
  if (truth.size() != extracted.size()) throw InvalidArgument("bland_altman: length mismatch");
  if (truth.size() < 2) throw InsufficientData("bland_altman needs at least two pairs");
  BlandAltman ba;
  ba.n = static_cast<int>(truth.size());
  ba.z = params.z;
  std::vector<double> d(truth.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    d[i] = extracted[i] - truth[i];
    ba.bias += d[i];
    ba.scatter.emplace_back(0.5 * (extracted[i] + truth[i]), d[i]);
  }
  ba.bias /= ba.n;
  double ss = 0.0;
  for (double v : d) ss += (v - ba.bias) * (v - ba.bias);
  ba.sd = std::sqrt(ss / (params.sample_sd ? ba.n - 1 : ba.n));
  std::tie(ba.loa_low, ba.loa_high) = limits_of_agreement(ba.bias, ba.sd, params.z);
  int inside = 0;
  for (double v : d) inside += v >= ba.loa_low && v <= ba.loa_high;
  ba.pct_within = 100.0 * inside / ba.n;
  return ba;
}

BlandAltman bland_altman(const MatchResult& result, const BlandAltmanParams& params) {
  std::vector<double> t, e;
  for (const MatchedPair& p : result.pairs)
    if (p.object_class == ObjectClass::bar_value) {
      t.push_back(p.truth);
      e.push_back(p.extracted);
    }
  return bland_altman(t, e, params);
}

namespace {

json opt(const std::optional<double>& v) { return v ? jsonio::number(*v) : json(nullptr); }

json class_json(const ClassAccuracy& c) { return {{"n", c.n}, {"exact", c.exact}, {"percent", opt(c.percent())}}; }

ClassAccuracy class_from(const json& j) { return {j.at("n").get<int>(), j.at("exact").get<int>()}; }

}  // namespace

json report_json(const AccuracyReport& r, const std::optional<BlandAltman>& ba) {
  json j;
  j["relative_error"] = "|extracted - truth| / max(|truth|, 1e-9)";
  j["strings"] = {{"x_tick", class_json(r.x_tick)},
                  {"x_label", class_json(r.x_label)},
                  {"y_tick", class_json(r.y_tick)},
                  {"y_label", class_json(r.y_label)},
                  {"title", class_json(r.title)}};
  j["bar_value"] = {{"n", r.bar_pairs},
                    {"within_1", r.within_1},
                    {"within_2", r.within_2},
                    {"within_5", r.within_5},
                    {"pct_within_1", opt(r.bar_percent(r.within_1))},
                    {"pct_within_2", opt(r.bar_percent(r.within_2))},
                    {"pct_within_5", opt(r.bar_percent(r.within_5))}};
  j["detection"] = {{"bars_truth", r.bars_truth},
                    {"bars_detected", r.bars_detected},
                    {"bars_pct", opt(r.bars_detected_percent())},
                    {"text_truth", r.text_truth},
                    {"text_detected", r.text_detected},
                    {"text_pct", opt(r.text_detected_percent())}};
  if (ba) {
    j["bland_altman"] = {{"n", ba->n},
                         {"bias", jsonio::number(ba->bias)},
                         {"sd", jsonio::number(ba->sd)},
                         {"loa_low", jsonio::number(ba->loa_low)},
                         {"loa_high", jsonio::number(ba->loa_high)},
                         {"pct_within", jsonio::number(ba->pct_within)},
                         {"z", jsonio::number(ba->z)}};
  } else {
    j["bland_altman"] = nullptr;
  }
  return j;
}

AccuracyReport report_from_json(const json& j) {
  AccuracyReport r;
  const json& s = j.at("strings");
  r.x_tick = class_from(s.at("x_tick"));
  r.x_label = class_from(s.at("x_label"));
  r.y_tick = class_from(s.at("y_tick"));
  r.y_label = class_from(s.at("y_label"));
  r.title = class_from(s.at("title"));
  const json& b = j.at("bar_value");
  r.bar_pairs = b.at("n");
  r.within_1 = b.at("within_1");
  r.within_2 = b.at("within_2");
  r.within_5 = b.at("within_5");
  const json& d = j.at("detection");
  r.bars_truth = d.at("bars_truth");
  r.bars_detected = d.at("bars_detected");
  r.text_truth = d.at("text_truth");
  r.text_detected = d.at("text_detected");
  return r;
}

std::string report_text(const AccuracyReport& r, const std::optional<BlandAltman>& ba) {
  std::ostringstream out;
  char line[128];
  auto row = [&](const char* name, const std::optional<double>& v, int n) {
    if (v)
      std::snprintf(line, sizeof line, "%-26s %8.1f %8d\n", name, *v, n);
    else
      std::snprintf(line, sizeof line, "%-26s %8s %8d\n", name, "n/a", n);
    out << line;
  };
  std::snprintf(line, sizeof line, "%-26s %8s %8s\n", "OBJECT", "ACCURACY", "N");
  out << line;
  row("X-TICK VALUE", r.x_tick.percent(), r.x_tick.n);
  row("X-AXIS LABEL", r.x_label.percent(), r.x_label.n);
  row("Y-TICK VALUE", r.y_tick.percent(), r.y_tick.n);
  row("Y-AXIS LABEL", r.y_label.percent(), r.y_label.n);
  row("BAR VALUE (<1% ERR)", r.bar_percent(r.within_1), r.bar_pairs);
  row("BAR VALUE (<2% ERR)", r.bar_percent(r.within_2), r.bar_pairs);
  row("BAR VALUE (<5% ERR)", r.bar_percent(r.within_5), r.bar_pairs);
  out << '\n';
  row("TITLE", r.title.percent(), r.title.n);
  row("BARS DETECTED", r.bars_detected_percent(), r.bars_truth);
  row("TEXT DETECTED", r.text_detected_percent(), r.text_truth);
  out << "\nBar error is relative to truth: |extracted - truth| / max(|truth|, 1e-9).\n";
  if (ba) {
    std::snprintf(line, sizeof line, "Bland-Altman: n %d, bias %.6g, sd %.6g, limits (%.6g, %.6g) at z = %.6g, %.1f%% within\n",
                  ba->n, ba->bias, ba->sd, ba->loa_low, ba->loa_high, ba->z, ba->pct_within);
    out << line;
  } else {
    out << "Bland-Altman: n/a\n";
  }
  return out.str();
}

std::string bland_altman_csv(const BlandAltman& ba) {
  std::string s = "mean,difference\n";
  char line[64];
  for (const auto& [m, d] : ba.scatter) {
    std::snprintf(line, sizeof line, "%.6g,%.6g\n", m, d);
    s += line;
  }
  return s;
}

}  // namespace chartex::evalstats
