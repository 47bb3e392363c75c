#include "chartex/semantics.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>

namespace chartex::semantics {

namespace {

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

struct Line {
  double a = 0.0;  ///< value at pixel 0
  double b = 0.0;  ///< value per pixel
  double at(double p) const { return a + b * p; }
};

// Theil-Sen: median pairwise slope, median intercept. One bad tick cannot drag it.
Line robust_line(const std::vector<Tick>& ticks) {
  std::vector<double> slopes;
  for (std::size_t i = 0; i < ticks.size(); ++i)
    for (std::size_t j = i + 1; j < ticks.size(); ++j)
      if (ticks[j].pixel != ticks[i].pixel)
        slopes.push_back((ticks[j].value - ticks[i].value) / (ticks[j].pixel - ticks[i].pixel));
  Line l;
  if (slopes.empty()) return l;
  l.b = median(slopes);
  std::vector<double> icepts;
  for (const Tick& t : ticks) icepts.push_back(t.value - l.b * t.pixel);
  l.a = median(icepts);
  return l;
}

std::string cleaned(std::string_view text) {
  std::string s;
  for (char c : text)
    if (c != '%' && c != ',' && !std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  return s;
}

// Value plus every single-digit 2<->7 swap of the tick text.
std::vector<double> variants(const Tick& t) {
  std::vector<double> out{t.value};
  const std::string digits = cleaned(t.source_text);
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (digits[i] != '2' && digits[i] != '7') continue;
    std::string swapped = digits;
    swapped[i] = digits[i] == '2' ? '7' : '2';
    if (const auto v = parse_number(swapped)) out.push_back(*v);
  }
  return out;
}

// Line through two ticks (either possibly swapped) that explains the most ticks with the
// fewest swaps, refit with Theil-Sen on the values it explains. Several bad ticks cannot
// drag it while a consistent majority exists.
Line consensus_line(const std::vector<Tick>& ticks, double limit) {
  std::vector<std::vector<double>> cand;
  for (const Tick& t : ticks) cand.push_back(variants(t));
  int best_in = -1, best_swaps = 0;
  double best_res = 0.0;
  std::vector<Tick> best_fit;
  for (std::size_t i = 0; i < ticks.size(); ++i)
    for (std::size_t j = i + 1; j < ticks.size(); ++j) {
      if (ticks[j].pixel == ticks[i].pixel) continue;
      for (double vi : cand[i])
        for (double vj : cand[j]) {
          Line l;
          l.b = (vj - vi) / (ticks[j].pixel - ticks[i].pixel);
          l.a = vi - l.b * ticks[i].pixel;
          int in = 0, swaps = 0;
          double res = 0.0;
          std::vector<Tick> fit;
          for (std::size_t k = 0; k < ticks.size(); ++k) {
            for (std::size_t c = 0; c < cand[k].size(); ++c) {
              const double r = std::abs(cand[k][c] - l.at(ticks[k].pixel));
              if (r > limit) continue;
              ++in;
              swaps += c > 0;
              res += r;
              fit.push_back(ticks[k]);
              fit.back().value = cand[k][c];
              break;
            }
          }
          if (in > best_in || (in == best_in && (swaps < best_swaps || (swaps == best_swaps && res < best_res)))) {
            best_in = in;
            best_swaps = swaps;
            best_res = res;
            best_fit = std::move(fit);
          }
        }
    }
  return best_fit.size() >= 2 ? robust_line(best_fit) : robust_line(ticks);
}

}  // namespace

std::optional<double> parse_number(std::string_view text) {
  const std::string s = cleaned(text);
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  const char* first = s.data();
  if (*first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::vector<Tick> parse_ticks(const std::vector<textscan::TextBlock>& blocks, const SemanticsParams& params) {
  std::vector<Tick> ticks;
  for (const textscan::TextBlock& b : blocks) {
    if (b.role != textscan::Role::y_tick) continue;
    if (const auto v = parse_number(b.text)) ticks.push_back({b.bbox.cy(), *v, b.text, b.text, false, false, b.bbox});
  }
  if (ticks.size() < 2) throw CalibrationImpossible("fewer than two parseable y ticks");
  std::sort(ticks.begin(), ticks.end(), [](const Tick& a, const Tick& b) { return a.pixel < b.pixel; });

  std::vector<double> steps;
  for (std::size_t i = 1; i < ticks.size(); ++i) steps.push_back(std::abs(ticks[i].value - ticks[i - 1].value));
  const double limit = params.suspect_step * median(steps);
  const Line line = consensus_line(ticks, limit);

  for (Tick& t : ticks) {
    if (std::abs(t.value - line.at(t.pixel)) <= limit) continue;
    t.suspect = true;
    const std::string digits = cleaned(t.source_text);
    double best = std::abs(t.value - line.at(t.pixel));
    for (std::size_t i = 0; i < digits.size(); ++i) {
      if (digits[i] != '2' && digits[i] != '7') continue;
      std::string swapped = digits;
      swapped[i] = digits[i] == '2' ? '7' : '2';
      const auto v = parse_number(swapped);
      if (!v) continue;
      const double r = std::abs(*v - line.at(t.pixel));
      if (r <= limit && r < best) {
        best = r;
        t.value = *v;
        t.text = swapped;
        t.repaired = true;
      }
    }
  }
  return ticks;
}

Calibration calibrate(const std::vector<Tick>& all, int baseline_y, const SemanticsParams& params) {
  std::vector<Tick> ticks;
  for (const Tick& t : all)
    if (!t.suspect || t.repaired) ticks.push_back(t);
  if (ticks.size() < 2) throw CalibrationImpossible("fewer than two usable y ticks");
  std::sort(ticks.begin(), ticks.end(), [](const Tick& a, const Tick& b) { return a.pixel < b.pixel; });

  const double dv0 = ticks[1].value - ticks[0].value;
  for (std::size_t i = 1; i < ticks.size(); ++i) {
    const double dp = ticks[i].pixel - ticks[i - 1].pixel, dv = ticks[i].value - ticks[i - 1].value;
    if (dp <= 0.0) throw CalibrationImpossible("y ticks share a pixel row");
    if (dv == 0.0 || (dv > 0) != (dv0 > 0)) throw CalibrationImpossible("y tick values are not monotonic");
  }

  // Equal pixel spacing with a constant value ratio (and unequal steps) is a log scale.
  if (ticks.size() >= 3 && std::all_of(ticks.begin(), ticks.end(), [](const Tick& t) { return t.value > 0; })) {
    const double r0 = ticks[1].value / ticks[0].value;
    bool const_ratio = true, const_step = true;
    for (std::size_t i = 1; i < ticks.size(); ++i) {
      const double r = ticks[i].value / ticks[i - 1].value;
      const_ratio = const_ratio && std::abs(r - r0) <= params.log_ratio_tolerance * std::abs(r0);
      const double dv = ticks[i].value - ticks[i - 1].value;
      const_step = const_step && std::abs(dv - dv0) <= params.log_ratio_tolerance * std::abs(dv0);
    }
    if (const_ratio && !const_step) throw LogarithmicAxis("y tick values grow by a constant ratio");
  }

  const double n = static_cast<double>(ticks.size());
  double mp = 0.0, mv = 0.0;
  for (const Tick& t : ticks) mp += t.pixel, mv += t.value;
  mp /= n;
  mv /= n;
  double spp = 0.0, spv = 0.0;
  for (const Tick& t : ticks) {
    spp += (t.pixel - mp) * (t.pixel - mp);
    spv += (t.pixel - mp) * (t.value - mv);
  }
  if (spp == 0.0) throw CalibrationImpossible("y ticks have no pixel spread");
  Calibration c;
  c.slope = spv / spp;
  c.baseline_y = baseline_y;
  c.intercept = mv + c.slope * (baseline_y - mp);
  double ss = 0.0;
  for (const Tick& t : ticks) {
    const double r = t.value - c.value_at(t.pixel);
    ss += r * r;
  }
  c.rms_residual = std::sqrt(ss / n);
  return c;
}

double average_spacing_slope(const std::vector<Tick>& input) {
  if (input.size() < 2) throw CalibrationImpossible("fewer than two ticks");
  std::vector<Tick> ticks = input;
  std::sort(ticks.begin(), ticks.end(), [](const Tick& a, const Tick& b) { return a.pixel < b.pixel; });
  double dv = 0.0, dp = 0.0;
  for (std::size_t i = 1; i < ticks.size(); ++i) {
    dv += ticks[i].value - ticks[i - 1].value;
    dp += ticks[i].pixel - ticks[i - 1].pixel;
  }
  if (dp == 0.0) throw CalibrationImpossible("y ticks have no pixel spread");
  const double m = static_cast<double>(ticks.size() - 1);
  return (dv / m) / (dp / m);
}

}  // namespace chartex::semantics
