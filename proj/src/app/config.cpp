#include "chartex/app.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

namespace chartex::app {

namespace {

struct Entry {
  std::string key;
  std::function<std::string(const Config&)> get;
  std::function<void(Config&, std::string_view)> set;
};

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad(std::string_view key, std::string_view value, const std::string& why) {
  throw ConfigError(std::string(key) + " = '" + std::string(value) + "': " + why);
}

template <typename T>
T parse_num(std::string_view key, std::string_view v) {
  T out{};
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) bad(key, v, "not a number");
  return out;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <typename Acc>
Entry integer(std::string key, Acc acc, long lo, long hi) {
  return {key, [acc](const Config& c) { return std::to_string(acc(const_cast<Config&>(c))); },
          [key, acc, lo, hi](Config& c, std::string_view v) {
            const long x = parse_num<long>(key, v);
            if (x < lo || x > hi) bad(key, v, "outside [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
            acc(c) = static_cast<std::remove_reference_t<decltype(acc(c))>>(x);
          }};
}

template <typename Acc>
Entry real(std::string key, Acc acc, double lo, double hi) {
  return {key, [acc](const Config& c) { return fmt(acc(const_cast<Config&>(c))); },
          [key, acc, lo, hi](Config& c, std::string_view v) {
            const double x = parse_num<double>(key, v);
            if (!(x >= lo && x <= hi)) bad(key, v, "outside [" + fmt(lo) + ", " + fmt(hi) + "]");
            acc(c) = x;
          }};
}

template <typename Acc>
Entry boolean(std::string key, Acc acc) {
  return {key, [acc](const Config& c) { return std::string(acc(const_cast<Config&>(c)) ? "true" : "false"); },
          [key, acc](Config& c, std::string_view v) {
            if (v == "true" || v == "1")
              acc(c) = true;
            else if (v == "false" || v == "0")
              acc(c) = false;
            else
              bad(key, v, "expected true or false");
          }};
}

const char* interpolation_name(imgproc::Interpolation m) {
  switch (m) {
    case imgproc::Interpolation::nearest: return "nearest";
    case imgproc::Interpolation::bilinear: return "bilinear";
    case imgproc::Interpolation::bicubic: return "bicubic";
  }
  return "bicubic";
}

#define FIELD(type, expr) [](Config& c) -> type& { return c.expr; }

const std::vector<Entry>& entries() {
  static const std::vector<Entry> table = [] {
    constexpr long kBig = 1 << 20;
    std::vector<Entry> t = {
        integer("panels.despeckle_area", FIELD(int, panels.despeckle_area), 0, kBig),
        integer("panels.dilate_radius", FIELD(int, panels.dilate_radius), 0, 200),
        real("panels.min_area_fraction", FIELD(double, panels.min_area_fraction), 0.0, 1.0),
        real("panels.merge_overlap", FIELD(double, panels.merge_overlap), 0.0, 1.0),
        integer("panels.attach_distance", FIELD(int, panels.attach_distance), 0, kBig),
        integer("panels.pad", FIELD(int, panels.pad), 0, 200),

        real("text.min_fill", FIELD(double, candidates.min_fill), 0.0, 1.0),
        real("text.sigma_band", FIELD(double, candidates.sigma_band), 0.0, 100.0),
        integer("text.despeckle_area", FIELD(int, candidates.despeckle_area), 0, kBig),
        integer("text.attach_min_gap", FIELD(int, candidates.attach_min_gap), 0, 100),
        real("text.max_size_vs_median", FIELD(double, candidates.max_size_vs_median), 0.0, 100.0),
        real("text.max_aspect", FIELD(double, candidates.max_aspect), 1.0, 1000.0),
        real("text.group_gap", FIELD(double, words.gap_vs_median_width), 0.0, 100.0),
        real("text.group_overlap", FIELD(double, words.min_overlap), 0.0, 1.0),

        integer("ocr.upscale", FIELD(int, recognize.upscale), 1, 8),
        integer("ocr.pad", FIELD(int, recognize.pad), 0, 50),
        real("ocr.vertical_aspect", FIELD(double, recognize.vertical_aspect), 0.0, 100.0),
        real("ocr.min_agreement", FIELD(double, ocr_min_agreement), 0.0, 1.0),
        {"ocr.command", [](const Config& c) { return c.ocr_command; },
         [](Config& c, std::string_view v) { c.ocr_command = std::string(v); }},
        {"ocr.interpolation", [](const Config& c) { return std::string(interpolation_name(c.recognize.method)); },
         [](Config& c, std::string_view v) {
           if (v == "nearest")
             c.recognize.method = imgproc::Interpolation::nearest;
           else if (v == "bilinear")
             c.recognize.method = imgproc::Interpolation::bilinear;
           else if (v == "bicubic")
             c.recognize.method = imgproc::Interpolation::bicubic;
           else
             bad("ocr.interpolation", v, "expected nearest, bilinear or bicubic");
         }},

        integer("axes.blur_kernel", FIELD(int, axes.blur_kernel), 1, 31),
        integer("axes.hough_votes", FIELD(int, axes.hough.votes), 1, kBig),
        integer("axes.hough_min_len", FIELD(int, axes.hough.min_len), 0, kBig),
        integer("axes.hough_max_gap", FIELD(int, axes.hough.max_gap), 0, 1000),
        real("axes.hough_rho_step", FIELD(double, axes.hough.rho_step), 0.1, 100.0),
        real("axes.hough_theta_step_deg", FIELD(double, axes.hough.theta_step_deg), 0.01, 45.0),
        {"axes.hough_seed", [](const Config& c) { return std::to_string(c.axes.hough.seed); },
         [](Config& c, std::string_view v) { c.axes.hough.seed = parse_num<std::uint64_t>("axes.hough_seed", v); }},
        real("axes.angle_tolerance_deg", FIELD(double, axes.angle_tolerance_deg), 0.0, 45.0),
        integer("axes.endpoint_tolerance", FIELD(int, axes.endpoint_tolerance), 0, 1000),
        integer("axes.max_corner_offset", FIELD(int, axes.max_corner_offset), 0, 1000),
        integer("axes.refine_band", FIELD(int, axes.refine_band), 0, 100),
        integer("axes.dark_level", FIELD(int, axes.dark_level), 0, 255),
        integer("axes.max_scan_gap", FIELD(int, axes.max_scan_gap), 0, 1000),

        boolean("bars.majority", FIELD(bool, bars.majority)),
        integer("bars.open_kernel", FIELD(int, bars.open_kernel), 1, 51),
        real("bars.corner_epsilon", FIELD(double, bars.corner_epsilon), 0.0, 100.0),
        integer("bars.edge_dx", FIELD(int, bars.edge_dx), 0, 100),
        integer("bars.min_edge_length", FIELD(int, bars.min_edge_length), 1, kBig),
        integer("bars.top_tolerance", FIELD(int, bars.top_tolerance), 0, 100),
        integer("bars.baseline_tolerance", FIELD(int, bars.baseline_tolerance), 0, 100),
        integer("bars.refine_color_tolerance", FIELD(int, bars.refine_color_tolerance), 0, 255),
        integer("bars.refine_search", FIELD(int, bars.refine_search), 0, 100),

        real("grouping.slice_width", FIELD(double, grouping.slice_width), 0.01, 1.0),
        real("grouping.slice_height", FIELD(double, grouping.slice_height), 0.01, 1.0),
        real("grouping.max_color_distance", FIELD(double, grouping.max_color_distance), 0.0, 442.0),
        real("grouping.min_correlation", FIELD(double, grouping.min_correlation), -1.0, 1.0),
        integer("grouping.pattern_level", FIELD(int, grouping.pattern_level), 0, 255),
        integer("grouping.max_shift", FIELD(int, grouping.max_shift), 0, 100),

        real("semantics.title_band", FIELD(double, semantics.title_band), 0.0, 1.0),
        real("semantics.tick_band", FIELD(double, semantics.tick_band), 0.0, 100.0),
        integer("semantics.label_gap", FIELD(int, semantics.label_gap), 0, 1000),
        real("semantics.suspect_step", FIELD(double, semantics.suspect_step), 0.0, 100.0),
        real("semantics.log_ratio_tolerance", FIELD(double, semantics.log_ratio_tolerance), 0.0, 1.0),

        real("eval.text_radius", FIELD(double, match.text_radius), 0.0, 10000.0),
        real("eval.loa_z", FIELD(double, agreement.z), 0.0, 100.0),
        boolean("eval.sample_sd", FIELD(bool, agreement.sample_sd)),
    };
    std::sort(t.begin(), t.end(), [](const Entry& a, const Entry& b) { return a.key < b.key; });
    return t;
  }();
  return table;
}

#undef FIELD

const Entry& entry(std::string_view key) {
  const auto& t = entries();
  const auto it = std::lower_bound(t.begin(), t.end(), key, [](const Entry& e, std::string_view k) { return e.key < k; });
  if (it == t.end() || it->key != key) throw ConfigError("unknown config key '" + std::string(key) + "'");
  return *it;
}

}  // namespace

void Config::set(std::string_view key, std::string_view value) { entry(key).set(*this, trim(value)); }

std::string Config::get(std::string_view key) const { return entry(key).get(*this); }

std::vector<std::string> Config::keys() {
  std::vector<std::string> out;
  for (const Entry& e : entries()) out.push_back(e.key);
  return out;
}

Config Config::parse(std::string_view text) {
  Config c;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    try {
      c.set(trim(line.substr(0, eq)), line.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return c;
}

Config Config::load(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream s;
  s << f.rdbuf();
  try {
    return parse(s.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::string Config::canonical() const {
  std::string out;
  for (const Entry& e : entries()) out += e.key + "=" + e.get(*this) + "\n";
  return out;
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string Config::hash() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(canonical())));
  return buf;
}

std::unique_ptr<textscan::OcrEngine> make_ocr(const Config& config) {
  if (!config.ocr_command.empty()) return std::make_unique<textscan::ExternalOcr>(config.ocr_command);
  return std::make_unique<textscan::BuiltinGlyphOcr>(config.ocr_min_agreement);
}

}  // namespace chartex::app
