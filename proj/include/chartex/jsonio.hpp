#pragma once

#include "chartex/image.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace chartex::jsonio {

using nlohmann::json;

/// Rounds to 6 significant digits so serialized documents are stable across platforms.
inline double sig6(double v) {
  if (!std::isfinite(v) || v == 0.0) return v == 0.0 ? 0.0 : v;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return std::strtod(buf, nullptr);
}

inline json number(double v) { return std::isfinite(v) ? json(sig6(v)) : json(nullptr); }

inline json to_json(const Rect& r) { return json::array({r.x, r.y, r.w, r.h}); }
inline json to_json(const Point& p) { return json::array({p.x, p.y}); }
inline json to_json(const Rgb& c) { return json::array({c.r, c.g, c.b}); }

inline Rect rect_from(const json& j) { return {j.at(0).get<int>(), j.at(1).get<int>(), j.at(2).get<int>(), j.at(3).get<int>()}; }
inline Point point_from(const json& j) { return {j.at(0).get<int>(), j.at(1).get<int>()}; }
inline Rgb rgb_from(const json& j) {
  return {j.at(0).get<std::uint8_t>(), j.at(1).get<std::uint8_t>(), j.at(2).get<std::uint8_t>()};
}

}  // namespace chartex::jsonio
