#include "chartex/font.hpp"

#include <algorithm>
#include <array>

namespace chartex::font {

namespace {

struct GlyphSource {
  char ch;
  int top;  // cell row of the first listed row
  std::array<const char*, 9> rows;  // unused trailing rows are nullptr
};

// 5x7 capitals and digits, lowercase x-height 5 with 2-row descenders.
// Every glyph bitmap is unique after trimming; several near-identical classic shapes
// ('0' vs 'O', 'l' vs 'I', 'g' vs '9', 'p' vs 'P') were redrawn to keep them apart.
const GlyphSource kSources[] = {
    {'0', 0, {".##.", "#..#", "#..#", "#..#", "#..#", "#..#", ".##."}},
    {'1', 0, {".#.", "##.", ".#.", ".#.", ".#.", ".#.", "###"}},
    {'2', 0, {".###.", "#...#", "....#", "...#.", "..#..", ".#...", "#####"}},
    {'3', 0, {"####.", "....#", "....#", ".###.", "....#", "....#", "####."}},
    {'4', 0, {"...#.", "..##.", ".#.#.", "#..#.", "#####", "...#.", "...#."}},
    {'5', 0, {"#####", "#....", "####.", "....#", "....#", "#...#", ".###."}},
    {'6', 0, {"..##.", ".#...", "#....", "####.", "#...#", "#...#", ".###."}},
    {'7', 0, {"#####", "....#", "...#.", "..#..", ".#...", ".#...", ".#..."}},
    {'8', 0, {".###.", "#...#", "#...#", ".###.", "#...#", "#...#", ".###."}},
    {'9', 0, {".###.", "#...#", "#...#", ".####", "....#", "...#.", ".##.."}},

    {'A', 0, {".###.", "#...#", "#...#", "#####", "#...#", "#...#", "#...#"}},
    {'B', 0, {"####.", "#...#", "#...#", "####.", "#...#", "#...#", "####."}},
    {'C', 0, {".###.", "#...#", "#....", "#....", "#....", "#...#", ".###."}},
    {'D', 0, {"###..", "#..#.", "#...#", "#...#", "#...#", "#..#.", "###.."}},
    {'E', 0, {"#####", "#....", "#....", "####.", "#....", "#....", "#####"}},
    {'F', 0, {"#####", "#....", "#....", "####.", "#....", "#....", "#...."}},
    {'G', 0, {".###.", "#...#", "#....", "#.###", "#...#", "#...#", ".####"}},
    {'H', 0, {"#...#", "#...#", "#...#", "#####", "#...#", "#...#", "#...#"}},
    {'I', 0, {"###", ".#.", ".#.", ".#.", ".#.", ".#.", "###"}},
    {'J', 0, {"..###", "...#.", "...#.", "...#.", "...#.", "#..#.", ".##.."}},
    {'K', 0, {"#...#", "#..#.", "#.#..", "##...", "#.#..", "#..#.", "#...#"}},
    {'L', 0, {"#....", "#....", "#....", "#....", "#....", "#....", "#####"}},
    {'M', 0, {"#...#", "##.##", "#.#.#", "#.#.#", "#...#", "#...#", "#...#"}},
    {'N', 0, {"#...#", "#...#", "##..#", "#.#.#", "#..##", "#...#", "#...#"}},
    {'O', 0, {".###.", "#...#", "#...#", "#...#", "#...#", "#...#", ".###."}},
    {'P', 0, {"####.", "#...#", "#...#", "####.", "#....", "#....", "#...."}},
    {'Q', 0, {".###.", "#...#", "#...#", "#...#", "#.#.#", "#..#.", ".##.#"}},
    {'R', 0, {"####.", "#...#", "#...#", "####.", "#.#..", "#..#.", "#...#"}},
    {'S', 0, {".####", "#....", "#....", ".###.", "....#", "....#", "####."}},
    {'T', 0, {"#####", "..#..", "..#..", "..#..", "..#..", "..#..", "..#.."}},
    {'U', 0, {"#...#", "#...#", "#...#", "#...#", "#...#", "#...#", ".###."}},
    {'V', 0, {"#...#", "#...#", "#...#", "#...#", "#...#", ".#.#.", "..#.."}},
    {'W', 0, {"#...#", "#...#", "#...#", "#.#.#", "#.#.#", "#.#.#", ".#.#."}},
    {'X', 0, {"#...#", "#...#", ".#.#.", "..#..", ".#.#.", "#...#", "#...#"}},
    {'Y', 0, {"#...#", "#...#", ".#.#.", "..#..", "..#..", "..#..", "..#.."}},
    {'Z', 0, {"#####", "....#", "...#.", "..#..", ".#...", "#....", "#####"}},

    {'a', 2, {".###.", "....#", ".####", "#...#", ".####"}},
    {'b', 0, {"#....", "#....", "####.", "#...#", "#...#", "#...#", "####."}},
    {'c', 2, {".###.", "#....", "#....", "#....", ".###."}},
    {'d', 0, {"....#", "....#", ".####", "#...#", "#...#", "#...#", ".####"}},
    {'e', 2, {".###.", "#...#", "#####", "#....", ".###."}},
    {'f', 0, {"..##", ".#..", "####", ".#..", ".#..", ".#..", ".#.."}},
    {'g', 2, {".####", "#...#", "#...#", "#...#", ".####", "....#", "###.."}},
    {'h', 0, {"#....", "#....", "####.", "#...#", "#...#", "#...#", "#...#"}},
    {'i', 0, {".#", "..", "##", ".#", ".#", ".#", ".#"}},
    {'j', 0, {"..#", "...", "..#", "..#", "..#", "..#", "..#", "#.#", ".#."}},
    {'k', 0, {"#...", "#...", "#..#", "#.#.", "##..", "#.#.", "#..#"}},
    {'l', 0, {"##", ".#", ".#", ".#", ".#", ".#", ".#"}},
    {'m', 2, {"##.#.", "#.#.#", "#.#.#", "#.#.#", "#.#.#"}},
    {'n', 2, {"#.##.", "##..#", "#...#", "#...#", "#...#"}},
    {'o', 2, {".###.", "#...#", "#...#", "#...#", ".###."}},
    {'p', 2, {"#.##.", "##..#", "#...#", "##..#", "#.##.", "#....", "#...."}},
    {'q', 2, {".##.#", "#..##", "#...#", "#..##", ".##.#", "....#", "....#"}},
    {'r', 2, {"#.##.", "##..#", "#....", "#....", "#...."}},
    {'s', 2, {".####", "#....", ".###.", "....#", "####."}},
    {'t', 0, {".#..", ".#..", "####", ".#..", ".#..", ".#..", "..##"}},
    {'u', 2, {"#...#", "#...#", "#...#", "#..##", ".##.#"}},
    {'v', 2, {"#...#", "#...#", "#...#", ".#.#.", "..#.."}},
    {'w', 2, {"#...#", "#...#", "#.#.#", "#.#.#", ".#.#."}},
    {'x', 2, {"#...#", ".#.#.", "..#..", ".#.#.", "#...#"}},
    {'y', 2, {"#...#", "#...#", "#...#", ".####", "....#", "....#", ".###."}},
    {'z', 2, {"#####", "...#.", "..#..", ".#...", "#####"}},

    {'%', 0, {"##..#", "##..#", "...#.", "..#..", ".#...", "#..##", "#..##"}},
    {'.', 5, {"##", "##"}},
    {'-', 3, {"###"}},
    {'+', 1, {"..#..", "..#..", "#####", "..#..", "..#.."}},
    {'(', 0, {"..#", ".#.", "#..", "#..", "#..", ".#.", "..#"}},
    {')', 0, {"#..", ".#.", "..#", "..#", "..#", ".#.", "#.."}},
    {'/', 0, {"....#", "....#", "...#.", "..#..", ".#...", "#....", "#...."}},
};

std::vector<Glyph> build() {
  std::vector<Glyph> out;
  out.reserve(std::size(kSources));
  for (const GlyphSource& src : kSources) {
    std::vector<std::string_view> rows;
    for (const char* r : src.rows)
      if (r) rows.emplace_back(r);
    const int w = static_cast<int>(rows.front().size());
    // trim empty columns/rows
    int x0 = w, x1 = -1, y0 = static_cast<int>(rows.size()), y1 = -1;
    for (int y = 0; y < static_cast<int>(rows.size()); ++y)
      for (int x = 0; x < w; ++x)
        if (rows[y][x] == '#') {
          x0 = std::min(x0, x);
          x1 = std::max(x1, x);
          y0 = std::min(y0, y);
          y1 = std::max(y1, y);
        }
    Glyph g;
    g.ch = src.ch;
    g.width = x1 - x0 + 1;
    g.height = y1 - y0 + 1;
    g.top = src.top + y0;
    g.bits.resize(static_cast<std::size_t>(g.width) * g.height);
    for (int y = 0; y < g.height; ++y)
      for (int x = 0; x < g.width; ++x)
        g.bits[static_cast<std::size_t>(y) * g.width + x] = rows[y0 + y][x0 + x] == '#';
    out.push_back(std::move(g));
  }
  return out;
}

const std::vector<Glyph>& table() {
  static const std::vector<Glyph> t = build();
  return t;
}

}  // namespace

std::span<const Glyph> glyphs() { return table(); }

const Glyph* find(char ch) {
  for (const Glyph& g : table())
    if (g.ch == ch) return &g;
  return nullptr;
}

bool supported(std::string_view text) {
  return std::all_of(text.begin(), text.end(), [](char c) { return c == ' ' || find(c) != nullptr; });
}

std::string_view alphabet() {
  static const std::string chars = [] {
    std::string s;
    for (const Glyph& g : table()) s.push_back(g.ch);
    return s;
  }();
  return chars;
}

namespace {

// Pen positions (font units) of each glyph; spaces only advance.
struct Layout {
  struct Placed {
    const Glyph* glyph;
    int x;
  };
  std::vector<Placed> placed;
  int width = 0;
  int top = kCellRows;
  int bottom = 0;
};

Layout layout(std::string_view text) {
  Layout l;
  int pen = 0;
  bool first = true;
  for (char c : text) {
    if (c == ' ') {
      pen += kSpaceAdvance;
      continue;
    }
    const Glyph* g = find(c);
    if (!g) throw InvalidArgument(std::string("font: unsupported character '") + c + "'");
    if (!first) pen += kGlyphGap;
    l.placed.push_back({g, pen});
    pen += g->width;
    l.width = pen;
    l.top = std::min(l.top, g->top);
    l.bottom = std::max(l.bottom, g->top + g->height);
    first = false;
  }
  if (l.placed.empty()) l.top = 0;
  return l;
}

}  // namespace

TextExtent measure(std::string_view text, int scale) {
  const Layout l = layout(text);
  return {l.width * scale, (l.bottom - l.top) * scale, l.top * scale};
}

BinaryImage rasterize(std::string_view text, int scale) {
  const Layout l = layout(text);
  BinaryImage out = BinaryImage::Constant((l.bottom - l.top) * scale, l.width * scale, false);
  for (const auto& p : l.placed) {
    const Glyph& g = *p.glyph;
    for (int y = 0; y < g.height; ++y)
      for (int x = 0; x < g.width; ++x)
        if (g.at(x, y))
          out.block((g.top - l.top + y) * scale, (p.x + x) * scale, scale, scale).setConstant(true);
  }
  return out;
}

}  // namespace chartex::font
