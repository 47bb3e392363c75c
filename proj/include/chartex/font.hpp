#pragma once

#include "chartex/image.hpp"

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace chartex::font {

/// One glyph of the shipped bitmap font, stored trimmed to its ink.
/// Cell rows 0..6 sit above the baseline (row 6 is the baseline row), rows 7..8 are descenders.
struct Glyph {
  char ch = 0;
  int width = 0;       ///< ink columns
  int height = 0;      ///< ink rows
  int top = 0;         ///< first ink row within the 9-row cell
  std::vector<bool> bits;  ///< row-major width x height

  bool at(int x, int y) const { return bits[static_cast<std::size_t>(y) * width + x]; }
};

inline constexpr int kCellRows = 9;
inline constexpr int kCapRows = 7;
/// Horizontal gap between consecutive glyphs, in font units.
inline constexpr int kGlyphGap = 1;
/// Extra advance of a space character, in font units (on top of the glyph gap).
inline constexpr int kSpaceAdvance = 2;

std::span<const Glyph> glyphs();

/// nullptr for characters outside the font (space included).
const Glyph* find(char ch);

/// Characters renderable by the font (space is a separator, not a glyph).
bool supported(std::string_view text);
std::string_view alphabet();

struct TextExtent {
  int width = 0;   ///< pixels
  int height = 0;  ///< pixels, from the highest ink row to the lowest
  int top = 0;     ///< first ink row offset from the cell top, in pixels
};

/// Ink extent of a string rendered at the given integer scale.
TextExtent measure(std::string_view text, int scale);

/// Ink mask of a string: exactly TextExtent.width x TextExtent.height, true = ink.
BinaryImage rasterize(std::string_view text, int scale);

}  // namespace chartex::font
