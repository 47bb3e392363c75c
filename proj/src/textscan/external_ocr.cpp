#include "chartex/png_io.hpp"
#include "chartex/textscan.hpp"

#include <unistd.h>

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <sys/wait.h>

namespace chartex::textscan {

namespace {

std::vector<std::string_view> split(std::string_view s, char sep, std::size_t max_parts) {
  std::vector<std::string_view> parts;
  while (parts.size() + 1 < max_parts) {
    const auto pos = s.find(sep);
    if (pos == std::string_view::npos) break;
    parts.push_back(s.substr(0, pos));
    s.remove_prefix(pos + 1);
  }
  parts.push_back(s);
  return parts;
}

template <typename T>
T parse_number(std::string_view field, std::string_view line) {
  T v{};
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size())
    throw OcrEngineError("external OCR: malformed field '" + std::string(field) + "' in line '" +
                         std::string(line) + "'");
  return v;
}

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'')
      out += "'\\''";
    else
      out.push_back(c);
  }
  return out + "'";
}

// Temporary PNG removed when the scope ends.
struct TempPng {
  std::filesystem::path path;
  explicit TempPng(const GrayImage& img) {
    std::string tmpl = (std::filesystem::temp_directory_path() / "chartex-ocr-XXXXXX.png").string();
    const int fd = mkstemps(tmpl.data(), 4);
    if (fd < 0) throw OcrEngineError("external OCR: cannot create temporary file");
    close(fd);
    path = tmpl;
    io::write_png(path, img);
  }
  ~TempPng() {
    std::error_code ec;
    std::filesystem::remove(path, ec);
  }
};

}  // namespace

std::vector<ExternalOcr::Line> ExternalOcr::parse_output(std::string_view out) {
  std::vector<Line> lines;
  while (!out.empty()) {
    const auto nl = out.find('\n');
    std::string_view line = out.substr(0, nl);
    out = nl == std::string_view::npos ? std::string_view{} : out.substr(nl + 1);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
    const auto f = split(line, '\t', 6);
    if (f.size() != 6) throw OcrEngineError("external OCR: expected 6 tab-separated fields: '" + std::string(line) + "'");
    Line l;
    l.box = {parse_number<int>(f[0], line), parse_number<int>(f[1], line), parse_number<int>(f[2], line),
             parse_number<int>(f[3], line)};
    l.confidence = parse_number<double>(f[4], line);
    if (!(l.confidence >= 0.0 && l.confidence <= 1.0))
      throw OcrEngineError("external OCR: confidence outside [0,1] in line '" + std::string(line) + "'");
    l.text = std::string(f[5]);
    lines.push_back(std::move(l));
  }
  return lines;
}

OcrResult ExternalOcr::recognize(const GrayImage& region) const {
  if (region.size() == 0) return {};
  TempPng tmp(region);
  const std::string cmd = command_ + " " + shell_quote(tmp.path.string());
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) throw OcrEngineError("external OCR: cannot launch '" + command_ + "'");
  std::string output;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) output.append(buf.data(), n);
  const int status = pclose(pipe);
  if (status == -1 || !WIFEXITED(status) || WEXITSTATUS(status) != 0)
    throw OcrEngineError("external OCR: '" + command_ + "' failed with status " + std::to_string(status) +
                         (output.empty() ? std::string() : "; output: " + output.substr(0, 200)));

  std::vector<Line> lines = parse_output(output);
  if (lines.empty()) return {};
  std::stable_sort(lines.begin(), lines.end(), [](const Line& a, const Line& b) {
    return a.box.y != b.box.y ? a.box.y < b.box.y : a.box.x < b.box.x;
  });
  OcrResult r;
  r.confidence = 1.0;
  for (const Line& l : lines) {
    if (!r.text.empty()) r.text.push_back(' ');
    r.text += l.text;
    r.confidence = std::min(r.confidence, l.confidence);
  }
  return r;
}

}  // namespace chartex::textscan
