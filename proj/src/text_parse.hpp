#pragma once

#include <charconv>
#include <sstream>
#include <string>
#include <vector>

#include "flowparts/errors.hpp"
#include "flowparts/io_util.hpp"

// Shared helpers for the line-oriented text formats (detections, keypoints,
// blobs, manifests, CSV reports). Internal to the library sources.
namespace flowparts::detail {

inline std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream ss(line);
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

// Full-token numeric parses; trailing garbage is a parse error.
inline int parse_int(const std::string& tok, const std::string& path, int line_no) {
  int value = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc{} || ptr != tok.data() + tok.size())
    throw FormatError(path + ":" + std::to_string(line_no) + ": non-numeric field '" + tok + "'");
  return value;
}

inline double parse_double(const std::string& tok, const std::string& path, int line_no) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc{} || ptr != tok.data() + tok.size())
    throw FormatError(path + ":" + std::to_string(line_no) + ": non-numeric field '" + tok + "'");
  return value;
}

// Shortest decimal form that parses back to the same double.
inline void append_double(std::string& out, double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, res.ptr);
}

// Calls fn(tokens, line_no) for every non-empty, non-comment line.
template <typename Fn>
void for_each_line(const std::string& path, Fn&& fn) {
  const std::string bytes = read_file(path);
  std::istringstream ss(bytes);
  std::string line;
  int line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto toks = split_ws(line);
    if (toks.empty() || toks[0][0] == '#') continue;
    fn(toks, line_no);
  }
}

}  // namespace flowparts::detail
