#include "flowparts/pgm_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <string>

#include "flowparts/errors.hpp"
#include "flowparts/io_util.hpp"

namespace flowparts {

namespace {

// Skips PNM whitespace and '#' comment lines, then parses one decimal token.
struct PnmCursor {
  const std::string& bytes;
  std::size_t pos = 0;
  const std::string& path;

  int next_int() {
    for (;;) {
      while (pos < bytes.size() && std::isspace(static_cast<unsigned char>(bytes[pos]))) ++pos;
      if (pos < bytes.size() && bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
        continue;
      }
      break;
    }
    if (pos >= bytes.size() || !std::isdigit(static_cast<unsigned char>(bytes[pos])))
      throw FormatError("malformed PGM header: " + path);
    long value = 0;
    while (pos < bytes.size() && std::isdigit(static_cast<unsigned char>(bytes[pos]))) {
      value = value * 10 + (bytes[pos] - '0');
      if (value > 1'000'000'000L) throw FormatError("malformed PGM header: " + path);
      ++pos;
    }
    return static_cast<int>(value);
  }
};

struct RawPgm {
  int width = 0;
  int height = 0;
  const unsigned char* data = nullptr;  // points into the backing string
};

RawPgm parse_p5(const std::string& bytes, const std::string& path) {
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5')
    throw FormatError("not a binary PGM (P5): " + path);
  PnmCursor cur{bytes, 2, path};
  const int w = cur.next_int();
  const int h = cur.next_int();
  const int maxval = cur.next_int();
  if (w <= 0 || h <= 0) throw FormatError("bad PGM dimensions: " + path);
  if (maxval != 255) throw FormatError("unsupported PGM maxval (want 255): " + path);
  if (cur.pos >= bytes.size() || !std::isspace(static_cast<unsigned char>(bytes[cur.pos])))
    throw FormatError("malformed PGM header: " + path);
  ++cur.pos;  // single whitespace byte before the raster
  const std::size_t need = static_cast<std::size_t>(w) * h;
  if (bytes.size() - cur.pos < need) throw FormatError("truncated PGM raster: " + path);
  return RawPgm{w, h, reinterpret_cast<const unsigned char*>(bytes.data() + cur.pos)};
}

std::string encode_p5(int w, int h, const unsigned char* data) {
  char header[64];
  const int n = std::snprintf(header, sizeof(header), "P5\n%d %d\n255\n", w, h);
  std::string out(header, static_cast<std::size_t>(n));
  out.append(reinterpret_cast<const char*>(data), static_cast<std::size_t>(w) * h);
  return out;
}

}  // namespace

Frame read_pgm(const std::string& path) {
  const std::string bytes = read_file(path);
  const RawPgm raw = parse_p5(bytes, path);
  Frame frame(raw.width, raw.height);
  const std::size_t n = frame.luma.size();
  for (std::size_t i = 0; i < n; ++i) frame.luma.v[i] = static_cast<float>(raw.data[i]) / 255.0f;
  return frame;
}

void write_pgm(const Frame& frame, const std::string& path) {
  std::vector<unsigned char> raster(frame.luma.size());
  for (std::size_t i = 0; i < raster.size(); ++i) {
    const float l = std::clamp(frame.luma.v[i], 0.0f, 1.0f);
    raster[i] = static_cast<unsigned char>(std::lround(l * 255.0f));
  }
  atomic_write_file(path, encode_p5(frame.width(), frame.height(), raster.data()));
}

std::vector<FrameFile> list_indexed_files(const std::string& dir_path, const std::string& stem,
                                          const std::string& ext) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir_path)) throw IoError("not a directory: " + dir_path);
  const std::string prefix = stem + "_";
  const std::string suffix = "." + ext;
  std::map<int, std::string> by_index;
  for (const auto& entry : fs::directory_iterator(dir_path)) {
    if (!entry.is_regular_file()) continue;
    const std::string name = entry.path().filename().string();
    if (name.size() < prefix.size() + 6 + suffix.size()) continue;
    if (name.rfind(prefix, 0) != 0) continue;
    if (name.substr(name.size() - suffix.size()) != suffix) continue;
    const std::string digits = name.substr(prefix.size(), name.size() - prefix.size() - suffix.size());
    if (digits.size() < 6 ||
        !std::all_of(digits.begin(), digits.end(),
                     [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
      continue;
    const int index = std::stoi(digits);
    auto [it, inserted] = by_index.emplace(index, entry.path().string());
    if (!inserted)
      throw ValidationError("duplicate index " + std::to_string(index) + " in " + dir_path);
  }
  std::vector<FrameFile> files;
  files.reserve(by_index.size());
  for (const auto& [index, path] : by_index) files.push_back(FrameFile{index, path});
  return files;
}

std::vector<FrameFile> list_frame_files(const std::string& dir_path) {
  return list_indexed_files(dir_path, "frame", "pgm");
}

std::vector<Frame> load_frame_sequence(const std::string& dir_path) {
  std::vector<Frame> frames;
  for (const FrameFile& ff : list_frame_files(dir_path)) {
    Frame f = read_pgm(ff.path);
    f.index = ff.index;
    frames.push_back(std::move(f));
  }
  return frames;
}

PartLabelMap read_label_map(const std::string& path, int parts) {
  if (parts < 0 || parts > 255) throw ContractError("parts out of range");
  const std::string bytes = read_file(path);
  const RawPgm raw = parse_p5(bytes, path);
  PartLabelMap map(raw.width, raw.height, parts);
  const std::size_t n = map.labels.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (raw.data[i] > parts)
      throw ValidationError("label value " + std::to_string(raw.data[i]) + " exceeds part count " +
                            std::to_string(parts) + ": " + path);
    map.labels[i] = raw.data[i];
  }
  return map;
}

void write_label_map(const PartLabelMap& map, const std::string& path) {
  if (map.parts < 0 || map.parts > 255) throw ContractError("parts out of range");
  for (std::uint8_t l : map.labels) {
    if (l > map.parts)
      throw ValidationError("label value exceeds part count on write: " + path);
  }
  atomic_write_file(path, encode_p5(map.width, map.height, map.labels.data()));
}

}  // namespace flowparts
