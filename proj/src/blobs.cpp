#include "flowparts/blobs.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "flowparts/errors.hpp"
#include "flowparts/io_util.hpp"
#include "text_parse.hpp"

namespace flowparts {

namespace {

// Plain union-find; components are independent of union order.
class DisjointSet {
 public:
  explicit DisjointSet(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  std::size_t find(std::size_t i) {
    while (parent_[i] != i) {
      parent_[i] = parent_[parent_[i]];
      i = parent_[i];
    }
    return i;
  }
  void unite(std::size_t a, std::size_t b) { parent_[find(a)] = find(b); }

 private:
  std::vector<std::size_t> parent_;
};

double mode_dist2(const std::array<double, 4>& a, const std::array<double, 4>& b) {
  double s = 0.0;
  for (int k = 0; k < 4; ++k) {
    const double d = a[k] - b[k];
    s += d * d;
  }
  return s;
}

}  // namespace

std::vector<Blob> extract_blobs(const ModeField& modes, const MeanShiftParams& params) {
  params.validate();
  const std::size_t n = modes.pixels.size();
  std::vector<Blob> blobs;
  if (n == 0) return blobs;

  // Single-linkage union of modes within merge_radius. A 4-D distance bound
  // also bounds the spatial part, so binning the modes' normalized x/y at
  // merge_radius cell size keeps candidates in the 3x3 neighbourhood.
  const double r = params.merge_radius;
  const double r2 = r * r;
  DisjointSet sets(n);
  std::unordered_map<std::uint64_t, std::vector<std::size_t>> cells;
  auto cell_of = [&](double v) { return static_cast<long long>(std::floor(v / r)); };
  auto pack = [](long long gx, long long gy) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(gx)) << 32) |
           static_cast<std::uint64_t>(static_cast<std::uint32_t>(gy));
  };
  for (std::size_t i = 0; i < n; ++i)
    cells[pack(cell_of(modes.modes[i][0]), cell_of(modes.modes[i][1]))].push_back(i);
  for (std::size_t i = 0; i < n; ++i) {
    const long long cx = cell_of(modes.modes[i][0]);
    const long long cy = cell_of(modes.modes[i][1]);
    for (long long gy = cy - 1; gy <= cy + 1; ++gy) {
      for (long long gx = cx - 1; gx <= cx + 1; ++gx) {
        auto it = cells.find(pack(gx, gy));
        if (it == cells.end()) continue;
        for (std::size_t j : it->second)
          if (j > i && mode_dist2(modes.modes[i], modes.modes[j]) <= r2) sets.unite(i, j);
      }
    }
  }

  // Cluster id per raster pixel, plus pixel -> mode index for the blob mean.
  std::unordered_map<int, std::size_t> mode_at;
  mode_at.reserve(n);
  for (std::size_t i = 0; i < n; ++i) mode_at[modes.pixels[i]] = i;

  // 4-connected components within each cluster, scanned in raster order so
  // discovery order equals the topmost-leftmost rule.
  std::vector<char> visited(n, 0);
  std::vector<std::size_t> stack;
  for (std::size_t seed = 0; seed < n; ++seed) {
    if (visited[seed]) continue;
    const std::size_t cluster = sets.find(seed);
    std::vector<std::size_t> member_modes;
    stack.assign(1, seed);
    visited[seed] = 1;
    while (!stack.empty()) {
      const std::size_t i = stack.back();
      stack.pop_back();
      member_modes.push_back(i);
      const int p = modes.pixels[i];
      const int x = p % modes.width;
      const int y = p / modes.width;
      const int neighbors[4] = {p - 1, p + 1, p - modes.width, p + modes.width};
      const bool ok[4] = {x > 0, x + 1 < modes.width, y > 0, y + 1 < modes.height};
      for (int k = 0; k < 4; ++k) {
        if (!ok[k]) continue;
        auto it = mode_at.find(neighbors[k]);
        if (it == mode_at.end() || visited[it->second]) continue;
        if (sets.find(it->second) != cluster) continue;
        visited[it->second] = 1;
        stack.push_back(it->second);
      }
    }
    if (member_modes.size() < static_cast<std::size_t>(params.min_blob_size)) continue;

    std::sort(member_modes.begin(), member_modes.end());  // raster order
    Blob blob;
    blob.id = static_cast<int>(blobs.size());
    blob.pixels.reserve(member_modes.size());
    std::array<double, 4> sum{0.0, 0.0, 0.0, 0.0};
    for (std::size_t i : member_modes) {
      const int p = modes.pixels[i];
      blob.pixels.push_back({p % modes.width, p / modes.width});
      for (int k = 0; k < 4; ++k) sum[k] += modes.modes[i][k];
    }
    const double cnt = static_cast<double>(member_modes.size());
    blob.mode = {sum[0] / cnt * modes.spatial_bandwidth, sum[1] / cnt * modes.spatial_bandwidth,
                 sum[2] / cnt * modes.range_bandwidth, sum[3] / cnt * modes.range_bandwidth};
    blobs.push_back(std::move(blob));
  }
  return blobs;
}

void write_blobs(const std::vector<Blob>& blobs, const std::string& path) {
  std::string out;
  for (const Blob& b : blobs) {
    out += std::to_string(b.id) + " " + std::to_string(b.size());
    for (double v : b.mode) {
      out += " ";
      detail::append_double(out, v);
    }
    out += "\n";
    // Horizontal runs over the raster-sorted pixel list.
    std::size_t i = 0;
    while (i < b.pixels.size()) {
      std::size_t j = i + 1;
      while (j < b.pixels.size() && b.pixels[j].y == b.pixels[i].y &&
             b.pixels[j].x == b.pixels[j - 1].x + 1)
        ++j;
      out += std::to_string(b.pixels[i].y) + " " + std::to_string(b.pixels[i].x) + " " +
             std::to_string(j - i) + "\n";
      i = j;
    }
  }
  atomic_write_file(path, out);
}

std::vector<Blob> read_blobs(const std::string& path) {
  std::vector<Blob> blobs;
  int remaining = 0;  // pixels still expected for the open blob
  detail::for_each_line(path, [&](const std::vector<std::string>& toks, int line_no) {
    const std::string where = path + ":" + std::to_string(line_no);
    if (remaining == 0) {
      if (toks.size() != 6) throw FormatError(where + ": expected blob header with 6 fields");
      Blob b;
      b.id = detail::parse_int(toks[0], path, line_no);
      remaining = detail::parse_int(toks[1], path, line_no);
      if (remaining < 1) throw ValidationError(where + ": non-positive blob size");
      for (int k = 0; k < 4; ++k) b.mode[k] = detail::parse_double(toks[2 + k], path, line_no);
      blobs.push_back(std::move(b));
      return;
    }
    if (toks.size() != 3) throw FormatError(where + ": expected pixel run with 3 fields");
    const int y = detail::parse_int(toks[0], path, line_no);
    const int x = detail::parse_int(toks[1], path, line_no);
    const int len = detail::parse_int(toks[2], path, line_no);
    if (y < 0 || x < 0 || len < 1) throw ValidationError(where + ": bad pixel run");
    if (len > remaining) throw ValidationError(where + ": run exceeds blob size");
    for (int k = 0; k < len; ++k) blobs.back().pixels.push_back({x + k, y});
    remaining -= len;
  });
  if (remaining != 0) throw ValidationError(path + ": truncated pixel list");
  return blobs;
}

}  // namespace flowparts
