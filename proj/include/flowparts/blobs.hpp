#pragma once

#include <array>
#include <string>
#include <vector>

#include "flowparts/mean_shift.hpp"
#include "flowparts/types.hpp"

namespace flowparts {

struct PixelXY {
  int x = 0;
  int y = 0;
  bool operator==(const PixelXY&) const = default;
};

// Connected group of moving pixels sharing a mean-shift mode.
// pixels are sorted in raster order; mode is the member-mean converged
// feature in (x, y, u, v) units.
struct Blob {
  int id = 0;
  std::vector<PixelXY> pixels;
  std::array<double, 4> mode{};

  int size() const { return static_cast<int>(pixels.size()); }
};

// Single-linkage merge of modes within merge_radius (normalized feature
// distance, closed), then a 4-connected split of each cluster; components
// smaller than min_blob_size are dropped. Ids follow the raster order of each
// blob's topmost-leftmost pixel, so they depend on geometry only.
std::vector<Blob> extract_blobs(const ModeField& modes, const MeanShiftParams& params);

// Line-oriented text: per blob a header `id size xbar ybar ubar vbar`
// followed by one `y x len` line per horizontal pixel run.
void write_blobs(const std::vector<Blob>& blobs, const std::string& path);
std::vector<Blob> read_blobs(const std::string& path);

}  // namespace flowparts
