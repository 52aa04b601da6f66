#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "flowparts/types.hpp"

namespace flowparts {

struct MeanShiftParams {
  double spatial_bandwidth = 8.0;  // pixels
  double range_bandwidth = 1.5;    // flow units
  int max_iterations = 50;
  double convergence_tol = 1e-3;   // step norm in normalized feature space
  double merge_radius = 0.5;       // mode-merging distance, normalized space
  int min_blob_size = 25;          // pixels

  void validate() const;
};

// Converged modes for the masked pixels, kept in bandwidth-normalized
// (x/hs, y/hs, u/hr, v/hr) coordinates. pixels[i] is the raster index the
// i-th mode belongs to, ascending.
struct ModeField {
  int width = 0;
  int height = 0;
  double spatial_bandwidth = 0.0;
  double range_bandwidth = 0.0;
  std::vector<int> pixels;
  std::vector<std::array<double, 4>> modes;

  // Mode in (x, y, u, v) units.
  std::array<double, 4> denormalized(std::size_t i) const {
    const auto& m = modes[i];
    return {m[0] * spatial_bandwidth, m[1] * spatial_bandwidth,
            m[2] * range_bandwidth, m[3] * range_bandwidth};
  }
};

// Flat-kernel mean shift over the masked pixels' joint spatial-flow features.
// Each masked pixel seeds at its own feature and moves to the mean of the
// unit ball around it (closed ball, normalized space) until the step norm
// drops below convergence_tol or max_iterations is hit. Candidate pixels are
// found through a spatial grid but always accumulated in ascending raster
// order, so the result is identical to a full scan. Empty mask -> ContractError.
ModeField mean_shift_modes(const FlowField& field, const Grid<std::uint8_t>& mask,
                           const MeanShiftParams& params);

}  // namespace flowparts
