#include "flowparts/mean_shift.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "flowparts/errors.hpp"

namespace flowparts {

void MeanShiftParams::validate() const {
  if (!(spatial_bandwidth > 0.0)) throw ContractError("spatial_bandwidth must be > 0");
  if (!(range_bandwidth > 0.0)) throw ContractError("range_bandwidth must be > 0");
  if (max_iterations < 1) throw ContractError("max_iterations must be >= 1");
  if (!(convergence_tol > 0.0)) throw ContractError("convergence_tol must be > 0");
  if (!(merge_radius > 0.0)) throw ContractError("merge_radius must be > 0");
  if (min_blob_size < 1) throw ContractError("min_blob_size must be >= 1");
}

namespace {

using Feature = std::array<double, 4>;

// Spatial hash over the normalized x/y coordinates with unit cell size. A
// unit-ball query only has to look at the 3x3 cell neighbourhood.
class FeatureGrid {
 public:
  explicit FeatureGrid(const std::vector<Feature>& features) : features_(features) {
    cells_.reserve(features.size());
    for (std::size_t i = 0; i < features.size(); ++i)
      cells_[key(features[i][0], features[i][1])].push_back(static_cast<int>(i));
  }

  // Indices of all features within the closed unit ball around z, ascending.
  void query(const Feature& z, std::vector<int>& out) const {
    out.clear();
    const long long cx = cell(z[0]);
    const long long cy = cell(z[1]);
    for (long long gy = cy - 1; gy <= cy + 1; ++gy) {
      for (long long gx = cx - 1; gx <= cx + 1; ++gx) {
        auto it = cells_.find(pack(gx, gy));
        if (it == cells_.end()) continue;
        for (int i : it->second)
          if (dist2(features_[static_cast<std::size_t>(i)], z) <= 1.0) out.push_back(i);
      }
    }
    // Restore raster order so the mean is summed exactly like a full scan.
    std::sort(out.begin(), out.end());
  }

  static double dist2(const Feature& a, const Feature& b) {
    double s = 0.0;
    for (int k = 0; k < 4; ++k) {
      const double d = a[k] - b[k];
      s += d * d;
    }
    return s;
  }

 private:
  static long long cell(double v) { return static_cast<long long>(std::floor(v)); }
  static std::uint64_t pack(long long gx, long long gy) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(gx)) << 32) |
           static_cast<std::uint64_t>(static_cast<std::uint32_t>(gy));
  }
  static std::uint64_t key(double x, double y) { return pack(cell(x), cell(y)); }

  const std::vector<Feature>& features_;
  std::unordered_map<std::uint64_t, std::vector<int>> cells_;
};

}  // namespace

ModeField mean_shift_modes(const FlowField& field, const Grid<std::uint8_t>& mask,
                           const MeanShiftParams& params) {
  params.validate();
  if (mask.width != field.width || mask.height != field.height)
    throw ContractError("mask and flow field shapes differ");

  ModeField out;
  out.width = field.width;
  out.height = field.height;
  out.spatial_bandwidth = params.spatial_bandwidth;
  out.range_bandwidth = params.range_bandwidth;

  std::vector<Feature> features;
  for (int y = 0; y < field.height; ++y) {
    for (int x = 0; x < field.width; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * field.width + x;
      if (!mask.v[i]) continue;
      out.pixels.push_back(static_cast<int>(i));
      features.push_back({x / params.spatial_bandwidth, y / params.spatial_bandwidth,
                          field.uv[i * 2] / params.range_bandwidth,
                          field.uv[i * 2 + 1] / params.range_bandwidth});
    }
  }
  if (features.empty()) throw ContractError("mean shift needs a non-empty mask");

  FeatureGrid grid(features);
  std::vector<int> ball;
  out.modes.resize(features.size());
  for (std::size_t i = 0; i < features.size(); ++i) {
    Feature z = features[i];
    for (int iter = 0; iter < params.max_iterations; ++iter) {
      grid.query(z, ball);
      Feature sum{0.0, 0.0, 0.0, 0.0};
      for (int j : ball)
        for (int k = 0; k < 4; ++k) sum[k] += features[static_cast<std::size_t>(j)][k];
      const double n = static_cast<double>(ball.size());
      Feature m{sum[0] / n, sum[1] / n, sum[2] / n, sum[3] / n};
      const double step = std::sqrt(FeatureGrid::dist2(m, z));
      z = m;
      if (step < params.convergence_tol) break;
    }
    out.modes[i] = z;
  }
  return out;
}

}  // namespace flowparts
