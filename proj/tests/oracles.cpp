#include "oracles.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <stdexcept>

namespace oracle {

using flowparts::Blob;
using flowparts::FlowField;
using flowparts::Grid;
using flowparts::MeanShiftParams;
using flowparts::ModeField;
using flowparts::PixelXY;
using flowparts::PolyExpansion;

namespace {

// Plain Gauss-Jordan solve of a 6x6 system with partial pivoting. Keeps the
// reference free of the library's Eigen-based route.
std::array<double, 6> solve6(std::array<std::array<double, 6>, 6> m, std::array<double, 6> rhs) {
  for (int col = 0; col < 6; ++col) {
    int pivot = col;
    for (int row = col + 1; row < 6; ++row)
      if (std::abs(m[row][col]) > std::abs(m[pivot][col])) pivot = row;
    if (m[pivot][col] == 0.0) throw std::runtime_error("singular normal matrix");
    std::swap(m[col], m[pivot]);
    std::swap(rhs[col], rhs[pivot]);
    const double inv = 1.0 / m[col][col];
    for (int j = 0; j < 6; ++j) m[col][j] *= inv;
    rhs[col] *= inv;
    for (int row = 0; row < 6; ++row) {
      if (row == col || m[row][col] == 0.0) continue;
      const double f = m[row][col];
      for (int j = 0; j < 6; ++j) m[row][j] -= f * m[col][j];
      rhs[row] -= f * rhs[col];
    }
  }
  return rhs;
}

double feature_dist2(const std::array<double, 4>& a, const std::array<double, 4>& b) {
  double s = 0.0;
  for (int k = 0; k < 4; ++k) {
    const double d = a[k] - b[k];
    s += d * d;
  }
  return s;
}

}  // namespace

PolyExpansion poly_expansion_reference(const Grid<float>& image, int poly_n, double poly_sigma) {
  const int half = poly_n / 2;
  std::vector<double> g(static_cast<std::size_t>(poly_n));
  for (int t = -half; t <= half; ++t)
    g[static_cast<std::size_t>(t + half)] =
        std::exp(-(static_cast<double>(t) * t) / (2.0 * poly_sigma * poly_sigma));

  PolyExpansion out(image.width, image.height);
  for (int y = 0; y < image.height; ++y) {
    for (int x = 0; x < image.width; ++x) {
      std::array<std::array<double, 6>, 6> m{};
      std::array<double, 6> rhs{};
      for (int dy = -half; dy <= half; ++dy) {
        for (int dx = -half; dx <= half; ++dx) {
          const double w = g[static_cast<std::size_t>(dx + half)] * g[static_cast<std::size_t>(dy + half)];
          const double phi[6] = {1.0,
                                 static_cast<double>(dx),
                                 static_cast<double>(dy),
                                 static_cast<double>(dx) * dx,
                                 static_cast<double>(dy) * dy,
                                 static_cast<double>(dx) * dy};
          const double f = image.at_clamped(x + dx, y + dy);
          for (int i = 0; i < 6; ++i) {
            rhs[static_cast<std::size_t>(i)] += w * phi[i] * f;
            for (int j = 0; j < 6; ++j)
              m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] += w * phi[i] * phi[j];
          }
        }
      }
      const auto r = solve6(m, rhs);
      out.c.at(x, y) = r[0];
      out.b1.at(x, y) = r[1];
      out.b2.at(x, y) = r[2];
      out.a11.at(x, y) = r[3];
      out.a22.at(x, y) = r[4];
      out.a12.at(x, y) = r[5] / 2.0;
    }
  }
  return out;
}

ModeField mean_shift_reference(const FlowField& field, const Grid<std::uint8_t>& mask,
                               const MeanShiftParams& params) {
  ModeField out;
  out.width = field.width;
  out.height = field.height;
  out.spatial_bandwidth = params.spatial_bandwidth;
  out.range_bandwidth = params.range_bandwidth;

  std::vector<std::array<double, 4>> features;
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

  out.modes.resize(features.size());
  for (std::size_t i = 0; i < features.size(); ++i) {
    std::array<double, 4> z = features[i];
    for (int iter = 0; iter < params.max_iterations; ++iter) {
      std::array<double, 4> sum{};
      std::size_t count = 0;
      for (std::size_t j = 0; j < features.size(); ++j) {
        if (feature_dist2(features[j], z) > 1.0) continue;
        for (int k = 0; k < 4; ++k) sum[k] += features[j][k];
        ++count;
      }
      const double n = static_cast<double>(count);
      std::array<double, 4> m{sum[0] / n, sum[1] / n, sum[2] / n, sum[3] / n};
      const double step = std::sqrt(feature_dist2(m, z));
      z = m;
      if (step < params.convergence_tol) break;
    }
    out.modes[i] = z;
  }
  return out;
}

std::vector<Blob> extract_blobs_reference(const ModeField& modes, const MeanShiftParams& params) {
  const std::size_t n = modes.pixels.size();
  std::vector<Blob> blobs;
  if (n == 0) return blobs;

  // All-pairs single linkage.
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  const double r2 = params.merge_radius * params.merge_radius;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (feature_dist2(modes.modes[i], modes.modes[j]) <= r2) parent[find(i)] = find(j);

  // Raster-scan 4-connected split within clusters.
  std::vector<std::size_t> mode_at(static_cast<std::size_t>(modes.width) * modes.height, n);
  for (std::size_t i = 0; i < n; ++i) mode_at[static_cast<std::size_t>(modes.pixels[i])] = i;
  std::vector<char> visited(n, 0);
  for (std::size_t seed = 0; seed < n; ++seed) {
    if (visited[seed]) continue;
    const std::size_t cluster = find(seed);
    std::vector<std::size_t> members;
    std::vector<std::size_t> stack{seed};
    visited[seed] = 1;
    while (!stack.empty()) {
      const std::size_t i = stack.back();
      stack.pop_back();
      members.push_back(i);
      const int p = modes.pixels[i];
      const int x = p % modes.width;
      const int y = p / modes.width;
      const int nb[4] = {p - 1, p + 1, p - modes.width, p + modes.width};
      const bool ok[4] = {x > 0, x + 1 < modes.width, y > 0, y + 1 < modes.height};
      for (int k = 0; k < 4; ++k) {
        if (!ok[k]) continue;
        const std::size_t j = mode_at[static_cast<std::size_t>(nb[k])];
        if (j == n || visited[j] || find(j) != cluster) continue;
        visited[j] = 1;
        stack.push_back(j);
      }
    }
    if (members.size() < static_cast<std::size_t>(params.min_blob_size)) continue;
    std::sort(members.begin(), members.end());
    Blob blob;
    blob.id = static_cast<int>(blobs.size());
    std::array<double, 4> sum{};
    for (std::size_t i : members) {
      const int p = modes.pixels[i];
      blob.pixels.push_back(PixelXY{p % modes.width, p / modes.width});
      for (int k = 0; k < 4; ++k) sum[k] += modes.modes[i][k];
    }
    const double cnt = static_cast<double>(members.size());
    blob.mode = {sum[0] / cnt * modes.spatial_bandwidth, sum[1] / cnt * modes.spatial_bandwidth,
                 sum[2] / cnt * modes.range_bandwidth, sum[3] / cnt * modes.range_bandwidth};
    blobs.push_back(std::move(blob));
  }
  return blobs;
}

}  // namespace oracle
