#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace flowparts {

// Row-major scalar plane.
template <typename T>
struct Grid {
  int width = 0;
  int height = 0;
  std::vector<T> v;

  Grid() = default;
  Grid(int w, int h, T fill = T{})
      : width(w), height(h), v(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), fill) {}

  std::size_t idx(int x, int y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x);
  }
  T& at(int x, int y) { return v[idx(x, y)]; }
  const T& at(int x, int y) const { return v[idx(x, y)]; }

  // Clamp-to-edge read.
  const T& at_clamped(int x, int y) const {
    x = std::clamp(x, 0, width - 1);
    y = std::clamp(y, 0, height - 1);
    return v[idx(x, y)];
  }

  std::size_t size() const { return v.size(); }
  bool same_shape(const Grid& o) const { return width == o.width && height == o.height; }
};

// Single-channel luminance frame, intensities in [0,1].
struct Frame {
  int index = 0;
  Grid<float> luma;

  Frame() = default;
  Frame(int w, int h, int idx = 0, float fill = 0.0f) : index(idx), luma(w, h, fill) {}
  int width() const { return luma.width; }
  int height() const { return luma.height; }
};

// Per-pixel displacement in pixels per frame; u = +right, v = +down.
// Stored interleaved (u,v) row-major, 32-bit floats.
struct FlowField {
  int width = 0;
  int height = 0;
  std::vector<float> uv;

  FlowField() = default;
  FlowField(int w, int h) : width(w), height(h), uv(static_cast<std::size_t>(w) * h * 2, 0.0f) {}

  std::size_t idx(int x, int y) const {
    return (static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x)) * 2;
  }
  float u(int x, int y) const { return uv[idx(x, y)]; }
  float v(int x, int y) const { return uv[idx(x, y) + 1]; }
  void set(int x, int y, float fu, float fv) {
    const std::size_t i = idx(x, y);
    uv[i] = fu;
    uv[i + 1] = fv;
  }
  std::size_t pixel_count() const { return static_cast<std::size_t>(width) * height; }
  bool operator==(const FlowField&) const = default;
};

// Half-open pixel box: x0 <= x < x1, y0 <= y < y1.
struct BBox {
  int x0 = 0;
  int y0 = 0;
  int x1 = 0;
  int y1 = 0;

  int width() const { return x1 - x0; }
  int height() const { return y1 - y0; }
  long area() const { return static_cast<long>(width()) * height(); }
  bool valid() const { return x0 < x1 && y0 < y1; }
  bool contains(int x, int y) const { return x >= x0 && x < x1 && y >= y0 && y < y1; }

  BBox clamped(int frame_w, int frame_h) const {
    return BBox{std::clamp(x0, 0, frame_w), std::clamp(y0, 0, frame_h),
                std::clamp(x1, 0, frame_w), std::clamp(y1, 0, frame_h)};
  }
  bool operator==(const BBox&) const = default;
};

// External person-detector box for one frame.
struct Detection {
  int frame_index = 0;
  BBox bbox;
  double score = 0.0;
  bool operator==(const Detection&) const = default;
};

struct Point2d {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Point2d&) const = default;
};

// Ground-truth joint names. kJointCount keeps array-backed maps cheap.
enum class Joint : int {
  face = 0,
  shoulder_mid,
  belly,
  hip_mid,
  knee_mid,
  ankle_mid,
};
inline constexpr int kJointCount = 6;

const char* joint_name(Joint j);
std::optional<Joint> joint_from_name(const std::string& name);

// Per-frame ground-truth joints; absent entry = unannotated.
struct Keypoints {
  int frame_index = 0;
  std::array<std::optional<Point2d>, kJointCount> joints;

  const std::optional<Point2d>& joint(Joint j) const { return joints[static_cast<int>(j)]; }
  void set(Joint j, Point2d p) { joints[static_cast<int>(j)] = p; }
};

// Dense per-pixel part labels in {0..parts}; 0 = background.
struct PartLabelMap {
  int width = 0;
  int height = 0;
  int parts = 5;
  int frame_index = 0;
  std::vector<std::uint8_t> labels;

  PartLabelMap() = default;
  PartLabelMap(int w, int h, int k, int idx = 0)
      : width(w), height(h), parts(k), frame_index(idx),
        labels(static_cast<std::size_t>(w) * h, 0) {}

  std::size_t idx(int x, int y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x);
  }
  std::uint8_t at(int x, int y) const { return labels[idx(x, y)]; }
  void set(int x, int y, std::uint8_t l) { labels[idx(x, y)] = l; }
};

}  // namespace flowparts
