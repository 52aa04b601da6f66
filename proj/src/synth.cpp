#include "flowparts/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>

#include "flowparts/detection_io.hpp"
#include "flowparts/errors.hpp"
#include "flowparts/flow_io.hpp"
#include "flowparts/pgm_io.hpp"
#include "flowparts/supervise.hpp"
#include "text_parse.hpp"

namespace flowparts {

namespace {

// Noise lattice spacing in pixels. Coarse enough for smooth gradients under a
// 5-tap polynomial window, fine enough to texture a small figure.
constexpr double kNoisePitch = 3.0;

std::uint64_t mix64(std::uint64_t z) {
  // splitmix64 finalizer.
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

float quantize8(double v) {
  const double c = std::clamp(v, 0.0, 1.0);
  return static_cast<float>(std::lround(c * 255.0) / 255.0);
}

double dist2_to_segment(double px, double py, double ax, double ay, double bx, double by) {
  const double dx = bx - ax;
  const double dy = by - ay;
  const double len2 = dx * dx + dy * dy;
  double t = len2 > 0.0 ? ((px - ax) * dx + (py - ay) * dy) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  const double ex = px - (ax + t * dx);
  const double ey = py - (ay + t * dy);
  return ex * ex + ey * ey;
}

// Silhouette test in figure-local coordinates (box [0,w] x [0,h]).
bool inside_figure(const SynthConfig& cfg, double lx, double ly) {
  const double w = cfg.figure_w;
  const double h = cfg.figure_h;
  if (lx < 0.0 || lx >= w || ly < 0.0 || ly >= h) return false;
  if (cfg.figure == SynthConfig::Figure::rectangle) return true;

  // Head disc plus five stroked segments: torso, two arms, two legs.
  const double cx = w / 2.0;
  const double head_r = 0.10 * h;
  const double hx = cx;
  const double hy = 0.10 * h;
  if ((lx - hx) * (lx - hx) + (ly - hy) * (ly - hy) <= head_r * head_r) return true;

  struct Seg {
    double ax, ay, bx, by, half_w;
  };
  const Seg segs[5] = {
      {cx, 0.10 * h, cx, 0.55 * h, 0.08 * w},           // torso
      {cx, 0.22 * h, 0.08 * w, 0.42 * h, 0.05 * w},     // left arm
      {cx, 0.22 * h, 0.92 * w, 0.42 * h, 0.05 * w},     // right arm
      {cx, 0.55 * h, 0.25 * w, 0.98 * h, 0.06 * w},     // left leg
      {cx, 0.55 * h, 0.75 * w, 0.98 * h, 0.06 * w},     // right leg
  };
  for (const Seg& s : segs)
    if (dist2_to_segment(lx, ly, s.ax, s.ay, s.bx, s.by) <= s.half_w * s.half_w) return true;
  return false;
}

// Figure-anchored intensity: the texture rides with the figure, so frame t is
// an exact translation of frame 0 wherever the figure is.
double figure_intensity(const SynthConfig& cfg, double x, double y, double t_u, double t_v) {
  const double n = sample_noise(cfg.texture_seed, (x - t_u) / kNoisePitch, (y - t_v) / kNoisePitch);
  return cfg.background + 0.35 + n * (0.65 - cfg.background);
}

// Nearest mask pixel to a real point; ties resolved by raster order.
PixelXY snap_to_mask(const std::vector<PixelXY>& pixels, double x, double y) {
  PixelXY best = pixels.front();
  double best_d = std::numeric_limits<double>::infinity();
  for (const PixelXY& p : pixels) {
    const double dx = p.x - x;
    const double dy = p.y - y;
    const double d = dx * dx + dy * dy;
    if (d < best_d) {
      best_d = d;
      best = p;
    }
  }
  return best;
}

std::string indexed_name(const char* stem, int index, const char* ext) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s_%06d.%s", stem, index, ext);
  return buf;
}

}  // namespace

double lattice_noise(std::uint64_t seed, std::int64_t ix, std::int64_t iy) {
  const std::uint64_t h =
      mix64(seed ^ mix64(static_cast<std::uint64_t>(ix) ^ mix64(static_cast<std::uint64_t>(iy))));
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

double sample_noise(std::uint64_t seed, double gx, double gy) {
  const double fgx = std::floor(gx);
  const double fgy = std::floor(gy);
  const auto ix = static_cast<std::int64_t>(fgx);
  const auto iy = static_cast<std::int64_t>(fgy);
  const double fx = gx - fgx;
  const double fy = gy - fgy;
  const double n00 = lattice_noise(seed, ix, iy);
  const double n10 = lattice_noise(seed, ix + 1, iy);
  const double n01 = lattice_noise(seed, ix, iy + 1);
  const double n11 = lattice_noise(seed, ix + 1, iy + 1);
  const double top = n00 + fx * (n10 - n00);
  const double bot = n01 + fx * (n11 - n01);
  return top + fy * (bot - top);
}

void SynthConfig::validate() const {
  if (width < 1 || height < 1) throw ContractError("non-positive frame size");
  if (frames < 1) throw ContractError("frames must be >= 1");
  if (!(figure_w > 0.0 && figure_h > 0.0)) throw ContractError("non-positive figure size");
  if (figure_h < 5.0) throw ContractError("figure too short for 5 slices");
  if (!(background >= 0.0 && background <= 0.6)) throw ContractError("background outside [0, 0.6]");
  const double span = static_cast<double>(frames - 1);
  const double x_lo = figure_x + std::min(0.0, span * velocity_u);
  const double x_hi = figure_x + figure_w + std::max(0.0, span * velocity_u);
  const double y_lo = figure_y + std::min(0.0, span * velocity_v);
  const double y_hi = figure_y + figure_h + std::max(0.0, span * velocity_v);
  if (x_lo < 0.0 || y_lo < 0.0 || x_hi > width || y_hi > height)
    throw ContractError("figure exits frame bounds");
}

SynthScene render_sequence(const SynthConfig& cfg) {
  cfg.validate();
  SynthScene scene;
  scene.frames.reserve(static_cast<std::size_t>(cfg.frames));

  std::vector<std::vector<PixelXY>> masks(static_cast<std::size_t>(cfg.frames));
  for (int t = 0; t < cfg.frames; ++t) {
    const double off_u = t * cfg.velocity_u;
    const double off_v = t * cfg.velocity_v;
    const double fx = cfg.figure_x + off_u;
    const double fy = cfg.figure_y + off_v;

    Frame frame(cfg.width, cfg.height, t);
    auto& mask = masks[static_cast<std::size_t>(t)];
    int min_x = cfg.width, min_y = cfg.height, max_x = -1, max_y = -1;
    for (int y = 0; y < cfg.height; ++y) {
      for (int x = 0; x < cfg.width; ++x) {
        double v = cfg.background;
        if (inside_figure(cfg, x - fx, y - fy)) {
          mask.push_back({x, y});
          v = figure_intensity(cfg, x, y, off_u, off_v);
          min_x = std::min(min_x, x);
          min_y = std::min(min_y, y);
          max_x = std::max(max_x, x);
          max_y = std::max(max_y, y);
        }
        frame.luma.at(x, y) = quantize8(v);
      }
    }
    if (mask.empty()) throw ContractError("figure silhouette is empty");
    scene.frames.push_back(std::move(frame));
    scene.gt.bbox.push_back(BBox{min_x, min_y, max_x + 1, max_y + 1});
  }

  for (int t = 0; t < cfg.frames; ++t) {
    const auto& mask = masks[static_cast<std::size_t>(t)];
    const BBox& box = scene.gt.bbox[static_cast<std::size_t>(t)];

    if (t + 1 < cfg.frames) {
      FlowField flow(cfg.width, cfg.height);
      for (const PixelXY& p : mask)
        flow.set(p.x, p.y, static_cast<float>(cfg.velocity_u), static_cast<float>(cfg.velocity_v));
      scene.gt.flow.push_back(std::move(flow));
    }

    // Five equal horizontal slices of the silhouette, remainder rows on top.
    const auto bands = partition_bands(box, 5);
    PartLabelMap labels(cfg.width, cfg.height, 5, t);
    std::array<std::vector<PixelXY>, 5> slice_pixels;
    for (const PixelXY& p : mask) {
      for (int i = 0; i < 5; ++i) {
        if (bands[static_cast<std::size_t>(i)].contains(p.x, p.y)) {
          labels.set(p.x, p.y, static_cast<std::uint8_t>(i + 1));
          slice_pixels[static_cast<std::size_t>(i)].push_back(p);
          break;
        }
      }
    }
    scene.gt.parts.push_back(std::move(labels));

    // Slice keypoints: centroid snapped onto the silhouette (legs leave the
    // raw centroid between the strokes), plus the between-ankles point at the
    // bottom row of slice 5.
    Keypoints kp;
    kp.frame_index = t;
    constexpr Joint kSliceJoint[5] = {Joint::face, Joint::shoulder_mid, Joint::belly,
                                      Joint::hip_mid, Joint::knee_mid};
    for (int i = 0; i < 5; ++i) {
      const auto& pixels = slice_pixels[static_cast<std::size_t>(i)];
      if (pixels.empty()) continue;
      double sx = 0.0, sy = 0.0;
      for (const PixelXY& p : pixels) {
        sx += p.x;
        sy += p.y;
      }
      const double n = static_cast<double>(pixels.size());
      const PixelXY s = snap_to_mask(pixels, sx / n, sy / n);
      kp.set(kSliceJoint[i], Point2d{static_cast<double>(s.x), static_cast<double>(s.y)});
    }
    const auto& bottom = slice_pixels[4];
    if (!bottom.empty()) {
      int max_y = 0;
      for (const PixelXY& p : bottom) max_y = std::max(max_y, p.y);
      double sx = 0.0;
      int n = 0;
      for (const PixelXY& p : bottom)
        if (p.y == max_y) {
          sx += p.x;
          ++n;
        }
      kp.set(Joint::ankle_mid, Point2d{sx / n, static_cast<double>(max_y)});
    }
    scene.gt.keypoints.push_back(std::move(kp));
  }
  return scene;
}

std::pair<Frame, Frame> render_translated_pair(int width, int height, std::uint64_t seed,
                                               double dx, double dy) {
  if (width < 1 || height < 1) throw ContractError("non-positive frame size");
  Frame a(width, height, 0);
  Frame b(width, height, 1);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      a.luma.at(x, y) = quantize8(sample_noise(seed, x / kNoisePitch, y / kNoisePitch));
      b.luma.at(x, y) =
          quantize8(sample_noise(seed, (x - dx) / kNoisePitch, (y - dy) / kNoisePitch));
    }
  }
  return {std::move(a), std::move(b)};
}

void write_scene(const SynthScene& scene, const std::string& out_dir) {
  namespace fs = std::filesystem;
  const fs::path root(out_dir);
  fs::create_directories(root / "frames");
  fs::create_directories(root / "flow");
  fs::create_directories(root / "parts");

  std::vector<Detection> dets;
  for (std::size_t t = 0; t < scene.frames.size(); ++t) {
    write_pgm(scene.frames[t], (root / "frames" / indexed_name("frame", static_cast<int>(t), "pgm")).string());
    dets.push_back(Detection{static_cast<int>(t), scene.gt.bbox[t], 1.0});
  }
  for (std::size_t t = 0; t < scene.gt.flow.size(); ++t)
    write_flow(scene.gt.flow[t], (root / "flow" / indexed_name("flow", static_cast<int>(t), "flo")).string());
  for (std::size_t t = 0; t < scene.gt.parts.size(); ++t)
    write_label_map(scene.gt.parts[t],
                    (root / "parts" / indexed_name("label", static_cast<int>(t), "pgm")).string());
  write_detections(dets, (root / "detections.txt").string());
  write_keypoints(scene.gt.keypoints, (root / "keypoints.txt").string());
}

SynthConfig synth_config_from_kv(const std::map<std::string, std::string>& kv) {
  SynthConfig cfg;
  for (const auto& [key, value] : kv) {
    const std::string& where = key;  // error prefix "key:0: ..."
    if (key == "width") cfg.width = detail::parse_int(value, where, 0);
    else if (key == "height") cfg.height = detail::parse_int(value, where, 0);
    else if (key == "figure") {
      if (value == "rectangle") cfg.figure = SynthConfig::Figure::rectangle;
      else if (value == "stick") cfg.figure = SynthConfig::Figure::stick;
      else throw ValidationError("unknown figure '" + value + "'");
    } else if (key == "figure_x") cfg.figure_x = detail::parse_double(value, where, 0);
    else if (key == "figure_y") cfg.figure_y = detail::parse_double(value, where, 0);
    else if (key == "figure_w") cfg.figure_w = detail::parse_double(value, where, 0);
    else if (key == "figure_h") cfg.figure_h = detail::parse_double(value, where, 0);
    else if (key == "velocity_u") cfg.velocity_u = detail::parse_double(value, where, 0);
    else if (key == "velocity_v") cfg.velocity_v = detail::parse_double(value, where, 0);
    else if (key == "frames") cfg.frames = detail::parse_int(value, where, 0);
    else if (key == "texture_seed") {
      std::uint64_t seed = 0;
      const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), seed);
      if (ec != std::errc{} || ptr != value.data() + value.size())
        throw ValidationError("bad texture_seed '" + value + "'");
      cfg.texture_seed = seed;
    }
    else if (key == "background") cfg.background = detail::parse_double(value, where, 0);
    else throw ValidationError("unknown synth key '" + key + "'");
  }
  return cfg;
}

}  // namespace flowparts
