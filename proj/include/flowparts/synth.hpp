#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "flowparts/types.hpp"

namespace flowparts {

// Deterministic synthetic scene: a textured figure translating over a
// constant background, with exact ground truth for every pipeline stage.
// The default figure is large relative to the flow window, so the motion
// halo that window smoothing paints around it stays a minor fraction of
// the moving region.
struct SynthConfig {
  int width = 128;
  int height = 128;

  enum class Figure { rectangle, stick };
  Figure figure = Figure::rectangle;

  // Figure box at frame 0; the stick silhouette is carved inside it.
  double figure_x = 40.0;
  double figure_y = 18.0;
  double figure_w = 48.0;
  double figure_h = 92.0;

  double velocity_u = 2.0;  // pixels per frame
  double velocity_v = 0.0;
  int frames = 10;
  std::uint64_t texture_seed = 1;
  double background = 0.1;  // constant background intensity, <= 0.6

  void validate() const;  // also checks the figure stays in bounds
};

struct GroundTruth {
  std::vector<FlowField> flow;        // one per consecutive pair, anchored at the earlier frame
  std::vector<BBox> bbox;             // tight figure bounds per frame
  std::vector<PartLabelMap> parts;    // 5 equal horizontal slices of the figure
  std::vector<Keypoints> keypoints;   // slice centers + ankle point at the bottom of slice 5
};

struct SynthScene {
  std::vector<Frame> frames;
  GroundTruth gt;
};

SynthScene render_sequence(const SynthConfig& cfg);

// Full-frame textured pair where frame 1 is frame 0 translated by (dx, dy);
// the texture is defined on the whole plane so the translation is exact
// everywhere. Intensities are 8-bit quantized like frames read from disk.
std::pair<Frame, Frame> render_translated_pair(int width, int height, std::uint64_t seed,
                                               double dx, double dy);

// Emits frames/, flow/, parts/, detections.txt and keypoints.txt under
// out_dir using the standard pipeline formats.
void write_scene(const SynthScene& scene, const std::string& out_dir);

// `key = value` scene description; unknown keys rejected.
SynthConfig synth_config_from_kv(const std::map<std::string, std::string>& kv);

// Deterministic lattice noise in [0,1): splitmix64 finalizer over
// (seed, ix, iy), bilinearly interpolated between lattice points.
double lattice_noise(std::uint64_t seed, std::int64_t ix, std::int64_t iy);
double sample_noise(std::uint64_t seed, double gx, double gy);

}  // namespace flowparts
