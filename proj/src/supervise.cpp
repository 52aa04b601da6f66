#include "flowparts/supervise.hpp"

#include <algorithm>

#include "flowparts/errors.hpp"
#include "flowparts/farneback.hpp"
#include "flowparts/motion.hpp"
#include "flowparts/pgm_io.hpp"

namespace flowparts {

namespace {

constexpr const char* kRejectionNames[] = {"gate_low", "gate_high", "no_person", "multi_person",
                                           "no_blobs"};

}  // namespace

const char* rejection_name(Rejection r) { return kRejectionNames[static_cast<int>(r)]; }

std::optional<Rejection> rejection_from_name(const std::string& name) {
  for (int i = 0; i < 5; ++i)
    if (name == kRejectionNames[i]) return static_cast<Rejection>(i);
  return std::nullopt;
}

std::optional<Detection> single_person_filter(std::span<const Detection> dets) {
  if (dets.size() != 1) return std::nullopt;
  return dets[0];
}

std::vector<Blob> filter_person_blobs(const std::vector<Blob>& blobs, const BBox& box,
                                      double min_overlap) {
  if (!(min_overlap > 0.0 && min_overlap <= 1.0)) throw ContractError("min_overlap out of (0,1]");
  std::vector<Blob> kept;
  for (const Blob& b : blobs) {
    if (b.pixels.empty()) continue;
    std::vector<PixelXY> inside;
    inside.reserve(b.pixels.size());
    for (const PixelXY& p : b.pixels)
      if (box.contains(p.x, p.y)) inside.push_back(p);
    const double frac = static_cast<double>(inside.size()) / static_cast<double>(b.pixels.size());
    if (frac < min_overlap) continue;
    Blob c = b;
    c.pixels = std::move(inside);
    kept.push_back(std::move(c));
  }
  return kept;
}

std::vector<BBox> partition_bands(const BBox& box, int k) {
  if (k < 1) throw ContractError("k must be >= 1");
  if (!box.valid()) throw ContractError("degenerate box");
  const int h = box.height();
  if (h < k) throw ContractError("box height below part count");
  const int base = h / k;
  const int extra = h % k;  // taller bands go on top
  std::vector<BBox> bands;
  bands.reserve(static_cast<std::size_t>(k));
  int y = box.y0;
  for (int i = 0; i < k; ++i) {
    const int band_h = base + (i < extra ? 1 : 0);
    bands.push_back(BBox{box.x0, y, box.x1, y + band_h});
    y += band_h;
  }
  return bands;
}

PartLabelMap render_label_map(const std::vector<Blob>& blobs, const std::vector<BBox>& bands,
                              int width, int height, int parts, int frame_index) {
  if (static_cast<int>(bands.size()) != parts) throw ContractError("bands/parts mismatch");
  PartLabelMap map(width, height, parts, frame_index);
  for (const Blob& b : blobs) {
    for (const PixelXY& p : b.pixels) {
      if (p.x < 0 || p.x >= width || p.y < 0 || p.y >= height) continue;
      for (int i = 0; i < parts; ++i) {
        if (bands[static_cast<std::size_t>(i)].contains(p.x, p.y)) {
          map.set(p.x, p.y, static_cast<std::uint8_t>(i + 1));
          break;  // bands are disjoint
        }
      }
    }
  }
  return map;
}

SampleResult generate_sample(const Frame& prev, const Frame& next, const std::string& prev_path,
                             std::span<const Detection> prev_dets, const PipelineConfig& cfg,
                             const std::string& label_path) {
  cfg.validate();
  if (!prev.luma.same_shape(next.luma)) throw ContractError("frame pair shapes differ");

  SampleResult res;
  const FlowField flow = farneback_flow(prev, next, cfg.flow);
  res.moving_fraction = motion_fraction(flow, cfg.eps);
  if (res.moving_fraction <= cfg.gate_low) {
    res.rejection = Rejection::gate_low;
    return res;
  }
  if (res.moving_fraction >= cfg.gate_high) {
    res.rejection = Rejection::gate_high;
    return res;
  }

  // Detections that are degenerate after clamping or too short to band are
  // unusable for labeling, so they do not count towards the single-person rule.
  std::vector<Detection> usable;
  for (const Detection& d : prev_dets) {
    Detection c = d;
    c.bbox = d.bbox.clamped(prev.width(), prev.height());
    if (!c.bbox.valid() || c.bbox.height() < cfg.parts) continue;
    usable.push_back(c);
  }
  const auto person = single_person_filter(usable);
  if (!person) {
    res.rejection = usable.empty() ? Rejection::no_person : Rejection::multi_person;
    return res;
  }

  const auto mask = motion_mask(flow, cfg.eps);
  const auto modes = mean_shift_modes(flow, mask, cfg.mean_shift);
  const auto blobs = extract_blobs(modes, cfg.mean_shift);
  auto kept = filter_person_blobs(blobs, person->bbox, cfg.min_overlap);
  if (kept.empty()) {
    res.rejection = Rejection::no_blobs;
    return res;
  }

  const auto bands = partition_bands(person->bbox, cfg.parts);
  const PartLabelMap map =
      render_label_map(kept, bands, prev.width(), prev.height(), cfg.parts, prev.index);
  write_label_map(map, label_path);
  res.blobs = std::move(kept);

  SampleRecord rec;
  rec.frame_index = prev.index;
  rec.image_path = prev_path;
  rec.label_path = label_path;
  rec.detection = *person;
  rec.moving_fraction = res.moving_fraction;
  rec.blob_count = static_cast<int>(res.blobs.size());
  res.record = std::move(rec);
  return res;
}

}  // namespace flowparts
