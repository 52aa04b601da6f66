#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "flowparts/blobs.hpp"
#include "flowparts/config.hpp"
#include "flowparts/types.hpp"

namespace flowparts {

// Why a frame pair produced no training sample.
enum class Rejection {
  gate_low,      // moving fraction <= gate_low
  gate_high,     // moving fraction >= gate_high
  no_person,     // zero usable detections
  multi_person,  // more than one detection
  no_blobs,      // no blob overlapped the person box enough
};

const char* rejection_name(Rejection r);
std::optional<Rejection> rejection_from_name(const std::string& name);

// The detection iff exactly one exists for the frame, else empty.
std::optional<Detection> single_person_filter(std::span<const Detection> dets);

// Keeps blobs with |pixels inside box| / |pixels| >= min_overlap and crops
// the kept ones to the box. Order preserved.
std::vector<Blob> filter_person_blobs(const std::vector<Blob>& blobs, const BBox& box,
                                      double min_overlap = 0.5);

// k horizontal bands covering the box exactly, heights floor(h/k) or +1 with
// the taller bands on top. Band i (1-based, top to bottom) is part id i.
// box height < k -> ContractError.
std::vector<BBox> partition_bands(const BBox& box, int k = 5);

// label = i where a kept blob covers the pixel and band i contains it, 0 otherwise.
PartLabelMap render_label_map(const std::vector<Blob>& blobs, const std::vector<BBox>& bands,
                              int width, int height, int parts, int frame_index);

// One generated training sample.
struct SampleRecord {
  int frame_index = 0;
  std::string image_path;
  std::string label_path;
  Detection detection;
  double moving_fraction = 0.0;
  int blob_count = 0;
  std::optional<double> error_score;  // set by mining
};

struct SampleResult {
  std::optional<SampleRecord> record;
  std::optional<Rejection> rejection;
  double moving_fraction = 0.0;
  std::vector<Blob> blobs;  // kept person blobs; filled on acceptance
};

// Full per-pair pipeline: flow, motion gate, single-person rule, mean-shift
// blobs, person pruning, band rendering. On acceptance the label map is
// rendered on prev's geometry and written to label_path atomically.
// Detections that are degenerate after clamping to the frame, or whose box is
// shorter than cfg.parts rows, are dropped before the single-person rule.
SampleResult generate_sample(const Frame& prev, const Frame& next, const std::string& prev_path,
                             std::span<const Detection> prev_dets, const PipelineConfig& cfg,
                             const std::string& label_path);

}  // namespace flowparts
