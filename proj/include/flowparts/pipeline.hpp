#pragma once

#include <string>
#include <vector>

#include "flowparts/config.hpp"
#include "flowparts/eval.hpp"
#include "flowparts/manifest.hpp"
#include "flowparts/types.hpp"

namespace flowparts {

// One flow_%06d.flo per consecutive frame pair, named by the earlier frame.
// Pairs run on cfg.jobs threads; outputs are byte-identical for any job count.
void run_flow_pipeline(const std::string& frames_dir, const std::string& out_dir,
                       const PipelineConfig& cfg);

// generate_sample per pair plus label_%06d.pgm files and out_dir/manifest.txt.
// Rejections are data, not errors. Returns the manifest rows in pair order.
std::vector<ManifestRow> run_label_pipeline(const std::string& frames_dir,
                                            const std::string& detections_path,
                                            const std::string& out_dir,
                                            const PipelineConfig& cfg,
                                            bool dump_blobs = false);

struct EvalRunResult {
  std::vector<ReportRow> rows;
  int frames_evaluated = 0;
};

// Scans labels_dir for label_%06d.pgm, pairs them with keypoints by frame
// index, and aggregates the centroid-distance report.
EvalRunResult run_eval(const std::string& labels_dir, const std::string& keypoints_path,
                       int parts);

struct MiningRow {
  int frame_index = 0;
  std::string label_path;
  double error_score = 0.0;
  bool selected = false;
  bool error = false;        // prediction missing or mismatched; excluded from the pool
  std::string error_detail;
};

// Scores accepted manifest rows against predictions_dir/<label basename> and
// selects the top k. Rows come back sorted by (frame_index, label_path).
std::vector<MiningRow> run_mine(const std::string& manifest_path,
                                const std::string& predictions_dir, int k, int parts);

// `frame_index,error_score,selected` with `error` in the score column for
// excluded rows.
void write_mining_csv(const std::vector<MiningRow>& rows, const std::string& path);

}  // namespace flowparts
