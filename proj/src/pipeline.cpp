#include "flowparts/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <map>
#include <set>

#include "flowparts/blobs.hpp"
#include "flowparts/detection_io.hpp"
#include "flowparts/errors.hpp"
#include "flowparts/flow_io.hpp"
#include "flowparts/io_util.hpp"
#include "flowparts/mining.hpp"
#include "flowparts/parallel.hpp"
#include "flowparts/pgm_io.hpp"
#include "flowparts/supervise.hpp"
#include "text_parse.hpp"

namespace flowparts {

namespace fs = std::filesystem;

namespace {

std::string indexed_name(const char* stem, int index, const char* ext) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s_%06d.%s", stem, index, ext);
  return buf;
}

std::vector<Frame> load_frames(const std::vector<FrameFile>& files) {
  std::vector<Frame> frames;
  frames.reserve(files.size());
  for (const auto& f : files) {
    Frame frame = read_pgm(f.path);
    frame.index = f.index;
    if (!frames.empty() && !frame.luma.same_shape(frames.front().luma))
      throw ValidationError(f.path + ": frame size differs from the first frame");
    frames.push_back(std::move(frame));
  }
  return frames;
}

}  // namespace

void run_flow_pipeline(const std::string& frames_dir, const std::string& out_dir,
                       const PipelineConfig& cfg) {
  cfg.validate();
  const auto files = list_frame_files(frames_dir);
  if (files.size() < 2)
    throw ValidationError(frames_dir + ": need at least 2 frames, found " +
                          std::to_string(files.size()));
  const auto frames = load_frames(files);
  fs::create_directories(out_dir);

  const int pairs = static_cast<int>(frames.size()) - 1;
  parallel_for_indexed(cfg.jobs, pairs, [&](int i) {
    const auto idx = static_cast<std::size_t>(i);
    const FlowField flow = farneback_flow(frames[idx], frames[idx + 1], cfg.flow);
    const std::string path =
        (fs::path(out_dir) / indexed_name("flow", files[idx].index, "flo")).string();
    write_flow(flow, path);
  });
}

std::vector<ManifestRow> run_label_pipeline(const std::string& frames_dir,
                                            const std::string& detections_path,
                                            const std::string& out_dir, const PipelineConfig& cfg,
                                            bool dump_blobs) {
  cfg.validate();
  const auto files = list_frame_files(frames_dir);
  if (files.size() < 2)
    throw ValidationError(frames_dir + ": need at least 2 frames, found " +
                          std::to_string(files.size()));
  const auto frames = load_frames(files);

  std::map<int, std::vector<Detection>> dets_by_frame;
  for (const Detection& d : load_detections(detections_path)) dets_by_frame[d.frame_index].push_back(d);

  fs::create_directories(out_dir);
  const int pairs = static_cast<int>(frames.size()) - 1;
  std::vector<ManifestRow> rows(static_cast<std::size_t>(pairs));

  parallel_for_indexed(cfg.jobs, pairs, [&](int i) {
    const auto idx = static_cast<std::size_t>(i);
    const int frame_index = files[idx].index;
    const std::string label_path =
        (fs::path(out_dir) / indexed_name("label", frame_index, "pgm")).string();

    std::vector<Detection> dets;
    if (const auto it = dets_by_frame.find(frame_index); it != dets_by_frame.end())
      dets = it->second;

    const SampleResult result =
        generate_sample(frames[idx], frames[idx + 1], files[idx].path, dets, cfg, label_path);

    ManifestRow row;
    row.frame_index = frame_index;
    row.image_path = files[idx].path;
    row.moving_fraction = result.moving_fraction;
    if (result.record) {
      row.label_path = result.record->label_path;
      row.bbox = result.record->detection.bbox;
      row.status = "ok";
      row.blob_count = result.record->blob_count;
      if (dump_blobs)
        write_blobs(result.blobs,
                    (fs::path(out_dir) / indexed_name("blobs", frame_index, "txt")).string());
    } else {
      row.status = rejection_name(*result.rejection);
    }
    rows[idx] = std::move(row);
  });

  write_manifest(rows, (fs::path(out_dir) / "manifest.txt").string());
  return rows;
}

EvalRunResult run_eval(const std::string& labels_dir, const std::string& keypoints_path,
                       int parts) {
  if (parts != 5)
    throw ValidationError("the part-joint mapping is defined for parts = 5, got " +
                          std::to_string(parts));
  const auto mapping = PartJointMapping::default_for_five_parts();

  std::map<int, Keypoints> kps_by_frame;
  for (const Keypoints& kp : load_keypoints(keypoints_path)) kps_by_frame[kp.frame_index] = kp;

  std::vector<EvalRecord> records;
  EvalRunResult result;
  for (const FrameFile& f : list_indexed_files(labels_dir, "label", "pgm")) {
    const auto it = kps_by_frame.find(f.index);
    if (it == kps_by_frame.end()) continue;
    PartLabelMap map = read_label_map(f.path, parts);
    map.frame_index = f.index;
    records.push_back(make_eval_record(map, it->second, mapping));
    ++result.frames_evaluated;
  }
  result.rows = aggregate_report(records, mapping);
  return result;
}

std::vector<MiningRow> run_mine(const std::string& manifest_path,
                                const std::string& predictions_dir, int k, int parts) {
  if (k < 0) throw ValidationError("k must be >= 0");
  const auto manifest = read_manifest(manifest_path);

  std::vector<MiningRow> rows;
  std::vector<SampleRecord> pool;
  for (const ManifestRow& m : manifest) {
    if (m.status != "ok") continue;
    MiningRow row;
    row.frame_index = m.frame_index;
    row.label_path = m.label_path;
    const std::string pred_path =
        (fs::path(predictions_dir) / fs::path(m.label_path).filename()).string();
    try {
      const PartLabelMap weak = read_label_map(m.label_path, parts);
      const PartLabelMap predicted = read_label_map(pred_path, parts);
      row.error_score = score_samples(predicted, weak);
    } catch (const std::exception& e) {
      row.error = true;
      row.error_detail = e.what();
      rows.push_back(std::move(row));
      continue;
    }
    SampleRecord rec;
    rec.frame_index = m.frame_index;
    rec.label_path = m.label_path;
    rec.error_score = row.error_score;
    pool.push_back(std::move(rec));
    rows.push_back(std::move(row));
  }

  std::set<std::pair<int, std::string>> selected;
  for (const SampleRecord& r : select_hard(std::move(pool), k))
    selected.emplace(r.frame_index, r.label_path);
  for (MiningRow& row : rows)
    if (!row.error && selected.count({row.frame_index, row.label_path})) row.selected = true;

  std::sort(rows.begin(), rows.end(), [](const MiningRow& a, const MiningRow& b) {
    if (a.frame_index != b.frame_index) return a.frame_index < b.frame_index;
    return a.label_path < b.label_path;
  });
  return rows;
}

void write_mining_csv(const std::vector<MiningRow>& rows, const std::string& path) {
  std::string out = "frame_index,error_score,selected\n";
  for (const MiningRow& row : rows) {
    out += std::to_string(row.frame_index) + ",";
    if (row.error) {
      out += "error,0\n";
      continue;
    }
    detail::append_double(out, row.error_score);
    out += row.selected ? ",1\n" : ",0\n";
  }
  atomic_write_file(path, out);
}

}  // namespace flowparts
