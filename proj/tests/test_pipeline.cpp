#include <atomic>
#include <filesystem>
#include <vector>

#include "doctest.h"
#include "flowparts/errors.hpp"
#include "flowparts/flow_io.hpp"
#include "flowparts/io_util.hpp"
#include "flowparts/parallel.hpp"
#include "flowparts/pgm_io.hpp"
#include "flowparts/pipeline.hpp"
#include "flowparts/synth.hpp"
#include "test_util.hpp"

using namespace flowparts;
namespace fs = std::filesystem;

namespace {

// Moving-figure scene sized so the default pipeline accepts every pair.
SynthConfig scene_config(int frames = 3) {
  SynthConfig cfg;
  cfg.width = 96;
  cfg.height = 96;
  cfg.figure_x = 24;
  cfg.figure_y = 12;
  cfg.figure_w = 40;
  cfg.figure_h = 70;
  cfg.velocity_u = 2.0;
  cfg.frames = frames;
  return cfg;
}

std::string emit_scene(const TempDir& td, const SynthConfig& cfg) {
  write_scene(render_sequence(cfg), td.str());
  return td.str();
}

}  // namespace

TEST_CASE("run_flow_pipeline: one flow file per consecutive pair") {
  TempDir td;
  emit_scene(td, scene_config(3));
  const auto out = td.subdir("out_flow");
  PipelineConfig cfg;
  run_flow_pipeline(td.file("frames"), out, cfg);

  CHECK(fs::exists(fs::path(out) / "flow_000000.flo"));
  CHECK(fs::exists(fs::path(out) / "flow_000001.flo"));
  CHECK(!fs::exists(fs::path(out) / "flow_000002.flo"));

  const FlowField f = read_flow((fs::path(out) / "flow_000000.flo").string());
  CHECK(f.width == 96);
  CHECK(f.height == 96);
}

TEST_CASE("run_flow_pipeline: fewer than two frames is a ValidationError") {
  TempDir td;
  const auto frames = td.subdir("frames");
  CHECK_THROWS_AS(run_flow_pipeline(frames, td.subdir("out"), PipelineConfig{}), ValidationError);
  write_pgm(Frame(8, 8, 0, 0.5f), td.file("frames/frame_000000.pgm"));
  CHECK_THROWS_AS(run_flow_pipeline(frames, td.subdir("out"), PipelineConfig{}), ValidationError);
}

TEST_CASE("run_label_pipeline: accepted pairs write labels and an ok manifest") {
  TempDir td;
  emit_scene(td, scene_config(3));
  const auto out = td.subdir("labels");
  const auto rows =
      run_label_pipeline(td.file("frames"), td.file("detections.txt"), out, PipelineConfig{});

  REQUIRE(rows.size() == 2);
  for (const auto& row : rows) {
    CHECK(row.status == "ok");
    CHECK(row.blob_count >= 1);
    CHECK(row.moving_fraction > 0.10);
    CHECK(row.moving_fraction < 0.70);
    CHECK(fs::exists(row.label_path));
  }
  CHECK(fs::exists(fs::path(out) / "manifest.txt"));
  const auto reread = read_manifest((fs::path(out) / "manifest.txt").string());
  REQUIRE(reread.size() == 2);
  CHECK(reread[0].status == "ok");
  CHECK(reread[0].bbox == rows[0].bbox);
}

TEST_CASE("run_label_pipeline: job count never changes the output bytes") {
  TempDir td;
  emit_scene(td, scene_config(4));

  auto run_with_jobs = [&](int jobs, const std::string& name) {
    PipelineConfig cfg;
    cfg.jobs = jobs;
    const auto out = td.subdir(name);
    run_label_pipeline(td.file("frames"), td.file("detections.txt"), out, cfg);
    return out;
  };
  const auto serial = run_with_jobs(1, "serial");
  const auto parallel = run_with_jobs(4, "parallel");

  int compared = 0;
  for (const auto& entry : fs::directory_iterator(serial)) {
    const auto name = entry.path().filename().string();
    std::string a = read_file(entry.path().string());
    std::string b = read_file((fs::path(parallel) / name).string());
    if (name == "manifest.txt") {
      // Label paths embed the output directory; compare them modulo that.
      std::string::size_type pos;
      while ((pos = a.find(serial)) != std::string::npos) a.replace(pos, serial.size(), "@");
      while ((pos = b.find(parallel)) != std::string::npos) b.replace(pos, parallel.size(), "@");
    }
    CHECK(a == b);
    ++compared;
  }
  CHECK(compared == 4);  // 3 labels + manifest
}

TEST_CASE("run_label_pipeline: rejected pairs leave no label files") {
  TempDir td;
  SynthConfig cfg = scene_config(3);
  cfg.velocity_u = 0.0;  // static scene
  emit_scene(td, cfg);
  const auto out = td.subdir("labels");
  const auto rows =
      run_label_pipeline(td.file("frames"), td.file("detections.txt"), out, PipelineConfig{});

  REQUIRE(rows.size() == 2);
  for (const auto& row : rows) {
    CHECK(row.status == "gate_low");
    CHECK(row.label_path == "-");
  }
  CHECK(!fs::exists(fs::path(out) / "label_000000.pgm"));
}

TEST_CASE("run_eval: synth ground truth scores within half a band height") {
  TempDir td;
  const SynthConfig cfg = scene_config(3);
  emit_scene(td, cfg);

  const auto result = run_eval(td.file("parts"), td.file("keypoints.txt"), 5);
  CHECK(result.frames_evaluated == 3);
  const double half_band = cfg.figure_h / 5.0 / 2.0;
  int present = 0;
  for (const auto& row : result.rows) {
    if (!row.mean_distance_px.has_value()) continue;
    ++present;
    CHECK(*row.mean_distance_px <= half_band);
    CHECK(row.count == 3);
  }
  CHECK(present == 6);
}

TEST_CASE("run_eval: only the five-part mapping is defined") {
  TempDir td;
  CHECK_THROWS_AS(run_eval(td.str(), td.file("missing.txt"), 3), ValidationError);
}

TEST_CASE("run_eval: no overlapping frames yields an all-missing report") {
  TempDir td;
  emit_scene(td, scene_config(2));
  const auto kp_path = td.file("other_kps.txt");
  atomic_write_file(kp_path, "99 face 1 1\n");
  const auto result = run_eval(td.file("parts"), kp_path, 5);
  CHECK(result.frames_evaluated == 0);
  for (const auto& row : result.rows) CHECK(!row.mean_distance_px.has_value());
}

TEST_CASE("run_mine: identical predictions score zero and select the first k") {
  TempDir td;
  emit_scene(td, scene_config(4));
  const auto labels = td.subdir("labels");
  run_label_pipeline(td.file("frames"), td.file("detections.txt"), labels, PipelineConfig{});

  const auto preds = td.subdir("preds");
  for (const auto& entry : fs::directory_iterator(labels)) {
    const auto name = entry.path().filename().string();
    if (name.rfind("label_", 0) == 0) fs::copy_file(entry.path(), fs::path(preds) / name);
  }

  const auto rows = run_mine((fs::path(labels) / "manifest.txt").string(), preds, 2, 5);
  REQUIRE(rows.size() == 3);
  for (const auto& row : rows) {
    CHECK(!row.error);
    CHECK(row.error_score == 0.0);
  }
  // All scores tie at 0: selection falls to ascending frame index.
  CHECK(rows[0].selected);
  CHECK(rows[1].selected);
  CHECK(!rows[2].selected);

  const auto csv_path = td.file("mine.csv");
  write_mining_csv(rows, csv_path);
  const std::string csv = read_file(csv_path);
  CHECK(csv == "frame_index,error_score,selected\n0,0,1\n1,0,1\n2,0,0\n");
}

TEST_CASE("run_mine: a missing prediction becomes an error row, not a failure") {
  TempDir td;
  emit_scene(td, scene_config(3));
  const auto labels = td.subdir("labels");
  run_label_pipeline(td.file("frames"), td.file("detections.txt"), labels, PipelineConfig{});

  const auto preds = td.subdir("preds");
  fs::copy_file(fs::path(labels) / "label_000000.pgm", fs::path(preds) / "label_000000.pgm");
  // label_000001.pgm intentionally absent.

  const auto rows = run_mine((fs::path(labels) / "manifest.txt").string(), preds, 5, 5);
  REQUIRE(rows.size() == 2);
  CHECK(!rows[0].error);
  CHECK(rows[0].selected);
  CHECK(rows[1].error);
  CHECK(!rows[1].selected);
  CHECK(!rows[1].error_detail.empty());

  const auto csv_path = td.file("mine.csv");
  write_mining_csv(rows, csv_path);
  CHECK(read_file(csv_path) == "frame_index,error_score,selected\n0,0,1\n1,error,0\n");
}

TEST_CASE("parallel_for_indexed: covers every index exactly once") {
  std::vector<std::atomic<int>> hits(257);
  for (auto& h : hits) h = 0;
  parallel_for_indexed(8, 257, [&](int i) { hits[static_cast<std::size_t>(i)]++; });
  for (const auto& h : hits) CHECK(h == 1);
}

TEST_CASE("parallel_for_indexed: rethrows the exception from the lowest index") {
  auto thrower = [](int i) {
    if (i == 3 || i == 7) throw std::runtime_error("boom at " + std::to_string(i));
  };
  CHECK_THROWS_WITH(parallel_for_indexed(4, 16, thrower), "boom at 3");
  CHECK_THROWS_WITH(parallel_for_indexed(1, 16, thrower), "boom at 3");
}
