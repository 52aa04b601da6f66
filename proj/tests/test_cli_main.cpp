#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "flowparts/blobs.hpp"
#include "flowparts/io_util.hpp"
#include "flowparts/manifest.hpp"
#include "flowparts/pgm_io.hpp"
#include "test_util.hpp"

namespace fs = std::filesystem;
using flowparts::read_file;

namespace {

struct CmdResult {
  int code = -1;
  std::string out;
  std::string err;
};

// Runs the real binary with stdout/stderr captured.
CmdResult run_cli(const TempDir& td, const std::string& args) {
  const std::string out_path = td.file("_stdout.txt");
  const std::string err_path = td.file("_stderr.txt");
  const std::string cmd =
      std::string(FLOWPARTS_CLI_PATH) + " " + args + " >" + out_path + " 2>" + err_path;
  const int status = std::system(cmd.c_str());
  CmdResult r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = read_file(out_path);
  r.err = read_file(err_path);
  return r;
}

// Small moving-figure scene accepted by the default pipeline.
std::string scene_kv(int frames, double velocity_u = 2.0) {
  std::ostringstream ss;
  ss << "width = 96\nheight = 96\nfigure_x = 24\nfigure_y = 12\n"
     << "figure_w = 40\nfigure_h = 70\nvelocity_u = " << velocity_u
     << "\nvelocity_v = 0\nframes = " << frames << "\n";
  return ss.str();
}

std::string emit_scene(const TempDir& td, const std::string& name, const std::string& kv) {
  const std::string cfg_path = td.file(name + "_scene.cfg");
  flowparts::atomic_write_file(cfg_path, kv);
  const std::string dir = td.file(name);
  const CmdResult r = run_cli(td, "synth " + dir + " --config " + cfg_path);
  REQUIRE(r.code == 0);
  return dir;
}

int count_ok(const std::string& manifest_path, std::size_t* total = nullptr) {
  const auto rows = flowparts::read_manifest(manifest_path);
  if (total) *total = rows.size();
  int ok = 0;
  for (const auto& row : rows) ok += row.status == "ok" ? 1 : 0;
  return ok;
}

}  // namespace

TEST_CASE("cli: usage errors exit 2, help exits 0") {
  TempDir td;
  CHECK(run_cli(td, "").code == 2);                 // a subcommand is required
  CHECK(run_cli(td, "warble").code == 2);           // unknown subcommand
  CHECK(run_cli(td, "--help").code == 0);
  CHECK(run_cli(td, "label --help").code == 0);
  CHECK(run_cli(td, "flow --no-such-flag").code == 2);
  CHECK(run_cli(td, "flow").code == 2);             // missing positional
  CHECK(run_cli(td, "flow " + td.str() + "/missing " + td.str() + "/out").code == 2);
}

TEST_CASE("cli synth: default scene round trips through the loaders") {
  TempDir td;
  const std::string dir = td.file("scene");
  CHECK(run_cli(td, "synth " + dir).code == 0);
  const auto frames = flowparts::load_frame_sequence(dir + "/frames");
  CHECK(frames.size() == 10);
  CHECK(fs::exists(dir + "/flow/flow_000008.flo"));
  CHECK(fs::exists(dir + "/parts/label_000009.pgm"));
  CHECK(fs::exists(dir + "/detections.txt"));
  CHECK(fs::exists(dir + "/keypoints.txt"));
}

TEST_CASE("cli synth: identical seeds give byte-identical scenes, bad config exits 2") {
  TempDir td;
  const std::string a = emit_scene(td, "a", scene_kv(3));
  const std::string b = emit_scene(td, "b", scene_kv(3));
  for (int i = 0; i < 3; ++i) {
    char name[32];
    std::snprintf(name, sizeof(name), "frames/frame_%06d.pgm", i);
    CHECK(read_file(a + "/" + name) == read_file(b + "/" + name));
  }

  const std::string bad = td.file("bad.cfg");
  flowparts::atomic_write_file(bad, "wobble = 3\n");
  CHECK(run_cli(td, "synth " + td.file("c") + " --config " + bad).code == 2);

  flowparts::atomic_write_file(bad, scene_kv(60));  // figure walks out of frame
  CHECK(run_cli(td, "synth " + td.file("c") + " --config " + bad).code == 2);
}

TEST_CASE("cli flow: writes one .flo per pair and rejects single-frame input") {
  TempDir td;
  const std::string scene = emit_scene(td, "scene", scene_kv(3));
  const std::string out = td.file("flow_out");
  CHECK(run_cli(td, "flow " + scene + "/frames " + out).code == 0);
  CHECK(fs::exists(out + "/flow_000000.flo"));
  CHECK(fs::exists(out + "/flow_000001.flo"));
  CHECK(!fs::exists(out + "/flow_000002.flo"));

  const std::string single = td.file("single");
  fs::create_directories(single);
  fs::copy_file(scene + "/frames/frame_000000.pgm", single + "/frame_000000.pgm");
  const CmdResult r = run_cli(td, "flow " + single + " " + td.file("flow_out2"));
  CHECK(r.code == 2);
  CHECK(r.err.find("error:") != std::string::npos);
}

TEST_CASE("cli label: accepts the moving-figure scene end to end") {
  TempDir td;
  const std::string scene = emit_scene(td, "scene", scene_kv(4));
  const std::string out = td.file("labels");
  const CmdResult r =
      run_cli(td, "label " + scene + "/frames " + scene + "/detections.txt " + out);
  CHECK(r.code == 0);
  CHECK(r.err.find("3/3 pairs accepted") != std::string::npos);

  std::size_t total = 0;
  CHECK(count_ok(out + "/manifest.txt", &total) == 3);
  CHECK(total == 3);
  for (int i = 0; i < 3; ++i) {
    char name[32];
    std::snprintf(name, sizeof(name), "label_%06d.pgm", i);
    CHECK(fs::exists(out + "/" + std::string(name)));
  }
}

TEST_CASE("cli label: all-rejected scenes still exit 0") {
  TempDir td;
  const std::string scene = emit_scene(td, "static", scene_kv(3, 0.0));
  const std::string out = td.file("labels");
  const CmdResult r =
      run_cli(td, "label " + scene + "/frames " + scene + "/detections.txt " + out);
  CHECK(r.code == 0);
  CHECK(r.err.find("0/2 pairs accepted") != std::string::npos);

  const auto rows = flowparts::read_manifest(out + "/manifest.txt");
  REQUIRE(rows.size() == 2);
  for (const auto& row : rows) CHECK(row.status == "gate_low");
  CHECK(!fs::exists(out + "/label_000000.pgm"));
}

TEST_CASE("cli label: duplicated detections reject every pair as multi_person") {
  TempDir td;
  const std::string scene = emit_scene(td, "scene", scene_kv(3));
  const std::string dets = read_file(scene + "/detections.txt");
  const std::string doubled_path = td.file("doubled.txt");
  flowparts::atomic_write_file(doubled_path, dets + dets);

  const std::string out = td.file("labels");
  CHECK(run_cli(td, "label " + scene + "/frames " + doubled_path + " " + out).code == 0);
  const auto rows = flowparts::read_manifest(out + "/manifest.txt");
  REQUIRE(rows.size() == 2);
  for (const auto& row : rows) CHECK(row.status == "multi_person");
}

TEST_CASE("cli label: --dump-blobs adds a parseable blob file per accepted pair") {
  TempDir td;
  const std::string scene = emit_scene(td, "scene", scene_kv(2));
  const std::string out = td.file("labels");
  CHECK(run_cli(td, "label " + scene + "/frames " + scene + "/detections.txt " + out +
                        " --dump-blobs")
            .code == 0);
  CHECK(!flowparts::read_blobs(out + "/blobs_000000.txt").empty());
}

TEST_CASE("cli eval: ground-truth labels score within half a band height") {
  TempDir td;
  const std::string scene = emit_scene(td, "scene", scene_kv(3));
  const std::string csv = td.file("report.csv");
  const CmdResult r = run_cli(td, "eval " + scene + "/parts " + scene + "/keypoints.txt " + csv);
  CHECK(r.code == 0);

  std::istringstream in(read_file(csv));
  std::string line;
  REQUIRE(std::getline(in, line));
  CHECK(line == "part,joint,mean_distance_px,count");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    const auto c1 = line.find(',');
    const auto c2 = line.find(',', c1 + 1);
    const auto c3 = line.find(',', c2 + 1);
    const std::string mean = line.substr(c2 + 1, c3 - c2 - 1);
    REQUIRE(!mean.empty());
    CHECK(std::stod(mean) <= 7.0);  // band height 14 -> half band 7
  }
  CHECK(rows == 6);
}

TEST_CASE("cli eval: disjoint frames warn and leave the report all-missing") {
  TempDir td;
  const std::string scene = emit_scene(td, "scene", scene_kv(2));
  const std::string kps = td.file("far_kps.txt");
  flowparts::atomic_write_file(kps, "57 face 1 2\n");
  const std::string csv = td.file("report.csv");
  const CmdResult r = run_cli(td, "eval " + scene + "/parts " + kps + " " + csv);
  CHECK(r.code == 0);
  CHECK(r.err.find("warning") != std::string::npos);

  std::istringstream in(read_file(csv));
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) CHECK(line.find(",,0") != std::string::npos);
}

TEST_CASE("cli mine: identical predictions score zero; -k is mandatory") {
  TempDir td;
  const std::string scene = emit_scene(td, "scene", scene_kv(4));
  const std::string out = td.file("labels");
  REQUIRE(run_cli(td, "label " + scene + "/frames " + scene + "/detections.txt " + out).code == 0);

  const std::string preds = td.file("preds");
  fs::create_directories(preds);
  for (const auto& entry : fs::directory_iterator(out)) {
    const auto name = entry.path().filename().string();
    if (name.rfind("label_", 0) == 0) fs::copy_file(entry.path(), preds + "/" + name);
  }

  const std::string csv = td.file("mine.csv");
  CHECK(run_cli(td, "mine " + out + "/manifest.txt " + preds + " " + csv).code == 2);
  CHECK(run_cli(td, "mine " + out + "/manifest.txt " + preds + " " + csv + " -k 2").code == 0);
  CHECK(read_file(csv) == "frame_index,error_score,selected\n0,0,1\n1,0,1\n2,0,0\n");
}

TEST_CASE("cli: --print-config is deterministic and follows flag > file > default") {
  TempDir td;
  const CmdResult defaults = run_cli(td, "label --print-config");
  CHECK(defaults.code == 0);
  CHECK(defaults.out.find("gate_low = 0.1\n") != std::string::npos);
  CHECK(defaults.out.find("gate_high = 0.7\n") != std::string::npos);
  CHECK(defaults.out.find("parts = 5\n") != std::string::npos);
  CHECK(defaults.out.find("eps = 0.5\n") != std::string::npos);
  CHECK(run_cli(td, "label --print-config").out == defaults.out);

  const std::string cfg = td.file("pipe.cfg");
  flowparts::atomic_write_file(cfg, "eps = 0.75\njobs = 4\n");
  const CmdResult from_file = run_cli(td, "label --print-config --config " + cfg);
  CHECK(from_file.out.find("eps = 0.75\n") != std::string::npos);
  CHECK(from_file.out.find("jobs = 4\n") != std::string::npos);

  const CmdResult flag_wins =
      run_cli(td, "label --print-config --config " + cfg + " --eps 0.9");
  CHECK(flag_wins.out.find("eps = 0.9\n") != std::string::npos);
  CHECK(flag_wins.out.find("jobs = 4\n") != std::string::npos);  // file still beats defaults

  const std::string bad_cfg = td.file("bad.cfg");
  flowparts::atomic_write_file(bad_cfg, "epz = 1\n");
  CHECK(run_cli(td, "label --print-config --config " + bad_cfg).code == 2);
}

TEST_CASE("cli label: --jobs count never changes the output bytes") {
  TempDir td;
  const std::string scene = emit_scene(td, "scene", scene_kv(4));
  const std::string out1 = td.file("j1");
  const std::string out4 = td.file("j4");
  REQUIRE(run_cli(td, "label " + scene + "/frames " + scene + "/detections.txt " + out1 +
                          " --jobs 1")
              .code == 0);
  REQUIRE(run_cli(td, "label " + scene + "/frames " + scene + "/detections.txt " + out4 +
                          " --jobs 4")
              .code == 0);

  int compared = 0;
  for (const auto& entry : fs::directory_iterator(out1)) {
    const auto name = entry.path().filename().string();
    std::string a = read_file(entry.path().string());
    std::string b = read_file(out4 + "/" + name);
    if (name == "manifest.txt") {
      std::string::size_type pos;
      while ((pos = a.find(out1)) != std::string::npos) a.replace(pos, out1.size(), "@");
      while ((pos = b.find(out4)) != std::string::npos) b.replace(pos, out4.size(), "@");
    }
    CHECK(a == b);
    ++compared;
  }
  CHECK(compared == 4);
}
