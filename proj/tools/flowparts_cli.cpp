#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "flowparts/config.hpp"
#include "flowparts/errors.hpp"
#include "flowparts/pipeline.hpp"
#include "flowparts/synth.hpp"

namespace {

using flowparts::PipelineConfig;

// Every pipeline tunable as a flag. Flags beat the config file, which beats
// the built-in defaults, so parsed values are staged here and only copied
// onto the effective config when the flag was actually given.
struct Tunables {
  PipelineConfig staged;
  struct Bound {
    CLI::Option* opt;
    std::function<void(PipelineConfig&, const PipelineConfig&)> copy;
  };
  std::vector<Bound> bound;

  template <typename T>
  void add(CLI::App& cmd, const std::string& flag, T PipelineConfig::* member,
           const std::string& help) {
    CLI::Option* opt = cmd.add_option(flag, staged.*member, help)->capture_default_str();
    bound.push_back({opt, [member](PipelineConfig& dst, const PipelineConfig& src) {
                       dst.*member = src.*member;
                     }});
  }
  template <typename S, typename T>
  void add(CLI::App& cmd, const std::string& flag, S PipelineConfig::* sub, T S::* member,
           const std::string& help) {
    CLI::Option* opt = cmd.add_option(flag, staged.*sub.*member, help)->capture_default_str();
    bound.push_back({opt, [sub, member](PipelineConfig& dst, const PipelineConfig& src) {
                       dst.*sub.*member = src.*sub.*member;
                     }});
  }

  void add_all(CLI::App& cmd) {
    add(cmd, "--pyramid-levels", &PipelineConfig::flow, &flowparts::FlowParams::pyramid_levels,
        "pyramid levels for coarse-to-fine flow");
    add(cmd, "--pyramid-scale", &PipelineConfig::flow, &flowparts::FlowParams::pyramid_scale,
        "downsampling factor between levels, in (0,1)");
    add(cmd, "--window-size", &PipelineConfig::flow, &flowparts::FlowParams::window_size,
        "odd box window for flow accumulation");
    add(cmd, "--iterations", &PipelineConfig::flow, &flowparts::FlowParams::iterations,
        "refinement passes per pyramid level");
    add(cmd, "--poly-n", &PipelineConfig::flow, &flowparts::FlowParams::poly_n,
        "odd polynomial-expansion neighborhood side");
    add(cmd, "--poly-sigma", &PipelineConfig::flow, &flowparts::FlowParams::poly_sigma,
        "Gaussian applicability sigma for the expansion");
    add(cmd, "--spatial-bandwidth", &PipelineConfig::mean_shift,
        &flowparts::MeanShiftParams::spatial_bandwidth, "mean-shift spatial bandwidth, px");
    add(cmd, "--range-bandwidth", &PipelineConfig::mean_shift,
        &flowparts::MeanShiftParams::range_bandwidth, "mean-shift flow bandwidth");
    add(cmd, "--max-iterations", &PipelineConfig::mean_shift,
        &flowparts::MeanShiftParams::max_iterations, "mean-shift iteration cap");
    add(cmd, "--convergence-tol", &PipelineConfig::mean_shift,
        &flowparts::MeanShiftParams::convergence_tol, "mean-shift step-norm stop threshold");
    add(cmd, "--merge-radius", &PipelineConfig::mean_shift,
        &flowparts::MeanShiftParams::merge_radius, "mode-merging radius, normalized feature space");
    add(cmd, "--min-blob-size", &PipelineConfig::mean_shift,
        &flowparts::MeanShiftParams::min_blob_size, "minimum blob size, px");
    add(cmd, "--eps", &PipelineConfig::eps, "moving-pixel flow magnitude threshold, px");
    add(cmd, "--gate-low", &PipelineConfig::gate_low, "lower moving-fraction gate (strict)");
    add(cmd, "--gate-high", &PipelineConfig::gate_high, "upper moving-fraction gate (strict)");
    add(cmd, "--parts", &PipelineConfig::parts, "horizontal part bands (1, 3, 5 or 7)");
    add(cmd, "--min-overlap", &PipelineConfig::min_overlap,
        "blob fraction inside the person box to keep it");
    add(cmd, "--jobs", &PipelineConfig::jobs, "frame-pair worker threads");
  }

  void overlay(PipelineConfig& cfg) const {
    for (const Bound& b : bound)
      if (b.opt->count() > 0) b.copy(cfg, staged);
  }
};

// flags > config file > defaults.
PipelineConfig effective_config(const std::string& config_path, const Tunables& tunables) {
  PipelineConfig cfg;
  if (!config_path.empty())
    flowparts::apply_config(cfg, flowparts::read_config_file(config_path));
  tunables.overlay(cfg);
  return cfg;
}

int require_arg(const std::string& value, const char* what) {
  if (!value.empty()) return 0;
  std::cerr << "error: missing " << what << " (see --help)\n";
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"flowparts: dense part-label supervision from motion"};
  app.require_subcommand(1);

  // flow
  auto* flow_cmd = app.add_subcommand("flow", "dense optical flow per consecutive frame pair");
  std::string flow_frames, flow_out, flow_config;
  bool flow_print = false;
  flow_cmd->add_option("frames_dir", flow_frames, "directory of frame_NNNNNN.pgm files");
  flow_cmd->add_option("out_dir", flow_out, "output directory for flow_NNNNNN.flo files");
  flow_cmd->add_option("--config", flow_config, "key = value config file");
  flow_cmd->add_flag("--print-config", flow_print, "dump the effective config and exit");
  Tunables flow_tunables;
  flow_tunables.add_all(*flow_cmd);

  // label
  auto* label_cmd = app.add_subcommand("label", "generate part label maps and a manifest");
  std::string label_frames, label_dets, label_out, label_config;
  bool label_print = false;
  bool label_dump_blobs = false;
  label_cmd->add_option("frames_dir", label_frames, "directory of frame_NNNNNN.pgm files");
  label_cmd->add_option("detections", label_dets, "person detections text file");
  label_cmd->add_option("out_dir", label_out, "output directory for labels and manifest.txt");
  label_cmd->add_option("--config", label_config, "key = value config file");
  label_cmd->add_flag("--print-config", label_print, "dump the effective config and exit");
  label_cmd->add_flag("--dump-blobs", label_dump_blobs, "also write blobs_NNNNNN.txt per accepted pair");
  Tunables label_tunables;
  label_tunables.add_all(*label_cmd);

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "centroid-distance report for label maps");
  std::string eval_labels, eval_kps, eval_csv;
  int eval_parts = 5;
  eval_cmd->add_option("labels_dir", eval_labels, "directory of label_NNNNNN.pgm files");
  eval_cmd->add_option("keypoints", eval_kps, "ground-truth keypoints text file");
  eval_cmd->add_option("out_csv", eval_csv, "report CSV path");
  eval_cmd->add_option("--parts", eval_parts, "part count of the label maps")->capture_default_str();

  // mine
  auto* mine_cmd = app.add_subcommand("mine", "hard-mining selection from prediction disagreement");
  std::string mine_manifest, mine_preds, mine_csv;
  int mine_k = -1;
  int mine_parts = 5;
  mine_cmd->add_option("manifest", mine_manifest, "manifest.txt from the label step");
  mine_cmd->add_option("predictions_dir", mine_preds, "predicted label maps, same basenames");
  mine_cmd->add_option("out_csv", mine_csv, "selection CSV path");
  mine_cmd->add_option("-k,--top-k", mine_k, "number of samples to select");
  mine_cmd->add_option("--parts", mine_parts, "part count of the label maps")->capture_default_str();

  // synth
  auto* synth_cmd = app.add_subcommand("synth", "emit a synthetic scene with ground truth");
  std::string synth_out, synth_config;
  synth_cmd->add_option("out_dir", synth_out, "output directory for the scene");
  synth_cmd->add_option("--config", synth_config, "key = value scene description");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);  // help text, exit 0
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (app.got_subcommand(flow_cmd)) {
      const PipelineConfig cfg = effective_config(flow_config, flow_tunables);
      if (flow_print) {
        flowparts::print_config(std::cout, cfg);
        return 0;
      }
      if (int rc = require_arg(flow_frames, "frames_dir")) return rc;
      if (int rc = require_arg(flow_out, "out_dir")) return rc;
      flowparts::run_flow_pipeline(flow_frames, flow_out, cfg);
      return 0;
    }
    if (app.got_subcommand(label_cmd)) {
      const PipelineConfig cfg = effective_config(label_config, label_tunables);
      if (label_print) {
        flowparts::print_config(std::cout, cfg);
        return 0;
      }
      if (int rc = require_arg(label_frames, "frames_dir")) return rc;
      if (int rc = require_arg(label_dets, "detections")) return rc;
      if (int rc = require_arg(label_out, "out_dir")) return rc;
      const auto rows =
          flowparts::run_label_pipeline(label_frames, label_dets, label_out, cfg, label_dump_blobs);
      int accepted = 0;
      for (const auto& row : rows) accepted += row.status == "ok" ? 1 : 0;
      std::cerr << "label: " << accepted << "/" << rows.size() << " pairs accepted\n";
      return 0;
    }
    if (app.got_subcommand(eval_cmd)) {
      if (int rc = require_arg(eval_labels, "labels_dir")) return rc;
      if (int rc = require_arg(eval_kps, "keypoints")) return rc;
      if (int rc = require_arg(eval_csv, "out_csv")) return rc;
      const auto result = flowparts::run_eval(eval_labels, eval_kps, eval_parts);
      if (result.frames_evaluated == 0)
        std::cerr << "warning: no label map matched a keypoint frame; report is all-missing\n";
      flowparts::write_report_csv(result.rows, eval_csv);
      return 0;
    }
    if (app.got_subcommand(mine_cmd)) {
      if (int rc = require_arg(mine_manifest, "manifest")) return rc;
      if (int rc = require_arg(mine_preds, "predictions_dir")) return rc;
      if (int rc = require_arg(mine_csv, "out_csv")) return rc;
      if (mine_k < 0) {
        std::cerr << "error: -k/--top-k is required and must be >= 0\n";
        return 2;
      }
      const auto rows = flowparts::run_mine(mine_manifest, mine_preds, mine_k, mine_parts);
      for (const auto& row : rows)
        if (row.error)
          std::cerr << "warning: frame " << row.frame_index << " excluded: " << row.error_detail
                    << "\n";
      flowparts::write_mining_csv(rows, mine_csv);
      return 0;
    }
    if (app.got_subcommand(synth_cmd)) {
      if (int rc = require_arg(synth_out, "out_dir")) return rc;
      flowparts::SynthConfig cfg;
      if (!synth_config.empty())
        cfg = flowparts::synth_config_from_kv(flowparts::read_config_file(synth_config));
      const flowparts::SynthScene scene = flowparts::render_sequence(cfg);
      flowparts::write_scene(scene, synth_out);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;  // unreachable: a subcommand is required
}
