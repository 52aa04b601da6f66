#pragma once

#include <iosfwd>
#include <map>
#include <string>

#include "flowparts/farneback.hpp"
#include "flowparts/mean_shift.hpp"

namespace flowparts {

// Every tunable of the pipeline, with the built-in defaults.
struct PipelineConfig {
  FlowParams flow;
  MeanShiftParams mean_shift;
  double eps = 0.5;         // moving-pixel magnitude threshold, px
  double gate_low = 0.10;   // accept iff gate_low < fraction < gate_high
  double gate_high = 0.70;
  int parts = 5;            // horizontal bands per person box
  double min_overlap = 0.5; // blob-fraction overlap with the person box
  int jobs = 1;             // frame-pair parallelism

  void validate() const;
};

// `key = value` lines, '#' comments, blank lines ignored.
// Returned in file order; a repeated key keeps the last value.
std::map<std::string, std::string> read_config_file(const std::string& path);

// Applies known keys onto cfg; unknown key or unparseable value throws
// ValidationError. Callers layering flags on top apply them afterwards.
void apply_config(PipelineConfig& cfg, const std::map<std::string, std::string>& kv);

// Deterministic `key = value` dump, readable back by read_config_file.
void print_config(std::ostream& os, const PipelineConfig& cfg);

}  // namespace flowparts
