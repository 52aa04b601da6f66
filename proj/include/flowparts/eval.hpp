#pragma once

#include <optional>
#include <string>
#include <vector>

#include "flowparts/types.hpp"

namespace flowparts {

// Which ground-truth joints score against which part id. A joint appears in
// at most one part's list.
struct PartJointMapping {
  struct Entry {
    int part = 0;
    std::vector<Joint> joints;
  };
  std::vector<Entry> entries;

  // For 5 parts: 1=face, 2=shoulder_mid, 3=belly, 4=hip_mid,
  // 5=knee_mid and ankle_mid (both score against the part-5 centroid).
  static PartJointMapping default_for_five_parts();
};

// Arithmetic mean of labeled pixel coordinates; a pixel contributes its
// integer (x, y). Empty part -> nullopt.
std::optional<Point2d> part_centroid(const PartLabelMap& map, int part);

double centroid_distance(const Point2d& c, const Point2d& joint);

// Distances for one frame; pairs are absent when the part has no pixels or
// the joint is unannotated.
struct EvalRecord {
  struct Item {
    int part = 0;
    Joint joint{};
    double distance_px = 0.0;
  };
  int frame_index = 0;
  std::vector<Item> items;
};

EvalRecord make_eval_record(const PartLabelMap& map, const Keypoints& kps,
                            const PartJointMapping& mapping);

// Per-(part, joint) mean distance and contributing-record count. Pairs with
// zero contributions stay missing (mean unset), never 0. Distances are sorted
// before summation so the means are exactly permutation-invariant.
struct ReportRow {
  int part = 0;
  Joint joint{};
  std::optional<double> mean_distance_px;
  int count = 0;
};

std::vector<ReportRow> aggregate_report(const std::vector<EvalRecord>& records,
                                        const PartJointMapping& mapping);

// CSV with header `part,joint,mean_distance_px,count`; missing means print
// as an empty field.
void write_report_csv(const std::vector<ReportRow>& rows, const std::string& path);

}  // namespace flowparts
