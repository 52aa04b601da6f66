#include "flowparts/eval.hpp"

#include <algorithm>
#include <cmath>

#include "flowparts/errors.hpp"
#include "flowparts/io_util.hpp"
#include "text_parse.hpp"

namespace flowparts {

PartJointMapping PartJointMapping::default_for_five_parts() {
  PartJointMapping m;
  m.entries = {{1, {Joint::face}},
               {2, {Joint::shoulder_mid}},
               {3, {Joint::belly}},
               {4, {Joint::hip_mid}},
               {5, {Joint::knee_mid, Joint::ankle_mid}}};
  return m;
}

std::optional<Point2d> part_centroid(const PartLabelMap& map, int part) {
  if (part < 1 || part > map.parts) throw ContractError("part id out of range");
  double sx = 0.0;
  double sy = 0.0;
  long n = 0;
  for (int y = 0; y < map.height; ++y) {
    for (int x = 0; x < map.width; ++x) {
      if (map.at(x, y) != part) continue;
      sx += x;
      sy += y;
      ++n;
    }
  }
  if (n == 0) return std::nullopt;
  return Point2d{sx / static_cast<double>(n), sy / static_cast<double>(n)};
}

double centroid_distance(const Point2d& c, const Point2d& joint) {
  if (!std::isfinite(c.x) || !std::isfinite(c.y) || !std::isfinite(joint.x) ||
      !std::isfinite(joint.y))
    throw ContractError("non-finite coordinate");
  const double dx = c.x - joint.x;
  const double dy = c.y - joint.y;
  return std::sqrt(dx * dx + dy * dy);
}

EvalRecord make_eval_record(const PartLabelMap& map, const Keypoints& kps,
                            const PartJointMapping& mapping) {
  EvalRecord rec;
  rec.frame_index = map.frame_index;
  for (const auto& entry : mapping.entries) {
    const auto centroid = part_centroid(map, entry.part);
    if (!centroid) continue;
    for (Joint j : entry.joints) {
      const auto& p = kps.joint(j);
      if (!p) continue;
      rec.items.push_back({entry.part, j, centroid_distance(*centroid, *p)});
    }
  }
  return rec;
}

std::vector<ReportRow> aggregate_report(const std::vector<EvalRecord>& records,
                                        const PartJointMapping& mapping) {
  std::vector<ReportRow> rows;
  for (const auto& entry : mapping.entries) {
    for (Joint j : entry.joints) {
      std::vector<double> dists;
      for (const EvalRecord& rec : records)
        for (const auto& item : rec.items)
          if (item.part == entry.part && item.joint == j) dists.push_back(item.distance_px);
      ReportRow row;
      row.part = entry.part;
      row.joint = j;
      row.count = static_cast<int>(dists.size());
      if (!dists.empty()) {
        // Fixed summation order regardless of record order.
        std::sort(dists.begin(), dists.end());
        double sum = 0.0;
        for (double d : dists) sum += d;
        row.mean_distance_px = sum / static_cast<double>(dists.size());
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

void write_report_csv(const std::vector<ReportRow>& rows, const std::string& path) {
  std::string out = "part,joint,mean_distance_px,count\n";
  for (const ReportRow& r : rows) {
    out += std::to_string(r.part) + "," + joint_name(r.joint) + ",";
    if (r.mean_distance_px) detail::append_double(out, *r.mean_distance_px);
    out += "," + std::to_string(r.count) + "\n";
  }
  atomic_write_file(path, out);
}

}  // namespace flowparts
