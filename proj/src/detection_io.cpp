#include "flowparts/detection_io.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "flowparts/errors.hpp"
#include "flowparts/io_util.hpp"
#include "text_parse.hpp"

namespace flowparts {

using detail::append_double;
using detail::for_each_line;
using detail::parse_double;
using detail::parse_int;

std::vector<Detection> load_detections(const std::string& path) {
  std::vector<Detection> dets;
  for_each_line(path, [&](const std::vector<std::string>& toks, int line_no) {
    if (toks.size() != 6)
      throw FormatError(path + ":" + std::to_string(line_no) + ": expected 6 fields, got " +
                        std::to_string(toks.size()));
    Detection d;
    d.frame_index = parse_int(toks[0], path, line_no);
    d.bbox = BBox{parse_int(toks[1], path, line_no), parse_int(toks[2], path, line_no),
                  parse_int(toks[3], path, line_no), parse_int(toks[4], path, line_no)};
    d.score = parse_double(toks[5], path, line_no);
    if (!d.bbox.valid())
      throw ValidationError(path + ":" + std::to_string(line_no) + ": degenerate box");
    dets.push_back(d);
  });
  std::stable_sort(dets.begin(), dets.end(),
                   [](const Detection& a, const Detection& b) { return a.frame_index < b.frame_index; });
  return dets;
}

void write_detections(const std::vector<Detection>& dets, const std::string& path) {
  std::string out;
  for (const Detection& d : dets) {
    out += std::to_string(d.frame_index) + " " + std::to_string(d.bbox.x0) + " " +
           std::to_string(d.bbox.y0) + " " + std::to_string(d.bbox.x1) + " " +
           std::to_string(d.bbox.y1) + " ";
    append_double(out, d.score);
    out += "\n";
  }
  atomic_write_file(path, out);
}

std::vector<Keypoints> load_keypoints(const std::string& path) {
  std::map<int, Keypoints> by_frame;
  for_each_line(path, [&](const std::vector<std::string>& toks, int line_no) {
    if (toks.size() != 4)
      throw FormatError(path + ":" + std::to_string(line_no) + ": expected 4 fields, got " +
                        std::to_string(toks.size()));
    const int frame = parse_int(toks[0], path, line_no);
    const auto joint = joint_from_name(toks[1]);
    if (!joint)
      throw ValidationError(path + ":" + std::to_string(line_no) + ": unknown joint name '" +
                            toks[1] + "'");
    const double x = parse_double(toks[2], path, line_no);
    const double y = parse_double(toks[3], path, line_no);
    if (!std::isfinite(x) || !std::isfinite(y))
      throw ValidationError(path + ":" + std::to_string(line_no) + ": non-finite coordinate");
    auto& kp = by_frame[frame];
    kp.frame_index = frame;
    kp.set(*joint, Point2d{x, y});
  });
  std::vector<Keypoints> out;
  out.reserve(by_frame.size());
  for (auto& [frame, kp] : by_frame) out.push_back(kp);
  return out;
}

void write_keypoints(const std::vector<Keypoints>& kps, const std::string& path) {
  std::string out;
  for (const Keypoints& kp : kps) {
    for (int j = 0; j < kJointCount; ++j) {
      const auto& p = kp.joints[j];
      if (!p) continue;
      out += std::to_string(kp.frame_index) + " " + joint_name(static_cast<Joint>(j)) + " ";
      append_double(out, p->x);
      out += " ";
      append_double(out, p->y);
      out += "\n";
    }
  }
  atomic_write_file(path, out);
}

}  // namespace flowparts
