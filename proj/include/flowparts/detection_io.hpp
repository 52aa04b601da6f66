#pragma once

#include <string>
#include <vector>

#include "flowparts/types.hpp"

namespace flowparts {

// One detection per line: `frame_index x0 y0 x1 y1 score`.
// Degenerate boxes (x0>=x1 or y0>=y1) are ValidationErrors naming the line.
// Output sorted by frame_index, ties keep input order.
std::vector<Detection> load_detections(const std::string& path);
void write_detections(const std::vector<Detection>& dets, const std::string& path);

// One joint per line: `frame_index joint_name x y`; unknown names rejected.
// Returned sorted by frame_index, one entry per frame.
std::vector<Keypoints> load_keypoints(const std::string& path);
void write_keypoints(const std::vector<Keypoints>& kps, const std::string& path);

}  // namespace flowparts
