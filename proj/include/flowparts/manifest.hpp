#pragma once

#include <string>
#include <vector>

#include "flowparts/types.hpp"

namespace flowparts {

// One line per processed frame pair:
// `frame_index image_path label_path x0 y0 x1 y1 status moving_fraction blob_count`
// status is `ok` or a rejection reason; rejected rows carry `-` for the
// label path and a zero box.
struct ManifestRow {
  int frame_index = 0;
  std::string image_path;
  std::string label_path = "-";
  BBox bbox;
  std::string status;
  double moving_fraction = 0.0;
  int blob_count = 0;
};

void write_manifest(const std::vector<ManifestRow>& rows, const std::string& path);
std::vector<ManifestRow> read_manifest(const std::string& path);

}  // namespace flowparts
