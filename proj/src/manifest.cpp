#include "flowparts/manifest.hpp"

#include "flowparts/errors.hpp"
#include "flowparts/io_util.hpp"
#include "flowparts/supervise.hpp"
#include "text_parse.hpp"

namespace flowparts {

void write_manifest(const std::vector<ManifestRow>& rows, const std::string& path) {
  std::string out;
  for (const ManifestRow& r : rows) {
    out += std::to_string(r.frame_index) + " " + r.image_path + " " + r.label_path + " " +
           std::to_string(r.bbox.x0) + " " + std::to_string(r.bbox.y0) + " " +
           std::to_string(r.bbox.x1) + " " + std::to_string(r.bbox.y1) + " " + r.status + " ";
    detail::append_double(out, r.moving_fraction);
    out += " " + std::to_string(r.blob_count) + "\n";
  }
  atomic_write_file(path, out);
}

std::vector<ManifestRow> read_manifest(const std::string& path) {
  std::vector<ManifestRow> rows;
  detail::for_each_line(path, [&](const std::vector<std::string>& toks, int line_no) {
    const std::string where = path + ":" + std::to_string(line_no);
    if (toks.size() != 10)
      throw FormatError(where + ": expected 10 fields, got " + std::to_string(toks.size()));
    ManifestRow r;
    r.frame_index = detail::parse_int(toks[0], path, line_no);
    r.image_path = toks[1];
    r.label_path = toks[2];
    r.bbox = BBox{detail::parse_int(toks[3], path, line_no), detail::parse_int(toks[4], path, line_no),
                  detail::parse_int(toks[5], path, line_no), detail::parse_int(toks[6], path, line_no)};
    r.status = toks[7];
    if (r.status != "ok" && !rejection_from_name(r.status))
      throw ValidationError(where + ": unknown status '" + r.status + "'");
    r.moving_fraction = detail::parse_double(toks[8], path, line_no);
    r.blob_count = detail::parse_int(toks[9], path, line_no);
    rows.push_back(std::move(r));
  });
  return rows;
}

}  // namespace flowparts
