#pragma once

#include <string>
#include <vector>

#include "flowparts/types.hpp"

namespace flowparts {

// Binary PGM (P5), maxval 255. Intensities map v/255 on read and round(l*255)
// on write, so an 8-bit file survives a read/write cycle byte-exactly.
Frame read_pgm(const std::string& path);
void write_pgm(const Frame& frame, const std::string& path);

// Frame files named frame_%06d.pgm; the parsed number becomes Frame::index.
struct FrameFile {
  int index = 0;
  std::string path;
};

// `<stem>_NNNNNN.<ext>` files (six or more digits) in dir, sorted by index
// regardless of directory listing order. Gaps are fine; a duplicate index is
// a ValidationError. Other names are ignored.
std::vector<FrameFile> list_indexed_files(const std::string& dir_path, const std::string& stem,
                                          const std::string& ext);
std::vector<FrameFile> list_frame_files(const std::string& dir_path);
std::vector<Frame> load_frame_sequence(const std::string& dir_path);

// Label maps ride the same P5 container with label values stored verbatim.
// On read every value must be <= parts.
PartLabelMap read_label_map(const std::string& path, int parts);
void write_label_map(const PartLabelMap& map, const std::string& path);

}  // namespace flowparts
