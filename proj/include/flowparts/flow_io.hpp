#pragma once

#include <string>

#include "flowparts/types.hpp"

namespace flowparts {

// Middlebury-compatible .flo layout: magic "PIEH", little-endian int32
// width and height, then row-major interleaved little-endian float32 (u,v).
// Round trips are bit-exact for finite fields.
void write_flow(const FlowField& field, const std::string& path);
FlowField read_flow(const std::string& path);

}  // namespace flowparts
