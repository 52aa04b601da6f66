#pragma once

#include <vector>

#include "flowparts/types.hpp"

namespace flowparts {

// Level i has dimensions round(dim * scale^i) relative to the input.
// A 5-tap Gaussian ([1 4 6 4 1]/16, clamped borders) runs before each
// downsampling. The list stops early once a dimension would drop below
// min_dim, so the coarsest level always fits an expansion window.
std::vector<Grid<float>> gaussian_pyramid(const Grid<float>& image, int levels, double scale,
                                          int min_dim = 5);

// Separable 5-tap Gaussian blur with clamp-to-edge borders.
Grid<float> gaussian_blur5(const Grid<float>& image);

// Bilinear resample with pixel-center alignment and clamped borders.
Grid<float> resample_bilinear(const Grid<float>& image, int out_w, int out_h);

}  // namespace flowparts
