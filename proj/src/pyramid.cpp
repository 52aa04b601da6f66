#include "flowparts/pyramid.hpp"

#include <cmath>

#include "flowparts/errors.hpp"

namespace flowparts {

Grid<float> gaussian_blur5(const Grid<float>& image) {
  static constexpr double kKernel[5] = {1.0 / 16, 4.0 / 16, 6.0 / 16, 4.0 / 16, 1.0 / 16};
  const int w = image.width;
  const int h = image.height;
  Grid<double> tmp(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int t = -2; t <= 2; ++t) acc += kKernel[t + 2] * image.at_clamped(x + t, y);
      tmp.at(x, y) = acc;
    }
  }
  Grid<float> out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int t = -2; t <= 2; ++t) acc += kKernel[t + 2] * tmp.at_clamped(x, y + t);
      out.at(x, y) = static_cast<float>(acc);
    }
  }
  return out;
}

Grid<float> resample_bilinear(const Grid<float>& image, int out_w, int out_h) {
  if (out_w <= 0 || out_h <= 0) throw ContractError("resample target must be positive");
  Grid<float> out(out_w, out_h);
  const double sx = static_cast<double>(image.width) / out_w;
  const double sy = static_cast<double>(image.height) / out_h;
  for (int y = 0; y < out_h; ++y) {
    const double src_y = (y + 0.5) * sy - 0.5;
    const int y0 = static_cast<int>(std::floor(src_y));
    const double fy = src_y - y0;
    for (int x = 0; x < out_w; ++x) {
      const double src_x = (x + 0.5) * sx - 0.5;
      const int x0 = static_cast<int>(std::floor(src_x));
      const double fx = src_x - x0;
      const double v00 = image.at_clamped(x0, y0);
      const double v10 = image.at_clamped(x0 + 1, y0);
      const double v01 = image.at_clamped(x0, y0 + 1);
      const double v11 = image.at_clamped(x0 + 1, y0 + 1);
      const double top = v00 + (v10 - v00) * fx;
      const double bot = v01 + (v11 - v01) * fx;
      out.at(x, y) = static_cast<float>(top + (bot - top) * fy);
    }
  }
  return out;
}

std::vector<Grid<float>> gaussian_pyramid(const Grid<float>& image, int levels, double scale,
                                          int min_dim) {
  if (levels < 1) throw ContractError("pyramid needs at least one level");
  if (!(scale > 0.0 && scale < 1.0)) throw ContractError("pyramid scale must be in (0,1)");
  std::vector<Grid<float>> pyr;
  pyr.push_back(image);
  for (int level = 1; level < levels; ++level) {
    const int w = static_cast<int>(std::lround(image.width * std::pow(scale, level)));
    const int h = static_cast<int>(std::lround(image.height * std::pow(scale, level)));
    if (w < min_dim || h < min_dim) break;
    pyr.push_back(resample_bilinear(gaussian_blur5(pyr.back()), w, h));
  }
  return pyr;
}

}  // namespace flowparts
