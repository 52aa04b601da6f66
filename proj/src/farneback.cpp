#include "flowparts/farneback.hpp"

#include <algorithm>
#include <cmath>

#include "flowparts/errors.hpp"
#include "flowparts/pyramid.hpp"

namespace flowparts {

void FlowParams::validate() const {
  if (pyramid_levels < 1) throw ContractError("pyramid_levels must be >= 1");
  if (!(pyramid_scale > 0.0 && pyramid_scale < 1.0))
    throw ContractError("pyramid_scale must be in (0,1)");
  if (window_size < 1 || window_size % 2 == 0)
    throw ContractError("window_size must be odd and positive");
  if (iterations < 1) throw ContractError("iterations must be >= 1");
  if (poly_n < 1 || poly_n % 2 == 0) throw ContractError("poly_n must be odd and positive");
  if (!(poly_sigma > 0.0)) throw ContractError("poly_sigma must be positive");
}

namespace {

// Sliding box sum with clamp-to-edge replication, horizontal then vertical.
void box_sum_inplace(Grid<double>& img, int window) {
  const int r = window / 2;
  const int w = img.width;
  const int h = img.height;
  std::vector<double> row(static_cast<std::size_t>(std::max(w, h)));
  for (int y = 0; y < h; ++y) {
    double sum = 0.0;
    for (int t = -r; t <= r; ++t) sum += img.at_clamped(t, y);
    row[0] = sum;
    for (int x = 1; x < w; ++x) {
      sum += img.at_clamped(x + r, y) - img.at_clamped(x - 1 - r, y);
      row[x] = sum;
    }
    for (int x = 0; x < w; ++x) img.at(x, y) = row[x];
  }
  for (int x = 0; x < w; ++x) {
    double sum = 0.0;
    for (int t = -r; t <= r; ++t) sum += img.at_clamped(x, t);
    row[0] = sum;
    for (int y = 1; y < h; ++y) {
      sum += img.at_clamped(x, y + r) - img.at_clamped(x, y - 1 - r);
      row[y] = sum;
    }
    for (int y = 0; y < h; ++y) img.at(x, y) = row[y];
  }
}

double bilinear(const Grid<double>& g, double x, double y) {
  const int x0 = static_cast<int>(std::floor(x));
  const int y0 = static_cast<int>(std::floor(y));
  const double fx = x - x0;
  const double fy = y - y0;
  const double v00 = g.at_clamped(x0, y0);
  const double v10 = g.at_clamped(x0 + 1, y0);
  const double v01 = g.at_clamped(x0, y0 + 1);
  const double v11 = g.at_clamped(x0 + 1, y0 + 1);
  const double top = v00 + (v10 - v00) * fx;
  const double bot = v01 + (v11 - v01) * fx;
  return top + (bot - top) * fy;
}

struct FlowPlanes {
  Grid<double> u, v;
  FlowPlanes(int w, int h) : u(w, h), v(w, h) {}
};

// One displacement refinement pass at a single pyramid level. The current
// displacement warps the next frame's expansion (bilinear coefficient
// sampling, clamped), the averaged constraint A*d = db is box-accumulated
// over the window, and the damped 2x2 system is solved per pixel.
FlowPlanes refine_once(const PolyExpansion& e1, const PolyExpansion& e2, const FlowPlanes& d,
                       int window) {
  const int w = e1.width;
  const int h = e1.height;
  Grid<double> g11(w, h), g12(w, h), g22(w, h), h1(w, h), h2(w, h);

  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double du = d.u.at(x, y);
      const double dv = d.v.at(x, y);
      const double tx = std::clamp(x + du, 0.0, static_cast<double>(w - 1));
      const double ty = std::clamp(y + dv, 0.0, static_cast<double>(h - 1));

      const double m11 = 0.5 * (e1.a11.at(x, y) + bilinear(e2.a11, tx, ty));
      const double m12 = 0.5 * (e1.a12.at(x, y) + bilinear(e2.a12, tx, ty));
      const double m22 = 0.5 * (e1.a22.at(x, y) + bilinear(e2.a22, tx, ty));
      // db carries the prior displacement, so the solve returns the total
      // displacement rather than an increment.
      const double db1 =
          -0.5 * (bilinear(e2.b1, tx, ty) - e1.b1.at(x, y)) + m11 * du + m12 * dv;
      const double db2 =
          -0.5 * (bilinear(e2.b2, tx, ty) - e1.b2.at(x, y)) + m12 * du + m22 * dv;

      g11.at(x, y) = m11 * m11 + m12 * m12;
      g12.at(x, y) = m12 * (m11 + m22);
      g22.at(x, y) = m12 * m12 + m22 * m22;
      h1.at(x, y) = m11 * db1 + m12 * db2;
      h2.at(x, y) = m12 * db1 + m22 * db2;
    }
  }

  box_sum_inplace(g11, window);
  box_sum_inplace(g12, window);
  box_sum_inplace(g22, window);
  box_sum_inplace(h1, window);
  box_sum_inplace(h2, window);

  FlowPlanes out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double lambda = 1e-3 * (g11.at(x, y) + g22.at(x, y)) / 2.0 + 1e-12;
      const double a = g11.at(x, y) + lambda;
      const double c = g22.at(x, y) + lambda;
      const double b = g12.at(x, y);
      const double det = a * c - b * b;
      out.u.at(x, y) = (c * h1.at(x, y) - b * h2.at(x, y)) / det;
      out.v.at(x, y) = (a * h2.at(x, y) - b * h1.at(x, y)) / det;
    }
  }
  return out;
}

FlowPlanes upsample_flow(const FlowPlanes& d, int out_w, int out_h, double inv_scale) {
  FlowPlanes out(out_w, out_h);
  const double sx = static_cast<double>(d.u.width) / out_w;
  const double sy = static_cast<double>(d.u.height) / out_h;
  for (int y = 0; y < out_h; ++y) {
    const double src_y = (y + 0.5) * sy - 0.5;
    for (int x = 0; x < out_w; ++x) {
      const double src_x = (x + 0.5) * sx - 0.5;
      out.u.at(x, y) = bilinear(d.u, src_x, src_y) * inv_scale;
      out.v.at(x, y) = bilinear(d.v, src_x, src_y) * inv_scale;
    }
  }
  return out;
}

}  // namespace

FlowField farneback_flow(const Grid<float>& prev, const Grid<float>& next,
                         const FlowParams& params) {
  params.validate();
  if (prev.width != next.width || prev.height != next.height)
    throw ContractError("frame dimensions differ");
  if (prev.width < params.poly_n || prev.height < params.poly_n)
    throw ContractError("frames smaller than the expansion window");

  const auto pyr_prev = gaussian_pyramid(prev, params.pyramid_levels, params.pyramid_scale,
                                         params.poly_n);
  const auto pyr_next = gaussian_pyramid(next, params.pyramid_levels, params.pyramid_scale,
                                         params.poly_n);
  const int levels = static_cast<int>(pyr_prev.size());

  FlowPlanes d(pyr_prev[levels - 1].width, pyr_prev[levels - 1].height);
  for (int level = levels - 1; level >= 0; --level) {
    const Grid<float>& f1 = pyr_prev[level];
    const Grid<float>& f2 = pyr_next[level];
    if (d.u.width != f1.width || d.u.height != f1.height)
      d = upsample_flow(d, f1.width, f1.height, 1.0 / params.pyramid_scale);
    const PolyExpansion e1 = polynomial_expansion(f1, params.poly_n, params.poly_sigma);
    const PolyExpansion e2 = polynomial_expansion(f2, params.poly_n, params.poly_sigma);
    for (int it = 0; it < params.iterations; ++it) d = refine_once(e1, e2, d, params.window_size);
  }

  FlowField field(prev.width, prev.height);
  for (int y = 0; y < prev.height; ++y)
    for (int x = 0; x < prev.width; ++x)
      field.set(x, y, static_cast<float>(d.u.at(x, y)), static_cast<float>(d.v.at(x, y)));
  return field;
}

FlowField farneback_flow(const Frame& prev, const Frame& next, const FlowParams& params) {
  return farneback_flow(prev.luma, next.luma, params);
}

}  // namespace flowparts
