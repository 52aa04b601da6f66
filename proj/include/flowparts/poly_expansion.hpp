#pragma once

#include <vector>

#include "flowparts/types.hpp"

namespace flowparts {

// Per-pixel quadratic model f(x) ~ x'Ax + b'x + c in window-local
// coordinates centered at the pixel. A is symmetric: [[a11 a12],[a12 a22]].
struct PolyExpansion {
  int width = 0;
  int height = 0;
  Grid<double> a11, a12, a22, b1, b2, c;

  PolyExpansion() = default;
  PolyExpansion(int w, int h)
      : width(w), height(h), a11(w, h), a12(w, h), a22(w, h), b1(w, h), b2(w, h), c(w, h) {}
};

// Weighted least-squares fit of {1, x, y, x^2, y^2, xy} over the
// poly_n x poly_n window with Gaussian applicability weights of std-dev
// poly_sigma. Border pixels read clamped (replicated) frame values.
// The normal matrix is shared by every pixel, so the fit reduces to six
// separable correlations followed by a multiply with its precomputed inverse.
PolyExpansion polynomial_expansion(const Grid<float>& image, int poly_n, double poly_sigma);

}  // namespace flowparts
