#include "flowparts/poly_expansion.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "flowparts/errors.hpp"

namespace flowparts {

namespace {

// Basis order throughout: (1, x, y, x^2, y^2, xy), window-local coordinates.
using Mat6 = Eigen::Matrix<double, 6, 6>;

Mat6 normal_matrix(int half, const std::vector<double>& g) {
  Mat6 G = Mat6::Zero();
  for (int dy = -half; dy <= half; ++dy) {
    for (int dx = -half; dx <= half; ++dx) {
      const double w = g[dx + half] * g[dy + half];
      const double phi[6] = {1.0,
                             static_cast<double>(dx),
                             static_cast<double>(dy),
                             static_cast<double>(dx) * dx,
                             static_cast<double>(dy) * dy,
                             static_cast<double>(dx) * dy};
      for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) G(i, j) += w * phi[i] * phi[j];
    }
  }
  return G;
}

}  // namespace

PolyExpansion polynomial_expansion(const Grid<float>& image, int poly_n, double poly_sigma) {
  if (poly_n < 1 || poly_n % 2 == 0) throw ContractError("poly_n must be odd and positive");
  if (!(poly_sigma > 0.0)) throw ContractError("poly_sigma must be positive");
  if (image.width < poly_n || image.height < poly_n)
    throw ContractError("image smaller than expansion window");

  const int half = poly_n / 2;
  std::vector<double> g(poly_n), gt(poly_n), gt2(poly_n);
  for (int t = -half; t <= half; ++t) {
    g[t + half] = std::exp(-(static_cast<double>(t) * t) / (2.0 * poly_sigma * poly_sigma));
    gt[t + half] = g[t + half] * t;
    gt2[t + half] = g[t + half] * t * t;
  }

  const Mat6 Ginv = normal_matrix(half, g).fullPivLu().inverse();

  const int w = image.width;
  const int h = image.height;

  // Horizontal correlations with {g, g*x, g*x^2}; clamped column reads.
  Grid<double> p0(w, h), p1(w, h), p2(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double s0 = 0.0, s1 = 0.0, s2 = 0.0;
      for (int t = -half; t <= half; ++t) {
        const double f = image.at_clamped(x + t, y);
        s0 += g[t + half] * f;
        s1 += gt[t + half] * f;
        s2 += gt2[t + half] * f;
      }
      p0.at(x, y) = s0;
      p1.at(x, y) = s1;
      p2.at(x, y) = s2;
    }
  }

  // Vertical correlations complete the six moment images, then one multiply
  // with the shared inverse normal matrix yields the coefficients.
  PolyExpansion exp(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double v_c = 0.0, v_x = 0.0, v_y = 0.0, v_xx = 0.0, v_yy = 0.0, v_xy = 0.0;
      for (int t = -half; t <= half; ++t) {
        const double q0 = p0.at_clamped(x, y + t);
        const double q1 = p1.at_clamped(x, y + t);
        const double q2 = p2.at_clamped(x, y + t);
        v_c += g[t + half] * q0;
        v_x += g[t + half] * q1;
        v_y += gt[t + half] * q0;
        v_xx += g[t + half] * q2;
        v_yy += gt2[t + half] * q0;
        v_xy += gt[t + half] * q1;
      }
      Eigen::Matrix<double, 6, 1> v;
      v << v_c, v_x, v_y, v_xx, v_yy, v_xy;
      const Eigen::Matrix<double, 6, 1> r = Ginv * v;
      exp.c.at(x, y) = r(0);
      exp.b1.at(x, y) = r(1);
      exp.b2.at(x, y) = r(2);
      exp.a11.at(x, y) = r(3);
      exp.a22.at(x, y) = r(4);
      exp.a12.at(x, y) = r(5) / 2.0;  // xy coefficient splits across the off-diagonal
    }
  }
  return exp;
}

}  // namespace flowparts
