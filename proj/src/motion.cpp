#include "flowparts/motion.hpp"

#include <cmath>

#include "flowparts/errors.hpp"

namespace flowparts {

namespace {

// Shared by magnitude, fraction and mask so the moving-pixel rule is the
// same comparison everywhere, boundary cases included.
inline double magnitude_at(const FlowField& field, std::size_t i) {
  const double u = field.uv[i * 2];
  const double v = field.uv[i * 2 + 1];
  return std::sqrt(u * u + v * v);
}

}  // namespace

Grid<float> flow_magnitude(const FlowField& field) {
  Grid<float> mag(field.width, field.height);
  const std::size_t n = field.pixel_count();
  for (std::size_t i = 0; i < n; ++i) mag.v[i] = static_cast<float>(magnitude_at(field, i));
  return mag;
}

double motion_fraction(const FlowField& field, double eps) {
  if (eps < 0.0) throw ContractError("eps must be non-negative");
  const std::size_t n = field.pixel_count();
  if (n == 0) return 0.0;
  std::size_t moving = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (magnitude_at(field, i) > eps) ++moving;
  return static_cast<double>(moving) / static_cast<double>(n);
}

Grid<std::uint8_t> motion_mask(const FlowField& field, double eps) {
  if (eps < 0.0) throw ContractError("eps must be non-negative");
  Grid<std::uint8_t> mask(field.width, field.height);
  const std::size_t n = field.pixel_count();
  for (std::size_t i = 0; i < n; ++i) mask.v[i] = (magnitude_at(field, i) > eps) ? 1 : 0;
  return mask;
}

bool motion_gate(double fraction, double low, double high) {
  if (!(low >= 0.0 && low < high && high <= 1.0)) throw ContractError("bad gate thresholds");
  return fraction > low && fraction < high;
}

}  // namespace flowparts
