#pragma once

#include <cstdint>

#include "flowparts/types.hpp"

namespace flowparts {

// Per-pixel sqrt(u^2 + v^2).
Grid<float> flow_magnitude(const FlowField& field);

// Fraction of pixels with magnitude strictly greater than eps.
double motion_fraction(const FlowField& field, double eps);

// 1 where magnitude > eps, else 0.
Grid<std::uint8_t> motion_mask(const FlowField& field, double eps);

// Accept iff low < fraction < high; both comparisons strict.
bool motion_gate(double fraction, double low = 0.10, double high = 0.70);

}  // namespace flowparts
