#pragma once

#include "flowparts/poly_expansion.hpp"
#include "flowparts/types.hpp"

namespace flowparts {

struct FlowParams {
  int pyramid_levels = 3;
  double pyramid_scale = 0.5;  // in (0,1)
  int window_size = 15;        // odd; box window for the G/h accumulation
  int iterations = 3;          // refinement passes per level
  int poly_n = 5;              // odd; expansion neighborhood side
  double poly_sigma = 1.1;     // Gaussian applicability std-dev

  void validate() const;  // throws ContractError on a bad combination
};

// Coarse-to-fine dense flow from polynomial expansions of both frames.
// Per level and iteration the constraint A*d = db is accumulated over a
// window_size box (G = A'A, h = A'db) and solved per pixel with Tikhonov
// damping lambda = 1e-3*trace(G)/2 + 1e-12, so rank-deficient regions yield a
// damped zero-leaning displacement instead of a failure. Displacements are
// upsampled bilinearly between levels and scaled by 1/pyramid_scale.
// Deterministic: identical inputs give bit-identical fields.
FlowField farneback_flow(const Frame& prev, const Frame& next, const FlowParams& params);
FlowField farneback_flow(const Grid<float>& prev, const Grid<float>& next, const FlowParams& params);

}  // namespace flowparts
