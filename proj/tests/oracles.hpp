#pragma once

#include <cstdint>
#include <vector>

#include "flowparts/blobs.hpp"
#include "flowparts/mean_shift.hpp"
#include "flowparts/poly_expansion.hpp"
#include "flowparts/types.hpp"

// Independent reference implementations for the derived contracts. These
// deliberately avoid the library's numeric shortcuts: the polynomial
// expansion solves the weighted normal equations per pixel with a local
// Gauss-Jordan elimination (no Eigen, no separable correlation), and the
// mean-shift reference scans every masked pixel per update (no spatial grid).
namespace oracle {

flowparts::PolyExpansion poly_expansion_reference(const flowparts::Grid<float>& image, int poly_n,
                                                  double poly_sigma);

flowparts::ModeField mean_shift_reference(const flowparts::FlowField& field,
                                          const flowparts::Grid<std::uint8_t>& mask,
                                          const flowparts::MeanShiftParams& params);

std::vector<flowparts::Blob> extract_blobs_reference(const flowparts::ModeField& modes,
                                                     const flowparts::MeanShiftParams& params);

// splitmix64 stream; deterministic across platforms.
struct Rng {
  std::uint64_t state = 0x853c49e6748fea9bULL;

  explicit Rng(std::uint64_t seed) : state(seed) {}
  std::uint64_t next() {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + uniform() * (hi - lo); }
  int uniform_int(int lo, int hi) {  // inclusive bounds
    return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1));
  }
};

}  // namespace oracle
