#include "flowparts/mining.hpp"

#include <algorithm>
#include <cmath>

#include "flowparts/errors.hpp"

namespace flowparts {

double score_samples(const PartLabelMap& predicted, const PartLabelMap& weak) {
  if (predicted.width != weak.width || predicted.height != weak.height)
    throw ContractError("label map dimensions differ");
  if (predicted.parts != weak.parts) throw ContractError("label map part counts differ");
  std::size_t support = 0;
  std::size_t disagree = 0;
  for (std::size_t i = 0; i < predicted.labels.size(); ++i) {
    const std::uint8_t a = predicted.labels[i];
    const std::uint8_t b = weak.labels[i];
    if (a == 0 && b == 0) continue;
    ++support;
    if (a != b) ++disagree;
  }
  if (support == 0) return 0.0;
  return static_cast<double>(disagree) / static_cast<double>(support);
}

std::vector<SampleRecord> select_hard(std::vector<SampleRecord> pool, int k) {
  if (k < 0) throw ContractError("k must be >= 0");
  for (const SampleRecord& r : pool) {
    if (!r.error_score) throw ContractError("pool record without error_score");
    if (!std::isfinite(*r.error_score) || *r.error_score < 0.0)
      throw ContractError("error_score must be finite and >= 0");
  }
  std::sort(pool.begin(), pool.end(), [](const SampleRecord& a, const SampleRecord& b) {
    if (*a.error_score != *b.error_score) return *a.error_score > *b.error_score;
    if (a.frame_index != b.frame_index) return a.frame_index < b.frame_index;
    return a.label_path < b.label_path;
  });
  if (static_cast<std::size_t>(k) < pool.size()) pool.resize(static_cast<std::size_t>(k));
  return pool;
}

}  // namespace flowparts
