#pragma once

#include <vector>

#include "flowparts/supervise.hpp"
#include "flowparts/types.hpp"

namespace flowparts {

// Disagreement rate over the union of nonzero supports:
// |{p : pred != weak, either nonzero}| / |{p : either nonzero}|,
// 0 when both maps are all-zero. Dimension or part-count mismatch -> ContractError.
double score_samples(const PartLabelMap& predicted, const PartLabelMap& weak);

// The k records with the highest error_score, sorted by descending score with
// ties broken by ascending (frame_index, label_path). k >= pool size returns
// everything. Deterministic for any input order.
std::vector<SampleRecord> select_hard(std::vector<SampleRecord> pool, int k);

}  // namespace flowparts
