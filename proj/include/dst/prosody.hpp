#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dst/types.hpp"

namespace dst {

struct ProsodyConfig {
    std::uint32_t base_dims = 3;    // pitch, probability of voicing, energy
    std::uint32_t delta_orders = 2;  // 0, 1 or 2
};

void validate(const ProsodyConfig& cfg);

// Appends backward-difference columns: output dims = dims * (1 + orders),
// columns ordered (base, delta1, delta2). Delta at frame 0 is 0.
FeatureMatrix add_deltas(const FeatureMatrix& f, std::uint32_t orders);

// Per-dimension mean over every frame of every utterance.
std::vector<double> cmn_stats(std::span<const FeatureMatrix> corpus);

// value[t, d] - mean[d].
FeatureMatrix apply_cmn(const FeatureMatrix& f, std::span<const double> mean);

// One vector per alignment segment: the arithmetic mean of that segment's
// frames. The result reuses FeatureMatrix with one row per segment.
FeatureMatrix phone_average(const FeatureMatrix& f, const AlignmentTrack& track);

// Nearest-centroid index per segment row; same tie rule as kmeans_assign.
std::vector<std::uint32_t> prosody_labels(const FeatureMatrix& seg_vectors, const Codebook& cb);

}  // namespace dst
