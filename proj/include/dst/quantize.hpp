#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dst/types.hpp"

namespace dst {

struct KMeansConfig {
    std::uint32_t k = 1;
    std::uint64_t seed = 0;
    std::uint32_t max_iters = 100;
    double rel_tol = 1e-6;  // relative inertia-improvement stopping threshold
};

void validate(const KMeansConfig& cfg);

// splitmix64: the pinned PRNG for k-means++ seeding, so any two builds of
// this codebase reproduce byte-identical codebooks from the same seed.
struct SplitMix64 {
    std::uint64_t state = 0;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1), 53-bit resolution.
    double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

// Per-iteration inertia values, for monotonicity checks.
struct TrainTrace {
    std::vector<double> inertia;
};

// Lloyd's algorithm with k-means++ initialization. Deterministic function of
// (data, cfg): per-cluster sums are accumulated per fixed-size chunk in frame
// order and reduced in chunk order, so the result is independent of `threads`
// (0 = hardware concurrency).
Codebook kmeans_train(std::span<const FeatureMatrix> data, const KMeansConfig& cfg,
                      unsigned threads = 0, TrainTrace* trace = nullptr);
Codebook kmeans_train(const FeatureMatrix& data, const KMeansConfig& cfg, unsigned threads = 0,
                      TrainTrace* trace = nullptr);

// Nearest centroid of `frame` (squared Euclidean, ties to lowest index).
std::uint32_t nearest_centroid(std::span<const float> frame, const Codebook& cb);
std::uint32_t nearest_centroid(std::span<const double> frame, const Codebook& cb);

// Single-stream TokenStream of nearest-centroid indices; vocab_size = cb.k,
// frame_rate = 1 / data.frame_shift.
TokenStream kmeans_assign(const FeatureMatrix& data, const Codebook& cb);

// Sum over frames of squared distance to the nearest centroid; 0 for an
// empty matrix.
double inertia(const FeatureMatrix& data, const Codebook& cb);

}  // namespace dst
