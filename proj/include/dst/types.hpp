#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "dst/rational.hpp"

namespace dst {

// Per-utterance continuous features: frames x dims, row-major by frame.
struct FeatureMatrix {
    std::string utt_id;
    Rational frame_shift{1, 100};  // seconds per frame
    std::uint32_t dims = 0;
    std::uint64_t frames = 0;
    std::vector<float> values;  // frames*dims

    std::span<const float> row(std::uint64_t t) const {
        return std::span<const float>(values.data() + t * dims, dims);
    }
    std::span<float> row(std::uint64_t t) {
        return std::span<float>(values.data() + t * dims, dims);
    }
};

// One parallel index sequence inside a TokenStream.
struct TokenGroup {
    std::uint32_t vocab_size = 0;
    std::vector<std::uint32_t> tokens;
};

// One or more parallel discrete index sequences at a frame rate.
struct TokenStream {
    std::string utt_id;
    Rational frame_rate{100, 1};  // Hz
    std::uint64_t num_frames = 0;
    std::vector<TokenGroup> streams;
};

// K-means centroids plus training metadata.
struct Codebook {
    std::uint32_t k = 0;
    std::uint32_t dims = 0;
    std::vector<double> centroids;  // k*dims
    std::uint64_t seed = 0;
    std::uint32_t iterations_run = 0;
    double final_inertia = 0.0;

    std::span<const double> centroid(std::uint32_t j) const {
        return std::span<const double>(centroids.data() + static_cast<std::size_t>(j) * dims, dims);
    }
};

// Bijection between observed (a, b) index pairs and a compact folded vocabulary.
// Ids are assigned in first-occurrence order over the building corpus.
struct PairFoldTable {
    std::uint32_t vocab_a = 0;
    std::uint32_t vocab_b = 0;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;  // id -> (a, b)
    std::unordered_map<std::uint64_t, std::uint32_t> forward;    // pair_key(a, b) -> id

    static std::uint64_t pair_key(std::uint32_t a, std::uint32_t b) {
        return (static_cast<std::uint64_t>(a) << 32) | b;
    }
    std::uint32_t folded_vocab() const { return static_cast<std::uint32_t>(pairs.size()); }
};

struct AlignmentSegment {
    std::string label;
    std::uint64_t duration_frames = 0;
};

// Run-length sequence of (label, duration-in-frames) at a frame shift.
struct AlignmentTrack {
    std::string utt_id;
    Rational frame_shift{1, 100};
    std::vector<AlignmentSegment> segments;

    std::uint64_t total_frames() const;
};

enum class BitrateMode { Exact, Ceil };

const char* mode_name(BitrateMode mode);

struct BitrateReport {
    BitrateMode mode = BitrateMode::Exact;
    std::vector<double> per_stream_bps;
    double total_bps = 0.0;
    Rational frame_rate{0, 1};
    std::vector<std::uint32_t> vocab_sizes;
};

// Each validate() either returns normally (all invariants hold) or throws
// Error{InvariantViolation} naming the failed invariant and offending index.
void validate(const FeatureMatrix& m);
void validate(const TokenStream& ts);
void validate(const Codebook& cb);
void validate(const PairFoldTable& table);
void validate(const AlignmentTrack& track);
void validate(const BitrateReport& report);

// Validating factories; each returns the value iff validate() accepts it.
FeatureMatrix make_feature_matrix(std::string utt_id, Rational frame_shift, std::uint32_t dims,
                                  std::vector<float> values);
TokenStream make_token_stream(std::string utt_id, Rational frame_rate,
                              std::vector<TokenGroup> streams);
Codebook make_codebook(std::uint32_t k, std::uint32_t dims, std::vector<double> centroids,
                       std::uint64_t seed, std::uint32_t iterations_run, double final_inertia);
PairFoldTable make_pair_fold_table(std::uint32_t vocab_a, std::uint32_t vocab_b,
                                   std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs);
AlignmentTrack make_alignment_track(std::string utt_id, Rational frame_shift,
                                    std::vector<AlignmentSegment> segments);

}  // namespace dst
