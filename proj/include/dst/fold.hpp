#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "dst/types.hpp"

namespace dst {

enum class OovPolicy {
    Error,    // an unseen pair is a hard failure
    Reserve,  // unseen pairs map to an extra id == folded_vocab
};

// Scans a corpus of 2-stream token streams and assigns a compact id to every
// distinct (a, b) pair, in first-occurrence order (corpus order, then frame
// order).
PairFoldTable build_pair_vocab(std::span<const TokenStream> corpus);

// 2-stream -> single folded stream over the table's pair vocabulary.
TokenStream fold(const TokenStream& ts, const PairFoldTable& table,
                 OovPolicy oov = OovPolicy::Error);

// Inverse of fold. Every token must be < folded_vocab; the reserved OOV id
// is not invertible.
TokenStream unfold(const TokenStream& ts, const PairFoldTable& table);

struct PairStats {
    std::uint32_t vocab_a = 0;
    std::uint32_t vocab_b = 0;
    std::uint64_t unique_pairs = 0;
    std::uint64_t total_frames = 0;
    // (pair, occurrence count) in first-occurrence order.
    std::vector<std::pair<std::pair<std::uint32_t, std::uint32_t>, std::uint64_t>> counts;
    double coverage = 0.0;  // unique / (vocab_a * vocab_b)
};

PairStats pair_stats(std::span<const TokenStream> corpus);

}  // namespace dst
