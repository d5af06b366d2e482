#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dst/types.hpp"

namespace dst {

// Each frame's tokens appear n consecutive times; frame rate and frame count
// are multiplied by n.
TokenStream repeat_tokens(const TokenStream& ts, std::uint64_t n);

// Inverse of repeat_tokens: every length-n block must be constant in every
// stream.
TokenStream collapse_repeats(const TokenStream& ts, std::uint64_t n);

// Largest-remainder apportionment of seconds onto a frame grid. The counts
// sum to round(total_seconds / frame_shift); ties break to the lowest index.
std::vector<std::uint64_t> seconds_to_frames(std::span<const double> durations,
                                             Rational frame_shift);

// First-frame policy: output[j] = labels[j*factor]; output length is
// ceil(len / factor).
std::vector<std::string> downsample_alignment(std::span<const std::string> labels,
                                              std::uint64_t factor);

// Length-regulator expansion: each label repeated duration_frames times.
std::vector<std::string> expand_labels(const AlignmentTrack& track);

// Run-length encoding of a frame-label sequence; adjacent equal labels merge.
AlignmentTrack compress_labels(std::span<const std::string> labels, Rational frame_shift,
                               const std::string& utt_id = "");

}  // namespace dst
