#include "dst/timebase.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dst/error.hpp"

namespace dst {

TokenStream repeat_tokens(const TokenStream& ts, std::uint64_t n) {
    if (n == 0) throw Error(ErrorKind::BadArgument, "repeat_tokens: n must be >= 1");
    TokenStream out;
    out.utt_id = ts.utt_id;
    out.frame_rate = ts.frame_rate.times(n);
    out.num_frames = ts.num_frames * n;
    out.streams.reserve(ts.streams.size());
    for (const auto& g : ts.streams) {
        TokenGroup rg;
        rg.vocab_size = g.vocab_size;
        rg.tokens.reserve(g.tokens.size() * n);
        for (std::uint32_t tok : g.tokens)
            rg.tokens.insert(rg.tokens.end(), n, tok);
        out.streams.push_back(std::move(rg));
    }
    validate(out);
    return out;
}

TokenStream collapse_repeats(const TokenStream& ts, std::uint64_t n) {
    if (n == 0) throw Error(ErrorKind::BadArgument, "collapse_repeats: n must be >= 1");
    if (ts.num_frames % n != 0)
        throw Error(ErrorKind::LengthNotDivisible,
                    "collapse_repeats: " + std::to_string(ts.num_frames) +
                        " frames not divisible by " + std::to_string(n));
    TokenStream out;
    out.utt_id = ts.utt_id;
    out.frame_rate = ts.frame_rate.over(n);
    out.num_frames = ts.num_frames / n;
    out.streams.reserve(ts.streams.size());
    for (const auto& g : ts.streams) {
        TokenGroup cg;
        cg.vocab_size = g.vocab_size;
        cg.tokens.reserve(out.num_frames);
        for (std::uint64_t block = 0; block < out.num_frames; ++block) {
            std::uint64_t base = block * n;
            std::uint32_t tok = g.tokens[base];
            for (std::uint64_t i = 1; i < n; ++i) {
                if (g.tokens[base + i] != tok)
                    throw Error(ErrorKind::NotBlockConstant,
                                "collapse_repeats: block starting at frame " +
                                    std::to_string(base) + " is not constant");
            }
            cg.tokens.push_back(tok);
        }
        out.streams.push_back(std::move(cg));
    }
    validate(out);
    return out;
}

std::vector<std::uint64_t> seconds_to_frames(std::span<const double> durations,
                                             Rational frame_shift) {
    if (!frame_shift.positive())
        throw Error(ErrorKind::BadArgument, "seconds_to_frames: frame_shift must be > 0");
    std::size_t n = durations.size();
    std::vector<std::uint64_t> counts(n, 0);
    if (n == 0) return counts;

    double frames_per_second =
        static_cast<double>(frame_shift.den) / static_cast<double>(frame_shift.num);

    double total_seconds = 0.0;
    std::vector<double> quota(n);
    for (std::size_t i = 0; i < n; ++i) {
        double d = durations[i];
        if (!(std::isfinite(d) && d >= 0.0))
            throw Error(ErrorKind::NegativeDuration, "seconds_to_frames: duration at index " +
                                                         std::to_string(i) + " is " +
                                                         std::to_string(d));
        total_seconds += d;
        quota[i] = d * frames_per_second;
    }

    std::uint64_t target = static_cast<std::uint64_t>(std::llround(total_seconds * frames_per_second));

    std::uint64_t base_total = 0;
    std::vector<double> frac(n);
    for (std::size_t i = 0; i < n; ++i) {
        double fl = std::floor(quota[i]);
        counts[i] = static_cast<std::uint64_t>(fl);
        frac[i] = quota[i] - fl;
        base_total += counts[i];
    }

    if (target > base_total) {
        std::uint64_t remainder = target - base_total;
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return frac[a] > frac[b]; });
        for (std::uint64_t r = 0; r < remainder; ++r) counts[order[r % n]] += 1;
    } else if (target < base_total) {
        // Floating-point drift at extreme scale only; shave from the
        // smallest remainders.
        std::uint64_t excess = base_total - target;
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return frac[a] < frac[b]; });
        std::uint64_t r = 0;
        while (excess > 0) {
            std::size_t i = order[r % n];
            if (counts[i] > 0) {
                counts[i] -= 1;
                --excess;
            }
            ++r;
        }
    }
    return counts;
}

std::vector<std::string> downsample_alignment(std::span<const std::string> labels,
                                              std::uint64_t factor) {
    if (factor == 0) throw Error(ErrorKind::BadArgument, "downsample_alignment: factor must be >= 1");
    std::vector<std::string> out;
    out.reserve((labels.size() + factor - 1) / factor);
    for (std::uint64_t j = 0; j * factor < labels.size(); ++j)
        out.push_back(labels[j * factor]);
    return out;
}

std::vector<std::string> expand_labels(const AlignmentTrack& track) {
    std::vector<std::string> out;
    out.reserve(track.total_frames());
    for (const auto& seg : track.segments)
        out.insert(out.end(), seg.duration_frames, seg.label);
    return out;
}

AlignmentTrack compress_labels(std::span<const std::string> labels, Rational frame_shift,
                               const std::string& utt_id) {
    if (labels.empty())
        throw Error(ErrorKind::EmptySequence, "compress_labels: no frames to encode");
    std::vector<AlignmentSegment> segments;
    segments.push_back({labels[0], 1});
    for (std::size_t i = 1; i < labels.size(); ++i) {
        if (labels[i] == segments.back().label)
            segments.back().duration_frames += 1;
        else
            segments.push_back({labels[i], 1});
    }
    return make_alignment_track(utt_id, frame_shift, std::move(segments));
}

}  // namespace dst
