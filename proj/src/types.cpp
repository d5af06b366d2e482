#include "dst/types.hpp"

#include <cmath>
#include <charconv>
#include <cstdlib>

#include "dst/error.hpp"

namespace dst {

Rational parse_rational(const std::string& text) {
    auto parse_u64 = [&](const std::string& part) -> std::uint64_t {
        std::uint64_t v = 0;
        auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
        if (ec != std::errc() || ptr != part.data() + part.size())
            throw Error(ErrorKind::BadArgument, "not an unsigned integer: '" + part + "'");
        return v;
    };
    auto slash = text.find('/');
    std::uint64_t num = parse_u64(slash == std::string::npos ? text : text.substr(0, slash));
    std::uint64_t den = slash == std::string::npos ? 1 : parse_u64(text.substr(slash + 1));
    if (den == 0) throw Error(ErrorKind::BadArgument, "zero denominator: '" + text + "'");
    return Rational(num, den);
}

std::uint64_t AlignmentTrack::total_frames() const {
    std::uint64_t total = 0;
    for (const auto& seg : segments) total += seg.duration_frames;
    return total;
}

const char* mode_name(BitrateMode mode) {
    return mode == BitrateMode::Exact ? "exact" : "ceil";
}

const char* kind_name(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvariantViolation: return "InvariantViolation";
        case ErrorKind::TooFewPoints: return "TooFewPoints";
        case ErrorKind::DimMismatch: return "DimMismatch";
        case ErrorKind::ShapeMismatch: return "ShapeMismatch";
        case ErrorKind::UnseenPair: return "UnseenPair";
        case ErrorKind::NotInvertible: return "NotInvertible";
        case ErrorKind::NotBlockConstant: return "NotBlockConstant";
        case ErrorKind::LengthNotDivisible: return "LengthNotDivisible";
        case ErrorKind::NegativeDuration: return "NegativeDuration";
        case ErrorKind::EmptySequence: return "EmptySequence";
        case ErrorKind::EmptyMatrix: return "EmptyMatrix";
        case ErrorKind::EmptyCorpus: return "EmptyCorpus";
        case ErrorKind::LengthMismatch: return "LengthMismatch";
        case ErrorKind::FrameShiftMismatch: return "FrameShiftMismatch";
        case ErrorKind::EmptyReference: return "EmptyReference";
        case ErrorKind::NoVoicedOverlap: return "NoVoicedOverlap";
        case ErrorKind::HeterogeneousCorpus: return "HeterogeneousCorpus";
        case ErrorKind::BadMagic: return "BadMagic";
        case ErrorKind::TruncatedFile: return "TruncatedFile";
        case ErrorKind::NonFiniteValue: return "NonFiniteValue";
        case ErrorKind::TokenOutOfRange: return "TokenOutOfRange";
        case ErrorKind::RaggedStreams: return "RaggedStreams";
        case ErrorKind::DuplicatePair: return "DuplicatePair";
        case ErrorKind::ZeroDuration: return "ZeroDuration";
        case ErrorKind::IoFailure: return "IoFailure";
        case ErrorKind::BadArgument: return "BadArgument";
    }
    return "UnknownError";
}

namespace {

[[noreturn]] void fail(const std::string& what) {
    throw Error(ErrorKind::InvariantViolation, what);
}

}  // namespace

void validate(const FeatureMatrix& m) {
    if (m.dims == 0) fail("FeatureMatrix " + m.utt_id + ": dims must be >= 1");
    if (!m.frame_shift.positive()) fail("FeatureMatrix " + m.utt_id + ": frame_shift must be > 0");
    if (m.values.size() != m.frames * m.dims)
        fail("FeatureMatrix " + m.utt_id + ": values size " + std::to_string(m.values.size()) +
             " != frames*dims " + std::to_string(m.frames * m.dims));
    for (std::size_t i = 0; i < m.values.size(); ++i) {
        if (!std::isfinite(m.values[i]))
            fail("FeatureMatrix " + m.utt_id + ": non-finite value at flat index " +
                 std::to_string(i));
    }
}

void validate(const TokenStream& ts) {
    if (ts.streams.empty()) fail("TokenStream " + ts.utt_id + ": stream list must be non-empty");
    if (!ts.frame_rate.positive()) fail("TokenStream " + ts.utt_id + ": frame_rate must be > 0");
    for (std::size_t s = 0; s < ts.streams.size(); ++s) {
        const TokenGroup& g = ts.streams[s];
        if (g.vocab_size == 0)
            fail("TokenStream " + ts.utt_id + ": stream " + std::to_string(s) +
                 " vocab_size must be >= 1");
        if (g.tokens.size() != ts.num_frames)
            fail("TokenStream " + ts.utt_id + ": stream " + std::to_string(s) + " has " +
                 std::to_string(g.tokens.size()) + " tokens, expected " +
                 std::to_string(ts.num_frames));
        for (std::size_t t = 0; t < g.tokens.size(); ++t) {
            if (g.tokens[t] >= g.vocab_size)
                fail("TokenStream " + ts.utt_id + ": stream " + std::to_string(s) + " frame " +
                     std::to_string(t) + " token " + std::to_string(g.tokens[t]) +
                     " >= vocab " + std::to_string(g.vocab_size));
        }
    }
}

void validate(const Codebook& cb) {
    if (cb.k == 0) fail("Codebook: k must be >= 1");
    if (cb.dims == 0) fail("Codebook: dims must be >= 1");
    if (cb.centroids.size() != static_cast<std::size_t>(cb.k) * cb.dims)
        fail("Codebook: centroid buffer size " + std::to_string(cb.centroids.size()) +
             " != k*dims " + std::to_string(static_cast<std::size_t>(cb.k) * cb.dims));
    for (std::size_t i = 0; i < cb.centroids.size(); ++i) {
        if (!std::isfinite(cb.centroids[i]))
            fail("Codebook: non-finite centroid value at flat index " + std::to_string(i));
    }
    if (!(cb.final_inertia >= 0.0)) fail("Codebook: final_inertia must be >= 0");
}

void validate(const PairFoldTable& table) {
    if (table.vocab_a == 0 || table.vocab_b == 0) fail("PairFoldTable: vocabularies must be >= 1");
    std::uint64_t product = static_cast<std::uint64_t>(table.vocab_a) * table.vocab_b;
    if (table.pairs.size() > product)
        fail("PairFoldTable: " + std::to_string(table.pairs.size()) + " pairs exceeds vocab_a*vocab_b");
    if (table.forward.size() != table.pairs.size())
        fail("PairFoldTable: forward map size != pair count (map not injective)");
    for (std::size_t id = 0; id < table.pairs.size(); ++id) {
        auto [a, b] = table.pairs[id];
        if (a >= table.vocab_a || b >= table.vocab_b)
            fail("PairFoldTable: pair id " + std::to_string(id) + " (" + std::to_string(a) + "," +
                 std::to_string(b) + ") outside vocabularies");
        auto it = table.forward.find(PairFoldTable::pair_key(a, b));
        if (it == table.forward.end() || it->second != id)
            fail("PairFoldTable: forward map disagrees with pair list at id " + std::to_string(id));
    }
}

void validate(const AlignmentTrack& track) {
    if (!track.frame_shift.positive())
        fail("AlignmentTrack " + track.utt_id + ": frame_shift must be > 0");
    for (std::size_t i = 0; i < track.segments.size(); ++i) {
        if (track.segments[i].duration_frames == 0)
            fail("AlignmentTrack " + track.utt_id + ": segment " + std::to_string(i) +
                 " duration must be >= 1");
    }
}

void validate(const BitrateReport& report) {
    if (report.per_stream_bps.size() != report.vocab_sizes.size())
        fail("BitrateReport: per_stream_bps and vocab_sizes lengths differ");
    double sum = 0.0;
    for (std::size_t s = 0; s < report.per_stream_bps.size(); ++s) {
        double bps = report.per_stream_bps[s];
        if (!(bps >= 0.0)) fail("BitrateReport: stream " + std::to_string(s) + " bps < 0");
        if (report.vocab_sizes[s] == 0)
            fail("BitrateReport: stream " + std::to_string(s) + " vocab must be >= 1");
        if (report.vocab_sizes[s] == 1 && bps != 0.0)
            fail("BitrateReport: stream " + std::to_string(s) + " vocab 1 must give 0 bps");
        sum += bps;
    }
    double tol = 1e-9 * (1.0 + std::abs(sum));
    if (std::abs(sum - report.total_bps) > tol)
        fail("BitrateReport: total_bps != sum of per-stream bps");
}

FeatureMatrix make_feature_matrix(std::string utt_id, Rational frame_shift, std::uint32_t dims,
                                  std::vector<float> values) {
    FeatureMatrix m;
    m.utt_id = std::move(utt_id);
    m.frame_shift = frame_shift;
    m.dims = dims;
    m.frames = dims == 0 ? 0 : values.size() / dims;
    m.values = std::move(values);
    if (dims != 0 && m.values.size() % dims != 0)
        throw Error(ErrorKind::InvariantViolation,
                    "FeatureMatrix " + m.utt_id + ": value count not divisible by dims");
    validate(m);
    return m;
}

TokenStream make_token_stream(std::string utt_id, Rational frame_rate,
                              std::vector<TokenGroup> streams) {
    TokenStream ts;
    ts.utt_id = std::move(utt_id);
    ts.frame_rate = frame_rate;
    ts.num_frames = streams.empty() ? 0 : streams.front().tokens.size();
    ts.streams = std::move(streams);
    validate(ts);
    return ts;
}

Codebook make_codebook(std::uint32_t k, std::uint32_t dims, std::vector<double> centroids,
                       std::uint64_t seed, std::uint32_t iterations_run, double final_inertia) {
    Codebook cb;
    cb.k = k;
    cb.dims = dims;
    cb.centroids = std::move(centroids);
    cb.seed = seed;
    cb.iterations_run = iterations_run;
    cb.final_inertia = final_inertia;
    validate(cb);
    return cb;
}

PairFoldTable make_pair_fold_table(std::uint32_t vocab_a, std::uint32_t vocab_b,
                                   std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs) {
    PairFoldTable table;
    table.vocab_a = vocab_a;
    table.vocab_b = vocab_b;
    table.pairs = std::move(pairs);
    table.forward.reserve(table.pairs.size());
    for (std::size_t id = 0; id < table.pairs.size(); ++id) {
        auto [a, b] = table.pairs[id];
        auto [it, inserted] =
            table.forward.emplace(PairFoldTable::pair_key(a, b), static_cast<std::uint32_t>(id));
        (void)it;
        if (!inserted)
            throw Error(ErrorKind::DuplicatePair, "pair (" + std::to_string(a) + "," +
                                                      std::to_string(b) + ") listed twice");
    }
    validate(table);
    return table;
}

AlignmentTrack make_alignment_track(std::string utt_id, Rational frame_shift,
                                    std::vector<AlignmentSegment> segments) {
    AlignmentTrack track;
    track.utt_id = std::move(utt_id);
    track.frame_shift = frame_shift;
    track.segments = std::move(segments);
    validate(track);
    return track;
}

}  // namespace dst
