#include "dst/io.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "dst/error.hpp"

namespace dst {

namespace {

std::string ctx(const std::string& context) {
    return context.empty() ? std::string() : context + ": ";
}

// Re-throw a typed error with the file/line context prepended once.
template <typename F>
auto with_context(const std::string& context, F&& f) {
    try {
        return f();
    } catch (const Error& e) {
        if (context.empty()) throw;
        throw Error(e.kind(), context + ": " + e.raw());
    }
}

struct ByteWriter {
    std::string bytes;

    void u8(std::uint8_t v) { bytes.push_back(static_cast<char>(v)); }
    void u16(std::uint16_t v) {
        for (int i = 0; i < 2; ++i) u8(static_cast<std::uint8_t>(v >> (8 * i)));
    }
    void u32(std::uint32_t v) {
        for (int i = 0; i < 4; ++i) u8(static_cast<std::uint8_t>(v >> (8 * i)));
    }
    void u64(std::uint64_t v) {
        for (int i = 0; i < 8; ++i) u8(static_cast<std::uint8_t>(v >> (8 * i)));
    }
    void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }
    void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
    void raw(std::string_view s) { bytes.append(s); }
};

struct ByteReader {
    std::string_view bytes;
    std::string context;
    std::size_t pos = 0;

    std::size_t remaining() const { return bytes.size() - pos; }

    void need(std::size_t n, const char* what) {
        if (remaining() < n)
            throw Error(ErrorKind::TruncatedFile,
                        ctx(context) + "need " + std::to_string(n) + " more bytes for " + what +
                            " at offset " + std::to_string(pos) + ", have " +
                            std::to_string(remaining()));
    }
    void need_count(std::uint64_t count, std::uint64_t elem_size, const char* what) {
        unsigned __int128 want = static_cast<unsigned __int128>(count) * elem_size;
        if (want > remaining())
            throw Error(ErrorKind::TruncatedFile,
                        ctx(context) + "payload of " + std::to_string(count) + " " + what +
                            " does not fit in " + std::to_string(remaining()) +
                            " bytes at offset " + std::to_string(pos));
    }

    std::uint8_t u8() {
        return static_cast<std::uint8_t>(bytes[pos++]);
    }
    std::uint16_t u16() {
        need(2, "u16");
        std::uint16_t v = 0;
        for (int i = 0; i < 2; ++i) v = static_cast<std::uint16_t>(v | (std::uint16_t{u8()} << (8 * i)));
        return v;
    }
    std::uint32_t u32() {
        need(4, "u32");
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= std::uint32_t{u8()} << (8 * i);
        return v;
    }
    std::uint64_t u64() {
        need(8, "u64");
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= std::uint64_t{u8()} << (8 * i);
        return v;
    }
    float f32() {
        return std::bit_cast<float>(u32());
    }
    double f64() {
        return std::bit_cast<double>(u64());
    }
    std::string str(std::size_t n, const char* what) {
        need(n, what);
        std::string s(bytes.substr(pos, n));
        pos += n;
        return s;
    }

    void magic(const char expected[4]) {
        need(4, "magic");
        if (bytes.compare(pos, 4, expected, 4) != 0) {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%02x %02x %02x %02x",
                          static_cast<unsigned char>(bytes[pos]),
                          static_cast<unsigned char>(bytes[pos + 1]),
                          static_cast<unsigned char>(bytes[pos + 2]),
                          static_cast<unsigned char>(bytes[pos + 3]));
            throw Error(ErrorKind::BadMagic, ctx(context) + "expected magic '" +
                                                 std::string(expected, 4) + "', found bytes " + buf);
        }
        pos += 4;
    }

    void done() {
        if (remaining() != 0)
            throw Error(ErrorKind::BadArgument,
                        ctx(context) + std::to_string(remaining()) +
                            " trailing bytes after payload (offset " + std::to_string(pos) + ")");
    }
};

void check_utt_id(const std::string& utt_id) {
    if (utt_id.size() > std::numeric_limits<std::uint16_t>::max())
        throw Error(ErrorKind::BadArgument,
                    "utt_id length " + std::to_string(utt_id.size()) + " exceeds format limit 65535");
    for (char c : utt_id) {
        if (c == '\t' || c == '\n' || c == '\r')
            throw Error(ErrorKind::BadArgument, "utt_id '" + utt_id + "' contains TAB or newline");
    }
}

std::uint32_t checked_u32(std::uint64_t v, const char* what) {
    if (v > std::numeric_limits<std::uint32_t>::max())
        throw Error(ErrorKind::BadArgument,
                    std::string(what) + " " + std::to_string(v) + " exceeds format limit 2^32-1");
    return static_cast<std::uint32_t>(v);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == sep) {
            out.emplace_back(s, start, i - start);
            start = i + 1;
        }
    }
    return out;
}

std::uint64_t parse_u64_field(const std::string& s, const std::string& context, const char* what) {
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size())
        throw Error(ErrorKind::BadArgument, ctx(context) + "cannot parse " + what + " '" + s + "'");
    return v;
}

std::uint32_t parse_u32_field(const std::string& s, const std::string& context, const char* what) {
    std::uint64_t v = parse_u64_field(s, context, what);
    if (v > std::numeric_limits<std::uint32_t>::max())
        throw Error(ErrorKind::BadArgument, ctx(context) + std::string(what) + " '" + s + "' exceeds 2^32-1");
    return static_cast<std::uint32_t>(v);
}

}  // namespace

// --- feature matrices ---

std::string encode_feature_matrix(const FeatureMatrix& m) {
    validate(m);
    check_utt_id(m.utt_id);
    ByteWriter w;
    w.raw(std::string_view(kFeatureMagic, 4));
    w.u32(m.dims);
    w.u64(m.frames);
    w.u32(checked_u32(m.frame_shift.num, "frame_shift numerator"));
    w.u32(checked_u32(m.frame_shift.den, "frame_shift denominator"));
    w.u16(static_cast<std::uint16_t>(m.utt_id.size()));
    w.raw(m.utt_id);
    for (float v : m.values) w.f32(v);
    return std::move(w.bytes);
}

FeatureMatrix decode_feature_matrix(std::string_view bytes, const std::string& context) {
    ByteReader r{bytes, context};
    r.magic(kFeatureMagic);
    std::uint32_t dims = r.u32();
    std::uint64_t frames = r.u64();
    std::uint32_t shift_num = r.u32();
    std::uint32_t shift_den = r.u32();
    std::uint16_t id_len = r.u16();
    std::string utt_id = r.str(id_len, "utt_id");
    if (shift_num == 0 || shift_den == 0)
        throw Error(ErrorKind::InvariantViolation,
                    ctx(context) + "FeatureMatrix " + utt_id + ": frame_shift must be > 0");

    // Guard frames*dims against u64 overflow: check per-row byte size first.
    r.need_count(frames, static_cast<std::uint64_t>(dims) * 4, "feature rows");
    std::uint64_t count = frames * static_cast<std::uint64_t>(dims);
    std::vector<float> values;
    values.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) values.push_back(r.f32());
    r.done();
    for (std::uint64_t i = 0; i < count; ++i) {
        if (!std::isfinite(values[i]))
            throw Error(ErrorKind::NonFiniteValue,
                        ctx(context) + "FeatureMatrix " + utt_id + ": non-finite value at frame " +
                            std::to_string(dims ? i / dims : 0) + " dim " +
                            std::to_string(dims ? i % dims : 0));
    }
    return with_context(context, [&] {
        return make_feature_matrix(std::move(utt_id), Rational(shift_num, shift_den), dims,
                                   std::move(values));
    });
}

// --- token streams (binary) ---

std::string encode_token_stream(const TokenStream& ts) {
    validate(ts);
    check_utt_id(ts.utt_id);
    if (ts.streams.size() > std::numeric_limits<std::uint16_t>::max())
        throw Error(ErrorKind::BadArgument, "stream count " + std::to_string(ts.streams.size()) +
                                                " exceeds format limit 65535");
    ByteWriter w;
    w.raw(std::string_view(kTokenMagic, 4));
    w.u32(checked_u32(ts.frame_rate.num, "frame_rate numerator"));
    w.u32(checked_u32(ts.frame_rate.den, "frame_rate denominator"));
    w.u16(static_cast<std::uint16_t>(ts.streams.size()));
    for (const TokenGroup& g : ts.streams) w.u32(g.vocab_size);
    w.u64(ts.num_frames);
    w.u16(static_cast<std::uint16_t>(ts.utt_id.size()));
    w.raw(ts.utt_id);
    for (std::uint64_t t = 0; t < ts.num_frames; ++t)
        for (const TokenGroup& g : ts.streams) w.u32(g.tokens[t]);
    return std::move(w.bytes);
}

TokenStream decode_token_stream(std::string_view bytes, const std::string& context) {
    ByteReader r{bytes, context};
    r.magic(kTokenMagic);
    std::uint32_t rate_num = r.u32();
    std::uint32_t rate_den = r.u32();
    std::uint16_t num_streams = r.u16();
    std::vector<TokenGroup> groups(num_streams);
    for (auto& g : groups) g.vocab_size = r.u32();
    std::uint64_t num_frames = r.u64();
    std::uint16_t id_len = r.u16();
    std::string utt_id = r.str(id_len, "utt_id");
    if (rate_num == 0 || rate_den == 0)
        throw Error(ErrorKind::InvariantViolation,
                    ctx(context) + "TokenStream " + utt_id + ": frame_rate must be > 0");

    r.need_count(num_frames, static_cast<std::uint64_t>(num_streams) * 4, "token frames");
    for (auto& g : groups) g.tokens.reserve(num_frames);
    for (std::uint64_t t = 0; t < num_frames; ++t) {
        for (std::size_t s = 0; s < groups.size(); ++s) {
            std::uint32_t tok = r.u32();
            if (tok >= groups[s].vocab_size)
                throw Error(ErrorKind::TokenOutOfRange,
                            ctx(context) + "TokenStream " + utt_id + ": stream " +
                                std::to_string(s) + " frame " + std::to_string(t) + " token " +
                                std::to_string(tok) + " >= vocab " +
                                std::to_string(groups[s].vocab_size));
            groups[s].tokens.push_back(tok);
        }
    }
    r.done();
    return with_context(context, [&] {
        return make_token_stream(std::move(utt_id), Rational(rate_num, rate_den),
                                 std::move(groups));
    });
}

// --- codebooks ---

std::string encode_codebook(const Codebook& cb) {
    validate(cb);
    ByteWriter w;
    w.raw(std::string_view(kCodebookMagic, 4));
    w.u32(cb.k);
    w.u32(cb.dims);
    w.u64(cb.seed);
    for (double v : cb.centroids) w.f64(v);
    return std::move(w.bytes);
}

Codebook decode_codebook(std::string_view bytes, const std::string& context) {
    ByteReader r{bytes, context};
    r.magic(kCodebookMagic);
    std::uint32_t k = r.u32();
    std::uint32_t dims = r.u32();
    std::uint64_t seed = r.u64();
    std::uint64_t count = static_cast<std::uint64_t>(k) * dims;
    r.need_count(count, 8, "float64 centroids");
    std::vector<double> centroids;
    centroids.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) centroids.push_back(r.f64());
    r.done();
    for (std::uint64_t i = 0; i < count; ++i) {
        if (!std::isfinite(centroids[i]))
            throw Error(ErrorKind::NonFiniteValue,
                        ctx(context) + "Codebook: non-finite centroid at cluster " +
                            std::to_string(dims ? i / dims : 0) + " dim " +
                            std::to_string(dims ? i % dims : 0));
    }
    // Training-run metadata (iteration count, final inertia) is not part of
    // the interchange format; a decoded codebook carries only the centroids.
    return with_context(context,
                        [&] { return make_codebook(k, dims, std::move(centroids), seed, 0, 0.0); });
}

// --- pair tables ---

std::string encode_pair_table(const PairFoldTable& table) {
    validate(table);
    ByteWriter w;
    w.raw(std::string_view(kPairTableMagic, 4));
    w.u32(table.vocab_a);
    w.u32(table.vocab_b);
    w.u32(checked_u32(table.pairs.size(), "pair count"));
    for (auto [a, b] : table.pairs) {
        w.u32(a);
        w.u32(b);
    }
    return std::move(w.bytes);
}

PairFoldTable decode_pair_table(std::string_view bytes, const std::string& context) {
    ByteReader r{bytes, context};
    r.magic(kPairTableMagic);
    std::uint32_t vocab_a = r.u32();
    std::uint32_t vocab_b = r.u32();
    std::uint32_t count = r.u32();
    r.need_count(count, 8, "u32 pairs");
    std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
    pairs.reserve(count);
    for (std::uint32_t i = 0; i < count; ++i) {
        std::uint32_t a = r.u32();
        std::uint32_t b = r.u32();
        pairs.emplace_back(a, b);
    }
    r.done();
    return with_context(context,
                        [&] { return make_pair_fold_table(vocab_a, vocab_b, std::move(pairs)); });
}

// --- token streams (text) ---

std::string token_text_line(const TokenStream& ts) {
    validate(ts);
    check_utt_id(ts.utt_id);
    std::string line = ts.utt_id;
    line += '\t';
    line += ts.frame_rate.str();
    line += '\t';
    for (std::size_t s = 0; s < ts.streams.size(); ++s) {
        if (s) line += ',';
        line += std::to_string(ts.streams[s].vocab_size);
    }
    line += '\t';
    for (std::uint64_t t = 0; t < ts.num_frames; ++t) {
        if (t) line += ' ';
        for (std::size_t s = 0; s < ts.streams.size(); ++s) {
            if (s) line += ':';
            line += std::to_string(ts.streams[s].tokens[t]);
        }
    }
    return line;
}

TokenStream parse_token_text_line(const std::string& line, const std::string& context) {
    auto fields = split(line, '\t');
    if (fields.size() != 4 && fields.size() != 3)
        throw Error(ErrorKind::BadArgument, ctx(context) + "expected 4 TAB-separated fields, got " +
                                                std::to_string(fields.size()));
    std::string utt_id = fields[0];
    Rational rate = with_context(context, [&] { return parse_rational(fields[1]); });

    auto vocab_fields = split(fields[2], ',');
    std::vector<TokenGroup> groups(vocab_fields.size());
    for (std::size_t s = 0; s < vocab_fields.size(); ++s)
        groups[s].vocab_size = parse_u32_field(vocab_fields[s], context, "vocab size");

    const std::string frames_field = fields.size() == 4 ? fields[3] : std::string();
    if (!frames_field.empty()) {
        auto frame_fields = split(frames_field, ' ');
        for (std::size_t t = 0; t < frame_fields.size(); ++t) {
            auto tok_fields = split(frame_fields[t], ':');
            if (tok_fields.size() != groups.size())
                throw Error(ErrorKind::RaggedStreams,
                            ctx(context) + "utterance " + utt_id + " frame " + std::to_string(t) +
                                " has " + std::to_string(tok_fields.size()) +
                                " parallel tokens, expected " + std::to_string(groups.size()));
            for (std::size_t s = 0; s < groups.size(); ++s) {
                std::uint32_t tok = parse_u32_field(tok_fields[s], context, "token");
                if (tok >= groups[s].vocab_size)
                    throw Error(ErrorKind::TokenOutOfRange,
                                ctx(context) + "utterance " + utt_id + " stream " +
                                    std::to_string(s) + " frame " + std::to_string(t) + " token " +
                                    std::to_string(tok) + " >= vocab " +
                                    std::to_string(groups[s].vocab_size));
                groups[s].tokens.push_back(tok);
            }
        }
    }
    return with_context(context,
                        [&] { return make_token_stream(std::move(utt_id), rate, std::move(groups)); });
}

// --- alignments (text) ---

std::string alignment_text_line(const AlignmentTrack& track) {
    validate(track);
    check_utt_id(track.utt_id);
    std::string line = track.utt_id;
    line += '\t';
    line += track.frame_shift.str();
    line += '\t';
    for (std::size_t i = 0; i < track.segments.size(); ++i) {
        const auto& seg = track.segments[i];
        if (seg.label.empty())
            throw Error(ErrorKind::BadArgument, "alignment " + track.utt_id + ": segment " +
                                                    std::to_string(i) + " has an empty label");
        for (char c : seg.label) {
            if (c == ':' || c == ' ' || c == '\t' || c == '\n' || c == '\r')
                throw Error(ErrorKind::BadArgument,
                            "alignment " + track.utt_id + ": label '" + seg.label +
                                "' contains a reserved character (colon or whitespace)");
        }
        if (i) line += ' ';
        line += seg.label;
        line += ':';
        line += std::to_string(seg.duration_frames);
    }
    return line;
}

AlignmentTrack parse_alignment_text_line(const std::string& line, const std::string& context) {
    auto fields = split(line, '\t');
    if (fields.size() != 3 && fields.size() != 2)
        throw Error(ErrorKind::BadArgument, ctx(context) + "expected 3 TAB-separated fields, got " +
                                                std::to_string(fields.size()));
    std::string utt_id = fields[0];
    Rational shift = with_context(context, [&] { return parse_rational(fields[1]); });

    std::vector<AlignmentSegment> segments;
    const std::string segs_field = fields.size() == 3 ? fields[2] : std::string();
    if (!segs_field.empty()) {
        auto seg_fields = split(segs_field, ' ');
        for (std::size_t i = 0; i < seg_fields.size(); ++i) {
            const std::string& sf = seg_fields[i];
            std::size_t colon = sf.rfind(':');
            if (colon == std::string::npos || colon == 0)
                throw Error(ErrorKind::BadArgument,
                            ctx(context) + "segment '" + sf + "' is not label:duration");
            std::uint64_t dur = parse_u64_field(sf.substr(colon + 1), context, "duration");
            if (dur == 0)
                throw Error(ErrorKind::ZeroDuration, ctx(context) + "utterance " + utt_id +
                                                         " segment " + std::to_string(i) + " ('" +
                                                         sf.substr(0, colon) +
                                                         "') has zero duration");
            segments.push_back({sf.substr(0, colon), dur});
        }
    }
    return with_context(context, [&] {
        return make_alignment_track(std::move(utt_id), shift, std::move(segments));
    });
}

// --- file plumbing ---

std::string read_file_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::IoFailure, "cannot open " + path + " for reading");
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw Error(ErrorKind::IoFailure, "read failed on " + path);
    return bytes;
}

void write_file_bytes(const std::string& path, std::string_view bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::IoFailure, "cannot open " + path + " for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) throw Error(ErrorKind::IoFailure, "write failed on " + path);
}

void write_feature_matrix(const FeatureMatrix& m, const std::string& path) {
    write_file_bytes(path, encode_feature_matrix(m));
}
FeatureMatrix read_feature_matrix(const std::string& path) {
    return decode_feature_matrix(read_file_bytes(path), path);
}
void write_token_stream(const TokenStream& ts, const std::string& path) {
    write_file_bytes(path, encode_token_stream(ts));
}
TokenStream read_token_stream(const std::string& path) {
    return decode_token_stream(read_file_bytes(path), path);
}
void write_codebook(const Codebook& cb, const std::string& path) {
    write_file_bytes(path, encode_codebook(cb));
}
Codebook read_codebook(const std::string& path) {
    return decode_codebook(read_file_bytes(path), path);
}
void write_pair_table(const PairFoldTable& table, const std::string& path) {
    write_file_bytes(path, encode_pair_table(table));
}
PairFoldTable read_pair_table(const std::string& path) {
    return decode_pair_table(read_file_bytes(path), path);
}

namespace {

std::vector<std::string> nonempty_lines(const std::string& text) {
    std::vector<std::string> lines = split(text, '\n');
    for (auto& line : lines)
        if (!line.empty() && line.back() == '\r') line.pop_back();
    return lines;
}

}  // namespace

void write_token_text(std::span<const TokenStream> corpus, const std::string& path) {
    std::string text;
    for (const TokenStream& ts : corpus) {
        text += token_text_line(ts);
        text += '\n';
    }
    write_file_bytes(path, text);
}

std::vector<TokenStream> read_token_text(const std::string& path) {
    std::vector<TokenStream> corpus;
    auto lines = nonempty_lines(read_file_bytes(path));
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        corpus.push_back(parse_token_text_line(lines[i], path + " line " + std::to_string(i + 1)));
    }
    return corpus;
}

void write_alignment_text(std::span<const AlignmentTrack> tracks, const std::string& path) {
    std::string text;
    for (const AlignmentTrack& track : tracks) {
        text += alignment_text_line(track);
        text += '\n';
    }
    write_file_bytes(path, text);
}

std::vector<AlignmentTrack> read_alignment_text(const std::string& path) {
    std::vector<AlignmentTrack> tracks;
    auto lines = nonempty_lines(read_file_bytes(path));
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        tracks.push_back(
            parse_alignment_text_line(lines[i], path + " line " + std::to_string(i + 1)));
    }
    return tracks;
}

}  // namespace dst
