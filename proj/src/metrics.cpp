#include "dst/metrics.hpp"

#include <bit>
#include <cctype>
#include <cmath>

namespace dst {

std::string normalize_text(const std::string& text, const TextNorm& norm) {
    std::string out;
    out.reserve(text.size());
    for (unsigned char c : text) {
        if (norm.strip_punct && c < 0x80 && std::ispunct(c)) continue;
        if (norm.lowercase && c < 0x80)
            out.push_back(static_cast<char>(std::tolower(c)));
        else
            out.push_back(static_cast<char>(c));
    }
    if (norm.collapse_whitespace) {
        std::string collapsed;
        collapsed.reserve(out.size());
        bool in_ws = true;  // swallow leading whitespace
        for (unsigned char c : out) {
            if (std::isspace(c)) {
                in_ws = true;
            } else {
                if (in_ws && !collapsed.empty()) collapsed.push_back(' ');
                collapsed.push_back(static_cast<char>(c));
                in_ws = false;
            }
        }
        out = std::move(collapsed);
    }
    return out;
}

std::vector<std::uint32_t> split_chars(const std::string& text) {
    std::vector<std::uint32_t> cps;
    cps.reserve(text.size());
    std::size_t i = 0;
    while (i < text.size()) {
        unsigned char c = static_cast<unsigned char>(text[i]);
        std::uint32_t cp = c;
        std::size_t extra = 0;
        if ((c & 0xE0) == 0xC0) { cp = c & 0x1F; extra = 1; }
        else if ((c & 0xF0) == 0xE0) { cp = c & 0x0F; extra = 2; }
        else if ((c & 0xF8) == 0xF0) { cp = c & 0x07; extra = 3; }
        if (i + extra >= text.size() && extra > 0) { cps.push_back(c); ++i; continue; }
        bool valid = true;
        for (std::size_t k = 1; k <= extra; ++k) {
            unsigned char cc = static_cast<unsigned char>(text[i + k]);
            if ((cc & 0xC0) != 0x80) { valid = false; break; }
            cp = (cp << 6) | (cc & 0x3F);
        }
        if (!valid || extra == 0) {
            cps.push_back(c);
            ++i;
        } else {
            cps.push_back(cp);
            i += extra + 1;
        }
    }
    return cps;
}

std::vector<std::string> split_words(const std::string& text) {
    std::vector<std::string> words;
    std::string cur;
    for (unsigned char c : text) {
        if (std::isspace(c)) {
            if (!cur.empty()) words.push_back(std::move(cur));
            cur.clear();
        } else {
            cur.push_back(static_cast<char>(c));
        }
    }
    if (!cur.empty()) words.push_back(std::move(cur));
    return words;
}

EditDistanceResult cer_counts(const std::string& ref, const std::string& hyp,
                              const TextNorm& norm) {
    auto r = split_chars(normalize_text(ref, norm));
    auto h = split_chars(normalize_text(hyp, norm));
    if (r.empty())
        throw Error(ErrorKind::EmptyReference, "cer: reference empty after normalization");
    return edit_distance<std::uint32_t>(r, h);
}

EditDistanceResult wer_counts(const std::string& ref, const std::string& hyp,
                              const TextNorm& norm) {
    auto r = split_words(normalize_text(ref, norm));
    auto h = split_words(normalize_text(hyp, norm));
    if (r.empty())
        throw Error(ErrorKind::EmptyReference, "wer: reference empty after normalization");
    return edit_distance<std::string>(r, h);
}

double cer(const std::string& ref, const std::string& hyp, const TextNorm& norm) {
    return cer_counts(ref, hyp, norm).rate();
}

double wer(const std::string& ref, const std::string& hyp, const TextNorm& norm) {
    return wer_counts(ref, hyp, norm).rate();
}

double relative_reduction(double baseline, double improved) {
    if (!(baseline > 0.0))
        throw Error(ErrorKind::BadArgument, "relative_reduction: baseline must be > 0");
    return (baseline - improved) / baseline * 100.0;
}

double bits_per_token(std::uint32_t vocab, BitrateMode mode) {
    if (vocab == 0) throw Error(ErrorKind::BadArgument, "bits_per_token: vocab must be >= 1");
    if (vocab == 1) return 0.0;
    if (mode == BitrateMode::Exact) return std::log2(static_cast<double>(vocab));
    return static_cast<double>(std::bit_width(vocab - 1));  // ceil(log2(vocab)), exactly
}

BitrateReport stream_bitrate(Rational frame_rate_hz, std::span<const std::uint32_t> vocab_sizes,
                             BitrateMode mode) {
    if (!frame_rate_hz.positive())
        throw Error(ErrorKind::BadArgument, "stream_bitrate: frame rate must be > 0");
    BitrateReport report;
    report.mode = mode;
    report.frame_rate = frame_rate_hz;
    report.vocab_sizes.assign(vocab_sizes.begin(), vocab_sizes.end());
    double rate = frame_rate_hz.value();
    for (std::uint32_t vocab : vocab_sizes) {
        double bps = rate * bits_per_token(vocab, mode);
        report.per_stream_bps.push_back(bps);
        report.total_bps += bps;
    }
    validate(report);
    return report;
}

namespace {

// Exact rational accumulation of corpus duration, 128-bit intermediates.
struct SecondsAccum {
    unsigned __int128 num = 0;
    unsigned __int128 den = 1;

    void add_frames(std::uint64_t frames, Rational rate) {
        // frames / rate = frames * rate.den / rate.num
        unsigned __int128 an = static_cast<unsigned __int128>(frames) * rate.den;
        unsigned __int128 ad = rate.num;
        num = num * ad + an * den;
        den = den * ad;
        reduce();
    }

    void reduce() {
        unsigned __int128 a = num, b = den;
        while (b != 0) {
            unsigned __int128 t = a % b;
            a = b;
            b = t;
        }
        if (a > 1) {
            num /= a;
            den /= a;
        }
    }

    double value() const {
        return static_cast<double>(num) / static_cast<double>(den);
    }
};

}  // namespace

BitrateReport corpus_bitrate(std::span<const TokenStream> corpus, BitrateMode mode) {
    if (corpus.empty()) throw Error(ErrorKind::EmptyCorpus, "corpus_bitrate: no utterances");

    const TokenStream& first = corpus.front();
    std::vector<std::uint32_t> vocabs;
    for (const auto& g : first.streams) vocabs.push_back(g.vocab_size);

    std::uint64_t total_frames = 0;
    SecondsAccum seconds;
    for (const auto& ts : corpus) {
        if (ts.streams.size() != vocabs.size())
            throw Error(ErrorKind::HeterogeneousCorpus,
                        "corpus_bitrate: utterance " + ts.utt_id + " has " +
                            std::to_string(ts.streams.size()) + " streams, expected " +
                            std::to_string(vocabs.size()));
        for (std::size_t s = 0; s < vocabs.size(); ++s) {
            if (ts.streams[s].vocab_size != vocabs[s])
                throw Error(ErrorKind::HeterogeneousCorpus,
                            "corpus_bitrate: utterance " + ts.utt_id + " stream " +
                                std::to_string(s) + " vocab " +
                                std::to_string(ts.streams[s].vocab_size) + " != " +
                                std::to_string(vocabs[s]));
        }
        total_frames += ts.num_frames;
        seconds.add_frames(ts.num_frames, ts.frame_rate);
    }

    BitrateReport report;
    report.mode = mode;
    report.vocab_sizes = vocabs;

    if (total_frames == 0) {
        // Zero-length corpus carries no information; report the first
        // utterance's nominal rate.
        report.frame_rate = first.frame_rate;
        report.per_stream_bps.assign(vocabs.size(), 0.0);
        report.total_bps = 0.0;
        validate(report);
        return report;
    }

    // effective rate = total frames / total seconds
    unsigned __int128 rn = static_cast<unsigned __int128>(total_frames) * seconds.den;
    unsigned __int128 rd = seconds.num;
    {
        unsigned __int128 a = rn, b = rd;
        while (b != 0) {
            unsigned __int128 t = a % b;
            a = b;
            b = t;
        }
        if (a > 1) {
            rn /= a;
            rd /= a;
        }
    }
    constexpr unsigned __int128 u64max = ~static_cast<std::uint64_t>(0);
    if (rn > u64max || rd > u64max)
        throw Error(ErrorKind::BadArgument, "corpus_bitrate: effective frame rate overflows");
    report.frame_rate = Rational(static_cast<std::uint64_t>(rn), static_cast<std::uint64_t>(rd));

    double secs = seconds.value();
    for (std::uint32_t vocab : vocabs) {
        double bits = static_cast<double>(total_frames) * bits_per_token(vocab, mode);
        double bps = bits / secs;
        report.per_stream_bps.push_back(bps);
        report.total_bps += bps;
    }
    validate(report);
    return report;
}

double log_f0_rmse(std::span<const double> f0_ref, std::span<const double> f0_hyp) {
    if (f0_ref.size() != f0_hyp.size())
        throw Error(ErrorKind::LengthMismatch, "log_f0_rmse: " + std::to_string(f0_ref.size()) +
                                                   " vs " + std::to_string(f0_hyp.size()) +
                                                   " frames");
    double sum_sq = 0.0;
    std::uint64_t voiced = 0;
    for (std::size_t t = 0; t < f0_ref.size(); ++t) {
        double r = f0_ref[t], h = f0_hyp[t];
        if (!(std::isfinite(r) && r >= 0.0) || !(std::isfinite(h) && h >= 0.0))
            throw Error(ErrorKind::BadArgument,
                        "log_f0_rmse: F0 values must be finite and >= 0 (frame " +
                            std::to_string(t) + ")");
        if (r > 0.0 && h > 0.0) {
            double diff = std::log(r) - std::log(h);
            sum_sq += diff * diff;
            ++voiced;
        }
    }
    if (voiced == 0)
        throw Error(ErrorKind::NoVoicedOverlap, "log_f0_rmse: no frame voiced in both contours");
    return std::sqrt(sum_sq / static_cast<double>(voiced));
}

}  // namespace dst
