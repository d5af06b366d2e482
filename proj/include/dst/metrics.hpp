#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dst/error.hpp"
#include "dst/types.hpp"

namespace dst {

struct EditDistanceResult {
    std::uint64_t substitutions = 0;
    std::uint64_t insertions = 0;
    std::uint64_t deletions = 0;
    std::uint64_t ref_len = 0;

    std::uint64_t total_errors() const { return substitutions + insertions + deletions; }

    double rate() const {
        if (ref_len == 0)
            throw Error(ErrorKind::EmptyReference, "error rate undefined for empty reference");
        return static_cast<double>(total_errors()) / static_cast<double>(ref_len);
    }
};

// Levenshtein distance with unit costs. Counts come from one optimal path,
// tie preference substitution > deletion > insertion.
template <typename Sym>
EditDistanceResult edit_distance(std::span<const Sym> ref, std::span<const Sym> hyp) {
    struct Cell {
        std::uint64_t cost = 0, subs = 0, ins = 0, dels = 0;
    };
    std::size_t m = ref.size(), n = hyp.size();
    std::vector<Cell> prev(n + 1), cur(n + 1);
    for (std::size_t j = 0; j <= n; ++j) prev[j] = {j, 0, j, 0};

    for (std::size_t i = 1; i <= m; ++i) {
        cur[0] = {i, 0, 0, i};
        for (std::size_t j = 1; j <= n; ++j) {
            bool match = ref[i - 1] == hyp[j - 1];
            Cell diag = prev[j - 1];
            diag.cost += match ? 0 : 1;
            diag.subs += match ? 0 : 1;
            Cell del = prev[j];
            del.cost += 1;
            del.dels += 1;
            Cell ins = cur[j - 1];
            ins.cost += 1;
            ins.ins += 1;

            Cell best = diag;
            if (del.cost < best.cost) best = del;
            if (ins.cost < best.cost) best = ins;
            cur[j] = best;
        }
        std::swap(prev, cur);
    }
    EditDistanceResult res;
    res.substitutions = prev[n].subs;
    res.insertions = prev[n].ins;
    res.deletions = prev[n].dels;
    res.ref_len = m;
    return res;
}

template <typename Sym>
EditDistanceResult edit_distance(const std::vector<Sym>& ref, const std::vector<Sym>& hyp) {
    return edit_distance(std::span<const Sym>(ref), std::span<const Sym>(hyp));
}

struct TextNorm {
    bool lowercase = true;
    bool collapse_whitespace = true;
    bool strip_punct = false;
};

std::string normalize_text(const std::string& text, const TextNorm& norm);

// UTF-8 aware: one symbol per code point (bad bytes pass through one by one).
std::vector<std::uint32_t> split_chars(const std::string& text);
std::vector<std::string> split_words(const std::string& text);

double cer(const std::string& ref, const std::string& hyp, const TextNorm& norm = {});
double wer(const std::string& ref, const std::string& hyp, const TextNorm& norm = {});
EditDistanceResult cer_counts(const std::string& ref, const std::string& hyp,
                              const TextNorm& norm = {});
EditDistanceResult wer_counts(const std::string& ref, const std::string& hyp,
                              const TextNorm& norm = {});

// (baseline - improved) / baseline, in percent.
double relative_reduction(double baseline, double improved);

// Bits to index one token: log2(vocab) in exact mode, ceil(log2(vocab)) in
// ceil mode. A vocabulary of 1 carries zero bits in both modes.
double bits_per_token(std::uint32_t vocab, BitrateMode mode);

BitrateReport stream_bitrate(Rational frame_rate_hz, std::span<const std::uint32_t> vocab_sizes,
                             BitrateMode mode);

// Corpus-level rate: total bits / total seconds. Requires a uniform stream
// count and uniform vocabularies; frame rates may differ per utterance.
BitrateReport corpus_bitrate(std::span<const TokenStream> corpus, BitrateMode mode);

// RMSE of natural-log F0 over frames voiced (> 0) in both contours.
double log_f0_rmse(std::span<const double> f0_ref, std::span<const double> f0_hyp);

}  // namespace dst
