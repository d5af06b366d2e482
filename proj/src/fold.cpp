#include "dst/fold.hpp"

#include <unordered_map>

#include "dst/error.hpp"

namespace dst {

namespace {

void check_two_streams(const TokenStream& ts) {
    if (ts.streams.size() != 2)
        throw Error(ErrorKind::ShapeMismatch, "utterance " + ts.utt_id + " has " +
                                                  std::to_string(ts.streams.size()) +
                                                  " streams, expected 2");
}

void check_corpus_vocabs(const TokenStream& ts, std::uint32_t vocab_a, std::uint32_t vocab_b) {
    if (ts.streams[0].vocab_size != vocab_a || ts.streams[1].vocab_size != vocab_b)
        throw Error(ErrorKind::ShapeMismatch,
                    "utterance " + ts.utt_id + " vocabularies (" +
                        std::to_string(ts.streams[0].vocab_size) + "," +
                        std::to_string(ts.streams[1].vocab_size) + ") do not match corpus (" +
                        std::to_string(vocab_a) + "," + std::to_string(vocab_b) + ")");
}

}  // namespace

PairFoldTable build_pair_vocab(std::span<const TokenStream> corpus) {
    if (corpus.empty())
        throw Error(ErrorKind::ShapeMismatch, "build_pair_vocab: empty corpus");
    check_two_streams(corpus.front());
    std::uint32_t vocab_a = corpus.front().streams[0].vocab_size;
    std::uint32_t vocab_b = corpus.front().streams[1].vocab_size;

    std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
    std::unordered_map<std::uint64_t, std::uint32_t> seen;
    for (const auto& ts : corpus) {
        check_two_streams(ts);
        check_corpus_vocabs(ts, vocab_a, vocab_b);
        const auto& a = ts.streams[0].tokens;
        const auto& b = ts.streams[1].tokens;
        for (std::uint64_t t = 0; t < ts.num_frames; ++t) {
            std::uint64_t key = PairFoldTable::pair_key(a[t], b[t]);
            auto [it, inserted] = seen.emplace(key, static_cast<std::uint32_t>(pairs.size()));
            (void)it;
            if (inserted) pairs.emplace_back(a[t], b[t]);
        }
    }
    return make_pair_fold_table(vocab_a, vocab_b, std::move(pairs));
}

TokenStream fold(const TokenStream& ts, const PairFoldTable& table, OovPolicy oov) {
    check_two_streams(ts);
    check_corpus_vocabs(ts, table.vocab_a, table.vocab_b);

    std::uint32_t folded = table.folded_vocab();
    if (folded == 0 && oov != OovPolicy::Reserve)
        throw Error(ErrorKind::BadArgument,
                    "fold: the pair table is empty, so the folded vocabulary would be 0; "
                    "rebuild it from a corpus with at least one frame");
    TokenGroup group;
    group.vocab_size = oov == OovPolicy::Reserve ? folded + 1 : folded;
    group.tokens.reserve(ts.num_frames);
    const auto& a = ts.streams[0].tokens;
    const auto& b = ts.streams[1].tokens;
    for (std::uint64_t t = 0; t < ts.num_frames; ++t) {
        auto it = table.forward.find(PairFoldTable::pair_key(a[t], b[t]));
        if (it != table.forward.end()) {
            group.tokens.push_back(it->second);
        } else if (oov == OovPolicy::Reserve) {
            group.tokens.push_back(folded);
        } else {
            throw Error(ErrorKind::UnseenPair, "utterance " + ts.utt_id + " frame " +
                                                   std::to_string(t) + ": pair (" +
                                                   std::to_string(a[t]) + "," +
                                                   std::to_string(b[t]) + ") not in table");
        }
    }
    return make_token_stream(ts.utt_id, ts.frame_rate, {std::move(group)});
}

TokenStream unfold(const TokenStream& ts, const PairFoldTable& table) {
    if (ts.streams.size() != 1)
        throw Error(ErrorKind::ShapeMismatch, "unfold: utterance " + ts.utt_id + " has " +
                                                  std::to_string(ts.streams.size()) +
                                                  " streams, expected 1");
    std::uint32_t folded = table.folded_vocab();
    TokenGroup ga, gb;
    ga.vocab_size = table.vocab_a;
    gb.vocab_size = table.vocab_b;
    ga.tokens.reserve(ts.num_frames);
    gb.tokens.reserve(ts.num_frames);
    for (std::uint64_t t = 0; t < ts.num_frames; ++t) {
        std::uint32_t tok = ts.streams[0].tokens[t];
        if (tok >= folded)
            throw Error(ErrorKind::NotInvertible,
                        "utterance " + ts.utt_id + " frame " + std::to_string(t) + ": token " +
                            std::to_string(tok) + " is not a pair id (folded vocab " +
                            std::to_string(folded) + ")");
        ga.tokens.push_back(table.pairs[tok].first);
        gb.tokens.push_back(table.pairs[tok].second);
    }
    return make_token_stream(ts.utt_id, ts.frame_rate, {std::move(ga), std::move(gb)});
}

PairStats pair_stats(std::span<const TokenStream> corpus) {
    if (corpus.empty())
        throw Error(ErrorKind::ShapeMismatch, "pair_stats: empty corpus");
    check_two_streams(corpus.front());
    PairStats stats;
    stats.vocab_a = corpus.front().streams[0].vocab_size;
    stats.vocab_b = corpus.front().streams[1].vocab_size;

    std::unordered_map<std::uint64_t, std::size_t> index;
    for (const auto& ts : corpus) {
        check_two_streams(ts);
        check_corpus_vocabs(ts, stats.vocab_a, stats.vocab_b);
        const auto& a = ts.streams[0].tokens;
        const auto& b = ts.streams[1].tokens;
        for (std::uint64_t t = 0; t < ts.num_frames; ++t) {
            std::uint64_t key = PairFoldTable::pair_key(a[t], b[t]);
            auto [it, inserted] = index.emplace(key, stats.counts.size());
            if (inserted)
                stats.counts.push_back({{a[t], b[t]}, 1});
            else
                stats.counts[it->second].second += 1;
        }
        stats.total_frames += ts.num_frames;
    }
    stats.unique_pairs = stats.counts.size();
    stats.coverage = static_cast<double>(stats.unique_pairs) /
                     (static_cast<double>(stats.vocab_a) * static_cast<double>(stats.vocab_b));
    return stats;
}

}  // namespace dst
