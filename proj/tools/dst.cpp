// dst: command-line toolkit for discrete speech-token streams.
//
// Conventions shared by every subcommand:
//   - token paths ending in .txt are text corpora (one utterance per line);
//     any other token path is a single-utterance binary file
//   - a positional corpus argument of the form @list reads one path per line
//   - exit code 0 = success, 1 = usage error, 2 = data/file error
//   - --threads never changes numerical output

#include <cstdio>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "dst/error.hpp"
#include "dst/fold.hpp"
#include "dst/io.hpp"
#include "dst/metrics.hpp"
#include "dst/prosody.hpp"
#include "dst/quantize.hpp"
#include "dst/timebase.hpp"
#include "dst/types.hpp"

namespace {

using nlohmann::json;

bool is_text_path(const std::string& path) {
    return path.size() >= 4 && path.compare(path.size() - 4, 4, ".txt") == 0;
}

std::vector<std::string> expand_manifests(const std::vector<std::string>& args) {
    std::vector<std::string> paths;
    for (const std::string& arg : args) {
        if (!arg.empty() && arg[0] == '@') {
            std::istringstream in(dst::read_file_bytes(arg.substr(1)));
            std::string line;
            while (std::getline(in, line)) {
                if (!line.empty() && line.back() == '\r') line.pop_back();
                if (!line.empty()) paths.push_back(line);
            }
        } else {
            paths.push_back(arg);
        }
    }
    return paths;
}

std::vector<dst::TokenStream> read_token_corpus(const std::vector<std::string>& args) {
    std::vector<dst::TokenStream> corpus;
    for (const std::string& path : expand_manifests(args)) {
        if (is_text_path(path)) {
            for (auto& ts : dst::read_token_text(path)) corpus.push_back(std::move(ts));
        } else {
            corpus.push_back(dst::read_token_stream(path));
        }
    }
    return corpus;
}

void write_token_corpus(const std::vector<dst::TokenStream>& corpus, const std::string& path) {
    if (is_text_path(path)) {
        dst::write_token_text(corpus, path);
    } else if (corpus.size() == 1) {
        dst::write_token_stream(corpus.front(), path);
    } else {
        throw dst::Error(dst::ErrorKind::BadArgument,
                         "binary token output holds exactly one utterance, corpus has " +
                             std::to_string(corpus.size()) + "; use a .txt output path");
    }
}

std::vector<dst::FeatureMatrix> read_feature_corpus(const std::vector<std::string>& args) {
    std::vector<dst::FeatureMatrix> corpus;
    for (const std::string& path : expand_manifests(args))
        corpus.push_back(dst::read_feature_matrix(path));
    return corpus;
}

std::vector<dst::AlignmentTrack> read_alignment_corpus(const std::vector<std::string>& args) {
    std::vector<dst::AlignmentTrack> tracks;
    for (const std::string& path : expand_manifests(args))
        for (auto& t : dst::read_alignment_text(path)) tracks.push_back(std::move(t));
    return tracks;
}

std::vector<double> read_number_file(const std::string& path, const char* what) {
    std::istringstream in(dst::read_file_bytes(path));
    std::vector<double> values;
    double v = 0.0;
    while (in >> v) values.push_back(v);
    if (!in.eof()) {
        std::string tail;
        in.clear();
        in >> tail;
        throw dst::Error(dst::ErrorKind::BadArgument,
                         path + ": cannot parse " + what + " '" + tail + "'");
    }
    return values;
}

std::string fmt(double v, const char* spec) {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty())
        std::cout << text;
    else
        dst::write_file_bytes(out_path, text);
}

json bitrate_json(const dst::BitrateReport& r) {
    return json{{"mode", dst::mode_name(r.mode)},
                {"frame_rate", r.frame_rate.str()},
                {"vocab_sizes", r.vocab_sizes},
                {"per_stream_bps", r.per_stream_bps},
                {"total_bps", r.total_bps}};
}

dst::TextNorm parse_norm(const std::string& spec) {
    dst::TextNorm norm{false, false, false};
    if (spec == "none") return norm;
    std::istringstream in(spec);
    std::string part;
    while (std::getline(in, part, ',')) {
        if (part == "lower")
            norm.lowercase = true;
        else if (part == "space")
            norm.collapse_whitespace = true;
        else if (part == "punct")
            norm.strip_punct = true;
        else
            throw CLI::ValidationError("--normalize",
                                       "unknown normalization '" + part +
                                           "' (expected comma list of lower,space,punct or none)");
    }
    return norm;
}

dst::BitrateMode parse_mode(const std::string& mode) {
    if (mode == "exact") return dst::BitrateMode::Exact;
    if (mode == "ceil") return dst::BitrateMode::Ceil;
    throw CLI::ValidationError("--mode", "expected 'exact' or 'ceil', got '" + mode + "'");
}

// Shared option bundle for subcommands that map a token corpus to another.
struct TokenMapArgs {
    std::vector<std::string> inputs;
    std::string output;
};

TokenMapArgs* add_token_map(CLI::App* sub, std::vector<std::shared_ptr<void>>& keep) {
    auto args = std::make_shared<TokenMapArgs>();
    keep.push_back(args);
    sub->add_option("tokens", args->inputs, "token files (.txt = text corpus, @file = manifest)")
        ->required();
    sub->add_option("-o,--output", args->output, "output token file")->required();
    return args.get();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"toolkit for discrete speech-token streams"};
    app.require_subcommand(1);
    std::vector<std::shared_ptr<void>> keep;

    // --- kmeans-train ---
    {
        auto* sub = app.add_subcommand("kmeans-train", "fit a k-means codebook to feature files");
        struct A {
            std::uint32_t k = 1;
            std::uint64_t seed = 0;
            std::uint32_t max_iters = 100;
            double tol = 1e-6;
            unsigned threads = 0;
            std::vector<std::string> features;
            std::string output;
        };
        auto a = std::make_shared<A>();
        keep.push_back(a);
        sub->add_option("--k", a->k, "number of clusters")->required();
        sub->add_option("--seed", a->seed, "PRNG seed")->capture_default_str();
        sub->add_option("--max-iters", a->max_iters, "iteration cap")->capture_default_str();
        sub->add_option("--tol", a->tol, "relative inertia-improvement stop threshold")->capture_default_str();
        sub->add_option("--threads", a->threads, "worker threads (0 = auto; never changes output)")
            ->capture_default_str();
        sub->add_option("features", a->features, "feature files (@file = manifest)")->required();
        sub->add_option("-o,--output", a->output, "output codebook file")->required();
        sub->callback([a] {
            auto corpus = read_feature_corpus(a->features);
            dst::KMeansConfig cfg{a->k, a->seed, a->max_iters, a->tol};
            dst::Codebook cb = dst::kmeans_train(corpus, cfg, a->threads);
            dst::write_codebook(cb, a->output);
        });
    }

    // --- quantize ---
    {
        auto* sub = app.add_subcommand("quantize", "assign each frame to its nearest centroid");
        struct A {
            std::string codebook;
            std::vector<std::string> features;
            std::string output;
        };
        auto a = std::make_shared<A>();
        keep.push_back(a);
        sub->add_option("codebook", a->codebook, "codebook file")->required();
        sub->add_option("features", a->features, "feature files (@file = manifest)")->required();
        sub->add_option("-o,--output", a->output, "output token file")->required();
        sub->callback([a] {
            dst::Codebook cb = dst::read_codebook(a->codebook);
            std::vector<dst::TokenStream> out;
            for (const auto& f : read_feature_corpus(a->features))
                out.push_back(dst::kmeans_assign(f, cb));
            write_token_corpus(out, a->output);
        });
    }

    // --- fold-build ---
    {
        auto* sub = app.add_subcommand("fold-build", "build a pair table from 2-stream tokens");
        struct A {
            std::vector<std::string> tokens;
            std::string output;
        };
        auto a = std::make_shared<A>();
        keep.push_back(a);
        sub->add_option("tokens", a->tokens, "2-stream token files")->required();
        sub->add_option("-o,--output", a->output, "output pair-table file")->required();
        sub->callback([a] {
            auto corpus = read_token_corpus(a->tokens);
            dst::write_pair_table(dst::build_pair_vocab(corpus), a->output);
        });
    }

    // --- fold ---
    {
        auto* sub = app.add_subcommand("fold", "fold 2-stream tokens into the pair vocabulary");
        struct A {
            std::string table;
            std::string oov = "error";
            TokenMapArgs* io = nullptr;
        };
        auto a = std::make_shared<A>();
        keep.push_back(a);
        sub->add_option("table", a->table, "pair-table file")->required();
        a->io = add_token_map(sub, keep);
        sub->add_option("--oov", a->oov, "unseen-pair policy: error or reserve")->capture_default_str()
            ->check(CLI::IsMember({"error", "reserve"}));
        sub->callback([a] {
            dst::PairFoldTable table = dst::read_pair_table(a->table);
            dst::OovPolicy oov =
                a->oov == "reserve" ? dst::OovPolicy::Reserve : dst::OovPolicy::Error;
            std::vector<dst::TokenStream> out;
            for (const auto& ts : read_token_corpus(a->io->inputs))
                out.push_back(dst::fold(ts, table, oov));
            write_token_corpus(out, a->io->output);
        });
    }

    // --- unfold ---
    {
        auto* sub = app.add_subcommand("unfold", "invert fold back to 2-stream tokens");
        struct A {
            std::string table;
            TokenMapArgs* io = nullptr;
        };
        auto a = std::make_shared<A>();
        keep.push_back(a);
        sub->add_option("table", a->table, "pair-table file")->required();
        a->io = add_token_map(sub, keep);
        sub->callback([a] {
            dst::PairFoldTable table = dst::read_pair_table(a->table);
            std::vector<dst::TokenStream> out;
            for (const auto& ts : read_token_corpus(a->io->inputs))
                out.push_back(dst::unfold(ts, table));
            write_token_corpus(out, a->io->output);
        });
    }

    // --- repeat / collapse ---
    {
        auto* sub = app.add_subcommand("repeat", "repeat each frame n times (rate scales up)");
        struct A {
            std::uint64_t n = 1;
            TokenMapArgs* io = nullptr;
        };
        auto a = std::make_shared<A>();
        keep.push_back(a);
        sub->add_option("--n", a->n, "repetition factor")->required();
        a->io = add_token_map(sub, keep);
        sub->callback([a] {
            std::vector<dst::TokenStream> out;
            for (const auto& ts : read_token_corpus(a->io->inputs))
                out.push_back(dst::repeat_tokens(ts, a->n));
            write_token_corpus(out, a->io->output);
        });
    }
    {
        auto* sub = app.add_subcommand("collapse", "undo repeat: keep one frame per n-block");
        struct A {
            std::uint64_t n = 1;
            TokenMapArgs* io = nullptr;
        };
        auto a = std::make_shared<A>();
        keep.push_back(a);
        sub->add_option("--n", a->n, "block size")->required();
        a->io = add_token_map(sub, keep);
        sub->callback([a] {
            std::vector<dst::TokenStream> out;
            for (const auto& ts : read_token_corpus(a->io->inputs))
                out.push_back(dst::collapse_repeats(ts, a->n));
            write_token_corpus(out, a->io->output);
        });
    }

    // --- durations ---
    {
        auto* sub = app.add_subcommand(
            "durations", "convert a list of segment durations in seconds to frame counts");
        struct A {
            std::string shift;
            std::string input;
            std::string output;
            bool as_json = false;
        };
        auto a = std::make_shared<A>();
        keep.push_back(a);
        sub->add_option("--shift", a->shift, "frame shift in seconds as num/den (e.g. 1/100)")
            ->required();
        sub->add_option("input", a->input, "file of whitespace-separated seconds")->required();
        sub->add_option("-o,--output", a->output, "output file (default: stdout)");
        sub->add_flag("--json", a->as_json, "emit a JSON object");
        sub->callback([a] {
            dst::Rational shift = dst::parse_rational(a->shift);
            auto seconds = read_number_file(a->input, "duration");
            auto frames = dst::seconds_to_frames(seconds, shift);
            std::uint64_t total = 0;
            for (auto f : frames) total += f;
            if (a->as_json) {
                emit(json{{"frames", frames}, {"total_frames", total}}.dump() + "\n", a->output);
            } else {
                std::string text;
                for (auto f : frames) text += std::to_string(f) + "\n";
                emit(text, a->output);
            }
        });
    }

    // --- align-downsample / align-expand / align-compress ---
    {
        auto* sub = app.add_subcommand("align-downsample",
                                       "keep the first frame label of every factor-sized block");
        struct A {
            std::uint64_t factor = 1;
            std::vector<std::string> inputs;
            std::string output;
        };
        auto a = std::make_shared<A>();
        keep.push_back(a);
        sub->add_option("--factor", a->factor, "downsampling factor")->required();
        sub->add_option("alignments", a->inputs, "alignment text files")->required();
        sub->add_option("-o,--output", a->output, "output alignment text file")->required();
        sub->callback([a] {
            std::vector<dst::AlignmentTrack> out;
            for (const auto& track : read_alignment_corpus(a->inputs)) {
                auto labels = dst::expand_labels(track);
                auto kept = dst::downsample_alignment(labels, a->factor);
                out.push_back(
                    dst::compress_labels(kept, track.frame_shift.times(a->factor), track.utt_id));
            }
            dst::write_alignment_text(out, a->output);
        });
    }
    {
        auto* sub = app.add_subcommand("align-expand",
                                       "expand each segment to per-frame label:1 entries");
        struct A {
            std::vector<std::string> inputs;
            std::string output;
        };
        auto a = std::make_shared<A>();
        keep.push_back(a);
        sub->add_option("alignments", a->inputs, "alignment text files")->required();
        sub->add_option("-o,--output", a->output, "output alignment text file")->required();
        sub->callback([a] {
            std::vector<dst::AlignmentTrack> out;
            for (const auto& track : read_alignment_corpus(a->inputs)) {
                dst::AlignmentTrack flat;
                flat.utt_id = track.utt_id;
                flat.frame_shift = track.frame_shift;
                for (const auto& label : dst::expand_labels(track))
                    flat.segments.push_back({label, 1});
                out.push_back(std::move(flat));
            }
            dst::write_alignment_text(out, a->output);
        });
    }
    {
        auto* sub = app.add_subcommand("align-compress",
                                       "merge adjacent equal labels into canonical run-lengths");
        struct A {
            std::vector<std::string> inputs;
            std::string output;
        };
        auto a = std::make_shared<A>();
        keep.push_back(a);
        sub->add_option("alignments", a->inputs, "alignment text files")->required();
        sub->add_option("-o,--output", a->output, "output alignment text file")->required();
        sub->callback([a] {
            std::vector<dst::AlignmentTrack> out;
            for (const auto& track : read_alignment_corpus(a->inputs)) {
                auto labels = dst::expand_labels(track);
                out.push_back(dst::compress_labels(labels, track.frame_shift, track.utt_id));
            }
            dst::write_alignment_text(out, a->output);
        });
    }

    // --- prosody-deltas / cmn-stats / cmn-apply / phone-average / prosody-label ---
    {
        auto* sub = app.add_subcommand("prosody-deltas", "append backward-difference columns");
        struct A {
            std::uint32_t orders = 2;
            std::string input;
            std::string output;
        };
        auto a = std::make_shared<A>();
        keep.push_back(a);
        sub->add_option("--orders", a->orders, "number of difference orders (1 or 2)")->capture_default_str();
        sub->add_option("features", a->input, "feature file")->required();
        sub->add_option("-o,--output", a->output, "output feature file")->required();
        sub->callback([a] {
            dst::write_feature_matrix(
                dst::add_deltas(dst::read_feature_matrix(a->input), a->orders), a->output);
        });
    }
    {
        auto* sub = app.add_subcommand(
            "cmn-stats", "per-dimension corpus mean, stored as a 1-centroid codebook file");
        struct A {
            std::vector<std::string> features;
            std::string output;
        };
        auto a = std::make_shared<A>();
        keep.push_back(a);
        sub->add_option("features", a->features, "feature files (@file = manifest)")->required();
        sub->add_option("-o,--output", a->output, "output stats file")->required();
        sub->callback([a] {
            auto corpus = read_feature_corpus(a->features);
            std::vector<double> mean = dst::cmn_stats(corpus);
            auto dims = static_cast<std::uint32_t>(mean.size());
            dst::write_codebook(dst::make_codebook(1, dims, std::move(mean), 0, 0, 0.0),
                                a->output);
        });
    }
    {
        auto* sub = app.add_subcommand("cmn-apply", "subtract a stored mean from every frame");
        struct A {
            std::string stats;
            std::string input;
            std::string output;
        };
        auto a = std::make_shared<A>();
        keep.push_back(a);
        sub->add_option("stats", a->stats, "stats file from cmn-stats")->required();
        sub->add_option("features", a->input, "feature file")->required();
        sub->add_option("-o,--output", a->output, "output feature file")->required();
        sub->callback([a] {
            dst::Codebook stats = dst::read_codebook(a->stats);
            if (stats.k != 1)
                throw dst::Error(dst::ErrorKind::BadArgument,
                                 a->stats + ": expected a 1-centroid stats file, k = " +
                                     std::to_string(stats.k));
            dst::write_feature_matrix(
                dst::apply_cmn(dst::read_feature_matrix(a->input), stats.centroids), a->output);
        });
    }
    {
        auto* sub = app.add_subcommand("phone-average",
                                       "average feature frames over alignment segments");
        struct A {
            std::string features;
            std::string alignments;
            std::string output;
        };
        auto a = std::make_shared<A>();
        keep.push_back(a);
        sub->add_option("features", a->features, "feature file")->required();
        sub->add_option("alignments", a->alignments, "alignment text file")->required();
        sub->add_option("-o,--output", a->output, "output feature file")->required();
        sub->callback([a] {
            dst::FeatureMatrix f = dst::read_feature_matrix(a->features);
            auto tracks = dst::read_alignment_text(a->alignments);
            const dst::AlignmentTrack* match = nullptr;
            for (const auto& t : tracks)
                if (t.utt_id == f.utt_id) match = &t;
            if (!match)
                throw dst::Error(dst::ErrorKind::BadArgument,
                                 a->alignments + ": no alignment for utterance '" + f.utt_id + "'");
            dst::write_feature_matrix(dst::phone_average(f, *match), a->output);
        });
    }
    {
        auto* sub = app.add_subcommand("prosody-label",
                                       "nearest-centroid label per segment-average row");
        struct A {
            std::string codebook;
            std::vector<std::string> features;
            std::string output;
        };
        auto a = std::make_shared<A>();
        keep.push_back(a);
        sub->add_option("codebook", a->codebook, "codebook file")->required();
        sub->add_option("features", a->features, "feature files")->required();
        sub->add_option("-o,--output", a->output, "output token file")->required();
        sub->callback([a] {
            dst::Codebook cb = dst::read_codebook(a->codebook);
            std::vector<dst::TokenStream> out;
            for (const auto& f : read_feature_corpus(a->features)) {
                dst::TokenGroup g;
                g.vocab_size = cb.k;
                g.tokens = dst::prosody_labels(f, cb);
                out.push_back(dst::make_token_stream(f.utt_id, f.frame_shift.reciprocal(), {g}));
            }
            write_token_corpus(out, a->output);
        });
    }

    // --- bitrate ---
    {
        auto* sub = app.add_subcommand("bitrate", "bits per second of a token stream spec or corpus");
        struct A {
            std::string mode = "exact";
            std::string rate;
            std::string vocab;
            std::vector<std::string> tokens;
            bool as_json = false;
        };
        auto a = std::make_shared<A>();
        keep.push_back(a);
        sub->add_option("--mode", a->mode, "exact or ceil")->capture_default_str()
            ->check(CLI::IsMember({"exact", "ceil"}));
        sub->add_option("--rate", a->rate, "frame rate in Hz as num/den (with --vocab)");
        sub->add_option("--vocab", a->vocab, "comma-separated vocabulary sizes (with --rate)");
        sub->add_option("tokens", a->tokens, "token files (instead of --rate/--vocab)");
        sub->add_flag("--json", a->as_json, "emit a JSON object");
        sub->callback([a] {
            dst::BitrateMode mode = parse_mode(a->mode);
            bool by_spec = !a->rate.empty() || !a->vocab.empty();
            if (by_spec == !a->tokens.empty())
                throw CLI::ValidationError(
                    "bitrate", "give either --rate and --vocab, or token files, not both");
            dst::BitrateReport report;
            if (by_spec) {
                if (a->rate.empty() || a->vocab.empty())
                    throw CLI::ValidationError("bitrate", "--rate and --vocab go together");
                std::vector<std::uint32_t> vocabs;
                std::istringstream in(a->vocab);
                std::string part;
                while (std::getline(in, part, ',')) {
                    std::uint64_t v = 0;
                    try {
                        v = std::stoull(part);
                    } catch (const std::exception&) {
                        throw CLI::ValidationError("--vocab", "cannot parse '" + part + "'");
                    }
                    vocabs.push_back(static_cast<std::uint32_t>(v));
                }
                report = dst::stream_bitrate(dst::parse_rational(a->rate), vocabs, mode);
            } else {
                report = dst::corpus_bitrate(read_token_corpus(a->tokens), mode);
            }
            if (a->as_json)
                std::cout << bitrate_json(report).dump() << "\n";
            else
                std::cout << fmt(report.total_bps, "%.3f") << "\n";
        });
    }

    // --- cer / wer ---
    for (bool words : {false, true}) {
        auto* sub = app.add_subcommand(words ? "wer" : "cer",
                                       words ? "word error rate between two text files"
                                             : "character error rate between two text files");
        struct A {
            std::string ref;
            std::string hyp;
            std::string normalize = "lower,space";
            bool as_json = false;
            bool words = false;
        };
        auto a = std::make_shared<A>();
        keep.push_back(a);
        a->words = words;
        sub->add_option("reference", a->ref, "reference text file")->required();
        sub->add_option("hypothesis", a->hyp, "hypothesis text file")->required();
        sub->add_option("--normalize", a->normalize, "comma list of lower,space,punct (or none)")
            ->capture_default_str();
        sub->add_flag("--json", a->as_json, "emit a JSON object");
        sub->callback([a] {
            dst::TextNorm norm = parse_norm(a->normalize);
            std::string ref = dst::read_file_bytes(a->ref);
            std::string hyp = dst::read_file_bytes(a->hyp);
            dst::EditDistanceResult r =
                a->words ? dst::wer_counts(ref, hyp, norm) : dst::cer_counts(ref, hyp, norm);
            if (a->as_json)
                std::cout << json{{"substitutions", r.substitutions},
                                  {"insertions", r.insertions},
                                  {"deletions", r.deletions},
                                  {"reference_length", r.ref_len},
                                  {"rate", r.rate()}}
                                 .dump()
                          << "\n";
            else
                std::cout << fmt(r.rate(), "%.6f") << "\n";
        });
    }

    // --- f0-rmse ---
    {
        auto* sub = app.add_subcommand(
            "f0-rmse", "log-F0 RMSE over frames voiced in both contours (0 = unvoiced)");
        struct A {
            std::string ref;
            std::string hyp;
            bool as_json = false;
        };
        auto a = std::make_shared<A>();
        keep.push_back(a);
        sub->add_option("reference", a->ref, "reference F0 file, one value per frame")->required();
        sub->add_option("hypothesis", a->hyp, "hypothesis F0 file, one value per frame")
            ->required();
        sub->add_flag("--json", a->as_json, "emit a JSON object");
        sub->callback([a] {
            auto ref = read_number_file(a->ref, "F0 value");
            auto hyp = read_number_file(a->hyp, "F0 value");
            double rmse = dst::log_f0_rmse(ref, hyp);
            if (a->as_json)
                std::cout << json{{"log_f0_rmse", rmse}, {"frames", ref.size()}}.dump() << "\n";
            else
                std::cout << fmt(rmse, "%.6f") << "\n";
        });
    }

    // --- stats pairs ---
    {
        auto* stats = app.add_subcommand("stats", "corpus statistics");
        stats->require_subcommand(1);
        auto* sub = stats->add_subcommand("pairs", "unique-pair report for 2-stream tokens");
        struct A {
            std::vector<std::string> tokens;
            bool as_json = false;
        };
        auto a = std::make_shared<A>();
        keep.push_back(a);
        sub->add_option("tokens", a->tokens, "2-stream token files")->required();
        sub->add_flag("--json", a->as_json, "emit a JSON object");
        sub->callback([a] {
            dst::PairStats s = dst::pair_stats(read_token_corpus(a->tokens));
            std::uint64_t possible = static_cast<std::uint64_t>(s.vocab_a) * s.vocab_b;
            if (a->as_json) {
                std::cout << json{{"vocab_a", s.vocab_a},
                                  {"vocab_b", s.vocab_b},
                                  {"unique_pairs", s.unique_pairs},
                                  {"possible_pairs", possible},
                                  {"total_frames", s.total_frames},
                                  {"coverage", s.coverage}}
                                 .dump()
                          << "\n";
            } else {
                std::cout << "vocab_a " << s.vocab_a << "\n"
                          << "vocab_b " << s.vocab_b << "\n"
                          << "unique_pairs " << s.unique_pairs << "\n"
                          << "possible_pairs " << possible << "\n"
                          << "total_frames " << s.total_frames << "\n"
                          << "coverage " << fmt(s.coverage, "%.6f") << "\n";
            }
        });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const dst::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
