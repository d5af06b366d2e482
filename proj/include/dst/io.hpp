#pragma once
// Serialization for the core types. Binary formats are little-endian with a
// 4-byte magic whose 4th byte is the format version; byte layouts and golden
// hex dumps live in docs/formats.md. Text formats are TAB-separated, one
// utterance per line.

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dst/types.hpp"

namespace dst {

inline constexpr char kFeatureMagic[4] = {'D', 'S', 'F', '1'};
inline constexpr char kTokenMagic[4] = {'D', 'S', 'T', '1'};
inline constexpr char kCodebookMagic[4] = {'D', 'S', 'C', '1'};
inline constexpr char kPairTableMagic[4] = {'D', 'S', 'P', '1'};

// --- binary formats; one value per file ---
// Encoders validate first and never produce an invalid file; decoders check
// magic, completeness, and every core-type invariant before returning.
// `context` (usually the file path) is prepended to error messages.

std::string encode_feature_matrix(const FeatureMatrix& m);
FeatureMatrix decode_feature_matrix(std::string_view bytes, const std::string& context = {});

std::string encode_token_stream(const TokenStream& ts);
TokenStream decode_token_stream(std::string_view bytes, const std::string& context = {});

std::string encode_codebook(const Codebook& cb);
Codebook decode_codebook(std::string_view bytes, const std::string& context = {});

std::string encode_pair_table(const PairFoldTable& table);
PairFoldTable decode_pair_table(std::string_view bytes, const std::string& context = {});

void write_feature_matrix(const FeatureMatrix& m, const std::string& path);
FeatureMatrix read_feature_matrix(const std::string& path);
void write_token_stream(const TokenStream& ts, const std::string& path);
TokenStream read_token_stream(const std::string& path);
void write_codebook(const Codebook& cb, const std::string& path);
Codebook read_codebook(const std::string& path);
void write_pair_table(const PairFoldTable& table, const std::string& path);
PairFoldTable read_pair_table(const std::string& path);

// --- text formats; one line per utterance, fields TAB-separated ---
// tokens:    utt_id  rate_num/rate_den  vocab[,vocab]  t0[:t0'] t1[:t1'] ...
// alignment: utt_id  shift_num/shift_den  label:dur label:dur ...

std::string token_text_line(const TokenStream& ts);
TokenStream parse_token_text_line(const std::string& line, const std::string& context = {});
std::string alignment_text_line(const AlignmentTrack& track);
AlignmentTrack parse_alignment_text_line(const std::string& line, const std::string& context = {});

void write_token_text(std::span<const TokenStream> corpus, const std::string& path);
std::vector<TokenStream> read_token_text(const std::string& path);
void write_alignment_text(std::span<const AlignmentTrack> tracks, const std::string& path);
std::vector<AlignmentTrack> read_alignment_text(const std::string& path);

// --- raw file helpers ---

std::string read_file_bytes(const std::string& path);
void write_file_bytes(const std::string& path, std::string_view bytes);

}  // namespace dst
