#include "dst/prosody.hpp"

#include <cmath>

#include "dst/error.hpp"
#include "dst/quantize.hpp"

namespace dst {

void validate(const ProsodyConfig& cfg) {
    if (cfg.base_dims == 0)
        throw Error(ErrorKind::InvariantViolation, "ProsodyConfig: base_dims must be >= 1");
    if (cfg.delta_orders > 2)
        throw Error(ErrorKind::InvariantViolation, "ProsodyConfig: delta_orders must be 0, 1 or 2");
}

FeatureMatrix add_deltas(const FeatureMatrix& f, std::uint32_t orders) {
    if (orders < 1 || orders > 2)
        throw Error(ErrorKind::BadArgument, "add_deltas: orders must be 1 or 2");
    if (f.frames == 0)
        throw Error(ErrorKind::EmptyMatrix, "add_deltas: " + f.utt_id + " has no frames");

    std::uint32_t out_dims = f.dims * (1 + orders);
    std::vector<float> values(f.frames * out_dims);

    // base columns, then delta1 = x[t] - x[t-1] (zero at t=0), then delta2 as
    // the backward difference of delta1.
    for (std::uint64_t t = 0; t < f.frames; ++t) {
        auto cur = f.row(t);
        float* out = values.data() + t * out_dims;
        for (std::uint32_t d = 0; d < f.dims; ++d) out[d] = cur[d];
        for (std::uint32_t d = 0; d < f.dims; ++d)
            out[f.dims + d] = t == 0 ? 0.0f : cur[d] - f.row(t - 1)[d];
    }
    if (orders == 2) {
        for (std::uint32_t d = 0; d < f.dims; ++d) values[2 * f.dims + d] = 0.0f;
        for (std::uint64_t t = 1; t < f.frames; ++t) {
            float* out = values.data() + t * out_dims;
            const float* d1 = out + f.dims;
            const float* d1_prev = values.data() + (t - 1) * out_dims + f.dims;
            for (std::uint32_t d = 0; d < f.dims; ++d)
                out[2 * f.dims + d] = d1[d] - d1_prev[d];
        }
    }
    return make_feature_matrix(f.utt_id, f.frame_shift, out_dims, std::move(values));
}

std::vector<double> cmn_stats(std::span<const FeatureMatrix> corpus) {
    if (corpus.empty()) throw Error(ErrorKind::EmptyCorpus, "cmn_stats: no utterances");
    std::uint32_t dims = corpus.front().dims;
    std::vector<double> sum(dims, 0.0);
    std::uint64_t frames = 0;
    for (const auto& m : corpus) {
        if (m.dims != dims)
            throw Error(ErrorKind::DimMismatch, "cmn_stats: " + m.utt_id + " has " +
                                                    std::to_string(m.dims) + " dims, expected " +
                                                    std::to_string(dims));
        for (std::uint64_t t = 0; t < m.frames; ++t) {
            auto r = m.row(t);
            for (std::uint32_t d = 0; d < dims; ++d) sum[d] += r[d];
        }
        frames += m.frames;
    }
    if (frames == 0) throw Error(ErrorKind::EmptyCorpus, "cmn_stats: corpus has no frames");
    for (std::uint32_t d = 0; d < dims; ++d) sum[d] /= static_cast<double>(frames);
    return sum;
}

FeatureMatrix apply_cmn(const FeatureMatrix& f, std::span<const double> mean) {
    if (mean.size() != f.dims)
        throw Error(ErrorKind::DimMismatch, "apply_cmn: mean has " + std::to_string(mean.size()) +
                                                " dims, matrix " + f.utt_id + " has " +
                                                std::to_string(f.dims));
    std::vector<float> values(f.values.size());
    for (std::uint64_t t = 0; t < f.frames; ++t) {
        auto r = f.row(t);
        float* out = values.data() + t * f.dims;
        for (std::uint32_t d = 0; d < f.dims; ++d)
            out[d] = static_cast<float>(r[d] - mean[d]);
    }
    return make_feature_matrix(f.utt_id, f.frame_shift, f.dims, std::move(values));
}

FeatureMatrix phone_average(const FeatureMatrix& f, const AlignmentTrack& track) {
    if (track.frame_shift != f.frame_shift)
        throw Error(ErrorKind::FrameShiftMismatch,
                    "phone_average: " + f.utt_id + " shift " + f.frame_shift.str() +
                        " != track shift " + track.frame_shift.str());
    if (track.total_frames() != f.frames)
        throw Error(ErrorKind::LengthMismatch,
                    "phone_average: track covers " + std::to_string(track.total_frames()) +
                        " frames, matrix " + f.utt_id + " has " + std::to_string(f.frames));

    std::vector<float> values;
    values.reserve(track.segments.size() * f.dims);
    std::vector<double> acc(f.dims);
    std::uint64_t t = 0;
    for (const auto& seg : track.segments) {
        std::fill(acc.begin(), acc.end(), 0.0);
        for (std::uint64_t i = 0; i < seg.duration_frames; ++i, ++t) {
            auto r = f.row(t);
            for (std::uint32_t d = 0; d < f.dims; ++d) acc[d] += r[d];
        }
        for (std::uint32_t d = 0; d < f.dims; ++d)
            values.push_back(static_cast<float>(acc[d] / static_cast<double>(seg.duration_frames)));
    }
    return make_feature_matrix(f.utt_id, f.frame_shift, f.dims, std::move(values));
}

std::vector<std::uint32_t> prosody_labels(const FeatureMatrix& seg_vectors, const Codebook& cb) {
    if (seg_vectors.dims != cb.dims)
        throw Error(ErrorKind::DimMismatch, "prosody_labels: segments have " +
                                                std::to_string(seg_vectors.dims) +
                                                " dims, codebook " + std::to_string(cb.dims));
    std::vector<std::uint32_t> labels;
    labels.reserve(seg_vectors.frames);
    for (std::uint64_t t = 0; t < seg_vectors.frames; ++t)
        labels.push_back(nearest_centroid(seg_vectors.row(t), cb));
    return labels;
}

}  // namespace dst
