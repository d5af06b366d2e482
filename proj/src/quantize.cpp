#include "dst/quantize.hpp"

#include <atomic>
#include <cassert>
#include <cmath>
#include <limits>
#include <thread>

#include "dst/error.hpp"

namespace dst {

namespace {

// Frames are processed in fixed-size chunks; per-chunk partial sums are
// reduced in chunk order, which keeps results independent of thread count.
constexpr std::uint64_t kChunkFrames = 4096;

struct ChunkPartial {
    std::vector<double> sum;           // k * dims
    std::vector<std::uint64_t> count;  // k
    double inertia = 0.0;

    void reset(std::uint32_t k, std::uint32_t dims) {
        sum.assign(static_cast<std::size_t>(k) * dims, 0.0);
        count.assign(k, 0);
        inertia = 0.0;
    }
};

double dist2(const double* a, const double* b, std::uint32_t dims) {
    double acc = 0.0;
    for (std::uint32_t d = 0; d < dims; ++d) {
        double diff = a[d] - b[d];
        acc += diff * diff;
    }
    return acc;
}

std::uint32_t nearest(const double* point, const std::vector<double>& centroids, std::uint32_t k,
                      std::uint32_t dims, double* best_out) {
    std::uint32_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::uint32_t j = 0; j < k; ++j) {
        double d = dist2(point, centroids.data() + static_cast<std::size_t>(j) * dims, dims);
        if (d < best_d) {  // strict: ties keep the lowest index
            best_d = d;
            best = j;
        }
    }
    if (best_out) *best_out = best_d;
    return best;
}

void assign_chunk(const std::vector<double>& points, std::uint64_t begin, std::uint64_t end,
                  const std::vector<double>& centroids, std::uint32_t k, std::uint32_t dims,
                  std::vector<std::uint32_t>& assign, ChunkPartial& out) {
    out.reset(k, dims);
    for (std::uint64_t i = begin; i < end; ++i) {
        const double* p = points.data() + i * dims;
        double best_d = 0.0;
        std::uint32_t j = nearest(p, centroids, k, dims, &best_d);
        assign[i] = j;
        out.inertia += best_d;
        out.count[j] += 1;
        double* s = out.sum.data() + static_cast<std::size_t>(j) * dims;
        for (std::uint32_t d = 0; d < dims; ++d) s[d] += p[d];
    }
}

struct AssignResult {
    std::vector<double> sum;
    std::vector<std::uint64_t> count;
    double inertia = 0.0;
};

// One assignment pass over all frames. Chunks are farmed out in waves; slot
// results are folded into the global accumulators strictly in chunk order.
AssignResult assign_pass(const std::vector<double>& points, std::uint64_t n,
                         const std::vector<double>& centroids, std::uint32_t k, std::uint32_t dims,
                         std::vector<std::uint32_t>& assign, unsigned threads) {
    AssignResult res;
    res.sum.assign(static_cast<std::size_t>(k) * dims, 0.0);
    res.count.assign(k, 0);

    std::uint64_t num_chunks = (n + kChunkFrames - 1) / kChunkFrames;
    std::uint64_t slots = std::min<std::uint64_t>(num_chunks, std::max(2u * threads, 8u));
    if (slots == 0) return res;
    std::vector<ChunkPartial> partials(slots);

    for (std::uint64_t wave = 0; wave < num_chunks; wave += slots) {
        std::uint64_t wave_n = std::min(slots, num_chunks - wave);
        auto run_slot = [&](std::uint64_t s) {
            std::uint64_t chunk = wave + s;
            std::uint64_t begin = chunk * kChunkFrames;
            std::uint64_t end = std::min(begin + kChunkFrames, n);
            assign_chunk(points, begin, end, centroids, k, dims, assign, partials[s]);
        };
        if (threads <= 1 || wave_n == 1) {
            for (std::uint64_t s = 0; s < wave_n; ++s) run_slot(s);
        } else {
            std::atomic<std::uint64_t> next{0};
            unsigned workers = static_cast<unsigned>(std::min<std::uint64_t>(threads, wave_n));
            std::vector<std::thread> pool;
            pool.reserve(workers);
            for (unsigned w = 0; w < workers; ++w) {
                pool.emplace_back([&] {
                    for (std::uint64_t s = next.fetch_add(1); s < wave_n; s = next.fetch_add(1))
                        run_slot(s);
                });
            }
            for (auto& t : pool) t.join();
        }
        for (std::uint64_t s = 0; s < wave_n; ++s) {
            const ChunkPartial& p = partials[s];
            res.inertia += p.inertia;
            for (std::uint32_t j = 0; j < k; ++j) res.count[j] += p.count[j];
            for (std::size_t i = 0; i < res.sum.size(); ++i) res.sum[i] += p.sum[i];
        }
    }
    return res;
}

// D^2-weighted k-means++ seeding, sequential in frame order.
std::vector<double> kmeanspp_init(const std::vector<double>& points, std::uint64_t n,
                                  std::uint32_t k, std::uint32_t dims, SplitMix64& rng) {
    std::vector<double> centroids(static_cast<std::size_t>(k) * dims);
    auto place = [&](std::uint32_t j, std::uint64_t idx) {
        const double* p = points.data() + idx * dims;
        std::copy(p, p + dims, centroids.begin() + static_cast<std::size_t>(j) * dims);
    };

    place(0, rng.next() % n);
    std::vector<double> min_d2(n);
    for (std::uint64_t i = 0; i < n; ++i)
        min_d2[i] = dist2(points.data() + i * dims, centroids.data(), dims);

    for (std::uint32_t j = 1; j < k; ++j) {
        double total = 0.0;
        for (std::uint64_t i = 0; i < n; ++i) total += min_d2[i];
        std::uint64_t chosen;
        if (total > 0.0) {
            double u = rng.next_double() * total;
            double cum = 0.0;
            std::uint64_t last_positive = 0;
            chosen = n;  // sentinel
            for (std::uint64_t i = 0; i < n; ++i) {
                if (min_d2[i] > 0.0) last_positive = i;
                cum += min_d2[i];
                if (cum > u) {
                    chosen = i;
                    break;
                }
            }
            if (chosen == n) chosen = last_positive;  // u landed on accumulated round-off
        } else {
            // All points coincide with existing centroids; sample uniformly.
            chosen = rng.next() % n;
        }
        place(j, chosen);
        const double* c = centroids.data() + static_cast<std::size_t>(j) * dims;
        for (std::uint64_t i = 0; i < n; ++i) {
            double d = dist2(points.data() + i * dims, c, dims);
            if (d < min_d2[i]) min_d2[i] = d;
        }
    }
    return centroids;
}

// Reseed an empty cluster to the member of the largest cluster that lies
// farthest from the empty cluster's current centroid. Ties: lowest frame
// index; largest cluster ties: lowest cluster index.
void reseed_empty(std::uint32_t empty_j, const std::vector<double>& points, std::uint64_t n,
                  std::uint32_t dims, const std::vector<std::uint32_t>& assign,
                  const std::vector<std::uint64_t>& count, const std::vector<double>& old_centroids,
                  std::vector<double>& new_centroids) {
    std::uint32_t largest = 0;
    std::uint64_t largest_count = 0;
    for (std::uint32_t j = 0; j < count.size(); ++j) {
        if (count[j] > largest_count) {
            largest_count = count[j];
            largest = j;
        }
    }
    const double* old_c = old_centroids.data() + static_cast<std::size_t>(empty_j) * dims;
    std::uint64_t best_i = 0;
    double best_d = -1.0;
    for (std::uint64_t i = 0; i < n; ++i) {
        if (assign[i] != largest) continue;
        double d = dist2(points.data() + i * dims, old_c, dims);
        if (d > best_d) {
            best_d = d;
            best_i = i;
        }
    }
    const double* p = points.data() + best_i * dims;
    std::copy(p, p + dims,
              new_centroids.begin() + static_cast<std::size_t>(empty_j) * dims);
}

}  // namespace

void validate(const KMeansConfig& cfg) {
    if (cfg.k == 0) throw Error(ErrorKind::InvariantViolation, "KMeansConfig: k must be >= 1");
    if (cfg.max_iters == 0)
        throw Error(ErrorKind::InvariantViolation, "KMeansConfig: max_iters must be >= 1");
    if (!(cfg.rel_tol >= 0.0))
        throw Error(ErrorKind::InvariantViolation, "KMeansConfig: rel_tol must be >= 0");
}

Codebook kmeans_train(std::span<const FeatureMatrix> data, const KMeansConfig& cfg,
                      unsigned threads, TrainTrace* trace) {
    validate(cfg);
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());

    std::uint32_t dims = data.empty() ? 0 : data.front().dims;
    std::uint64_t n = 0;
    for (const auto& m : data) {
        if (m.dims != dims)
            throw Error(ErrorKind::DimMismatch, "kmeans_train: matrix " + m.utt_id + " has " +
                                                    std::to_string(m.dims) + " dims, expected " +
                                                    std::to_string(dims));
        n += m.frames;
    }
    if (n < cfg.k)
        throw Error(ErrorKind::TooFewPoints, "kmeans_train: " + std::to_string(n) +
                                                 " frames < k=" + std::to_string(cfg.k));

    // Upcast once; all distance work is in 64-bit floats.
    std::vector<double> points;
    points.reserve(n * dims);
    for (const auto& m : data)
        points.insert(points.end(), m.values.begin(), m.values.end());

    SplitMix64 rng(cfg.seed);
    std::vector<double> centroids = kmeanspp_init(points, n, cfg.k, dims, rng);
    std::vector<std::uint32_t> assign(n);

    double prev = std::numeric_limits<double>::infinity();
    std::uint32_t iterations_run = 0;
    double final_inertia = 0.0;

    for (;;) {
        AssignResult pass = assign_pass(points, n, centroids, cfg.k, dims, assign, threads);
        if (trace) trace->inertia.push_back(pass.inertia);
        assert(!(pass.inertia > prev * (1.0 + 1e-9) + 1e-12) && "inertia must be non-increasing");

        bool converged = std::isfinite(prev) &&
                         (prev == 0.0 || (prev - pass.inertia) / prev < cfg.rel_tol);
        if (converged || iterations_run == cfg.max_iters) {
            final_inertia = pass.inertia;
            break;
        }

        std::vector<double> updated(centroids.size());
        for (std::uint32_t j = 0; j < cfg.k; ++j) {
            double* dst_c = updated.data() + static_cast<std::size_t>(j) * dims;
            if (pass.count[j] > 0) {
                const double* s = pass.sum.data() + static_cast<std::size_t>(j) * dims;
                double inv = 1.0 / static_cast<double>(pass.count[j]);
                for (std::uint32_t d = 0; d < dims; ++d) dst_c[d] = s[d] * inv;
            }
        }
        for (std::uint32_t j = 0; j < cfg.k; ++j) {
            if (pass.count[j] == 0)
                reseed_empty(j, points, n, dims, assign, pass.count, centroids, updated);
        }
        centroids = std::move(updated);
        prev = pass.inertia;
        ++iterations_run;
    }

    return make_codebook(cfg.k, dims, std::move(centroids), cfg.seed, iterations_run,
                         final_inertia);
}

Codebook kmeans_train(const FeatureMatrix& data, const KMeansConfig& cfg, unsigned threads,
                      TrainTrace* trace) {
    return kmeans_train(std::span<const FeatureMatrix>(&data, 1), cfg, threads, trace);
}

std::uint32_t nearest_centroid(std::span<const double> frame, const Codebook& cb) {
    if (frame.size() != cb.dims)
        throw Error(ErrorKind::DimMismatch, "nearest_centroid: frame has " +
                                                std::to_string(frame.size()) + " dims, codebook " +
                                                std::to_string(cb.dims));
    return nearest(frame.data(), cb.centroids, cb.k, cb.dims, nullptr);
}

std::uint32_t nearest_centroid(std::span<const float> frame, const Codebook& cb) {
    std::vector<double> up(frame.begin(), frame.end());
    return nearest_centroid(std::span<const double>(up), cb);
}

TokenStream kmeans_assign(const FeatureMatrix& data, const Codebook& cb) {
    if (data.dims != cb.dims)
        throw Error(ErrorKind::DimMismatch, "kmeans_assign: " + data.utt_id + " has " +
                                                std::to_string(data.dims) + " dims, codebook " +
                                                std::to_string(cb.dims));
    TokenGroup group;
    group.vocab_size = cb.k;
    group.tokens.resize(data.frames);
    std::vector<double> up(cb.dims);
    for (std::uint64_t t = 0; t < data.frames; ++t) {
        auto r = data.row(t);
        for (std::uint32_t d = 0; d < cb.dims; ++d) up[d] = r[d];
        group.tokens[t] = nearest(up.data(), cb.centroids, cb.k, cb.dims, nullptr);
    }
    return make_token_stream(data.utt_id, data.frame_shift.reciprocal(), {std::move(group)});
}

double inertia(const FeatureMatrix& data, const Codebook& cb) {
    if (data.dims != cb.dims)
        throw Error(ErrorKind::DimMismatch, "inertia: " + data.utt_id + " has " +
                                                std::to_string(data.dims) + " dims, codebook " +
                                                std::to_string(cb.dims));
    // Same chunked accumulation as training, so the diagnostic reproduces
    // final_inertia bit-for-bit on the training matrix.
    double total = 0.0;
    std::vector<double> up(cb.dims);
    for (std::uint64_t begin = 0; begin < data.frames; begin += kChunkFrames) {
        std::uint64_t end = std::min(begin + kChunkFrames, data.frames);
        double part = 0.0;
        for (std::uint64_t t = begin; t < end; ++t) {
            auto r = data.row(t);
            for (std::uint32_t d = 0; d < cb.dims; ++d) up[d] = r[d];
            double best = 0.0;
            nearest(up.data(), cb.centroids, cb.k, cb.dims, &best);
            part += best;
        }
        total += part;
    }
    return total;
}

}  // namespace dst
