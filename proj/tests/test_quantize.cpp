#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstring>
#include <vector>

#include "dst/error.hpp"
#include "dst/quantize.hpp"
#include "dst/types.hpp"

using namespace dst;

namespace {

FeatureMatrix matrix_of(std::vector<float> values, std::uint32_t dims,
                        const std::string& utt = "u") {
    return make_feature_matrix(utt, Rational(1, 100), dims, std::move(values));
}

FeatureMatrix random_matrix(SplitMix64& rng, std::uint64_t frames, std::uint32_t dims,
                            const std::string& utt = "u") {
    std::vector<float> v(frames * dims);
    for (auto& x : v) x = static_cast<float>(rng.next_double() * 10.0 - 5.0);
    return matrix_of(std::move(v), dims, utt);
}

double d2(const float* a, const double* b, std::uint32_t dims) {
    double s = 0.0;
    for (std::uint32_t d = 0; d < dims; ++d) {
        double diff = static_cast<double>(a[d]) - b[d];
        s += diff * diff;
    }
    return s;
}

// Independent linear-scan nearest neighbor, ties to the lowest index.
std::uint32_t nn_oracle(const float* x, const std::vector<double>& centroids, std::uint32_t k,
                        std::uint32_t dims) {
    std::uint32_t best = 0;
    double best_d = d2(x, centroids.data(), dims);
    for (std::uint32_t j = 1; j < k; ++j) {
        double dd = d2(x, centroids.data() + static_cast<std::size_t>(j) * dims, dims);
        if (dd < best_d) {
            best_d = dd;
            best = j;
        }
    }
    return best;
}

// Inertia of a partition whose centroids are the per-cluster means.
double partition_inertia(const FeatureMatrix& m, const std::vector<std::uint32_t>& assign,
                         std::uint32_t k, std::vector<double>& means,
                         std::vector<std::uint64_t>& counts) {
    means.assign(static_cast<std::size_t>(k) * m.dims, 0.0);
    counts.assign(k, 0);
    for (std::uint64_t t = 0; t < m.frames; ++t) {
        counts[assign[t]]++;
        for (std::uint32_t d = 0; d < m.dims; ++d)
            means[static_cast<std::size_t>(assign[t]) * m.dims + d] += m.row(t)[d];
    }
    for (std::uint32_t j = 0; j < k; ++j)
        if (counts[j])
            for (std::uint32_t d = 0; d < m.dims; ++d)
                means[static_cast<std::size_t>(j) * m.dims + d] /= static_cast<double>(counts[j]);
    double inert = 0.0;
    for (std::uint64_t t = 0; t < m.frames; ++t)
        inert += d2(m.row(t).data(), means.data() + static_cast<std::size_t>(assign[t]) * m.dims,
                    m.dims);
    return inert;
}

}  // namespace

TEST_CASE("three points, two clusters: the classic split") {
    auto m = matrix_of({0.f, 1.f, 9.f}, 1);
    TrainTrace trace;
    Codebook cb = kmeans_train(m, KMeansConfig{2, 0, 100, 1e-9}, 1, &trace);

    std::vector<double> sorted(cb.centroids);
    std::sort(sorted.begin(), sorted.end());
    CHECK(sorted[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(sorted[1] == doctest::Approx(9.0).epsilon(1e-12));
    CHECK(cb.final_inertia == doctest::Approx(0.5).epsilon(1e-12));

    TokenStream ts = kmeans_assign(m, cb);
    CHECK(ts.streams[0].tokens[0] == ts.streams[0].tokens[1]);
    CHECK(ts.streams[0].tokens[0] != ts.streams[0].tokens[2]);
    CHECK(ts.streams[0].vocab_size == 2);
    CHECK(ts.frame_rate == Rational(100, 1));

    // per-iteration inertia never increases
    for (std::size_t i = 1; i < trace.inertia.size(); ++i)
        CHECK(trace.inertia[i] <= trace.inertia[i - 1] + 1e-12);
}

TEST_CASE("trained state is a fixed point the exhaustive partition oracle accepts") {
    SplitMix64 rng(2026);
    for (int inst = 0; inst < 100; ++inst) {
        std::uint32_t k = 1 + static_cast<std::uint32_t>(rng.next() % 3);
        std::uint32_t dims = 1 + static_cast<std::uint32_t>(rng.next() % 2);
        std::uint64_t n = k + rng.next() % (9 - k);
        FeatureMatrix m = random_matrix(rng, n, dims);

        Codebook cb = kmeans_train(m, KMeansConfig{k, rng.next(), 500, 1e-12});
        TokenStream ts = kmeans_assign(m, cb);
        const auto& assign = ts.streams[0].tokens;

        // assignments match an independent nearest-neighbor scan
        for (std::uint64_t t = 0; t < n; ++t)
            CHECK(assign[t] == nn_oracle(m.row(t).data(), cb.centroids, k, dims));

        // the induced partition reproduces the reported inertia...
        std::vector<double> means;
        std::vector<std::uint64_t> counts;
        double oracle_inertia = partition_inertia(m, assign, k, means, counts);
        CHECK(oracle_inertia == doctest::Approx(cb.final_inertia).epsilon(1e-9));

        // ...its centroids are the cluster means...
        for (std::uint32_t j = 0; j < k; ++j)
            if (counts[j])
                for (std::uint32_t d = 0; d < dims; ++d)
                    CHECK(cb.centroids[static_cast<std::size_t>(j) * dims + d] ==
                          doctest::Approx(means[static_cast<std::size_t>(j) * dims + d])
                              .epsilon(1e-9));

        // ...and no single-point move to a non-empty cluster improves it
        for (std::uint64_t t = 0; t < n; ++t) {
            double own = d2(m.row(t).data(),
                            means.data() + static_cast<std::size_t>(assign[t]) * dims, dims);
            for (std::uint32_t j = 0; j < k; ++j)
                if (counts[j])
                    CHECK(own <= d2(m.row(t).data(),
                                    means.data() + static_cast<std::size_t>(j) * dims, dims) +
                                     1e-9);
        }

        // enumeration: no partition of the same points beats the global bound
        // the trained inertia must respect
        std::uint64_t total = 1;
        for (std::uint64_t t = 0; t < n; ++t) total *= k;
        double global_min = std::numeric_limits<double>::infinity();
        std::vector<std::uint32_t> cand(n);
        for (std::uint64_t code = 0; code < total; ++code) {
            std::uint64_t c = code;
            for (std::uint64_t t = 0; t < n; ++t) {
                cand[t] = static_cast<std::uint32_t>(c % k);
                c /= k;
            }
            global_min = std::min(global_min, partition_inertia(m, cand, k, means, counts));
        }
        CHECK(cb.final_inertia >= global_min - 1e-9);
    }
}

TEST_CASE("training is deterministic in the thread count and across runs") {
    SplitMix64 rng(7);
    FeatureMatrix m = random_matrix(rng, 10000, 3);  // spans multiple reduction chunks

    for (std::uint64_t seed : {0ULL, 1ULL, 42ULL}) {
        KMeansConfig cfg{16, seed, 25, 1e-6};
        TrainTrace t1, t8, t8b;
        Codebook c1 = kmeans_train(m, cfg, 1, &t1);
        Codebook c8 = kmeans_train(m, cfg, 8, &t8);
        Codebook c8b = kmeans_train(m, cfg, 8, &t8b);

        REQUIRE(c1.centroids.size() == c8.centroids.size());
        CHECK(std::memcmp(c1.centroids.data(), c8.centroids.data(),
                          c1.centroids.size() * sizeof(double)) == 0);
        CHECK(std::memcmp(c8.centroids.data(), c8b.centroids.data(),
                          c8.centroids.size() * sizeof(double)) == 0);
        CHECK(c1.final_inertia == c8.final_inertia);
        CHECK(c1.iterations_run == c8.iterations_run);
        CHECK(t1.inertia == t8.inertia);
        CHECK(t8.inertia == t8b.inertia);
    }
}

TEST_CASE("reported inertia is reproducible from the codebook") {
    SplitMix64 rng(11);
    FeatureMatrix m = random_matrix(rng, 9000, 2);
    Codebook cb = kmeans_train(m, KMeansConfig{8, 5, 30, 1e-6}, 4);
    CHECK(inertia(m, cb) == cb.final_inertia);  // bit-for-bit, same accumulation
}

TEST_CASE("multiple matrices concatenate in corpus order") {
    auto a = matrix_of({0.f, 1.f}, 1, "a");
    auto b = matrix_of({9.f}, 1, "b");
    std::vector<FeatureMatrix> corpus{a, b};
    Codebook cb = kmeans_train(corpus, KMeansConfig{2, 0, 100, 1e-9});

    auto merged = matrix_of({0.f, 1.f, 9.f}, 1);
    Codebook cb2 = kmeans_train(merged, KMeansConfig{2, 0, 100, 1e-9});
    CHECK(cb.centroids == cb2.centroids);
    CHECK(cb.final_inertia == cb2.final_inertia);
}

TEST_CASE("degenerate data converges without hanging") {
    auto m = matrix_of({2.f, 2.f, 2.f, 2.f}, 1);
    Codebook cb = kmeans_train(m, KMeansConfig{2, 0, 100, 1e-9});
    CHECK(cb.final_inertia == 0.0);
    CHECK(cb.k == 2);
    TokenStream ts = kmeans_assign(m, cb);
    for (auto tok : ts.streams[0].tokens) CHECK(tok == ts.streams[0].tokens[0]);
}

TEST_CASE("nearest centroid breaks ties toward the lowest index") {
    Codebook cb = make_codebook(2, 1, {0.0, 4.0}, 0, 0, 0.0);
    std::vector<float> mid{2.f};
    CHECK(nearest_centroid(std::span<const float>(mid), cb) == 0);
    std::vector<double> midd{2.0};
    CHECK(nearest_centroid(std::span<const double>(midd), cb) == 0);
}

TEST_CASE("shape and size errors are typed") {
    auto m = matrix_of({0.f, 1.f}, 1);
    try {
        kmeans_train(m, KMeansConfig{3, 0, 100, 1e-6});
        FAIL("expected TooFewPoints");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::TooFewPoints);
    }

    auto m1 = matrix_of({0.f, 1.f}, 1, "a");
    auto m2 = matrix_of({0.f, 1.f}, 2, "b");
    std::vector<FeatureMatrix> corpus{m1, m2};
    try {
        kmeans_train(corpus, KMeansConfig{1, 0, 100, 1e-6});
        FAIL("expected DimMismatch");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::DimMismatch);
    }

    CHECK_THROWS_AS(kmeans_train(m, KMeansConfig{0, 0, 100, 1e-6}), Error);
    CHECK_THROWS_AS(kmeans_train(m, KMeansConfig{1, 0, 0, 1e-6}), Error);

    Codebook cb = make_codebook(1, 2, {0.0, 0.0}, 0, 0, 0.0);
    CHECK_THROWS_AS(kmeans_assign(m, cb), Error);  // dims 1 vs 2
}

TEST_CASE("splitmix64 reference sequence") {
    // first outputs for seed 1234567, as published for the splitmix64 generator
    SplitMix64 rng(1234567);
    CHECK(rng.next() == 6457827717110365317ULL);
    CHECK(rng.next() == 3203168211198807973ULL);
    CHECK(rng.next() == 9817491932198370423ULL);
    SplitMix64 unit(0);
    double x = unit.next_double();
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
}
