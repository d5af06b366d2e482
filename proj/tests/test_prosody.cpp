#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "dst/error.hpp"
#include "dst/prosody.hpp"
#include "dst/quantize.hpp"

using namespace dst;

namespace {

FeatureMatrix matrix_of(std::vector<float> values, std::uint32_t dims,
                        const std::string& utt = "u") {
    return make_feature_matrix(utt, Rational(1, 100), dims, std::move(values));
}

}  // namespace

TEST_CASE("backward differences on a 1-D ramp") {
    auto f = matrix_of({0.f, 1.f, 2.f, 3.f}, 1);
    auto out = add_deltas(f, 2);
    REQUIRE(out.dims == 3);
    REQUIRE(out.frames == 4);

    // columns: base, delta1, delta2
    std::vector<float> d1, d2c;
    for (std::uint64_t t = 0; t < 4; ++t) {
        CHECK(out.row(t)[0] == f.values[t]);
        d1.push_back(out.row(t)[1]);
        d2c.push_back(out.row(t)[2]);
    }
    CHECK(d1 == std::vector<float>{0.f, 1.f, 1.f, 1.f});
    CHECK(d2c == std::vector<float>{0.f, 1.f, 0.f, 0.f});
}

TEST_CASE("deltas of a constant signal are zero; dims scale with orders") {
    auto f = matrix_of({4.f, 4.f, 4.f, 4.f, 4.f, 4.f}, 3);  // 2 frames of 3 dims
    auto one = add_deltas(f, 1);
    CHECK(one.dims == 6);
    auto two = add_deltas(f, 2);
    CHECK(two.dims == 9);
    for (std::uint64_t t = 0; t < two.frames; ++t)
        for (std::uint32_t d = 3; d < 9; ++d) CHECK(two.row(t)[d] == 0.f);

    CHECK_THROWS_AS(add_deltas(f, 0), Error);
    CHECK_THROWS_AS(add_deltas(f, 3), Error);
    auto empty = matrix_of({}, 2);
    try {
        add_deltas(empty, 2);
        FAIL("expected EmptyMatrix");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::EmptyMatrix);
    }
}

TEST_CASE("corpus mean is frame-weighted") {
    auto a = matrix_of({1.f, 1.f, 1.f}, 1, "a");   // 3 frames of 1
    auto b = matrix_of({5.f}, 1, "b");             // 1 frame of 5
    std::vector<FeatureMatrix> corpus{a, b};
    auto mean = cmn_stats(corpus);
    REQUIRE(mean.size() == 1);
    CHECK(mean[0] == doctest::Approx(2.0));  // (3*1 + 1*5) / 4

    std::vector<FeatureMatrix> none;
    CHECK_THROWS_AS(cmn_stats(none), Error);

    auto c = matrix_of({0.f, 0.f}, 2, "c");
    std::vector<FeatureMatrix> mixed{a, c};
    try {
        cmn_stats(mixed);
        FAIL("expected DimMismatch");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::DimMismatch);
    }
}

TEST_CASE("centering: post-CMN corpus mean is zero within 1e-6") {
    SplitMix64 rng(29);
    std::vector<FeatureMatrix> corpus;
    for (int u = 0; u < 5; ++u) {
        std::vector<float> v(64 * 4);
        for (auto& x : v) x = static_cast<float>(rng.next_double() * 200.0 - 37.0);
        corpus.push_back(matrix_of(std::move(v), 4, "u" + std::to_string(u)));
    }
    auto mean = cmn_stats(corpus);
    std::vector<FeatureMatrix> centered;
    for (const auto& m : corpus) centered.push_back(apply_cmn(m, mean));
    auto residual = cmn_stats(centered);
    for (double r : residual) CHECK(std::abs(r) <= 1e-6);

    // zero mean is the identity
    std::vector<double> zero(4, 0.0);
    auto same = apply_cmn(corpus[0], zero);
    CHECK(same.values == corpus[0].values);

    std::vector<double> wrong(3, 0.0);
    CHECK_THROWS_AS(apply_cmn(corpus[0], wrong), Error);
}

TEST_CASE("phone averages are per-segment means") {
    auto f = matrix_of({0.f, 2.f, 4.f}, 1);
    auto track = make_alignment_track("u", Rational(1, 100), {{"a", 2}, {"b", 1}});
    auto avg = phone_average(f, track);
    REQUIRE(avg.frames == 2);
    CHECK(avg.row(0)[0] == doctest::Approx(1.0));
    CHECK(avg.row(1)[0] == doctest::Approx(4.0));
    CHECK(avg.frame_shift == f.frame_shift);

    // a matrix constant within each segment returns those constants exactly
    auto fc = matrix_of({7.f, 7.f, -2.f}, 1);
    auto avgc = phone_average(fc, track);
    CHECK(avgc.row(0)[0] == 7.f);
    CHECK(avgc.row(1)[0] == -2.f);

    auto short_track = make_alignment_track("u", Rational(1, 100), {{"a", 1}});
    try {
        phone_average(f, short_track);
        FAIL("expected LengthMismatch");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::LengthMismatch);
    }

    auto wrong_shift = make_alignment_track("u", Rational(1, 50), {{"a", 2}, {"b", 1}});
    try {
        phone_average(f, wrong_shift);
        FAIL("expected FrameShiftMismatch");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::FrameShiftMismatch);
    }
}

TEST_CASE("prosody labels pick the nearest centroid") {
    Codebook cb = make_codebook(2, 1, {0.0, 10.0}, 0, 0, 0.0);
    auto f = matrix_of({2.f, 9.f}, 1);
    auto labels = prosody_labels(f, cb);
    CHECK(labels == std::vector<std::uint32_t>{0, 1});

    // exact centroid hit
    Codebook cb4 = make_codebook(4, 1, {0.0, 1.0, 2.0, 3.0}, 0, 0, 0.0);
    auto g = matrix_of({3.f}, 1);
    CHECK(prosody_labels(g, cb4) == std::vector<std::uint32_t>{3});

    Codebook wrong = make_codebook(2, 3, std::vector<double>(6, 0.0), 0, 0, 0.0);
    CHECK_THROWS_AS(prosody_labels(f, wrong), Error);
}

TEST_CASE("labels are invariant under a shared translation") {
    // values and shifts on a 0.25 grid so the float32 addition is exact and
    // the invariance is bitwise, not approximate
    SplitMix64 rng(31);
    std::vector<float> v(50 * 3);
    for (auto& x : v) x = static_cast<float>(static_cast<double>(rng.next() % 32) * 0.25 - 4.0);
    auto f = matrix_of(v, 3);

    std::vector<double> cents(4 * 3);
    for (auto& c : cents) c = static_cast<double>(rng.next() % 32) * 0.25 - 4.0;
    Codebook cb = make_codebook(4, 3, cents, 0, 0, 0.0);

    auto base = prosody_labels(f, cb);

    const double shift[3] = {100.0, -250.0, 3.5};
    std::vector<float> v2 = v;
    for (std::size_t i = 0; i < v2.size(); ++i)
        v2[i] = static_cast<float>(static_cast<double>(v2[i]) + shift[i % 3]);
    std::vector<double> c2 = cents;
    for (std::size_t i = 0; i < c2.size(); ++i) c2[i] += shift[i % 3];

    auto shifted = prosody_labels(matrix_of(v2, 3), make_codebook(4, 3, c2, 0, 0, 0.0));
    CHECK(shifted == base);
}

TEST_CASE("labels agree with the quantizer on the same vectors") {
    SplitMix64 rng(37);
    std::vector<float> v(30 * 2);
    for (auto& x : v) x = static_cast<float>(rng.next_double());
    auto f = matrix_of(v, 2);
    std::vector<double> cents(6);
    for (auto& c : cents) c = rng.next_double();
    Codebook cb = make_codebook(3, 2, cents, 0, 0, 0.0);

    auto labels = prosody_labels(f, cb);
    auto ts = kmeans_assign(f, cb);
    CHECK(labels == ts.streams[0].tokens);
}

TEST_CASE("prosody config invariants") {
    CHECK_NOTHROW(validate(ProsodyConfig{3, 2}));
    CHECK_NOTHROW(validate(ProsodyConfig{1, 0}));
    CHECK_THROWS_AS(validate(ProsodyConfig{0, 2}), Error);
    CHECK_THROWS_AS(validate(ProsodyConfig{3, 3}), Error);
}
