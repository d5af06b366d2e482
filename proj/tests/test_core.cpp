#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "dst/error.hpp"
#include "dst/rational.hpp"
#include "dst/types.hpp"

using namespace dst;

TEST_CASE("rational normalizes to lowest terms") {
    Rational r(50, 100);
    CHECK(r.num == 1);
    CHECK(r.den == 2);
    CHECK(Rational(25, 1).str() == "25/1");
    CHECK(Rational(0, 7).num == 0);
    CHECK(Rational(0, 7).den == 1);
    CHECK_THROWS_AS(Rational(1, 0), std::invalid_argument);
}

TEST_CASE("rational arithmetic stays exact") {
    Rational shift(1, 86);  // a shift a float would mangle
    CHECK(shift.reciprocal().num == 86);
    CHECK(shift.reciprocal().den == 1);
    CHECK(shift.times(2).den == 43);
    CHECK(shift.over(2).den == 172);
    CHECK(Rational(100, 1).value() == doctest::Approx(100.0));
    CHECK(Rational(1, 100).positive());
    CHECK_FALSE(Rational(0, 1).positive());
}

TEST_CASE("parse_rational accepts n/d and bare integers") {
    CHECK(parse_rational("25/1").num == 25);
    CHECK(parse_rational("50").num == 50);
    CHECK(parse_rational("50").den == 1);
    CHECK(parse_rational("3/6").num == 1);
    CHECK_THROWS_AS(parse_rational("x/2"), Error);
    CHECK_THROWS_AS(parse_rational("1/"), Error);
    CHECK_THROWS_AS(parse_rational(""), Error);
    CHECK_THROWS_AS(parse_rational("1/0"), Error);
    CHECK_THROWS_AS(parse_rational("-3/1"), Error);
}

TEST_CASE("feature matrix factory checks shape and finiteness") {
    auto m = make_feature_matrix("u1", Rational(1, 100), 2, {1.f, 2.f, 3.f, 4.f});
    CHECK(m.frames == 2);
    CHECK(m.row(1)[0] == 3.f);

    CHECK_THROWS_AS(make_feature_matrix("u", Rational(1, 100), 3, {1.f, 2.f}), Error);
    try {
        make_feature_matrix("u", Rational(1, 100), 1, {1.f, NAN});
        FAIL("expected a validation error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::InvariantViolation);
        CHECK(std::string(e.what()).find("non-finite") != std::string::npos);
    }
}

TEST_CASE("zero-frame matrix is valid") {
    auto m = make_feature_matrix("empty", Rational(1, 50), 4, {});
    CHECK(m.frames == 0);
    CHECK_NOTHROW(validate(m));
}

TEST_CASE("token stream factory enforces equal lengths and vocab bounds") {
    TokenGroup a{4, {0, 1, 2}};
    TokenGroup b{2, {1, 0, 1}};
    auto ts = make_token_stream("u", Rational(50, 1), {a, b});
    CHECK(ts.num_frames == 3);

    TokenGroup ragged{4, {0, 1}};
    CHECK_THROWS_AS(make_token_stream("u", Rational(50, 1), {a, ragged}), Error);

    TokenGroup oor{2, {0, 2, 1}};
    CHECK_THROWS_AS(make_token_stream("u", Rational(50, 1), {oor}), Error);

    CHECK_THROWS_AS(make_token_stream("u", Rational(50, 1), {}), Error);
    CHECK_THROWS_AS(make_token_stream("u", Rational(0, 1), {a}), Error);
}

TEST_CASE("codebook factory checks buffer size and inertia sign") {
    auto cb = make_codebook(2, 1, {0.5, 9.0}, 7, 3, 0.5);
    CHECK(cb.centroid(1)[0] == 9.0);
    CHECK_THROWS_AS(make_codebook(2, 1, {0.5}, 0, 0, 0.0), Error);
    CHECK_THROWS_AS(make_codebook(2, 1, {0.5, 9.0}, 0, 0, -1.0), Error);
    CHECK_THROWS_AS(make_codebook(0, 1, {}, 0, 0, 0.0), Error);
}

TEST_CASE("pair table factory builds the forward map and rejects duplicates") {
    auto table = make_pair_fold_table(3, 3, {{0, 0}, {1, 2}, {2, 1}});
    CHECK(table.folded_vocab() == 3);
    CHECK(table.forward.at(PairFoldTable::pair_key(1, 2)) == 1);

    try {
        make_pair_fold_table(3, 3, {{0, 0}, {0, 0}});
        FAIL("expected DuplicatePair");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::DuplicatePair);
    }

    CHECK_THROWS_AS(make_pair_fold_table(2, 2, {{0, 5}}), Error);
}

TEST_CASE("alignment track rejects zero-length segments") {
    auto track = make_alignment_track("u", Rational(1, 100), {{"a", 2}, {"b", 1}});
    CHECK(track.total_frames() == 3);
    CHECK_THROWS_AS(make_alignment_track("u", Rational(1, 100), {{"a", 0}}), Error);
}

TEST_CASE("bitrate report validation ties totals to per-stream values") {
    BitrateReport r;
    r.mode = BitrateMode::Exact;
    r.frame_rate = Rational(25, 1);
    r.vocab_sizes = {1024};
    r.per_stream_bps = {250.0};
    r.total_bps = 250.0;
    CHECK_NOTHROW(validate(r));

    r.total_bps = 251.0;
    CHECK_THROWS_AS(validate(r), Error);

    r.total_bps = 250.0;
    r.vocab_sizes = {1};
    CHECK_THROWS_AS(validate(r), Error);  // vocab 1 carries zero bits
}

TEST_CASE("error kinds keep their names") {
    Error e(ErrorKind::TokenOutOfRange, "token 9 >= vocab 4");
    CHECK(e.kind() == ErrorKind::TokenOutOfRange);
    CHECK(std::string(e.what()) == "TokenOutOfRange: token 9 >= vocab 4");
    CHECK(e.raw() == "token 9 >= vocab 4");
}
