#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"

using namespace sntest;

namespace {

Vec ones(std::int64_t from, std::int64_t to) {
    Vec x;
    for (std::int64_t i = from; i <= to; ++i) x.set(i, 1);
    return x;
}

BruteForceSpec bx(const XSpaceSpec& s) { return {OracleMode::SpaceX, s, {}}; }
BruteForceSpec bt(const TSpec& t) { return {OracleMode::TsirelsonLorentz, {}, t}; }

}  // namespace

TEST_CASE("admissibility sequences") {
    AdmissibilitySeq g({4, 8}, AdmissibilitySeq::Tail::Geometric);
    CHECK(g.at(3) == 16);
    CHECK(g.at(5) == 64);
    AdmissibilitySeq l({1, 2}, AdmissibilitySeq::Tail::Linear);
    CHECK(l.at(7) == 7);
    CHECK(g.at(200) > 0);
    XSpaceSpec bad{g, Rational(1, 2)};
    CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("x norm examples") {
    for (std::int64_t j : {1, 2, 7, 40}) CHECK(x_norm(spec_doubling(), Vec{{j, 1}}).value == 1);
    auto r = x_norm(spec_doubling(), ones(1, 4));
    CHECK(r.value == Rational(4, 3));
    REQUIRE_FALSE(r.witness->leaf);
    CHECK(r.witness->k == 1);
    REQUIRE(r.witness->groups.size() == 1);
    CHECK(r.witness->groups[0].blocks.size() == 4);
    CHECK(recheck(spec_doubling(), ones(1, 4), *r.witness) == r.value);

    auto s = x_norm(spec_linear(), ones(1, 4));
    CHECK(s.value == 1);
    CHECK(s.witness->leaf);
    CHECK(x_norm(spec_linear(), Vec{}).value == 0);
}

TEST_CASE("x seminorms") {
    CHECK(x_seminorm(spec_linear(), Vec{{5, 1}}, 3).value == 1);
    CHECK(x_seminorm(spec_linear(), ones(2, 4), 2).value == 2);
    // one block: the whole vector
    XSpaceSpec one{AdmissibilitySeq({1, 2}, AdmissibilitySeq::Tail::Linear)};
    Gen g(8);
    for (int trial = 0; trial < 40; ++trial) {
        Vec x = g.vec(1, 8, 4);
        CHECK(x_seminorm(one, x, 1).value == x_norm(one, x).value);
    }
}

TEST_CASE("x seminorm against successive-set enumeration") {
    Gen g(9);
    for (const auto& spec : {spec_linear(), spec_doubling()}) {
        for (int trial = 0; trial < 60; ++trial) {
            Vec x = g.vec(1, 8, static_cast<std::size_t>(g.integer(1, 5)));
            const auto i = g.integer(1, 3);
            auto r = x_seminorm(spec, x, i);
            CHECK(r.value == seminorm_bruteforce(spec, x, i));
            CHECK(recheck_seminorm(spec, x, i, r.blocks) == r.value);
        }
    }
}

TEST_CASE("x norm against brute force on random rationals") {
    Gen g(10);
    for (const auto& spec : {spec_linear(), spec_doubling()}) {
        for (int trial = 0; trial < 150; ++trial) {
            Vec x = g.vec(1, 10, static_cast<std::size_t>(g.integer(1, 6)));
            auto r = x_norm(spec, x);
            CHECK(r.value == brute_force_norm(bx(spec), x));
            CHECK(recheck(spec, x, *r.witness) == r.value);
        }
    }
    CHECK_THROWS_AS(brute_force_norm(bx(spec_linear()), ones(1, 8)), Error);
    try {
        brute_force_norm(bx(spec_linear()), ones(1, 8));
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::CapExceeded);
    }
}

TEST_CASE("x norm: unconditional, monotone, definitional lower bound") {
    Gen g(11);
    const auto spec = spec_doubling();
    for (int trial = 0; trial < 100; ++trial) {
        Vec x = g.vec(1, 12, 7);
        const Rational v = x_norm(spec, x).value;
        Vec flipped, part;
        for (const auto& [i, c] : x.entries()) {
            flipped.set(i, g.coin() ? c : Rational(-c));
            if (g.coin()) part.set(i, c);
        }
        CHECK(x_norm(spec, flipped).value == v);
        CHECK(x_norm(spec, part).value <= v);
        for (std::int64_t i = 1; i <= 3; ++i) CHECK(x_seminorm(spec, part, i).value <= x_seminorm(spec, x, i).value);

        const auto k = g.integer(1, 5);
        Vec tail = restrict_interval(x, k, 1000);
        Rational lower = 0;
        for (std::int64_t i = 1; i <= k; ++i) lower += spec.theta(i) * x_seminorm(spec, tail, i).value;
        CHECK(x_norm(spec, tail).value >= lower);
    }
}

TEST_CASE("averages of normalized blocks") {
    Gen g(12);
    const auto spec = spec_doubling();
    for (std::int64_t N : {4, 8}) {
        for (int trial = 0; trial < 10; ++trial) {
            Vec avg;
            std::int64_t pos = g.integer(1, 3);
            for (std::int64_t s = 0; s < N; ++s) {
                Vec b;
                for (int c = 0; c < 2; ++c) b.set(pos++, g.nonzero());
                avg += b.scaled(1 / x_norm(spec, b).value);
                pos += g.integer(0, 1);
            }
            avg = avg.scaled(Rational(1, N));
            for (std::int64_t i = 1; i <= 3; ++i) {
                Rational bound = 1 + std::min(Rational(1), Rational(2 * spec.n.at(i), N));
                CHECK(x_seminorm(spec, avg, i).value <= bound);
            }
        }
    }
}

TEST_CASE("T(d_w1) norm") {
    TSpec t;
    CHECK(t_dw1_norm(t, Vec{{3, 1}}).value == 1);
    CHECK(t_dw1_norm(t, Vec{{2, 1}, {3, 1}}).value == Rational(3, 2));
    CHECK(t_dw1_norm(t, Vec{{1, Rational(5, 2)}}).value == Rational(5, 2));
    // n <= min E_1: starting at 1 allows only a single block
    CHECK(t_dw1_norm(t, Vec{{1, 1}, {2, 1}}).value == 1);

    Gen g(13);
    TSpec literal{WeightSeq::harmonic(), BlockPairing::Literal};
    for (int trial = 0; trial < 150; ++trial) {
        Vec x = g.vec(1, 8, static_cast<std::size_t>(g.integer(1, 5)));
        for (const auto& spec : {t, literal}) {
            auto r = t_dw1_norm(spec, x);
            CHECK(r.value == brute_force_norm(bt(spec), x));
            CHECK(recheck(spec, x, *r.witness) == r.value);
        }
        Vec flipped;
        for (const auto& [i, c] : x.entries()) flipped.set(i, g.coin() ? c : Rational(-c));
        CHECK(t_dw1_norm(t, flipped).value == t_dw1_norm(t, x).value);
    }
}

TEST_CASE("eq1 diagnostics") {
    std::vector<Integer> n(3, 1);
    auto rows = eq1_report(n, 2, 3);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].value.lo <= Rational(1, 3));
    CHECK(rows[0].value.hi >= Rational(1, 3));
    CHECK(rows[1].value.hi < rows[0].value.lo);
    CHECK(rows[2].value.hi < rows[1].value.lo);
    CHECK_THROWS_AS(eq1_report(n, 1, 2), Error);

    auto recipe = eq1_recipe(4);
    REQUIRE(recipe.rows.size() == 4);
    for (const auto& row : recipe.rows) {
        CHECK(row.p == Rational(row.k + 1, row.k));
        // the exact ratio exceeds k; the enclosure only has to reach past it
        CHECK(row.value.hi > row.k);
    }
}
