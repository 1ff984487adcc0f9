#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"

using namespace sntest;

TEST_CASE("rational text round trip") {
    CHECK(to_string(Rational(3, 6)) == "1/2");
    CHECK(to_string(Rational(4, 2)) == "2");
    CHECK(to_string(Rational(-7, 3)) == "-7/3");
    CHECK(parse_rational(" 6/4 ") == Rational(3, 2));
    CHECK(parse_rational("-5") == Rational(-5));
    CHECK_THROWS_AS(parse_rational("1/0"), Error);
    CHECK_THROWS_AS(parse_rational("abc"), Error);
    CHECK_THROWS_AS(parse_rational(""), Error);
    CHECK(pow(Rational(2, 3), 3) == Rational(8, 27));

    Gen g(1);
    for (int i = 0; i < 200; ++i) {
        Rational q = g.rational(1000, 1000);
        CHECK(parse_rational(to_string(q)) == q);
    }
}

TEST_CASE("sparse vectors drop zeros") {
    Vec x{{1, 2}, {3, 0}, {5, Rational(-1, 2)}};
    CHECK(x.size() == 2);
    CHECK(x.get(3) == 0);
    x.add(1, -2);
    CHECK(x.size() == 1);
    CHECK(x.max_abs() == Rational(1, 2));
    CHECK((x - x).empty());
    CHECK(x.scaled(0).empty());
    CHECK(restrict_interval(Vec{{1, 1}, {2, 1}, {7, 1}}, 2, 6) == Vec{{2, 1}});
}

TEST_CASE("finite sets") {
    FiniteSet<std::int64_t> a{5, 1, 3, 3};
    CHECK(a.items() == std::vector<std::int64_t>{1, 3, 5});
    CHECK(a.contains(3));
    CHECK(a.precedes(FiniteSet<std::int64_t>{6, 9}));
    CHECK_FALSE(a.precedes(FiniteSet<std::int64_t>{4}));
    CHECK(a.intersect(FiniteSet<std::int64_t>{3, 4, 5}) == FiniteSet<std::int64_t>{3, 5});
}

TEST_CASE("successive partitions") {
    FiniteSet<std::int64_t> s{1, 5, 9};
    auto parts = enumerate_successive_partitions(s, 2);
    REQUIRE(parts.size() == 3);
    CHECK(parts[0].size() == 1);
    CHECK(parts[1][0] == FiniteSet<std::int64_t>{1});
    CHECK(parts[2][1] == FiniteSet<std::int64_t>{9});
    CHECK_THROWS_AS(enumerate_successive_partitions(s, 0), Error);

    // C(n-1, b-1) splits into exactly b blocks
    FiniteSet<std::int64_t> big{1, 2, 3, 4, 5, 6, 7};
    std::map<std::size_t, int> by_blocks;
    for (const auto& p : enumerate_successive_partitions(big, 7)) {
        ++by_blocks[p.size()];
        for (std::size_t j = 0; j + 1 < p.size(); ++j) CHECK(p[j].precedes(p[j + 1]));
    }
    CHECK(by_blocks[1] == 1);
    CHECK(by_blocks[3] == 15);
    CHECK(by_blocks[7] == 1);
}

TEST_CASE("decreasing rearrangement ignores order and signs") {
    Gen g(2);
    for (int trial = 0; trial < 200; ++trial) {
        Vec x = g.vec(1, 30, 8);
        auto r = decreasing_rearrangement(x);
        for (std::size_t i = 1; i < r.size(); ++i) CHECK(r[i] <= r[i - 1]);
        Vec y;
        std::int64_t pos = 100;
        for (const auto& [i, v] : x.entries()) y.set(pos--, g.coin() ? v : Rational(-v));
        CHECK(decreasing_rearrangement(y) == r);
    }
}
