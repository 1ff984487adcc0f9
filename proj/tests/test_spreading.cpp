#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"

using namespace sntest;

namespace {

std::vector<Rational> ones(std::size_t n) { return std::vector<Rational>(n, Rational(1)); }

Rational val(const NormOracle& N, const Vec& a) {
    Enclosure e = N.eval(a);
    REQUIRE(e.is_exact());
    return e.lo;
}

const auto l1 = lp_oracle(LpExponent::of(1));
const auto l2 = lp_oracle(LpExponent::of(2));
const auto linf = lp_oracle(LpExponent::infinity());
const auto dw1 = lorentz_oracle(WeightSeq::harmonic());

}  // namespace

TEST_CASE("tree coordinates") {
    CHECK(tree_node_of(1) == TreeNode{0, 0});
    CHECK(tree_node_of(2) == TreeNode{1, 0});
    CHECK(tree_node_of(3) == TreeNode{1, 1});
    CHECK(tree_node_of(12) == TreeNode{3, 4});
    for (std::int64_t n = 1; n < 300; ++n) CHECK(tree_position(tree_node_of(n)) == n);
    CHECK_THROWS_AS(tree_node_of(0), Error);
}

TEST_CASE("sm_estimate examples") {
    for (std::size_t n : {1, 3, 6}) {
        auto r = sm_estimate(*dw1, ones(n), {8, 11, 20}, {1, 2, 5});
        REQUIRE(r.value);
        CHECK(r.value->lo == harmonic(static_cast<std::int64_t>(n)));
        CHECK(r.residual == 0);
        for (const auto& row : r.table) CHECK(row.value.lo == harmonic(static_cast<std::int64_t>(n)));
    }
    auto z = sm_estimate(*dw1, {0, 0}, {3}, {1});
    CHECK(z.value->lo == 0);

    // the Schreier-Lorentz norm read on original positions stabilizes once shift >= n
    auto s = schreier_lorentz_oracle(WeightSeq::harmonic(), SchreierReading::Original);
    for (std::size_t n : {2, 4, 5}) {
        const auto N = static_cast<std::int64_t>(n);
        auto r = sm_estimate(*s, ones(n), {N, N + 3, N + 7, N + 9}, {1, 2});
        CHECK(r.stabilized);
        REQUIRE(r.value);
        CHECK(r.value->lo == harmonic(N));
        CHECK(r.residual == 0);
    }
    CHECK_THROWS_AS(sm_estimate(*s, ones(4), {3}, {1}), Error);
    CHECK_THROWS_AS(sm_estimate(*s, ones(2), {3}, {0}), Error);
}

TEST_CASE("sm_estimate is flat on subsymmetric oracles") {
    Gen g(21);
    for (const auto& N : {l1, l2, linf, dw1}) {
        CHECK(N->subsymmetric());
        for (int trial = 0; trial < 20; ++trial) {
            std::vector<Rational> a;
            for (int i = 0; i < 4; ++i) a.push_back(g.rational());
            auto r = sm_estimate(*N, a, {4, 9, 13}, {1, 3});
            for (const auto& row : r.table) CHECK(row.value.lo == r.value->lo);
        }
    }
}

TEST_CASE("growth reports") {
    auto g1 = growth_report(*l1, 10);
    auto gi = growth_report(*linf, 10);
    auto gw = growth_report(*dw1, 16, std::vector<Rational>(16, Rational(1)));
    for (std::int64_t n = 1; n <= 10; ++n) {
        CHECK(g1[n - 1].g.lo == n);
        CHECK(g1[n - 1].per_n.lo == 1);
        CHECK(gi[n - 1].g.lo == 1);
    }
    for (std::int64_t n = 1; n <= 16; ++n) {
        CHECK(gw[n - 1].g.lo == harmonic(n));
        CHECK(gw[n - 1].per_lambda->lo == harmonic(n));
        CHECK(gw[n - 1].stabilized);
    }
    CHECK(gw[15].per_n.lo < Rational(1, 4));
    CHECK_THROWS_AS(growth_report(*l1, 0), Error);
}

TEST_CASE("domination constants") {
    Grid grid;
    grid.random = 200;
    auto a = domination_constant(*l1, *l2, 5, grid);
    CHECK(a.C_lower == 1);
    CHECK(a.argmax == std::vector<Rational>{1, 0, 0, 0, 0});

    auto b = domination_constant(*l2, *l1, 4, grid);
    CHECK(b.C_lower == 2);
    CHECK(b.argmax == ones(4));

    for (const auto& N : {l1, l2, dw1}) {
        auto c = domination_constant(*N, *N, 3, grid);
        CHECK(c.C_lower == 1);
        CHECK(c.argmax == std::vector<Rational>{1, 0, 0});
    }
}

TEST_CASE("basis distance") {
    Grid grid;
    grid.random = 200;
    CHECK(basis_distance(*l2, *l2, 4, grid).d_lower == 1);
    auto d = basis_distance(*l2, *l1, 4, grid);
    CHECK(d.d_lower == 2);
    for (const Rational c : {Rational(3), Rational(1, 7)}) {
        CHECK(basis_distance(*scaled_oracle(c, l2), *l1, 4, grid).d_lower == 2);
        CHECK(basis_distance(*l2, *scaled_oracle(c, l1), 4, grid).d_lower == 2);
    }
}

TEST_CASE("basis distance never drops under grid refinement") {
    auto x = space_x_oracle(spec_doubling());
    Rational prev = 0;
    for (std::size_t r : {0, 10, 40, 120, 300}) {
        Grid grid;
        grid.random = r;
        grid.seed = 5;
        Rational d = basis_distance(*dw1, *x, 5, grid).d_lower;
        CHECK(d >= prev);
        prev = d;
    }
}

TEST_CASE("combine_upper") {
    CHECK_THROWS_AS(combine_upper({}, {}), Error);
    CHECK_THROWS_AS(combine_upper({l1}, {1, 2}), Error);
    CHECK_THROWS_AS(combine_upper({l1}, {0}), Error);
    auto single = combine_upper({l2}, {16});
    auto doubled = combine_upper({l1, l1}, {1, 1});
    Gen g(22);
    std::vector<OraclePtr> kids{l1, dw1, linf};
    std::vector<Rational> C{2, 5, Rational(1, 3)};
    auto comb = combine_upper(kids, C);
    for (int trial = 0; trial < 200; ++trial) {
        Vec a = g.vec(1, 6, 4);
        CHECK(single->eval(a).lo == l2->eval(a).lo);
        CHECK(single->eval(a).hi == l2->eval(a).hi);
        CHECK(val(*doubled, a) == 32 * val(*l1, a));
        const Rational v = val(*comb, a);
        Rational L = 0;
        for (std::size_t i = 0; i < kids.size(); ++i) {
            CHECK(v >= 16 / C[i] * val(*kids[i], a));
            L += 16 / C[i];  // max_j N_i(e_j) = 1 for all three
        }
        CHECK(v <= L * val(*l1, a));
    }
}

TEST_CASE("max_combine") {
    CHECK_THROWS_AS(max_combine({}), Error);
    auto m = max_combine({l1, linf});
    auto same = max_combine({dw1, dw1});
    auto mix = max_combine({l1, dw1, linf});
    Gen g(23);
    for (int trial = 0; trial < 200; ++trial) {
        Vec a = g.vec(1, 6, 4);
        Vec pos;
        for (const auto& [i, c] : a.entries()) pos.set(i, abs(c));
        CHECK(val(*m, pos) == val(*l1, pos));
        CHECK(val(*same, a) == val(*dw1, a));
        Rational top = 0;
        for (const auto& N : {l1, dw1, linf}) top = std::max(top, val(*N, a));
        CHECK(val(*mix, a) == top);
        Vec b = g.vec(1, 6, 4), c = g.vec(1, 6, 4);
        CHECK(val(*mix, a + b + c) <= val(*mix, a) + val(*mix, b) + val(*mix, c));
    }
}

TEST_CASE("block oracle") {
    auto b = block_oracle(l1, {1, Rational(1, 2)});
    CHECK(val(*b, Vec{{1, 1}, {2, 1}}) == 3);
    auto w = block_oracle(dw1, {Rational(1, 2), Rational(1, 2)});
    // one block spreads 1/2, 1/2 over the weights 1, 1/2
    CHECK(val(*w, Vec{{1, 1}}) == Rational(3, 4));
}

TEST_CASE("krivine block search") {
    Grid grid;
    grid.random = 60;
    auto r = krivine_block_search(l1, LpExponent::of(1), 3, 1, 100, grid);
    CHECK(r.best.m == 1);
    CHECK(r.best.constant == 1);

    auto inf = krivine_block_search(linf, LpExponent::of(1), 2, 4, 400, grid);
    CHECK(inf.best.constant >= 2);
    for (const auto& t : inf.averages) CHECK(t.constant >= 2);

    // the flat averages of d_{w,1} against l1^4: 4 H_m / H_{4m}
    auto w = krivine_block_search(dw1, LpExponent::of(1), 4, 4, 50, grid);
    REQUIRE(w.averages.size() == 4);
    for (const auto& t : w.averages) {
        const auto m = static_cast<std::int64_t>(t.m);
        CHECK(t.constant == 4 * harmonic(m) / harmonic(4 * m));
    }
    CHECK(w.averages[0].constant == Rational(48, 25));

    auto tight = krivine_block_search(dw1, LpExponent::of(1), 3, 3, 5, grid);
    CHECK(tight.budget_exhausted);
    CHECK(tight.evaluations <= 5);

    CHECK_THROWS_AS(krivine_block_search(dw1, LpExponent::of(1), 1, 2, 10, grid), Error);
    CHECK_THROWS_AS(krivine_block_search(space_x_oracle(spec_linear()), LpExponent::of(1), 2, 2, 10, grid), Error);
}
