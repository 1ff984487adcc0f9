#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"

using namespace sntest;

namespace {

LayeredFamily single_entries(std::vector<Rational> deltas) {
    std::vector<Layer> layers;
    for (auto& d : deltas) layers.push_back(Layer{{d}, {1}});
    return LayeredFamily(std::move(layers));
}

Rational lower34(const ModelSpace& s, const DoubleVector& A) {
    Rational best = 0;
    for (std::int64_t l = 1; l <= s.max_level(); ++l)
        best = std::max(best, layer_norm(s.fam, static_cast<int>(l), level_slice(A, l)).value);
    return best;
}

Rational upper34(const ModelSpace& s, const DoubleVector& A) {
    Rational sum = 0;
    for (std::int64_t l = 0; l <= s.max_level(); ++l) sum += layer_norm(s.fam, static_cast<int>(l + 1), level_slice(A, l)).value;
    return sum;
}

Polynomial random_poly(Gen& g, int max_degree) {
    Polynomial p;
    const auto d = g.integer(0, max_degree);
    for (std::int64_t i = 0; i <= d; ++i) p.coeffs.push_back(g.rational());
    return p;
}

}  // namespace

TEST_CASE("layer monotonicity") {
    Layer L{{1, Rational(1, 3)}, {2, 5}};
    CHECK(check_layer_monotone(LayeredFamily({L, L, L})).ok);
    Layer twice{{2, Rational(2, 3)}, {2, 5}};
    CHECK(check_layer_monotone(LayeredFamily({L, twice})).ok);
    auto bad = check_layer_monotone(single_entries({1, Rational(1, 2)}));
    CHECK_FALSE(bad.ok);
    CHECK(bad.level == 1);
    CHECK(bad.i == 1);
    CHECK(check_layer_monotone(default_family()).ok);
    CHECK_FALSE(ModelSpace::from(single_entries({1, Rational(1, 2)})).monotone);
}

TEST_CASE("host norm examples") {
    auto s = ModelSpace::from(single_entries({Rational(1, 4), Rational(1, 2), 1}));
    REQUIRE(s.monotone);
    CHECK(host_norm(s, DoubleVector{}).value == 0);
    CHECK(host_norm(s, DoubleVector{}).witness.level == -1);
    CHECK(host_norm(s, unit(0, 3)).value == Rational(1, 4));
    CHECK(host_norm(s, unit(1, 1)).value == Rational(1, 2));
    auto top = host_norm(s, unit(2, 7));
    CHECK(top.value == 1);
    CHECK(top.witness.level == 2);
    CHECK(top.witness.layer == 3);
    CHECK(recheck(s, unit(2, 7), top.witness) == 1);

    ModelSpace loose{default_family(), false};
    CHECK_THROWS_AS(host_norm(loose, unit(0, 1)), Error);
    CHECK_THROWS_AS(host_norm(s, unit(3, 1)), Error);
}

TEST_CASE("sandwich and contraction on random data") {
    auto s = ModelSpace::from(default_family());
    REQUIRE(s.monotone);
    Gen g(31);
    for (int trial = 0; trial < 500; ++trial) {
        DoubleVector A = g.double_vec(4, 8, static_cast<std::size_t>(g.integer(1, 10)));
        auto h = host_norm(s, A);
        CHECK(recheck(s, A, h.witness) == h.value);
        auto w = sandwich(s, A);
        CHECK(w.holds());
        CHECK(w.lower == lower34(s, A));
        CHECK(w.upper == upper34(s, A));
        CHECK(w.host == h.value);
        CHECK(host_norm(s, apply_T(A)).value <= h.value);
    }
}

TEST_CASE("operator T") {
    CHECK(apply_T(unit(1, 1)) == unit(0, 1).scaled(Rational(1, 2)));
    CHECK(apply_T(unit(0, 5)).empty());
    CHECK(apply_T(unit(3, 2)) == unit(2, 2).scaled(Rational(1, 8)));
    CHECK(apply_poly(Polynomial{{0, 0, 1}}, unit(2, 1)) == unit(0, 1).scaled(Rational(1, 8)));
    CHECK(apply_power(unit(3, 4), 2) == unit(1, 4).scaled(Rational(1, 32)));
    CHECK(apply_power(unit(1, 4), 2).empty());
    Gen g(32);
    DoubleVector A = g.double_vec(5, 6, 8);
    CHECK(apply_poly(Polynomial{{1}}, A) == A);
    CHECK(apply_poly(Polynomial{}, A).empty());
    CHECK(Polynomial{{1, 2, 3}}.at(2) == 17);
    CHECK(Polynomial{{1, 0, 0}}.degree() == 0);
    CHECK(Polynomial{{0}}.degree() == -1);
}

TEST_CASE("closed-form powers equal repeated application") {
    Gen g(33);
    for (int trial = 0; trial < 300; ++trial) {
        Polynomial p = random_poly(g, 4);
        DoubleVector A = g.double_vec(6, 5, 6);
        CHECK(apply_poly(p, A) == apply_poly_iterated(p, A));
    }
}

TEST_CASE("T and p(T) are linear") {
    Gen g(34);
    for (int trial = 0; trial < 200; ++trial) {
        DoubleVector A = g.double_vec(5, 5, 5), B = g.double_vec(5, 5, 5);
        const Rational c = g.rational();
        Polynomial p = random_poly(g, 3);
        CHECK(apply_T(A + B.scaled(c)) == apply_T(A) + apply_T(B).scaled(c));
        CHECK(apply_poly(p, A + B.scaled(c)) == apply_poly(p, A) + apply_poly(p, B).scaled(c));
    }
}

TEST_CASE("non-compactness certificates") {
    auto s = ModelSpace::from(default_family());
    const Polynomial t{{0, 1}};
    auto c = noncompact_certificate(s, t, 0, 1, 8);
    CHECK_FALSE(c.failed);
    CHECK(c.pairwise_min == host_norm(s, (unit(0, 1) - unit(0, 2)).scaled(Rational(1, 2))).value);
    CHECK(c.pairwise_min > 0);

    auto z = noncompact_certificate(s, Polynomial{{0}}, 0, 2, 4);
    CHECK(z.failed);

    auto id = noncompact_certificate(s, t, 1, 0, 4);
    CHECK_FALSE(id.failed);
    CHECK(id.c_min == host_norm(s, unit(0, 1)).value);
    CHECK(id.c_min > 0);

    for (std::int64_t level = 1; level <= 3; ++level)
        for (std::int64_t J : {2, 9, 32}) CHECK(noncompact_certificate(s, t, 0, level, J).pairwise_min > 0);

    CHECK_THROWS_AS(noncompact_certificate(s, t, 0, 1, 1), Error);
    CHECK_THROWS_AS(noncompact_certificate(s, t, 0, 9, 4), Error);
}

TEST_CASE("kriv vectors in l1") {
    auto l1 = lp_oracle(LpExponent::of(1));
    auto gens = KrivGenerators::unit_blocks(1, 4, 3, 0);
    Gen g(35);
    for (int trial = 0; trial < 100; ++trial) {
        Vec a = g.vec(1, 4, 3);
        auto r = build_kriv_vectors({1}, {2}, gens, a, Vec{}, *l1);
        CHECK(r.holds);
        CHECK(r.lhs >= 9 * r.sup_bound);
        CHECK(r.lhs == lp_norm(a, LpExponent::of(1)).lo);

        Vec y{{100, g.nonzero()}};
        auto ry = build_kriv_vectors({1}, {2}, gens, a, y, *l1);
        CHECK(ry.lhs >= r.lhs);
    }

    auto two = KrivGenerators::unit_blocks(2, 3, 2, 10);
    std::vector<Rational> delta{Rational(1, 2), Rational(1, 5)};
    auto e = build_kriv_vectors(delta, {1, 3}, two, Vec{{1, 1}}, Vec{}, *l1);
    CHECK(e.holds);
    CHECK(e.lhs >= Rational(1, 9) * Rational(1, 2));
    CHECK(e.sup_bound == Rational(1, 18));
    REQUIRE(e.y.size() == 1);
    CHECK(e.y[0].size() == 4);

    auto clash = KrivGenerators::unit_blocks(1, 2, 2, 0);
    CHECK_THROWS_AS(build_kriv_vectors({1}, {1}, clash, Vec{{1, 1}}, Vec{{2, 1}}, *l1), Error);
    clash.kappa = 4;
    CHECK_THROWS_AS(build_kriv_vectors({1}, {1}, clash, Vec{{1, 1}}, Vec{}, *l1), Error);
    CHECK_THROWS_AS(build_kriv_vectors({1, 1}, {1}, clash, Vec{{1, 1}}, Vec{}, *l1), Error);
}

TEST_CASE("upper family fits") {
    Gen g(36);
    std::vector<Vec> samples;
    for (int trial = 0; trial < 80; ++trial) samples.push_back(g.vec(1, 40, static_cast<std::size_t>(g.integer(1, 20))));

    auto inf = fit_upper_family(*lp_oracle(LpExponent::infinity()), samples, {1});
    CHECK(inf.ok());
    CHECK(inf.M == std::vector<std::int64_t>{1});

    std::vector<Vec> flat;
    for (std::int64_t L : {10, 50, 100}) {
        Vec x;
        for (std::int64_t i = 1; i <= L; ++i) x.set(i, 1);
        flat.push_back(x);
    }
    auto l1 = fit_upper_family(*lp_oracle(LpExponent::of(1)), flat, {1, Rational(1, 2), Rational(1, 4)}, 64);
    CHECK_FALSE(l1.ok());
    CHECK(l1.violations.back().sample == 2);

    std::vector<Rational> delta;
    std::vector<std::int64_t> M;
    for (std::int64_t n = 1; n <= 7; ++n) {
        delta.push_back(Rational(2, n));
        M.push_back(std::int64_t{1} << n);
    }
    auto samples_all = samples;
    samples_all.insert(samples_all.end(), flat.begin(), flat.end());
    CHECK(check_upper_family(*lorentz_oracle(WeightSeq::harmonic()), samples_all, delta, M).empty());
}
