#include "spreadnorm/operators.hpp"

namespace sn {

Rational Polynomial::at(const Rational& t) const {
    Rational s = 0;
    for (std::size_t i = coeffs.size(); i-- > 0;) s = s * t + coeffs[i];
    return s;
}

int Polynomial::degree() const {
    for (std::size_t i = coeffs.size(); i-- > 0;)
        if (sgn(coeffs[i]) != 0) return static_cast<int>(i);
    return -1;
}

DoubleVector unit(std::int64_t level, std::int64_t j) {
    if (level < 0 || j < 1) fail("double index needs level >= 0 and position >= 1");
    DoubleVector d;
    d.set({level, j}, 1);
    return d;
}

Vec level_slice(const DoubleVector& A, std::int64_t level) {
    Vec x;
    for (const auto& [ij, v] : A.entries())
        if (ij.first == level) x.set(ij.second, v);
    return x;
}

MonotoneCheck check_layer_monotone(const LayeredFamily& fam) {
    for (int l = 1; l < fam.levels(); ++l) {
        const Layer& cur = fam.layer(l);
        const Layer& next = fam.layer(l + 1);
        for (std::size_t i = 0; i < cur.M.size(); ++i) {
            bool found = false;
            for (std::size_t k = 0; k < next.M.size() && !found; ++k)
                found = cur.delta[i] <= next.delta[k] && cur.M[i] <= next.M[k];
            if (!found) return {false, l, i + 1};
        }
    }
    return {};
}

ModelSpace ModelSpace::from(LayeredFamily fam) {
    if (fam.levels() < 1) fail("model space needs at least one layer");
    ModelSpace s{std::move(fam), false};
    s.monotone = check_layer_monotone(s.fam).ok;
    return s;
}

LayeredFamily default_family(int layers) {
    if (layers < 1) fail("need at least one layer");
    std::vector<Layer> out;
    for (int l = 1; l <= layers; ++l) {
        Layer L;
        for (int i = 1; i <= 3; ++i) {
            L.delta.emplace_back(1, 1L << (i - 1));
            L.M.push_back(static_cast<std::int64_t>(l) << (2 * (i - 1)));
        }
        out.push_back(std::move(L));
    }
    return LayeredFamily(std::move(out));
}

namespace {

std::map<std::int64_t, Vec> slices(const ModelSpace& space, const DoubleVector& A) {
    std::map<std::int64_t, Vec> s;
    for (const auto& [ij, v] : A.entries()) {
        if (ij.first < 0 || ij.first > space.max_level())
            fail("level " + std::to_string(ij.first) + " is outside the model (max " +
                 std::to_string(space.max_level()) + ")");
        s[ij.first].set(ij.second, v);
    }
    return s;
}

}  // namespace

HostResult host_norm(const ModelSpace& space, const DoubleVector& A) {
    if (!space.monotone) fail("host norm needs a family that passed the monotonicity check");
    HostResult r{0, {}};
    for (const auto& [l, a] : slices(space, A)) {
        for (int layer = static_cast<int>(std::max<std::int64_t>(l, 1)); layer <= l + 1; ++layer) {
            auto v = layer_norm(space.fam, layer, a);
            if (v.value > r.value) r = {v.value, {l, layer, v.witness}};
        }
    }
    return r;
}

Rational recheck(const ModelSpace& space, const DoubleVector& A, const HostWitness& w) {
    if (w.level < 0) {
        if (!A.empty()) fail("empty host witness for a nonzero vector");
        return 0;
    }
    if (w.layer != w.level && w.layer != w.level + 1) fail("host witness layer does not serve its level");
    if (w.layer < 1) fail("host witness layer out of range");
    return recheck(space.fam, w.layer, level_slice(A, w.level), w.inner);
}

Sandwich sandwich(const ModelSpace& space, const DoubleVector& A) {
    Sandwich s{0, host_norm(space, A).value, 0};
    for (const auto& [l, a] : slices(space, A)) {
        if (l >= 1) s.lower = std::max(s.lower, layer_norm(space.fam, static_cast<int>(l), a).value);
        s.upper += layer_norm(space.fam, static_cast<int>(l + 1), a).value;
    }
    return s;
}

DoubleVector apply_T(const DoubleVector& A) {
    DoubleVector out;
    for (const auto& [ij, v] : A.entries()) {
        if (ij.first == 0) continue;
        out.add({ij.first - 1, ij.second}, v / pow(Rational(2), static_cast<unsigned long>(ij.first)));
    }
    return out;
}

DoubleVector apply_power(const DoubleVector& A, std::int64_t i) {
    if (i < 0) fail("negative power");
    DoubleVector out;
    for (const auto& [ij, v] : A.entries()) {
        const std::int64_t l = ij.first;
        if (l < i) continue;
        // product of 2^{-k} for k = l-i+1 .. l
        const std::int64_t e = i * l - i * (i - 1) / 2;
        out.add({l - i, ij.second}, v / pow(Rational(2), static_cast<unsigned long>(e)));
    }
    return out;
}

DoubleVector apply_poly(const Polynomial& p, const DoubleVector& A) {
    DoubleVector out;
    for (std::size_t i = 0; i < p.coeffs.size(); ++i)
        if (sgn(p.coeffs[i]) != 0) out += apply_power(A, static_cast<std::int64_t>(i)).scaled(p.coeffs[i]);
    return out;
}

DoubleVector apply_poly_iterated(const Polynomial& p, const DoubleVector& A) {
    DoubleVector out, cur = A;
    for (std::size_t i = 0; i < p.coeffs.size(); ++i) {
        out += cur.scaled(p.coeffs[i]);
        cur = apply_T(cur);
    }
    return out;
}

Certificate noncompact_certificate(const ModelSpace& space, const Polynomial& p, const Rational& lambda,
                                   std::int64_t level, std::int64_t J) {
    if (J < 2) fail("certificate needs J >= 2");
    if (level < 0 || level > space.max_level()) fail("level outside the model");
    Certificate c;
    c.note = "separation of finitely many images; evidence, not a proof about the infinite-dimensional operator";
    std::vector<DoubleVector> v;
    bool all_zero = true;
    for (std::int64_t j = 1; j <= J; ++j) {
        DoubleVector e = unit(level, j);
        DoubleVector img = apply_poly(p, e) - e.scaled(lambda);
        all_zero = all_zero && img.empty();
        v.push_back(std::move(img));
    }
    if (all_zero) {
        c.failed = true;
        c.note = "all images vanish: p(T) - lambda I is zero on this level";
        return c;
    }
    bool first = true;
    for (const auto& img : v) {
        Rational h = host_norm(space, img).value;
        if (first || h < c.c_min) c.c_min = h;
        first = false;
    }
    first = true;
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t j = i + 1; j < v.size(); ++j) {
            Rational h = host_norm(space, v[i] - v[j]).value;
            if (first || h < c.pairwise_min) c.pairwise_min = h;
            first = false;
        }
    if (sgn(c.pairwise_min) <= 0) c.failed = true;
    return c;
}

KrivGenerators KrivGenerators::unit_blocks(std::size_t count_n, std::size_t count_j, std::int64_t length,
                                           std::int64_t start) {
    if (length < 1) fail("block length must be >= 1");
    KrivGenerators g;
    std::int64_t pos = start;
    for (std::size_t n = 0; n < count_n; ++n) {
        std::vector<Vec> fam;
        for (std::size_t j = 0; j < count_j; ++j) {
            Vec w;
            for (std::int64_t r = 0; r < length; ++r) w.set(++pos, Rational(1, length));
            fam.push_back(std::move(w));
        }
        g.families.push_back(std::move(fam));
    }
    return g;
}

KrivReport build_kriv_vectors(const std::vector<Rational>& delta, const std::vector<std::int64_t>& M,
                              const KrivGenerators& gens, const Vec& a, const Vec& y, const NormOracle& host) {
    if (delta.size() != M.size() || delta.size() != gens.families.size())
        fail("delta, M and generator families must have the same length");
    if (gens.kappa > 3 || sgn(gens.kappa) <= 0) fail("declared equivalence constant must lie in (0, 3]");
    const std::int64_t top = a.empty() ? 0 : a.entries().rbegin()->first;
    if (!a.empty() && a.entries().begin()->first < 1) fail("coefficients are 1-based");
    std::map<std::int64_t, int> owner;
    for (const auto& [i, v] : y.entries()) owner[i] = -1;
    int id = 0;
    for (const auto& fam : gens.families) {
        if (static_cast<std::int64_t>(fam.size()) < top) fail("generator family shorter than the coefficient vector");
        for (const auto& w : fam) {
            for (const auto& [i, v] : w.entries())
                if (!owner.emplace(i, id).second) fail("generator supports overlap at coordinate " + std::to_string(i));
            ++id;
        }
    }

    KrivReport r;
    for (std::int64_t j = 1; j <= top; ++j) {
        Vec yj;
        for (std::size_t n = 0; n < delta.size(); ++n) yj += gens.families[n][static_cast<std::size_t>(j - 1)].scaled(delta[n]);
        r.y.push_back(std::move(yj));
    }
    Vec total = y;
    for (const auto& [j, v] : a.entries()) total += r.y[static_cast<std::size_t>(j - 1)].scaled(v);
    r.lhs = host.eval(total).lo;
    r.sup_bound = 0;
    for (std::size_t n = 0; n < delta.size(); ++n) {
        Rational b = delta[n] * ell1_family_norm(M[n], a) / 9;
        r.rows.push_back({n + 1, b});
        r.sup_bound = std::max(r.sup_bound, b);
    }
    r.holds = r.sup_bound <= r.lhs;
    return r;
}

namespace {

Rational upper_rhs(const Vec& a, const std::vector<Rational>& delta, const std::vector<std::int64_t>& M) {
    Rational r = 0;
    for (std::size_t n = 0; n < delta.size(); ++n) r = std::max(r, Rational(delta[n] * ell1_family_norm(M[n], a)));
    return r;
}

}  // namespace

std::vector<FitViolation> check_upper_family(const NormOracle& oracle, const std::vector<Vec>& samples,
                                             const std::vector<Rational>& delta, const std::vector<std::int64_t>& M) {
    if (delta.size() != M.size()) fail("delta and M must have the same length");
    std::vector<FitViolation> out;
    for (std::size_t s = 0; s < samples.size(); ++s) {
        Rational lhs = oracle.eval(samples[s]).hi;
        Rational rhs = upper_rhs(samples[s], delta, M);
        if (lhs > rhs) out.push_back({s, lhs, rhs});
    }
    return out;
}

FitResult fit_upper_family(const NormOracle& oracle, const std::vector<Vec>& samples,
                           const std::vector<Rational>& delta, std::int64_t M_cap) {
    if (delta.empty()) fail("delta list is empty");
    for (const auto& d : delta)
        if (sgn(d) <= 0) fail("delta entries must be positive");
    const auto N = static_cast<std::int64_t>(delta.size());
    if (M_cap < N) fail("M cap too small for a strictly increasing family");
    FitResult fit;
    for (std::int64_t n = 1; n <= N; ++n) fit.M.push_back(n);

    std::vector<Rational> lhs;
    for (const auto& a : samples) lhs.push_back(oracle.eval(a).hi);
    for (std::size_t s = 0; s < samples.size(); ++s) {
        if (lhs[s] <= upper_rhs(samples[s], delta, fit.M)) continue;
        // smallest single raise of some M_n (pushing later entries up to stay increasing) that covers sample s
        std::optional<std::pair<std::size_t, std::int64_t>> best;
        const auto support = static_cast<std::int64_t>(samples[s].size());
        for (std::size_t n = 0; n < delta.size(); ++n) {
            const std::int64_t room = M_cap - (N - 1 - static_cast<std::int64_t>(n));
            for (std::int64_t m = fit.M[n]; m <= std::min(room, std::max(fit.M[n], support)); ++m)
                if (delta[n] * ell1_family_norm(m, samples[s]) >= lhs[s]) {
                    if (!best || m - fit.M[n] < best->second - fit.M[best->first]) best = {{n, m}};
                    break;
                }
        }
        if (!best) continue;
        fit.M[best->first] = best->second;
        for (std::size_t n = best->first + 1; n < fit.M.size(); ++n) fit.M[n] = std::max(fit.M[n], fit.M[n - 1] + 1);
    }
    fit.violations = check_upper_family(oracle, samples, delta, fit.M);
    return fit;
}

}  // namespace sn
