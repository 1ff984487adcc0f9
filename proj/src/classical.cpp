#include "spreadnorm/classical.hpp"

#include <numeric>

namespace sn {

Enclosure Enclosure::scaled(const Rational& c) const { return {lo * c, hi * c}; }

Enclosure Enclosure::max(const Enclosure& a, const Enclosure& b) {
    return {a.lo > b.lo ? a.lo : b.lo, a.hi > b.hi ? a.hi : b.hi};
}

namespace {

Integer iroot(const Integer& v, unsigned long k) {
    Integer r;
    mpz_root(r.get_mpz_t(), v.get_mpz_t(), k);
    return r;
}

bool perfect_power(const Integer& v, unsigned long k, Integer& root) {
    return mpz_root(root.get_mpz_t(), v.get_mpz_t(), k) != 0;
}

}  // namespace

Enclosure root_enclosure(const Rational& q, unsigned long k, const Rational& width) {
    if (sgn(q) < 0) fail("root of a negative number");
    if (k == 1 || sgn(q) == 0) return Enclosure::exact(q);
    Integer rn, rd;
    if (perfect_power(q.get_num(), k, rn) && perfect_power(q.get_den(), k, rd)) {
        Rational r(rn, rd);
        r.canonicalize();
        return Enclosure::exact(r);
    }
    // floor(q^(1/k) * D) = iroot(floor(q * D^k), k)
    Integer D = 10;
    for (;;) {
        Integer Dk;
        mpz_pow_ui(Dk.get_mpz_t(), D.get_mpz_t(), k);
        Integer scaled = (q.get_num() * Dk) / q.get_den();
        Integer f = iroot(scaled, k);
        Rational lo(f, D), hi(f + 1, D);
        lo.canonicalize();
        hi.canonicalize();
        if (hi - lo <= width) return {lo, hi};
        D *= D;
    }
}

WeightSeq WeightSeq::harmonic() { return WeightSeq{}; }

WeightSeq WeightSeq::explicit_values(std::vector<Rational> values) {
    if (values.empty()) fail("explicit weight list is empty");
    if (values.front() != 1) fail("weights must start with w_1 = 1");
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (sgn(values[i]) <= 0) fail("weights must be positive");
        if (values[i] > values[i - 1]) fail("weights must be non-increasing");
    }
    WeightSeq w;
    w.kind_ = Kind::Explicit;
    w.values_ = std::move(values);
    return w;
}

Rational WeightSeq::at(std::size_t n) const {
    if (n == 0) fail("weights are 1-based");
    if (kind_ == Kind::Harmonic) return Rational(1, n);
    if (n <= values_.size()) return values_[n - 1];
    Rational inv = 1 / values_.back();
    Rational r = 1 / (inv + Rational(n - values_.size()));
    return r;
}

std::vector<Rational> WeightSeq::prefix(std::size_t m) const {
    std::vector<Rational> r;
    r.reserve(m);
    for (std::size_t n = 1; n <= m; ++n) r.push_back(at(n));
    return r;
}

Enclosure lp_norm(const Vec& x, const LpExponent& p, const Rational& width) {
    if (p.is_infinity()) return Enclosure::exact(x.max_abs());
    const Rational& e = *p.p;
    if (e < 1) fail("lp_norm requires p >= 1");
    if (x.empty()) return Enclosure::exact(0);
    if (e == 1) {
        Rational s = 0;
        for (const auto& kv : x.entries()) s += abs(kv.second);
        return Enclosure::exact(s);
    }
    const unsigned long a = e.get_num().get_ui();
    const unsigned long b = e.get_den().get_ui();
    if (b == 1) {
        Rational s = 0;
        for (const auto& kv : x.entries()) s += pow(Rational(abs(kv.second)), a);
        return root_enclosure(s, a, width);
    }
    // p = a/b: sum of |x_i|^(a/b), then (.)^(b/a); refine until tight enough
    Rational inner = width / (16 * Rational(x.size()));
    for (int round = 0; round < 8; ++round) {
        Enclosure s = Enclosure::exact(0);
        for (const auto& kv : x.entries())
            s = s + root_enclosure(pow(Rational(abs(kv.second)), a), b, inner);
        Enclosure lo = root_enclosure(pow(s.lo, b), a, inner);
        Enclosure hi = root_enclosure(pow(s.hi, b), a, inner);
        Enclosure r{lo.lo, hi.hi};
        if (r.hi - r.lo <= width) return r;
        inner /= 1024;
    }
    fail("lp_norm enclosure did not converge");
}

Rational lorentz_norm(const WeightSeq& w, const Vec& x) {
    auto xs = decreasing_rearrangement(x);
    Rational s = 0;
    for (std::size_t n = 0; n < xs.size(); ++n) s += w.at(n + 1) * xs[n];
    return s;
}

SchreierResult schreier_lorentz_norm(const WeightSeq& w, const Vec& x, SchreierReading reading) {
    SchreierResult best{0, {1, {1}}};
    if (x.empty()) return best;
    const std::size_t m = x.size();
    if (reading == SchreierReading::Rearranged) {
        // k_i >= n + i - 1 and x* is non-increasing, so consecutive k from n is optimal
        auto xs = decreasing_rearrangement(x);
        bool first = true;
        for (std::size_t n = 1; n <= m; ++n) {
            Rational s = 0;
            for (std::size_t i = 1; i <= n; ++i) {
                std::size_t k = n + i - 1;
                if (k <= m) s += w.at(i) * xs[k - 1];
            }
            if (first || s > best.value) {
                first = false;
                best.value = s;
                best.witness.n = n;
                best.witness.k.clear();
                for (std::size_t i = 1; i <= n; ++i) best.witness.k.push_back(static_cast<std::int64_t>(n + i - 1));
            }
        }
        return best;
    }
    // original coordinates: pick an increasing subsequence of supp x within [n, inf)
    std::vector<std::int64_t> idx;
    std::vector<Rational> val;
    for (const auto& [i, v] : x.entries()) {
        idx.push_back(i);
        val.push_back(abs(v));
    }
    const std::int64_t top = idx.back();
    bool first = true;
    // beyond |supp| the value only changes when n passes a support point
    std::vector<std::int64_t> cands;
    for (std::int64_t n = 1; n <= std::min<std::int64_t>(top, static_cast<std::int64_t>(m)); ++n) cands.push_back(n);
    for (auto i : idx)
        if (i > static_cast<std::int64_t>(m)) cands.push_back(i);
    for (std::int64_t n : cands) {
        std::size_t start = std::lower_bound(idx.begin(), idx.end(), n) - idx.begin();
        std::size_t len = idx.size() - start;
        std::size_t cmax = std::min<std::size_t>(len, static_cast<std::size_t>(n));
        // dp[j][c]: best using elements from j on, having already placed c terms
        std::vector<std::vector<Rational>> dp(len + 1, std::vector<Rational>(cmax + 1, 0));
        std::vector<std::vector<char>> take(len + 1, std::vector<char>(cmax + 1, 0));
        for (std::size_t j = len; j-- > 0;) {
            for (std::size_t c = 0; c <= cmax; ++c) {
                dp[j][c] = dp[j + 1][c];
                if (c < cmax) {
                    Rational t = w.at(c + 1) * val[start + j] + dp[j + 1][c + 1];
                    if (t > dp[j][c]) {
                        dp[j][c] = t;
                        take[j][c] = 1;
                    }
                }
            }
        }
        if (first || dp[0][0] > best.value) {
            first = false;
            best.value = dp[0][0];
            best.witness.n = static_cast<std::size_t>(n);
            best.witness.k.clear();
            std::size_t c = 0;
            for (std::size_t j = 0; j < len && c < cmax; ++j)
                if (take[j][c]) {
                    best.witness.k.push_back(idx[start + j]);
                    ++c;
                }
            std::int64_t pad = std::max<std::int64_t>(top, n - 1);
            if (!best.witness.k.empty()) pad = std::max(pad, best.witness.k.back());
            while (best.witness.k.size() < static_cast<std::size_t>(n)) best.witness.k.push_back(++pad);
        }
    }
    return best;
}

Rational recheck(const WeightSeq& w, const Vec& x, const SchreierWitness& wit, SchreierReading reading) {
    if (wit.n == 0 || wit.k.size() != wit.n) fail("witness must list exactly n indices");
    if (wit.k.front() < static_cast<std::int64_t>(wit.n)) fail("witness violates n <= k_1");
    for (std::size_t i = 1; i < wit.k.size(); ++i)
        if (wit.k[i] <= wit.k[i - 1]) fail("witness indices not increasing");
    Rational s = 0;
    if (reading == SchreierReading::Rearranged) {
        auto xs = decreasing_rearrangement(x);
        for (std::size_t i = 0; i < wit.n; ++i) {
            auto k = static_cast<std::size_t>(wit.k[i]);
            if (k <= xs.size()) s += w.at(i + 1) * xs[k - 1];
        }
    } else {
        for (std::size_t i = 0; i < wit.n; ++i) s += w.at(i + 1) * abs(x.get(wit.k[i]));
    }
    return s;
}

Rational ell1_family_norm(std::int64_t M, const Vec& a) {
    if (M < 0) fail("ell1_family_norm requires M >= 0");
    auto xs = decreasing_rearrangement(a);
    Rational s = 0;
    for (std::size_t i = 0; i < xs.size() && static_cast<std::int64_t>(i) < M; ++i) s += xs[i];
    return s;
}

LayeredFamily::LayeredFamily(std::vector<Layer> layers) : layers_(std::move(layers)) {
    for (const auto& l : layers_) {
        if (l.delta.size() != l.M.size()) fail("layer delta and M lengths differ");
        if (l.delta.empty()) fail("layer must have at least one (delta, M) entry");
        for (std::size_t i = 0; i < l.M.size(); ++i) {
            if (sgn(l.delta[i]) <= 0) fail("layer delta entries must be positive");
            if (l.M[i] < 1) fail("layer M entries must be positive");
            if (i > 0 && l.M[i] <= l.M[i - 1]) fail("layer M must be strictly increasing");
        }
    }
}

const Layer& LayeredFamily::layer(int level) const {
    if (level < 1 || level > levels()) fail("level " + std::to_string(level) + " out of range");
    return layers_[static_cast<std::size_t>(level - 1)];
}

LayerResult layer_norm(const LayeredFamily& fam, int level, const Vec& a) {
    const Layer& l = fam.layer(level);
    // indices ordered by |a| descending, ties by index
    std::vector<std::pair<Rational, std::int64_t>> order;
    for (const auto& [i, v] : a.entries()) order.emplace_back(abs(v), i);
    std::stable_sort(order.begin(), order.end(), [](const auto& p, const auto& q) { return p.first > q.first; });
    std::vector<Rational> partial(order.size() + 1, 0);
    for (std::size_t j = 0; j < order.size(); ++j) partial[j + 1] = partial[j] + order[j].first;

    LayerResult best{-1, {}};
    for (std::size_t i = 0; i < l.M.size(); ++i) {
        std::size_t take = std::min<std::size_t>(order.size(), static_cast<std::size_t>(l.M[i]));
        Rational v = l.delta[i] * partial[take];
        if (v > best.value) {
            best.value = v;
            best.witness.i = i + 1;
            best.witness.F.clear();
            for (std::size_t j = 0; j < take; ++j) best.witness.F.push_back(order[j].second);
            std::sort(best.witness.F.begin(), best.witness.F.end());
        }
    }
    return best;
}

Rational recheck(const LayeredFamily& fam, int level, const Vec& a, const LayerWitness& wit) {
    const Layer& l = fam.layer(level);
    if (wit.i < 1 || wit.i > l.M.size()) fail("layer witness index out of range");
    if (static_cast<std::int64_t>(wit.F.size()) > l.M[wit.i - 1]) fail("layer witness set too large");
    FiniteSet<std::int64_t> F(wit.F);
    if (F.size() != wit.F.size()) fail("layer witness set has duplicates");
    Rational s = 0;
    for (auto j : F.items()) s += abs(a.get(j));
    return l.delta[wit.i - 1] * s;
}

}  // namespace sn
