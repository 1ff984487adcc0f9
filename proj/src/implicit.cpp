#include "spreadnorm/implicit.hpp"

#include <limits>
#include <optional>

namespace sn {

namespace {

constexpr std::int64_t kMaxPosition = 100000;
constexpr std::size_t kMaxTSupport = 14;
constexpr std::int64_t kSaturate = std::numeric_limits<std::int64_t>::max() / 4;

std::int64_t sat_mul(std::int64_t a, std::int64_t b) {
    if (a != 0 && b > kSaturate / a) return kSaturate;
    return a * b;
}

}  // namespace

AdmissibilitySeq::AdmissibilitySeq(std::vector<std::int64_t> values, Tail tail)
    : values_(std::move(values)), tail_(tail) {
    if (values_.empty()) fail("admissibility sequence needs at least one value");
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (values_[i] < 1) fail("admissibility values must be >= 1");
        if (i > 0 && values_[i] < values_[i - 1]) fail("admissibility values must be non-decreasing");
    }
    if (tail_ == Tail::Geometric && values_.size() >= 2 && values_.back() % values_[values_.size() - 2] != 0)
        fail("geometric tail needs an integer ratio between the last two values");
}

std::int64_t AdmissibilitySeq::at(std::int64_t i) const {
    if (i < 1) fail("admissibility index is 1-based");
    const auto sz = static_cast<std::int64_t>(values_.size());
    if (i <= sz) return values_[static_cast<std::size_t>(i - 1)];
    const std::int64_t last = values_.back();
    const std::int64_t steps = i - sz;
    switch (tail_) {
        case Tail::Constant:
            return last;
        case Tail::Linear: {
            std::int64_t d = sz >= 2 ? last - values_[values_.size() - 2] : 1;
            if (d == 0) return last;
            return std::min(kSaturate, last + sat_mul(d, steps));
        }
        case Tail::Geometric: {
            std::int64_t r = sz >= 2 ? last / values_[values_.size() - 2] : 2;
            if (r == 1) return last;
            std::int64_t v = last;
            for (std::int64_t s = 0; s < steps && v < kSaturate; ++s) v = sat_mul(v, r);
            return v;
        }
    }
    return last;
}

Rational XSpaceSpec::theta(std::int64_t i) const { return pow(theta_ratio, static_cast<unsigned long>(i)); }

Rational XSpaceSpec::theta_sum(std::int64_t first, std::int64_t last) const {
    if (last < first) return 0;
    const Rational& r = theta_ratio;
    return pow(r, static_cast<unsigned long>(first)) * (1 - pow(r, static_cast<unsigned long>(last - first + 1))) /
           (1 - r);
}

void XSpaceSpec::validate() const {
    if (sgn(theta_ratio) <= 0 || theta_ratio >= Rational(1, 2))
        fail("theta ratio must lie in (0, 1/2) so that the level weights sum below 1");
}

namespace {

struct Support {
    std::vector<std::int64_t> pos;
    std::vector<Rational> val;

    explicit Support(const Vec& x) {
        for (const auto& [i, v] : x.entries()) {
            if (i < 1) fail("vector indices must be positive");
            pos.push_back(i);
            val.push_back(abs(v));
        }
    }
    std::size_t size() const { return pos.size(); }
    std::size_t argmax(std::size_t a, std::size_t b) const {
        std::size_t best = a;
        for (std::size_t j = a + 1; j <= b; ++j)
            if (val[j] > val[best]) best = j;
        return best;
    }
};

// Interval DP for the space X: N[a][b] is the norm of x restricted to support points a..b.
class XEngine {
public:
    XEngine(const XSpaceSpec& spec, const Vec& x) : spec_(spec), s_(x), m_(s_.size()) {
        spec.validate();
        if (m_ > 0 && s_.pos.back() > kMaxPosition) cap_exceeded("support index beyond the level cap");
        N_.assign(m_, std::vector<Rational>(m_));
        W_.assign(m_, std::vector<XWitnessPtr>(m_));
        for (std::size_t len = 1; len <= m_; ++len)
            for (std::size_t a = 0; a + len <= m_; ++a) solve(a, a + len - 1);
    }

    const Rational& norm(std::size_t a, std::size_t b) const { return N_[a][b]; }
    const XWitnessPtr& witness(std::size_t a, std::size_t b) const { return W_[a][b]; }

    // best[t]: best split of lo..hi into exactly t blocks (t >= 1), with back-pointers
    struct SplitTable {
        std::size_t lo = 0, hi = 0;
        std::vector<std::vector<std::optional<Rational>>> f;  // f[t][j]
        std::vector<std::vector<std::size_t>> start;          // start of the last block
    };

    SplitTable splits(std::size_t lo, std::size_t hi) const {
        const std::size_t len = hi - lo + 1;
        SplitTable T;
        T.lo = lo;
        T.hi = hi;
        T.f.assign(len + 1, std::vector<std::optional<Rational>>(len));
        T.start.assign(len + 1, std::vector<std::size_t>(len, 0));
        for (std::size_t j = 0; j < len; ++j) T.f[1][j] = N_[lo][lo + j];
        for (std::size_t t = 2; t <= len; ++t)
            for (std::size_t j = t - 1; j < len; ++j)
                for (std::size_t s = t - 1; s <= j; ++s) {
                    if (!T.f[t - 1][s - 1]) continue;
                    Rational v = *T.f[t - 1][s - 1] + N_[lo + s][lo + j];
                    if (!T.f[t][j] || v > *T.f[t][j]) {
                        T.f[t][j] = v;
                        T.start[t][j] = s;
                    }
                }
        return T;
    }

    std::vector<XBlock> blocks_of(const SplitTable& T, std::size_t t) const {
        std::vector<XBlock> out(t);
        std::size_t j = T.hi - T.lo;
        for (std::size_t u = t; u >= 1; --u) {
            std::size_t s = u == 1 ? 0 : T.start[u][j];
            out[u - 1] = block(T.lo + s, T.lo + j);
            if (s == 0) break;
            j = s - 1;
        }
        return out;
    }

    // max over t in [tmin, c] of f[t][last]
    static std::optional<std::pair<Rational, std::size_t>> best_upto(const SplitTable& T, std::size_t tmin,
                                                                     std::size_t c) {
        std::optional<std::pair<Rational, std::size_t>> r;
        const std::size_t last = T.hi - T.lo;
        for (std::size_t t = tmin; t <= c && t < T.f.size(); ++t) {
            const auto& v = T.f[t][last];
            if (v && (!r || *v > r->first)) r = std::make_pair(*v, t);
        }
        return r;
    }

    XBlock block(std::size_t a, std::size_t b) const {
        // the interval runs up to the point before the next support point
        return XBlock{s_.pos[a], s_.pos[b], W_[a][b]};
    }

private:
    struct Group {
        std::int64_t first, last;
        std::size_t cap;
        Rational tsum;
        std::optional<std::pair<Rational, std::size_t>> split;  // best non-self family
    };

    std::vector<Group> groups_for(std::size_t ap, std::size_t b, bool covering, const SplitTable& T) const {
        const std::int64_t k = s_.pos[ap];
        const auto len = static_cast<std::int64_t>(b - ap + 1);
        std::vector<Group> gs;
        std::int64_t i = 1;
        while (i <= k) {
            const std::int64_t c = std::min(spec_.n.at(i), len);
            std::int64_t j = i;
            if (c == len)
                j = k;
            else
                while (j + 1 <= k && std::min(spec_.n.at(j + 1), len) == c) ++j;
            Group g{i, j, static_cast<std::size_t>(c), spec_.theta_sum(i, j), {}};
            g.split = best_upto(T, covering ? 2 : 1, g.cap);
            gs.push_back(std::move(g));
            i = j + 1;
        }
        return gs;
    }

    // value of a configuration where `self` groups use the whole vector
    static Rational evaluate(const std::vector<Group>& gs, const std::vector<bool>& self) {
        Rational a = 0, b = 0;
        for (std::size_t g = 0; g < gs.size(); ++g) {
            if (self[g])
                a += gs[g].tsum;
            else if (gs[g].split)
                b += gs[g].tsum * gs[g].split->first;
        }
        return b / (1 - a);
    }

    XWitnessPtr make_witness(std::size_t ap, const SplitTable& T, const std::vector<Group>& gs,
                             const std::vector<bool>& self) const {
        auto w = std::make_shared<XWitness>();
        w->leaf = false;
        w->k = s_.pos[ap];
        for (std::size_t g = 0; g < gs.size(); ++g) {
            XLevelGroup lg;
            lg.first = gs[g].first;
            lg.last = gs[g].last;
            lg.self = self[g];
            if (!self[g] && gs[g].split) lg.blocks = blocks_of(T, gs[g].split->second);
            w->groups.push_back(std::move(lg));
        }
        return w;
    }

    void solve(std::size_t a, std::size_t b) {
        std::size_t am = s_.argmax(a, b);
        Rational best = s_.val[am];
        auto leaf = std::make_shared<XWitness>();
        leaf->leaf_index = s_.pos[am];
        XWitnessPtr best_w = leaf;
        if (a == b) {
            N_[a][b] = best;
            W_[a][b] = best_w;
            return;
        }
        std::optional<SplitTable> coverT;
        std::vector<Group> coverG;
        for (std::size_t ap = a; ap <= b; ++ap) {
            const bool covering = ap == a;
            SplitTable T = splits(ap, b);
            auto gs = groups_for(ap, b, covering, T);
            std::vector<bool> self(gs.size(), false);
            for (std::size_t g = 0; g < gs.size(); ++g) self[g] = covering && !gs[g].split;
            Rational v = evaluate(gs, self);
            if (v > best) {
                best = v;
                best_w = make_witness(ap, T, gs, self);
            }
            if (covering) {
                coverT = std::move(T);
                coverG = std::move(gs);
            }
        }
        // a level may prefer the whole vector itself when its best split falls below the norm
        for (;;) {
            std::vector<bool> self(coverG.size(), false);
            bool any_optional = false;
            for (std::size_t g = 0; g < coverG.size(); ++g) {
                self[g] = !coverG[g].split || coverG[g].split->first < best;
                any_optional = any_optional || (coverG[g].split && self[g]);
            }
            if (!any_optional) break;
            Rational v = evaluate(coverG, self);
            if (v <= best) break;
            best = v;
            best_w = make_witness(a, *coverT, coverG, self);
        }
        N_[a][b] = best;
        W_[a][b] = best_w;
    }

    const XSpaceSpec& spec_;
    Support s_;
    std::size_t m_;
    std::vector<std::vector<Rational>> N_;
    std::vector<std::vector<XWitnessPtr>> W_;
};

}  // namespace

XNormResult x_norm(const XSpaceSpec& spec, const Vec& x) {
    if (x.empty()) {
        spec.validate();
        return {0, std::make_shared<XWitness>()};
    }
    XEngine e(spec, x);
    const std::size_t m = x.size();
    return {e.norm(0, m - 1), e.witness(0, m - 1)};
}

SeminormResult x_seminorm(const XSpaceSpec& spec, const Vec& x, std::int64_t i) {
    if (i < 1) fail("seminorm level must be >= 1");
    if (x.empty()) {
        spec.validate();
        return {0, {}};
    }
    XEngine e(spec, x);
    const std::size_t m = x.size();
    auto T = e.splits(0, m - 1);
    const auto c = static_cast<std::size_t>(std::min<std::int64_t>(spec.n.at(i), static_cast<std::int64_t>(m)));
    auto best = XEngine::best_upto(T, 1, c);
    return {best->first, e.blocks_of(T, best->second)};
}

namespace {

Rational block_sum(const XSpaceSpec& spec, const Vec& x, std::int64_t k, const std::vector<XBlock>& blocks) {
    Rational s = 0;
    std::int64_t prev = k - 1;
    for (const auto& bl : blocks) {
        if (bl.lo > bl.hi) fail("witness block with lo > hi");
        if (bl.lo <= prev) fail("witness blocks are not successive or start before k");
        prev = bl.hi;
        if (!bl.sub) fail("witness block without a sub-witness");
        s += recheck(spec, restrict_interval(x, bl.lo, bl.hi), *bl.sub);
    }
    return s;
}

}  // namespace

Rational recheck(const XSpaceSpec& spec, const Vec& x, const XWitness& w) {
    if (w.leaf) return abs(x.get(w.leaf_index));
    if (w.k < 1) fail("witness k must be >= 1");
    Rational a = 0, b = 0;
    std::int64_t next = 1;
    for (const auto& g : w.groups) {
        if (g.first != next || g.last < g.first) fail("witness level groups must tile 1..k");
        next = g.last + 1;
        if (g.self) {
            if (!x.empty() && x.entries().begin()->first < w.k) fail("self block requires supp x within [k, inf)");
            a += spec.theta_sum(g.first, g.last);
            continue;
        }
        if (static_cast<std::int64_t>(g.blocks.size()) > spec.n.at(g.first)) fail("witness uses too many blocks");
        b += spec.theta_sum(g.first, g.last) * block_sum(spec, x, w.k, g.blocks);
    }
    if (next != w.k + 1) fail("witness level groups must tile 1..k");
    if (a >= 1) fail("self weights sum to at least 1");
    return b / (1 - a);
}

Rational recheck_seminorm(const XSpaceSpec& spec, const Vec& x, std::int64_t i, const std::vector<XBlock>& blocks) {
    if (static_cast<std::int64_t>(blocks.size()) > spec.n.at(i)) fail("seminorm witness uses too many blocks");
    return block_sum(spec, x, 1, blocks);
}

namespace {

class TEngine {
public:
    TEngine(const TSpec& spec, const Vec& x) : spec_(spec), s_(x), m_(s_.size()) {
        if (m_ > kMaxTSupport) cap_exceeded("support too large for the T(d_w1) evaluator");
        N_.assign(m_, std::vector<Rational>(m_));
        W_.assign(m_, std::vector<TWitnessPtr>(m_));
        for (std::size_t len = 1; len <= m_; ++len)
            for (std::size_t a = 0; a + len <= m_; ++a) solve(a, a + len - 1);
    }
    const Rational& norm(std::size_t a, std::size_t b) const { return N_[a][b]; }
    const TWitnessPtr& witness(std::size_t a, std::size_t b) const { return W_[a][b]; }

private:
    Rational pair_up(std::vector<Rational> vals) const {
        if (spec_.pairing == BlockPairing::Sorted)
            std::sort(vals.begin(), vals.end(), [](const Rational& p, const Rational& q) { return p > q; });
        Rational s = 0;
        for (std::size_t i = 0; i < vals.size(); ++i) s += spec_.w.at(i + 1) * vals[i];
        return s;
    }

    void solve(std::size_t a, std::size_t b) {
        std::size_t am = s_.argmax(a, b);
        Rational best = s_.val[am];
        auto leaf = std::make_shared<TWitness>();
        leaf->leaf_index = s_.pos[am];
        TWitnessPtr best_w = leaf;
        for (std::size_t ap = a; ap <= b && a != b; ++ap) {
            const std::size_t len = b - ap + 1;
            const auto maxc = static_cast<std::size_t>(std::min<std::int64_t>(s_.pos[ap], static_cast<std::int64_t>(len)));
            // bit g set: cut after support point ap + g
            for (std::uint32_t mask = 0; mask < (1u << (len - 1)); ++mask) {
                const std::size_t c = static_cast<std::size_t>(__builtin_popcount(mask)) + 1;
                if (c > maxc || (c == 1 && ap == a)) continue;
                std::vector<Rational> vals;
                std::vector<std::pair<std::size_t, std::size_t>> bl;
                std::size_t st = ap;
                for (std::size_t g = 0; g + 1 < len; ++g)
                    if (mask >> g & 1u) {
                        bl.emplace_back(st, ap + g);
                        st = ap + g + 1;
                    }
                bl.emplace_back(st, b);
                for (auto [u, v] : bl) vals.push_back(N_[u][v]);
                Rational v = pair_up(std::move(vals));
                if (v > best) {
                    best = v;
                    auto w = std::make_shared<TWitness>();
                    w->leaf = false;
                    for (auto [u, vv] : bl) w->blocks.push_back({s_.pos[u], s_.pos[vv], W_[u][vv]});
                    best_w = w;
                }
            }
        }
        N_[a][b] = best;
        W_[a][b] = best_w;
    }

    const TSpec& spec_;
    Support s_;
    std::size_t m_;
    std::vector<std::vector<Rational>> N_;
    std::vector<std::vector<TWitnessPtr>> W_;
};

}  // namespace

TNormResult t_dw1_norm(const TSpec& spec, const Vec& x) {
    if (x.empty()) return {0, std::make_shared<TWitness>()};
    TEngine e(spec, x);
    return {e.norm(0, x.size() - 1), e.witness(0, x.size() - 1)};
}

Rational recheck(const TSpec& spec, const Vec& x, const TWitness& w) {
    if (w.leaf) return abs(x.get(w.leaf_index));
    if (w.blocks.empty()) fail("T witness without blocks");
    if (static_cast<std::int64_t>(w.blocks.size()) > w.blocks.front().lo) fail("T witness family is not admissible");
    std::vector<Rational> vals;
    std::int64_t prev = 0;
    for (const auto& bl : w.blocks) {
        if (bl.lo > bl.hi || bl.lo <= prev) fail("T witness blocks are not successive");
        prev = bl.hi;
        if (!bl.sub) fail("T witness block without a sub-witness");
        vals.push_back(recheck(spec, restrict_interval(x, bl.lo, bl.hi), *bl.sub));
    }
    if (spec.pairing == BlockPairing::Sorted)
        std::sort(vals.begin(), vals.end(), [](const Rational& p, const Rational& q) { return p > q; });
    Rational s = 0;
    for (std::size_t i = 0; i < vals.size(); ++i) s += spec.w.at(i + 1) * vals[i];
    return s;
}

namespace {

// Evaluation over arbitrary successive subsets of the support, memoized by subset mask.
class BruteForce {
public:
    BruteForce(const BruteForceSpec& spec, const Vec& x) : spec_(spec), s_(x), m_(s_.size()) {
        const std::uint32_t full = (1u << m_) - 1;
        norm_.assign(full + 1, 0);
        std::vector<std::uint32_t> order;
        for (std::uint32_t M = 1; M <= full; ++M) order.push_back(M);
        std::stable_sort(order.begin(), order.end(),
                         [](std::uint32_t p, std::uint32_t q) { return __builtin_popcount(p) < __builtin_popcount(q); });
        fam_.assign(full + 1, std::vector<std::optional<Rational>>(m_ + 1));
        for (std::uint32_t M : order) norm_[M] = spec_.mode == OracleMode::SpaceX ? eval_x(M) : eval_t(M);
    }

    Rational value() const { return m_ == 0 ? Rational(0) : norm_[(1u << m_) - 1]; }

private:
    Rational leaf(std::uint32_t M) const {
        Rational l = 0;
        for (std::size_t j = 0; j < m_; ++j)
            if ((M >> j & 1u) && s_.val[j] > l) l = s_.val[j];
        return l;
    }

    static int top(std::uint32_t M) { return 31 - __builtin_clz(M); }

    // elements of R strictly after support point j
    std::uint32_t after(std::uint32_t R, int j) const { return j + 1 >= 32 ? 0 : R & ~((2u << j) - 1); }

    // best sum of norms over at most c successive nonempty subsets of R
    Rational family(std::uint32_t R, std::size_t c) {
        if (R == 0 || c == 0) return 0;
        if (c > m_) c = m_;
        auto& slot = fam_[R][c];
        if (slot) return *slot;
        Rational best = 0;
        for (std::uint32_t E = R; E; E = (E - 1) & R) {
            Rational v = norm_[E] + family(after(R, top(E)), c - 1);
            if (v > best) best = v;
        }
        slot = best;
        return best;
    }

    Rational eval_x(std::uint32_t M) {
        const XSpaceSpec& xs = spec_.x;
        Rational best = leaf(M);
        const std::int64_t maxpos = s_.pos[static_cast<std::size_t>(top(M))];
        for (std::int64_t k = 1; k <= maxpos; ++k) {
            std::uint32_t R = 0;
            for (std::size_t j = 0; j < m_; ++j)
                if ((M >> j & 1u) && s_.pos[j] >= k) R |= 1u << j;
            if (R == 0) continue;
            std::vector<Rational> lvl(static_cast<std::size_t>(k));
            for (std::int64_t i = 1; i <= k; ++i) {
                auto c = static_cast<std::size_t>(std::min<std::int64_t>(xs.n.at(i), static_cast<std::int64_t>(m_)));
                if (R != M) {
                    lvl[static_cast<std::size_t>(i - 1)] = family(R, c);
                    continue;
                }
                // every family except the single set M itself
                Rational b = 0;
                for (std::uint32_t E = R; E; E = (E - 1) & R) {
                    if (E == M) continue;
                    Rational v = norm_[E] + family(after(R, top(E)), c - 1);
                    if (v > b) b = v;
                }
                lvl[static_cast<std::size_t>(i - 1)] = b;
            }
            if (R != M) {
                Rational v = 0;
                for (std::int64_t i = 1; i <= k; ++i) v += xs.theta(i) * lvl[static_cast<std::size_t>(i - 1)];
                if (v > best) best = v;
                continue;
            }
            // levels in J take the whole vector: N >= a N + b, so N >= b / (1 - a)
            for (std::uint64_t J = 0; J < (1ull << k); ++J) {
                Rational a = 0, b = 0;
                for (std::int64_t i = 1; i <= k; ++i) {
                    if (J >> (i - 1) & 1u)
                        a += xs.theta(i);
                    else
                        b += xs.theta(i) * lvl[static_cast<std::size_t>(i - 1)];
                }
                Rational v = b / (1 - a);
                if (v > best) best = v;
            }
        }
        return best;
    }

    void t_families(std::uint32_t M, std::uint32_t R, std::size_t cap, std::vector<Rational>& vals, Rational& best) {
        if (!vals.empty()) {
            std::vector<Rational> v = vals;
            if (spec_.t.pairing == BlockPairing::Sorted)
                std::sort(v.begin(), v.end(), [](const Rational& p, const Rational& q) { return p > q; });
            Rational s = 0;
            for (std::size_t i = 0; i < v.size(); ++i) s += spec_.t.w.at(i + 1) * v[i];
            if (s > best) best = s;
        }
        if (vals.size() >= cap) return;
        for (std::uint32_t E = R; E; E = (E - 1) & R) {
            if (vals.empty()) {
                if (E == M) continue;
                // n <= min E_1 bounds the family size
                int low = __builtin_ctz(E);
                cap = static_cast<std::size_t>(std::min<std::int64_t>(s_.pos[static_cast<std::size_t>(low)], 64));
            }
            vals.push_back(norm_[E]);
            t_families(M, after(R, top(E)), cap, vals, best);
            vals.pop_back();
        }
    }

    Rational eval_t(std::uint32_t M) {
        Rational best = leaf(M);
        std::vector<Rational> vals;
        t_families(M, M, 64, vals, best);
        return best;
    }

    const BruteForceSpec& spec_;
    Support s_;
    std::size_t m_;
    std::vector<Rational> norm_;
    std::vector<std::vector<std::optional<Rational>>> fam_;
};

}  // namespace

Rational brute_force_norm(const BruteForceSpec& spec, const Vec& x, std::size_t cap) {
    if (x.size() > cap) cap_exceeded("support size " + std::to_string(x.size()) + " exceeds oracle cap " +
                                     std::to_string(cap));
    if (x.size() > 20) cap_exceeded("oracle cap above 20 is not supported");
    if (spec.mode == OracleMode::SpaceX) spec.x.validate();
    BruteForce bf(spec, x);
    return bf.value();
}

std::vector<Eq1Row> eq1_report(const std::vector<Integer>& n, const Rational& p, std::int64_t K) {
    if (p <= 1) fail("eq1 report requires p > 1");
    if (K < 1) fail("eq1 report requires K >= 1");
    if (static_cast<std::int64_t>(n.size()) < K) fail("sequence shorter than K");
    const unsigned long a = p.get_num().get_ui(), b = p.get_den().get_ui();
    std::vector<Eq1Row> rows;
    Rational S = 0;
    Integer D = 0;
    for (std::int64_t k = 1; k <= K; ++k) {
        const Integer& nk = n[static_cast<std::size_t>(k - 1)];
        if (nk < 1) fail("sequence entries must be positive");
        S += Rational(nk) / pow(Rational(3), static_cast<unsigned long>(k));
        D += nk;
        // D^(-1/p) = (D^-b)^(1/a)
        Enclosure root = root_enclosure(1 / pow(Rational(D), b), a, default_enclosure_width());
        rows.push_back({k, p, root.scaled(S)});
    }
    return rows;
}

Eq1Recipe eq1_recipe(std::int64_t K) {
    if (K < 1) fail("recipe requires K >= 1");
    Eq1Recipe out;
    Rational S = 0;
    Integer D = 0;
    Integer prev = 0;
    for (std::int64_t k = 1; k <= K; ++k) {
        const Rational third_k = 1 / pow(Rational(3), static_cast<unsigned long>(k));
        const auto a = static_cast<unsigned long>(k + 1), b = static_cast<unsigned long>(k);
        // S^a > k^a D^b  <=>  S / D^(b/a) > k
        auto ok = [&](const Integer& nk) {
            Rational s = S + Rational(nk) * third_k;
            Rational d = Rational(D + nk);
            return pow(s, a) > pow(Rational(k), a) * pow(d, b);
        };
        Integer lo = prev, hi = prev + 1;
        while (!ok(hi)) {
            lo = hi;
            hi *= 2;
        }
        while (hi - lo > 1) {
            Integer mid = (lo + hi) / 2;
            if (mid > prev && ok(mid))
                hi = mid;
            else
                lo = mid;
        }
        out.n.push_back(hi);
        S += Rational(hi) * third_k;
        D += hi;
        prev = hi;
        Rational p(k + 1, k);
        Enclosure root = root_enclosure(1 / pow(Rational(D), b), a, default_enclosure_width());
        out.rows.push_back({k, p, root.scaled(S)});
    }
    return out;
}

}  // namespace sn
