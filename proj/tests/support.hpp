#pragma once

#include "spreadnorm/operators.hpp"

#include <random>
#include <set>

namespace sntest {

using namespace sn;

// Seeded generators for property tests.
class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    std::int64_t integer(std::int64_t lo, std::int64_t hi) {
        return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng_);
    }
    bool coin() { return integer(0, 1) == 1; }

    Rational rational(int num = 9, int den = 6) {
        Rational q(static_cast<long>(integer(-num, num)), static_cast<unsigned long>(integer(1, den)));
        q.canonicalize();
        return q;
    }
    Rational nonzero(int num = 9, int den = 6) {
        for (;;) {
            Rational q = rational(num, den);
            if (sgn(q) != 0) return q;
        }
    }

    // up to `count` nonzero entries at positions in [lo, hi]
    Vec vec(std::int64_t lo, std::int64_t hi, std::size_t count) {
        Vec x;
        for (std::size_t c = 0; c < count; ++c) x.set(integer(lo, hi), nonzero());
        return x;
    }

    TreeVec tree_vec(int depth, std::size_t count) {
        TreeVec x;
        for (std::size_t c = 0; c < count; ++c) {
            const int l = static_cast<int>(integer(0, depth));
            x.set(TreeNode::make(l, static_cast<std::uint64_t>(integer(0, (std::int64_t{1} << l) - 1))), nonzero());
        }
        return x;
    }

    DoubleVector double_vec(std::int64_t levels, std::int64_t positions, std::size_t count) {
        DoubleVector A;
        for (std::size_t c = 0; c < count; ++c) A.set({integer(0, levels - 1), integer(1, positions)}, nonzero());
        return A;
    }

    std::mt19937_64& engine() { return rng_; }

private:
    std::mt19937_64 rng_;
};

inline XSpaceSpec spec_linear() { return XSpaceSpec{AdmissibilitySeq({1, 2}, AdmissibilitySeq::Tail::Linear)}; }
inline XSpaceSpec spec_doubling() { return XSpaceSpec{AdmissibilitySeq({4, 8}, AdmissibilitySeq::Tail::Geometric)}; }

inline Rational harmonic(std::int64_t n) {
    Rational h = 0;
    for (std::int64_t i = 1; i <= n; ++i) h += Rational(1, i);
    return h;
}

// sum of |a_i| over the best subset of size <= M, by listing all subsets
inline Rational ell1_family_bruteforce(std::int64_t M, const Vec& a) {
    std::vector<Rational> v;
    for (const auto& [i, x] : a.entries()) v.push_back(abs(x));
    Rational best = 0;
    for (std::uint32_t S = 0; S < (1u << v.size()); ++S) {
        if (__builtin_popcount(S) > M) continue;
        Rational s = 0;
        for (std::size_t j = 0; j < v.size(); ++j)
            if (S >> j & 1u) s += v[j];
        if (s > best) best = s;
    }
    return best;
}

inline Rational layer_bruteforce(const LayeredFamily& fam, int level, const Vec& a) {
    const Layer& L = fam.layer(level);
    Rational best = 0;
    for (std::size_t i = 0; i < L.M.size(); ++i) {
        Rational v = L.delta[i] * ell1_family_bruteforce(L.M[i], a);
        if (v > best) best = v;
    }
    return best;
}

// all admissible (n; k_1 < ... < k_n) with n <= k_1 and k_n <= top
inline Rational schreier_bruteforce(const WeightSeq& w, const Vec& x, SchreierReading reading) {
    std::vector<Rational> xs = decreasing_rearrangement(x);
    const std::int64_t top = reading == SchreierReading::Rearranged
                                 ? static_cast<std::int64_t>(xs.size())
                                 : (x.empty() ? 0 : x.entries().rbegin()->first);
    auto value_at = [&](std::int64_t k) -> Rational {
        if (reading == SchreierReading::Rearranged) return k <= static_cast<std::int64_t>(xs.size()) ? xs[k - 1] : 0;
        return abs(x.get(k));
    };
    Rational best = 0;
    std::vector<std::int64_t> ks;
    std::function<void(std::int64_t, std::int64_t)> rec = [&](std::int64_t n, std::int64_t from) {
        if (static_cast<std::int64_t>(ks.size()) == n) {
            Rational s = 0;
            for (std::size_t i = 0; i < ks.size(); ++i) s += w.at(i + 1) * value_at(ks[i]);
            if (s > best) best = s;
            return;
        }
        for (std::int64_t k = from; k <= top; ++k) {
            ks.push_back(k);
            rec(n, k + 1);
            ks.pop_back();
        }
    };
    for (std::int64_t n = 1; n <= top; ++n) rec(n, n);
    return best;
}

// Sum of ||E_j x|| over successive sets, at most c of them, norms from the brute-force oracle.
inline Rational seminorm_bruteforce(const XSpaceSpec& spec, const Vec& x, std::int64_t i) {
    if (x.empty()) return 0;
    BruteForceSpec bs{OracleMode::SpaceX, spec, {}};
    const auto sup = x.support();
    const std::size_t m = sup.size();
    const auto c = static_cast<std::size_t>(std::min<std::int64_t>(spec.n.at(i), static_cast<std::int64_t>(m)));
    std::map<std::uint32_t, Rational> norms;
    auto norm = [&](std::uint32_t E) {
        auto it = norms.find(E);
        if (it != norms.end()) return it->second;
        Vec y;
        for (std::size_t j = 0; j < m; ++j)
            if (E >> j & 1u) y.set(sup[j], x.get(sup[j]));
        return norms[E] = brute_force_norm(bs, y);
    };
    Rational best = 0;
    std::function<void(std::uint32_t, std::size_t, Rational)> rec = [&](std::uint32_t R, std::size_t left, Rational acc) {
        if (acc > best) best = acc;
        if (R == 0 || left == 0) return;
        for (std::uint32_t E = R; E; E = (E - 1) & R) {
            const int top = 31 - __builtin_clz(E);
            rec(R & ~((2u << top) - 1), left - 1, acc + norm(E));
        }
    };
    rec((1u << m) - 1, c, 0);
    return best;
}

// Exhaustive chains of mutually disjoint bushes: s_j over every node of depth <= `depth`,
// t_j over supp x, seminorms by continuation search.
class YChainOracle {
public:
    YChainOracle(const TreeVec& x, int depth) : x_(x) {
        for (const auto& [t, v] : x.entries()) supp_.push_back(t);
        for (int l = 0; l <= depth; ++l)
            for (std::uint64_t i = 0; i < (std::uint64_t{1} << l); ++i) nodes_.push_back(TreeNode{l, i});
        if (depth > 5) fail("chain oracle handles depth <= 5");
        Bush b;
        grow(b);
    }

    Rational value() { return std::max(x_.max_abs(), chains(0, 0)); }

    std::size_t bushes() const { return bushes_.size(); }

private:
    static std::uint64_t bit(const TreeNode& u) { return std::uint64_t{1} << ((std::uint64_t{1} << u.level) + u.index - 1); }

    void grow(Bush& b) {
        for (const auto& s : nodes_) {
            if (!b.pairs.empty() && !precedes(b.pairs.back().first, s)) continue;
            for (const auto& t : supp_) {
                if (!precedes_eq(s, t)) continue;
                b.pairs.emplace_back(s, t);
                if (is_bush(b).ok) {
                    bushes_.push_back(b);
                    std::uint64_t m = 0;
                    for (const auto& u : bush_nodes(b)) m |= bit(u);
                    mask_.push_back(m);
                    grow(b);
                }
                b.pairs.pop_back();
            }
        }
    }

    Rational seminorm(std::size_t b, std::size_t shift) {
        auto key = std::make_pair(b, shift);
        if (auto it = semi_.find(key); it != semi_.end()) return it->second;
        const Bush& B = bushes_[b];
        const std::int64_t horizon = B.pairs.back().first.level + static_cast<std::int64_t>(shift + B.size()) + 2;
        return semi_[key] = bush_seminorm_search(x_, shift, B, horizon).value;
    }

    // best continuation of a chain that already occupies `used`
    Rational chains(std::uint64_t used, std::size_t shift) {
        auto key = std::make_pair(used, shift);
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        Rational best = 0;
        for (std::size_t b = 0; b < bushes_.size(); ++b) {
            if (mask_[b] & used) continue;
            Rational v = seminorm(b, shift) + chains(used | mask_[b], shift + bushes_[b].size());
            if (v > best) best = v;
        }
        return memo_[key] = best;
    }

    const TreeVec& x_;
    std::vector<TreeNode> supp_, nodes_;
    std::vector<Bush> bushes_;
    std::vector<std::uint64_t> mask_;
    std::map<std::pair<std::uint64_t, std::size_t>, Rational> memo_;
    std::map<std::pair<std::size_t, std::size_t>, Rational> semi_;
};

// Disjointly placed branch nodes u_{first}, ..., u_{first+m-1} of the branch of b.
inline TreeVec branch_vector(const BranchCode& b, int first, int m) {
    auto path = code_to_branch(b, first + m - 1);
    TreeVec x;
    for (int l = first; l < first + m; ++l) x.set(path[static_cast<std::size_t>(l)], 1);
    return x;
}

}  // namespace sntest
