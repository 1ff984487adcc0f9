#include "spreadnorm/tree.hpp"

#include <unordered_map>

namespace sn {

TreeNode TreeNode::make(int level, std::uint64_t index) {
    if (level < 0 || level > kMaxTreeLevel) fail("tree level out of range");
    if (index >= (std::uint64_t{1} << level)) fail("tree index out of range at level " + std::to_string(level));
    return TreeNode{level, index};
}

TreeNode TreeNode::parent() const {
    if (level == 0) fail("the root has no parent");
    return TreeNode{level - 1, index >> 1};
}

bool precedes(const TreeNode& a, const TreeNode& b) {
    return a.level < b.level && (b.index >> (b.level - a.level)) == a.index;
}

TreeNode meet(const TreeNode& a, const TreeNode& b) {
    TreeNode u = a, v = b;
    while (u.level > v.level) u = u.parent();
    while (v.level > u.level) v = v.parent();
    while (u != v) {
        u = u.parent();
        v = v.parent();
    }
    return u;
}

std::vector<TreeNode> segment(const TreeNode& a, const TreeNode& b) {
    std::vector<TreeNode> out;
    if (!precedes_eq(a, b)) return out;
    for (int l = a.level; l <= b.level; ++l) out.push_back(TreeNode{l, b.index >> (b.level - l)});
    return out;
}

std::string to_string(const TreeNode& t) { return "(" + std::to_string(t.level) + "," + std::to_string(t.index) + ")"; }

namespace {

std::vector<std::int64_t> block_values(const std::vector<std::int64_t>& entries) {
    std::vector<std::int64_t> v;
    std::int64_t K = 0;
    for (auto b : entries) {
        if (b < 1) fail("branch code entries must be positive");
        K = std::max(b, K + 1);
        v.push_back(K);
    }
    return v;
}

}  // namespace

std::size_t covered_length(const BranchCode& b) {
    std::size_t s = 0;
    for (auto v : block_values(b.entries)) s += static_cast<std::size_t>(v);
    return s;
}

std::vector<Rational> branch_weights(const BranchCode& b, std::size_t m) {
    std::vector<Rational> w;
    w.reserve(m);
    std::int64_t K = 0;
    for (auto v : block_values(b.entries)) {
        for (std::int64_t c = 0; c < v && w.size() < m; ++c) w.emplace_back(1, v);
        K = v;
        if (w.size() == m) return w;
    }
    if (!b.terminated && w.size() < m)
        fail("weights beyond position " + std::to_string(w.size()) + " depend on unspecified code entries");
    for (std::int64_t j = 1; w.size() < m; ++j) w.emplace_back(1, K + j);
    return w;
}

std::vector<TreeNode> code_to_branch(const BranchCode& b, int depth) {
    if (depth < 0 || depth > kMaxTreeLevel) fail("branch depth out of range");
    std::vector<TreeNode> path{TreeNode{}};
    std::int64_t next_one = b.entries.empty() ? -1 : b.entries[0];
    std::size_t e = 0;
    for (int p = 1; p <= depth; ++p) {
        int bit = 0;
        if (p == next_one) {
            bit = 1;
            ++e;
            next_one = e < b.entries.size() ? next_one + b.entries[e] : -1;
        }
        path.push_back(path.back().child(bit));
    }
    return path;
}

BranchCode branch_to_code(const std::vector<TreeNode>& path) {
    if (path.empty() || path[0] != TreeNode{}) fail("branch path must start at the root");
    BranchCode b;
    b.terminated = false;
    std::int64_t last = 0;
    for (std::size_t p = 1; p < path.size(); ++p) {
        const TreeNode& u = path[p];
        if (u.level != static_cast<int>(p) || u.parent() != path[p - 1]) fail("malformed branch path");
        if (u.index & 1u) {
            b.entries.push_back(static_cast<std::int64_t>(p) - last);
            last = static_cast<std::int64_t>(p);
        }
    }
    return b;
}

std::pair<std::vector<std::int64_t>, int> code_prefix(const TreeNode& t) {
    std::vector<std::int64_t> entries;
    int last = 0;
    for (int p = 1; p <= t.level; ++p)
        if ((t.index >> (t.level - p)) & 1u) {
            entries.push_back(p - last);
            last = p;
        }
    return {entries, t.level - last};
}

bool branch_contains(const BranchCode& b, const TreeNode& t) { return code_to_branch(b, t.level).back() == t; }

BushCheck is_bush(const Bush& b) {
    auto bad = [](int which, std::string msg) { return BushCheck{false, which, std::move(msg)}; };
    const auto& P = b.pairs;
    if (P.empty()) return bad(1, "a bush needs at least one pair");
    for (std::size_t i = 0; i + 1 < P.size(); ++i)
        if (!precedes(P[i].first, P[i + 1].first))
            return bad(1, "s_" + std::to_string(i + 1) + " does not strictly precede s_" + std::to_string(i + 2));
    for (std::size_t i = 0; i < P.size(); ++i)
        if (!precedes_eq(P[i].first, P[i].second))
            return bad(2, "s_" + std::to_string(i + 1) + " is not above t_" + std::to_string(i + 1));
    std::vector<FiniteSet<TreeNode>> segs;
    for (const auto& [s, t] : P) segs.emplace_back(segment(s, t));
    for (std::size_t i = 0; i < segs.size(); ++i)
        for (std::size_t j = i + 1; j < segs.size(); ++j)
            if (!segs[i].intersect(segs[j]).empty())
                return bad(3, "segments " + std::to_string(i + 1) + " and " + std::to_string(j + 1) + " overlap");
    FiniteSet<TreeNode> stem(segment(P.front().first, P.back().first));
    for (std::size_t i = 0; i < P.size(); ++i) {
        if (P[i].first == P[i].second) continue;
        auto seg = segment(P[i].first, P[i].second);
        seg.erase(seg.begin());
        if (!FiniteSet<TreeNode>(seg).intersect(stem).empty())
            return bad(4, "segment " + std::to_string(i + 1) + " runs into the stem");
    }
    return {};
}

std::vector<TreeNode> bush_nodes(const Bush& b) {
    std::vector<TreeNode> all;
    if (b.pairs.empty()) return all;
    all = segment(b.pairs.front().first, b.pairs.back().first);
    for (const auto& [s, t] : b.pairs) {
        auto seg = segment(s, t);
        all.insert(all.end(), seg.begin(), seg.end());
    }
    return FiniteSet<TreeNode>(std::move(all)).items();
}

bool disjoint(const Bush& a, const Bush& b) {
    return FiniteSet<TreeNode>(bush_nodes(a)).intersect(FiniteSet<TreeNode>(bush_nodes(b))).empty();
}

Rational evaluate_bush(const TreeVec& x, std::size_t k, const Bush& S, const BranchCode& code) {
    if (S.pairs.empty()) fail("empty bush");
    if (!branch_contains(code, S.pairs.back().first)) fail("branch code does not pass through s_n");
    auto w = branch_weights(code, k + S.size());
    Rational s = 0;
    for (std::size_t j = 0; j < S.size(); ++j) s += w[k + j] * abs(x.get(S.pairs[j].second));
    return s;
}

BushSeminorm bush_seminorm(const TreeVec& x, std::size_t k, const Bush& S) {
    auto chk = is_bush(S);
    if (!chk.ok) fail("invalid bush: " + chk.message);
    const std::size_t need = k + S.size();
    auto [prefix, zeros] = code_prefix(S.pairs.back().first);
    BranchCode stop{prefix, true};
    BushSeminorm best{evaluate_bush(x, k, S, stop), stop};
    BranchCode open{prefix, false};
    if (covered_length(open) >= need) return best;
    // every other continuation is dominated by the smallest admissible next entry followed by 1s
    open.entries.push_back(zeros + 1);
    while (covered_length(open) < need) open.entries.push_back(1);
    Rational v = evaluate_bush(x, k, S, open);
    if (v > best.value) best = {v, open};
    return best;
}

BushSeminorm bush_seminorm_search(const TreeVec& x, std::size_t k, const Bush& S, std::int64_t horizon) {
    auto chk = is_bush(S);
    if (!chk.ok) fail("invalid bush: " + chk.message);
    const std::size_t need = k + S.size();
    auto [prefix, zeros] = code_prefix(S.pairs.back().first);
    std::optional<BushSeminorm> best;
    auto consider = [&](const BranchCode& c) {
        Rational v = evaluate_bush(x, k, S, c);
        if (!best || v > best->value) best = BushSeminorm{v, c};
    };
    BranchCode cur{prefix, false};
    std::function<void(bool)> rec = [&](bool first) {
        if (covered_length(cur) >= need) {
            consider(cur);
            return;
        }
        consider(BranchCode{cur.entries, true});
        for (std::int64_t c = first ? zeros + 1 : 1; c <= horizon; ++c) {
            cur.entries.push_back(c);
            rec(false);
            cur.entries.pop_back();
        }
    };
    rec(true);
    return *best;
}

Rational chain_value(const TreeVec& x, const std::vector<ChainLink>& chain, std::size_t shift) {
    Rational s = 0;
    for (const auto& link : chain) {
        s += bush_seminorm(x, shift, link.bush).value;
        shift += link.bush.size();
    }
    return s;
}

namespace {

struct Candidate {
    std::uint64_t mask = 0;
    Bush bush;
    std::vector<Rational> value;  // by shift
    std::vector<BranchCode> code;
};

class YEngine {
public:
    explicit YEngine(const TreeVec& x) : x_(x) {
        for (const auto& [t, v] : x.entries()) supp_.push_back(t);
        std::vector<TreeNode> cl;
        for (const auto& t : supp_)
            for (TreeNode u = t;; u = u.parent()) {
                cl.push_back(u);
                if (u.level == 0) break;
            }
        closure_ = FiniteSet<TreeNode>(cl).items();
        if (closure_.size() > kMaxClosure) cap_exceeded("tree closure larger than 64 nodes");
        for (std::size_t i = 0; i < closure_.size(); ++i) {
            std::uint64_t m = 0;
            for (std::size_t j = 0; j < closure_.size(); ++j)
                if (precedes_eq(closure_[j], closure_[i])) m |= std::uint64_t{1} << j;
            anc_.push_back(m);
        }
        std::vector<std::pair<TreeNode, TreeNode>> pairs;
        grow(pairs, 0, 0);
    }

    YResult run() {
        YResult r;
        r.value = x_.max_abs();
        for (const auto& [t, v] : x_.entries())
            if (abs(v) == r.value) {
                r.witness.leaf_node = t;
                break;
            }
        Rational chain = best(0, 0);
        if (chain > r.value) {
            r.value = chain;
            r.witness.leaf = false;
            std::uint64_t used = 0;
            std::size_t shift = 0;
            for (;;) {
                auto it = memo_.find(key(used, shift));
                if (it == memo_.end() || it->second.second < 0) break;
                const Candidate& c = cands_[static_cast<std::size_t>(it->second.second)];
                r.witness.chain.push_back({c.bush, c.code[shift]});
                used |= c.mask;
                shift += c.bush.size();
            }
        }
        return r;
    }

private:
    std::size_t idx(const TreeNode& u) const {
        return static_cast<std::size_t>(std::lower_bound(closure_.begin(), closure_.end(), u) - closure_.begin());
    }
    std::uint64_t seg_mask(const TreeNode& s, const TreeNode& t) const {
        std::uint64_t m = anc_[idx(t)];
        if (s.level > 0) m &= ~anc_[idx(s.parent())];
        return m;
    }

    bool valid(const std::vector<std::pair<TreeNode, TreeNode>>& P) const {
        const std::uint64_t stem = seg_mask(P.front().first, P.back().first);
        for (const auto& [s, t] : P)
            if (s != t && (seg_mask(s, t) & ~(std::uint64_t{1} << idx(s)) & stem)) return false;
        return true;
    }

    void grow(std::vector<std::pair<TreeNode, TreeNode>>& P, std::uint64_t used_t, std::uint64_t segs) {
        for (const auto& s : closure_) {
            if (!P.empty() && !precedes(P.back().first, s)) continue;
            for (std::size_t ti = 0; ti < supp_.size(); ++ti) {
                if (used_t >> ti & 1u) continue;
                const TreeNode& t = supp_[ti];
                if (!precedes_eq(s, t)) continue;
                const std::uint64_t sm = seg_mask(s, t);
                if (sm & segs) continue;
                P.emplace_back(s, t);
                if (valid(P)) {
                    record(P, segs | sm);
                    grow(P, used_t | (std::uint64_t{1} << ti), segs | sm);
                }
                P.pop_back();
            }
        }
    }

    void record(const std::vector<std::pair<TreeNode, TreeNode>>& P, std::uint64_t segs) {
        Candidate c;
        c.bush.pairs = P;
        c.mask = segs | seg_mask(P.front().first, P.back().first);
        for (std::size_t k = 0; k + P.size() <= supp_.size(); ++k) {
            auto r = bush_seminorm(x_, k, c.bush);
            c.value.push_back(r.value);
            c.code.push_back(r.code);
        }
        cands_.push_back(std::move(c));
    }

    static std::uint64_t key(std::uint64_t used, std::size_t shift) {
        return used * 131u + static_cast<std::uint64_t>(shift);
    }

    Rational best(std::uint64_t used, std::size_t shift) {
        auto k = key(used, shift);
        if (auto it = memo_.find(k); it != memo_.end()) return it->second.first;
        Rational b = 0;
        long arg = -1;
        for (std::size_t i = 0; i < cands_.size(); ++i) {
            const Candidate& c = cands_[i];
            if (c.mask & used) continue;
            if (shift >= c.value.size()) continue;
            Rational v = c.value[shift] + best(used | c.mask, shift + c.bush.size());
            if (v > b) {
                b = v;
                arg = static_cast<long>(i);
            }
        }
        memo_[k] = {b, arg};
        return b;
    }

    const TreeVec& x_;
    std::vector<TreeNode> supp_, closure_;
    std::vector<std::uint64_t> anc_;
    std::vector<Candidate> cands_;
    std::unordered_map<std::uint64_t, std::pair<Rational, long>> memo_;
};

}  // namespace

YResult y_norm(const TreeVec& x) {
    if (x.empty()) return {0, {}};
    YEngine e(x);
    return e.run();
}

Rational recheck(const TreeVec& x, const YWitness& w) {
    if (w.leaf) return abs(x.get(w.leaf_node));
    std::size_t shift = 0;
    Rational s = 0;
    for (std::size_t i = 0; i < w.chain.size(); ++i) {
        const auto& link = w.chain[i];
        auto chk = is_bush(link.bush);
        if (!chk.ok) fail("witness bush " + std::to_string(i + 1) + " invalid: " + chk.message);
        for (std::size_t j = 0; j < i; ++j)
            if (!disjoint(w.chain[j].bush, link.bush)) fail("witness bushes are not mutually disjoint");
        s += evaluate_bush(x, shift, link.bush, link.code);
        shift += link.bush.size();
    }
    return s;
}

ThresholdResult eq23_threshold(const BranchCode& b, std::size_t m) {
    if (m < 1) fail("threshold requires m >= 1");
    const auto target = branch_weights(b, m);
    auto dominated = [&](const BranchCode& beta) {
        auto w = branch_weights(beta, m);
        for (std::size_t j = 0; j < m; ++j)
            if (w[j] > target[j]) return false;
        return true;
    };
    for (std::size_t M = 0; M <= b.entries.size(); ++M) {
        BranchCode cur{std::vector<std::int64_t>(b.entries.begin(), b.entries.begin() + static_cast<long>(M)), false};
        bool ok = true;
        std::function<void()> rec = [&]() {
            if (!ok) return;
            if (covered_length(cur) >= m) {
                ok = dominated(cur);
                return;
            }
            if (!dominated(BranchCode{cur.entries, true})) {
                ok = false;
                return;
            }
            auto blocks = block_values(cur.entries);
            const std::int64_t K = blocks.empty() ? 0 : blocks.back();
            // entries up to K+1 give the same block; larger ones only lower the first m weights past K+m+1
            for (std::int64_t c = 1; c <= K + static_cast<std::int64_t>(m) + 1 && ok; ++c) {
                if (c <= K && c != 1) continue;
                cur.entries.push_back(c);
                rec();
                cur.entries.pop_back();
            }
        };
        rec();
        if (ok) return {M, false};
    }
    return {b.entries.size() + 1, true};
}

Eq22Result eq22_builder(const std::vector<Rational>& lambda, std::size_t K) {
    const std::size_t H = lambda.size();
    if (H == 0) fail("lambda horizon is empty");
    for (std::size_t i = 1; i < H; ++i)
        if (lambda[i] < lambda[i - 1]) fail("lambda must be non-decreasing");
    if (lambda.back() == lambda.front()) fail("lambda is constant, it does not tend to infinity");
    std::vector<Rational> suffix_min(H);
    suffix_min[H - 1] = lambda[H - 1];
    for (std::size_t i = H - 1; i-- > 0;) suffix_min[i] = std::min(lambda[i], suffix_min[i + 1]);

    Eq22Result out;
    out.code.terminated = false;
    std::int64_t sum = 0;
    for (std::int64_t k = 1;; ++k) {
        const Rational need((k + 1) * (k + 1));
        std::int64_t lb = k == 1 ? 1 : std::max(sum + 1, out.code.entries.back() + 1);
        std::int64_t n = lb;
        while (n <= static_cast<std::int64_t>(H) && suffix_min[static_cast<std::size_t>(n - 1)] < need) ++n;
        if (n > static_cast<std::int64_t>(H)) break;
        out.code.entries.push_back(n);
        sum += n;
    }
    if (out.code.entries.empty()) fail("lambda never reaches 4 within the horizon");
    const std::size_t cover = covered_length(out.code);
    if (K > H || K > cover)
        fail("horizon too short: weights known up to " + std::to_string(std::min(H, cover)) + ", asked for " +
             std::to_string(K));
    auto w = branch_weights(out.code, K);
    Rational partial = 0;
    for (std::size_t k = 1; k <= K; ++k) {
        partial += w[k - 1];
        const Rational& lam = lambda[k - 1];
        if (sgn(lam) <= 0) fail("lambda must be positive where tabulated");
        out.rows.push_back({k, partial, lam, partial / lam});
    }
    return out;
}

SplitReport lemma35_split(const TreeVec& x, const std::vector<ChainLink>& chain, std::size_t K) {
    SplitReport r;
    r.total = chain_value(x, chain, 0);
    r.head_bound = x.max_abs() * Rational(static_cast<long>(K));
    std::size_t cum = 0;
    for (const auto& link : chain) {
        const std::size_t n = link.bush.size();
        if (cum + n <= K) {
            cum += n;
            continue;
        }
        Bush rest;
        const std::size_t skip = cum >= K ? 0 : K - cum;
        rest.pairs.assign(link.bush.pairs.begin() + static_cast<long>(skip), link.bush.pairs.end());
        cum += n;
        r.tail_chain.push_back({rest, {}});
    }
    std::size_t shift = K;
    for (auto& link : r.tail_chain) {
        auto s = bush_seminorm(x, shift, link.bush);
        link.code = s.code;
        r.tail += s.value;
        shift += link.bush.size();
    }
    r.bound_holds = r.tail >= r.total - r.head_bound;
    return r;
}

}  // namespace sn
