#include "spreadnorm/spreading.hpp"

#include <bit>

namespace sn {

namespace {

class LpOracle : public NormOracle {
public:
    explicit LpOracle(LpExponent p) : p_(std::move(p)) {}
    Enclosure eval(const Vec& a) const override { return lp_norm(a, p_); }
    bool subsymmetric() const override { return true; }
    std::string name() const override { return p_.is_infinity() ? "l_inf" : "l_" + to_string(*p_.p); }

private:
    LpExponent p_;
};

class LorentzOracle : public NormOracle {
public:
    explicit LorentzOracle(WeightSeq w) : w_(std::move(w)) {}
    Enclosure eval(const Vec& a) const override { return Enclosure::exact(lorentz_norm(w_, a)); }
    bool subsymmetric() const override { return true; }
    std::string name() const override { return "lorentz"; }

private:
    WeightSeq w_;
};

class SchreierOracle : public NormOracle {
public:
    SchreierOracle(WeightSeq w, SchreierReading r) : w_(std::move(w)), r_(r) {}
    Enclosure eval(const Vec& a) const override { return Enclosure::exact(schreier_lorentz_norm(w_, a, r_).value); }
    bool subsymmetric() const override { return r_ == SchreierReading::Rearranged; }
    std::string name() const override { return "schreier_lorentz"; }

private:
    WeightSeq w_;
    SchreierReading r_;
};

class TOracle : public NormOracle {
public:
    explicit TOracle(TSpec s) : s_(std::move(s)) {}
    Enclosure eval(const Vec& a) const override { return Enclosure::exact(t_dw1_norm(s_, a).value); }
    std::string name() const override { return "t_dw1"; }

private:
    TSpec s_;
};

class XOracle : public NormOracle {
public:
    explicit XOracle(XSpaceSpec s) : s_(std::move(s)) { s_.validate(); }
    Enclosure eval(const Vec& a) const override { return Enclosure::exact(x_norm(s_, a).value); }
    std::string name() const override { return "space_x"; }

private:
    XSpaceSpec s_;
};

class YOracle : public NormOracle {
public:
    Enclosure eval(const Vec& a) const override {
        TreeVec x;
        for (const auto& [i, v] : a.entries()) x.set(tree_node_of(i), v);
        return Enclosure::exact(y_norm(x).value);
    }
    std::string name() const override { return "space_y"; }
};

class ScaledOracle : public NormOracle {
public:
    ScaledOracle(Rational c, OraclePtr inner) : c_(std::move(c)), inner_(std::move(inner)) {
        if (sgn(c_) <= 0) fail("scale factor must be positive");
    }
    Enclosure eval(const Vec& a) const override { return inner_->eval(a).scaled(c_); }
    bool subsymmetric() const override { return inner_->subsymmetric(); }
    std::string name() const override { return to_string(c_) + "*" + inner_->name(); }

private:
    Rational c_;
    OraclePtr inner_;
};

class CombineUpper : public NormOracle {
public:
    CombineUpper(std::vector<OraclePtr> o, std::vector<Rational> C) : o_(std::move(o)) {
        if (o_.empty()) fail("combine_upper needs at least one oracle");
        if (C.size() != o_.size()) fail("combine_upper needs one constant per oracle");
        for (const auto& c : C) {
            if (sgn(c) <= 0) fail("combine_upper constants must be positive");
            f_.push_back(Rational(16) / c);
        }
    }
    Enclosure eval(const Vec& a) const override {
        Enclosure s = Enclosure::exact(0);
        for (std::size_t i = 0; i < o_.size(); ++i) s = s + o_[i]->eval(a).scaled(f_[i]);
        return s;
    }
    bool subsymmetric() const override {
        return std::all_of(o_.begin(), o_.end(), [](const OraclePtr& p) { return p->subsymmetric(); });
    }
    std::string name() const override { return "combine_upper"; }

private:
    std::vector<OraclePtr> o_;
    std::vector<Rational> f_;
};

class MaxCombine : public NormOracle {
public:
    explicit MaxCombine(std::vector<OraclePtr> o) : o_(std::move(o)) {
        if (o_.empty()) fail("max_combine needs at least one oracle");
    }
    Enclosure eval(const Vec& a) const override {
        Enclosure m = o_[0]->eval(a);
        for (std::size_t i = 1; i < o_.size(); ++i) m = Enclosure::max(m, o_[i]->eval(a));
        return m;
    }
    bool subsymmetric() const override {
        return std::all_of(o_.begin(), o_.end(), [](const OraclePtr& p) { return p->subsymmetric(); });
    }
    std::string name() const override { return "max_combine"; }

private:
    std::vector<OraclePtr> o_;
};

class BlockOracle : public NormOracle {
public:
    BlockOracle(OraclePtr inner, std::vector<Rational> lambda) : inner_(std::move(inner)), lambda_(std::move(lambda)) {
        if (lambda_.empty()) fail("block coefficients are empty");
    }
    Enclosure eval(const Vec& a) const override {
        const auto m = static_cast<std::int64_t>(lambda_.size());
        Vec x;
        for (const auto& [i, v] : a.entries())
            for (std::int64_t j = 0; j < m; ++j) x.set((i - 1) * m + j + 1, v * lambda_[static_cast<std::size_t>(j)]);
        return inner_->eval(x);
    }
    bool subsymmetric() const override { return inner_->subsymmetric(); }
    std::string name() const override { return "blocks(" + inner_->name() + ")"; }

private:
    OraclePtr inner_;
    std::vector<Rational> lambda_;
};

}  // namespace

OraclePtr lp_oracle(const LpExponent& p) {
    if (!p.is_infinity() && *p.p < 1) fail("lp oracle requires p >= 1");
    return std::make_shared<LpOracle>(p);
}
OraclePtr lorentz_oracle(const WeightSeq& w) { return std::make_shared<LorentzOracle>(w); }
OraclePtr schreier_lorentz_oracle(const WeightSeq& w, SchreierReading reading) {
    return std::make_shared<SchreierOracle>(w, reading);
}
OraclePtr t_dw1_oracle(const TSpec& spec) { return std::make_shared<TOracle>(spec); }
OraclePtr space_x_oracle(const XSpaceSpec& spec) { return std::make_shared<XOracle>(spec); }
OraclePtr space_y_oracle() { return std::make_shared<YOracle>(); }
OraclePtr scaled_oracle(const Rational& c, OraclePtr inner) { return std::make_shared<ScaledOracle>(c, std::move(inner)); }
OraclePtr combine_upper(std::vector<OraclePtr> oracles, std::vector<Rational> C) {
    return std::make_shared<CombineUpper>(std::move(oracles), std::move(C));
}
OraclePtr max_combine(std::vector<OraclePtr> oracles) { return std::make_shared<MaxCombine>(std::move(oracles)); }
OraclePtr block_oracle(OraclePtr inner, std::vector<Rational> lambda) {
    return std::make_shared<BlockOracle>(std::move(inner), std::move(lambda));
}

TreeNode tree_node_of(std::int64_t n) {
    if (n < 1) fail("tree coordinates are 1-based");
    const int level = std::bit_width(static_cast<std::uint64_t>(n)) - 1;
    if (level > kMaxTreeLevel) fail("tree coordinate too large");
    return TreeNode{level, static_cast<std::uint64_t>(n) - (std::uint64_t{1} << level)};
}

std::int64_t tree_position(const TreeNode& t) {
    if (t.level > kMaxTreeLevel) fail("tree node too deep");
    return static_cast<std::int64_t>((std::uint64_t{1} << t.level) + t.index);
}

SpreadingEstimate sm_estimate(const NormOracle& oracle, const std::vector<Rational>& a,
                              const std::vector<std::int64_t>& shifts, const std::vector<std::int64_t>& gaps,
                              std::size_t window) {
    if (shifts.empty() || gaps.empty()) fail("sm_estimate needs at least one shift and one gap");
    if (window < 1) fail("stabilization window must be >= 1");
    const auto n = static_cast<std::int64_t>(a.size());
    for (auto s : shifts)
        if (s < n || s < 1) fail("shift " + std::to_string(s) + " violates n <= k_1 (n = " + std::to_string(n) + ")");
    for (auto g : gaps)
        if (g < 1) fail("gaps must be >= 1");

    SpreadingEstimate est;
    est.a = a;
    for (auto s : shifts)
        for (auto g : gaps) {
            Vec x;
            for (std::int64_t i = 0; i < n; ++i) x.set(s + g * i, a[static_cast<std::size_t>(i)]);
            est.table.push_back({s, g, oracle.eval(x)});
        }

    auto same = [](const Enclosure& p, const Enclosure& q) { return p.lo == q.lo && p.hi == q.hi; };
    const std::size_t G = gaps.size();
    const std::size_t rows = shifts.size();
    auto row_eq = [&](std::size_t r1, std::size_t r2) {
        for (std::size_t g = 0; g < G; ++g)
            if (!same(est.table[r1 * G + g].value, est.table[r2 * G + g].value)) return false;
        return true;
    };
    if (oracle.subsymmetric()) {
        est.stabilized = true;
        est.value = est.table.front().value;
    } else if (rows >= window) {
        bool ok = true;
        for (std::size_t r = rows - window + 1; r < rows && ok; ++r) ok = row_eq(r, rows - 1);
        est.stabilized = ok;
        if (ok) {
            bool constant = true;
            for (std::size_t g = 1; g < G; ++g) constant = constant && same(est.table[(rows - 1) * G + g].value,
                                                                          est.table[(rows - 1) * G].value);
            if (constant) est.value = est.table.back().value;
        }
    }
    const Enclosure ref = est.value ? *est.value : est.table.back().value;
    est.residual = 0;
    for (const auto& row : est.table) {
        Rational d = std::max(abs(row.value.hi - ref.lo), abs(ref.hi - row.value.lo));
        if (d > est.residual) est.residual = d;
    }
    return est;
}

std::vector<GrowthRow> growth_report(const NormOracle& oracle, std::int64_t N,
                                     const std::optional<std::vector<Rational>>& lambda, std::size_t window) {
    if (N < 1) fail("growth_report requires N >= 1");
    if (lambda && static_cast<std::int64_t>(lambda->size()) < N) fail("lambda must list at least N values");
    std::vector<GrowthRow> out;
    for (std::int64_t n = 1; n <= N; ++n) {
        std::vector<Rational> ones(static_cast<std::size_t>(n), Rational(1));
        std::vector<std::int64_t> shifts{n};
        if (!oracle.subsymmetric())
            for (std::size_t r = 2; r <= window; ++r) shifts.push_back(n * static_cast<std::int64_t>(r));
        auto est = sm_estimate(oracle, ones, shifts, {1}, window);
        GrowthRow row;
        row.n = n;
        row.stabilized = est.stabilized;
        row.g = est.value ? *est.value : est.table.back().value;
        row.per_n = row.g.scaled(Rational(1, n));
        if (lambda) {
            const Rational& l = (*lambda)[static_cast<std::size_t>(n - 1)];
            if (sgn(l) <= 0) fail("lambda values must be positive");
            row.per_lambda = row.g.scaled(1 / l);
        }
        out.push_back(std::move(row));
    }
    return out;
}

std::vector<std::vector<Rational>> grid_points(const Grid& g, std::size_t n) {
    if (n < 1) fail("grid dimension must be >= 1");
    std::vector<std::vector<Rational>> pts;
    if (g.units)
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<Rational> e(n, Rational(0));
            e[i] = 1;
            pts.push_back(std::move(e));
        }
    if (g.signs && n <= 10)
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
            std::vector<Rational> s(n);
            for (std::size_t i = 0; i < n; ++i) s[i] = (mask >> i & 1u) ? -1 : 1;
            pts.push_back(std::move(s));
        }
    std::mt19937_64 rng(g.seed);
    std::uniform_int_distribution<int> num(-9, 9), den(1, 9);
    for (std::size_t r = 0; r < g.random; ++r) {
        std::vector<Rational> p(n);
        bool zero = true;
        for (auto& c : p) {
            const int a = num(rng);
            const int b = den(rng);
            c = Rational(a, b);
            c.canonicalize();
            zero = zero && a == 0;
        }
        if (!zero) pts.push_back(std::move(p));
    }
    for (const auto& e : g.extra) {
        if (e.size() != n) fail("extra grid point has the wrong length");
        pts.push_back(e);
    }
    return pts;
}

Vec vec_of(const std::vector<Rational>& a) {
    Vec x;
    for (std::size_t i = 0; i < a.size(); ++i) x.set(static_cast<std::int64_t>(i + 1), a[i]);
    return x;
}

DominationReport domination_constant(const NormOracle& N1, const NormOracle& N2, std::size_t n, const Grid& grid) {
    if (n < 1) fail("domination_constant requires n >= 1");
    DominationReport r;
    bool first = true;
    for (const auto& p : grid_points(grid, n)) {
        Vec a = vec_of(p);
        if (a.empty()) continue;
        Enclosure d = N1.eval(a), u = N2.eval(a);
        if (sgn(d.hi) <= 0) fail(N1.name() + " vanishes on a nonzero vector");
        r.exact = r.exact && d.is_exact() && u.is_exact();
        ++r.points;
        Rational q = u.lo / d.hi;
        if (first || q > r.C_lower) {
            first = false;
            r.C_lower = q;
            r.argmax = p;
        }
    }
    return r;
}

DistanceReport basis_distance(const NormOracle& N1, const NormOracle& N2, std::size_t n, const Grid& grid) {
    DistanceReport r;
    r.forward = domination_constant(N1, N2, n, grid);
    r.backward = domination_constant(N2, N1, n, grid);
    r.d_lower = r.forward.C_lower * r.backward.C_lower;
    return r;
}

KrivineResult krivine_block_search(OraclePtr oracle, const LpExponent& p, std::size_t n, std::size_t m_max,
                                   std::size_t budget, const Grid& grid) {
    if (n < 2) fail("krivine_block_search requires n >= 2");
    if (m_max < 1) fail("krivine_block_search requires m_max >= 1");
    if (!oracle->subsymmetric()) fail("krivine_block_search requires an oracle declared subsymmetric");
    auto target = lp_oracle(p);
    KrivineResult res;
    bool have = false;
    auto attempt = [&](std::size_t m, const std::vector<Rational>& lambda) -> std::optional<Rational> {
        if (res.evaluations >= budget) {
            res.budget_exhausted = true;
            return std::nullopt;
        }
        ++res.evaluations;
        auto blocks = block_oracle(oracle, lambda);
        Rational c = basis_distance(*blocks, *target, n, grid).d_lower;
        if (!have || c < res.best.constant) {
            have = true;
            res.best = {m, lambda, c};
        }
        return c;
    };

    for (std::size_t m = 1; m <= m_max; ++m) {
        std::vector<Rational> avg(m, Rational(1, static_cast<long>(m)));
        auto c = attempt(m, avg);
        if (!c) break;
        res.averages.push_back({m, avg, *c});
    }
    // coarse grid over lambda_j in {1, 1/2, 1/4}, first coordinate fixed to 1 by scale invariance
    static const Rational levels[] = {Rational(1), Rational(1, 2), Rational(1, 4)};
    for (std::size_t m = 2; m <= std::min<std::size_t>(m_max, 4) && !res.budget_exhausted; ++m) {
        std::size_t combos = 1;
        for (std::size_t j = 1; j < m; ++j) combos *= 3;
        for (std::size_t code = 0; code < combos && !res.budget_exhausted; ++code) {
            std::vector<Rational> lambda{Rational(1)};
            std::size_t c = code;
            bool all_one = true;
            for (std::size_t j = 1; j < m; ++j) {
                lambda.push_back(levels[c % 3]);
                all_one = all_one && c % 3 == 0;
                c /= 3;
            }
            if (all_one) continue;  // same as the average
            attempt(m, lambda);
        }
    }
    // local refinement of the best coefficients
    bool improved = true;
    while (improved && !res.budget_exhausted) {
        improved = false;
        const KrivineTry base = res.best;
        for (std::size_t j = 0; j < base.lambda.size() && !res.budget_exhausted; ++j)
            for (const Rational& f : {Rational(3, 4), Rational(5, 4)}) {
                auto lambda = base.lambda;
                lambda[j] *= f;
                auto c = attempt(base.m, lambda);
                if (c && *c < base.constant) improved = true;
                if (res.budget_exhausted) break;
            }
    }
    return res;
}

}  // namespace sn
