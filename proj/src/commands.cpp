#include "commands.hpp"

#include <random>

namespace sn::cmd {

using namespace io;

namespace {

std::int64_t get_int(const json& p, const char* key, std::int64_t dflt) {
    return p.is_object() && p.contains(key) ? integer(p[key], key) : dflt;
}

std::uint64_t get_seed(const json& p) {
    const auto s = get_int(p, "seed", 1);
    if (s < 0) fail("seed must be non-negative");
    return static_cast<std::uint64_t>(s);
}

const json& get(const json& p, const char* key) {
    if (!p.is_object() || !p.contains(key)) fail(std::string("missing parameter \"") + key + "\"");
    return p.at(key);
}

std::int64_t positive(const json& p, const char* key, std::int64_t dflt) {
    const auto v = get_int(p, key, dflt);
    if (v < 1) fail(std::string(key) + " must be >= 1");
    return v;
}

XSpaceSpec x_of(const json& p) {
    if (!p.contains("spec"))
        return XSpaceSpec{AdmissibilitySeq({4, 8}, AdmissibilitySeq::Tail::Geometric)};
    Space s = space(p["spec"]);
    if (s.kind != "space_x") fail("this check needs a space_x spec");
    return s.x;
}

ModelSpace model_of(const json& p) {
    if (!p.contains("model")) return ModelSpace::from(default_family());
    Space s = space(p["model"]);
    if (s.kind != "layered_model") fail("this check needs a layered_model spec");
    return *s.model;
}

struct Draw {
    explicit Draw(std::uint64_t seed) : rng(seed) {}
    std::int64_t in(std::int64_t lo, std::int64_t hi) { return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng); }
    Rational nonzero() {
        for (;;) {
            const auto p = in(-9, 9);
            if (p == 0) continue;
            Rational q(Integer(std::to_string(p)), Integer(std::to_string(in(1, 6))));
            q.canonicalize();
            return q;
        }
    }
    std::mt19937_64 rng;
};

json recheck_entry(const Rational& reported, const Rational& again) {
    return json{{"value", to_string(again)}, {"equal", reported == again}};
}

// Normalized successive blocks of `len` random entries starting after `start`.
std::vector<Vec> random_blocks(Draw& d, const XSpaceSpec& spec, std::int64_t count, std::int64_t len, std::int64_t start) {
    std::vector<Vec> out;
    std::int64_t pos = start;
    for (std::int64_t s = 0; s < count; ++s) {
        Vec b;
        for (std::int64_t c = 0; c < len; ++c) b.set(++pos, d.nonzero());
        pos += d.in(0, 1);
        out.push_back(b.scaled(1 / x_norm(spec, b).value));
    }
    return out;
}

Vec average(const std::vector<Vec>& blocks) {
    Vec a;
    for (const auto& b : blocks) a += b;
    return a.scaled(Rational(1, static_cast<long>(blocks.size())));
}

Rational theta_weighted(const XSpaceSpec& spec, const Vec& x, std::int64_t from, std::int64_t to, std::int64_t cut) {
    Vec tail = restrict_interval(x, cut, std::numeric_limits<std::int64_t>::max());
    Rational s = 0;
    for (std::int64_t i = from; i <= to; ++i) s += spec.theta(i) * x_seminorm(spec, tail, i).value;
    return s;
}

json check_eq3a(const json& p) {
    const XSpaceSpec spec = x_of(p);
    const auto N = positive(p, "N", 8);
    const auto trials = positive(p, "trials", 50);
    const auto len = positive(p, "block_len", 2);
    std::vector<std::int64_t> levels{1, 2, 3};
    if (p.contains("levels")) {
        levels.clear();
        for (const auto& l : p["levels"]) levels.push_back(integer(l, "level"));
    }
    Draw d(get_seed(p));
    json rows = json::array();
    std::optional<Rational> min_margin;
    std::size_t violations = 0;
    for (auto i : levels) {
        if (i < 1) fail("levels start at 1");
        const Rational bound = 1 + std::min(Rational(1), Rational(2 * spec.n.at(i), N));
        for (std::int64_t t = 1; t <= trials; ++t) {
            Vec avg = average(random_blocks(d, spec, N, len, d.in(0, 2)));
            auto sn = x_seminorm(spec, avg, i);
            const Rational margin = bound - sn.value;
            const bool pass = margin >= 0;
            if (!pass) ++violations;
            if (!min_margin || margin < *min_margin) min_margin = margin;
            rows.push_back({{"i", i},
                            {"trial", t},
                            {"value", to_string(sn.value)},
                            {"bound", to_string(bound)},
                            {"margin", to_string(margin)},
                            {"pass", pass}});
        }
    }
    return json{{"N", N},
                {"trials", trials},
                {"instances", rows},
                {"violations", violations},
                {"min_margin", min_margin ? json(to_string(*min_margin)) : json(nullptr)},
                {"ok", violations == 0}};
}

json check_sandwich(const json& p) {
    const ModelSpace m = model_of(p);
    const auto trials = positive(p, "trials", 10000);
    const auto positions = positive(p, "positions", 8);
    const auto count = positive(p, "count", 10);
    Draw d(get_seed(p));
    std::size_t violations = 0, rechecks = 0;
    json bad = json::array();
    std::optional<Rational> low_gap, up_gap;
    for (std::int64_t t = 1; t <= trials; ++t) {
        DoubleVector A;
        const auto c = d.in(1, count);
        for (std::int64_t e = 0; e < c; ++e) A.set({d.in(0, m.max_level()), d.in(1, positions)}, d.nonzero());
        auto s = sandwich(m, A);
        auto h = host_norm(m, A);
        if (recheck(m, A, host_witness(to_json(h.witness))) != h.value) ++violations;
        ++rechecks;
        if (!low_gap || s.host - s.lower < *low_gap) low_gap = s.host - s.lower;
        if (!up_gap || s.upper - s.host < *up_gap) up_gap = s.upper - s.host;
        if (!s.holds()) {
            ++violations;
            if (bad.size() < 20)
                bad.push_back({{"trial", t},
                               {"A", to_json(A)},
                               {"lower", to_string(s.lower)},
                               {"host", to_string(s.host)},
                               {"upper", to_string(s.upper)}});
        }
    }
    return json{{"trials", trials},
                {"violations", violations},
                {"witness_rechecks", rechecks},
                {"min_host_minus_lower", to_string(*low_gap)},
                {"min_upper_minus_host", to_string(*up_gap)},
                {"failures", bad},
                {"ok", violations == 0}};
}

json check_eq24(const json& p) {
    const BranchCode b = code(get(p, "code"));
    const auto m = positive(p, "m", 1);
    auto th = eq23_threshold(b, static_cast<std::size_t>(m));
    const std::size_t used = std::min(th.M, b.entries.size());
    std::int64_t D = 0;
    for (std::size_t j = 0; j < used; ++j) D += b.entries[j];
    if (D + m > kMaxTreeLevel) fail("branch vector too deep");
    auto path = code_to_branch(b, static_cast<int>(D + m));
    TreeVec x;
    for (std::int64_t l = D + 1; l <= D + m; ++l) x.set(path[static_cast<std::size_t>(l)], 1);
    auto w = branch_weights(b, static_cast<std::size_t>(m));
    Rational bound = 1;
    for (const auto& v : w) bound += v;
    auto y = y_norm(x);
    const Rational again = recheck(x, y_witness(to_json(y.witness)));
    const bool pass = y.value <= bound;
    return json{{"code", to_json(b)},
                {"m", m},
                {"threshold", {{"M", th.M}, {"exact_match_only", th.exact_match_only}}},
                {"first_level", D + 1},
                {"weights", to_json(w)},
                {"bound", to_string(bound)},
                {"x", to_json(x)},
                {"value", to_string(y.value)},
                {"witness", to_json(y.witness)},
                {"recheck", recheck_entry(y.value, again)},
                {"margin", to_string(bound - y.value)},
                {"ok", pass && again == y.value}};
}

json check_lemma24(const json& p) {
    const XSpaceSpec spec = x_of(p);
    const auto k = positive(p, "k", 1);
    std::vector<Vec> blocks;
    if (p.contains("blocks")) {
        for (const auto& b : p["blocks"]) {
            Vec v = vec(b);
            if (v.empty()) fail("blocks must be nonzero");
            blocks.push_back(v.scaled(1 / x_norm(spec, v).value));
        }
        for (std::size_t s = 1; s < blocks.size(); ++s)
            if (blocks[s - 1].entries().rbegin()->first >= blocks[s].entries().begin()->first)
                fail("blocks must have successive supports");
    } else {
        Draw d(get_seed(p));
        blocks = random_blocks(d, spec, positive(p, "N", 4), positive(p, "block_len", 2), k - 1);
    }
    if (blocks.empty()) fail("no blocks given");
    Vec x = average(blocks);
    const Rational v = theta_weighted(spec, x, 1, k, k);
    const Rational threshold(24, 25);
    return json{{"k", k},
                {"N", blocks.size()},
                {"x", to_json(x)},
                {"value", to_string(v)},
                {"threshold", to_string(threshold)},
                {"ok", v > threshold}};
}

json check_lemma25(const json& p) {
    const XSpaceSpec spec = x_of(p);
    const Vec w = vec(get(p, "w"));
    const auto K1 = get_int(p, "K1", 0);
    const auto K2 = positive(p, "K2", K1 + 1);
    if (K1 < 0 || K2 <= K1) fail("need 0 <= K1 < K2");
    const Rational norm = x_norm(spec, w).value;
    const Rational mass = theta_weighted(spec, w, K1 + 1, K2, K2);
    const bool norm_ok = Rational(49, 50) <= norm && norm <= 1;
    const bool mass_ok = mass > Rational(2, 5);
    return json{{"K1", K1},
                {"K2", K2},
                {"norm", to_string(norm)},
                {"norm_in_range", norm_ok},
                {"mass", to_string(mass)},
                {"mass_threshold", "2/5"},
                {"ok", norm_ok && mass_ok}};
}

json check_lemma35(const json& p) {
    TreeVec x = tree_vec(get(p, "x"));
    if (x.empty()) fail("x must be nonzero");
    const auto K = positive(p, "K", 1);
    const Rational eps = rational(get(p, "eps"));
    auto y = y_norm(x);
    TreeVec xn = x.scaled(1 / y.value);
    auto yn = y_norm(xn);
    const bool pre = Rational(K) * eps < Rational(2, 5) && xn.max_abs() < eps;
    json r{{"K", K}, {"eps", to_string(eps)}, {"x_normalized", to_json(xn)}, {"precondition", pre}};
    if (yn.witness.leaf) {
        r["note"] = "norm attained at a single coordinate";
        r["ok"] = false;
        return r;
    }
    auto s = lemma35_split(xn, yn.witness.chain, static_cast<std::size_t>(K));
    r["total"] = to_string(s.total);
    r["head_bound"] = to_string(s.head_bound);
    r["tail"] = to_string(s.tail);
    r["tail_chain"] = to_json(s.tail_chain);
    r["bound_holds"] = s.bound_holds;
    r["ok"] = pre && s.tail > Rational(1, 2);
    return r;
}

json check_eq22(const json& p) {
    std::vector<Rational> lambda;
    const json& l = get(p, "lambda");
    if (l.is_object()) {
        if (!l.contains("kind") || l["kind"] != "identity") fail("lambda object must be {\"kind\":\"identity\",\"H\":...}");
        const auto H = positive(l, "H", 1000);
        for (std::int64_t k = 1; k <= H; ++k) lambda.push_back(Rational(k));
    } else {
        lambda = rationals(l);
    }
    // K defaults to the longest table the horizon allows
    std::size_t K = static_cast<std::size_t>(get_int(p, "K", 0));
    if (K == 0) {
        auto probe = eq22_builder(lambda, 1);
        K = std::min(lambda.size(), covered_length(probe.code));
    }
    auto r = eq22_builder(lambda, K);
    json rows = json::array();
    json checks = json::array();
    bool ok = true;
    const auto n1 = static_cast<std::size_t>(r.code.entries.front());
    for (const auto& row : r.rows) {
        rows.push_back({{"k", row.k},
                        {"partial_sum", to_string(row.partial_sum)},
                        {"lambda", to_string(row.lambda)},
                        {"ratio", to_string(row.ratio)}});
        if (row.k == n1) {
            const Rational bound(1, static_cast<long>(row.k));
            const bool pass = row.ratio <= bound;
            ok = ok && pass;
            checks.push_back({{"k", row.k}, {"ratio", to_string(row.ratio)}, {"bound", to_string(bound)}, {"pass", pass}});
        }
    }
    if (checks.empty()) fail("table stops before k = n_1");
    return json{{"code", to_json(r.code)}, {"K", K}, {"rows", rows}, {"checks", checks}, {"ok", ok}};
}

json check_eq1(const json& p) {
    json rows = json::array();
    bool ok = true;
    if (p.contains("n")) {
        std::vector<Integer> n;
        for (const auto& v : p["n"]) n.push_back(Integer(std::to_string(integer(v, "n entry"))));
        const auto K = positive(p, "K", static_cast<std::int64_t>(n.size()));
        for (const auto& r : eq1_report(n, rational(get(p, "p")), K))
            rows.push_back({{"k", r.k}, {"p", to_string(r.p)}, {"value", to_json(r.value)}});
        return json{{"rows", rows}, {"ok", true}};
    }
    auto rec = eq1_recipe(positive(p, "K", 4));
    json ns = json::array();
    for (const auto& n : rec.n) ns.push_back(n.get_str());
    for (const auto& r : rec.rows) {
        const bool pass = r.value.hi > r.k;
        ok = ok && pass;
        rows.push_back({{"k", r.k}, {"p", to_string(r.p)}, {"value", to_json(r.value)}, {"exceeds_k", pass}});
    }
    return json{{"n", ns}, {"rows", rows}, {"ok", ok}};
}

json grid_echo(const Grid& g) {
    return json{{"units", g.units}, {"signs", g.signs}, {"random", g.random}, {"seed", g.seed}};
}

json dom_json(const DominationReport& d) {
    return json{{"C_lower", to_string(d.C_lower)}, {"argmax", to_json(d.argmax)}, {"points", d.points}, {"exact", d.exact}};
}

}  // namespace

json norm(const Space& s, const json& vector, const json& opts) {
    const bool again = opts.is_object() && opts.value("recheck", false);
    json r{{"command", "norm"}, {"spec", s.echo}};
    bool ok = true;
    auto add_recheck = [&](const Rational& v, const Rational& w) {
        r["recheck"] = recheck_entry(v, w);
        ok = ok && v == w;
    };
    if (s.kind == "space_y") {
        TreeVec x = tree_vec(vector);
        r["vector"] = to_json(x);
        auto y = y_norm(x);
        r["value"] = to_string(y.value);
        r["witness"] = to_json(y.witness);
        if (again) add_recheck(y.value, recheck(x, y_witness(r["witness"])));
    } else if (s.kind == "layered_model") {
        DoubleVector A = double_vec(vector);
        r["vector"] = to_json(A);
        auto h = host_norm(*s.model, A);
        auto sw = sandwich(*s.model, A);
        r["value"] = to_string(h.value);
        r["witness"] = to_json(h.witness);
        r["sandwich"] = {{"lower", to_string(sw.lower)}, {"upper", to_string(sw.upper)}, {"holds", sw.holds()}};
        if (again) add_recheck(h.value, recheck(*s.model, A, host_witness(r["witness"])));
    } else {
        Vec x = vec(vector);
        r["vector"] = to_json(x);
        const auto semi = opts.is_object() && opts.contains("seminorm") ? integer(opts["seminorm"], "seminorm") : 0;
        if (semi != 0) {
            if (s.kind != "space_x") fail("seminorms are defined for space_x only");
            if (semi < 1) fail("seminorm index must be >= 1");
            auto sn = x_seminorm(s.x, x, semi);
            r["seminorm"] = semi;
            r["value"] = to_string(sn.value);
            r["witness"] = {{"blocks", to_json(sn.blocks)}};
            if (again) add_recheck(sn.value, recheck_seminorm(s.x, x, semi, x_blocks(r["witness"]["blocks"])));
        } else if (s.kind == "space_x") {
            auto v = x_norm(s.x, x);
            r["value"] = to_string(v.value);
            r["witness"] = to_json(*v.witness);
            if (again) add_recheck(v.value, recheck(s.x, x, *x_witness(r["witness"])));
        } else if (s.kind == "t_dw1") {
            auto v = t_dw1_norm(s.t, x);
            r["value"] = to_string(v.value);
            r["witness"] = to_json(*v.witness);
            if (again) add_recheck(v.value, recheck(s.t, x, *t_witness(r["witness"])));
        } else if (s.kind == "schreier_lorentz") {
            auto v = schreier_lorentz_norm(s.w, x, s.reading);
            r["value"] = to_string(v.value);
            r["witness"] = to_json(v.witness);
            if (again) add_recheck(v.value, recheck(s.w, x, schreier_witness(r["witness"]), s.reading));
        } else {
            Enclosure e = s.oracle->eval(x);
            r["value"] = to_json(e);
            r["exact"] = e.is_exact();
        }
    }
    r["ok"] = ok;
    return r;
}

json verify(const std::string& check, const json& params) {
    json body;
    if (check == "eq3a")
        body = check_eq3a(params);
    else if (check == "sandwich34")
        body = check_sandwich(params);
    else if (check == "eq24")
        body = check_eq24(params);
    else if (check == "lemma24")
        body = check_lemma24(params);
    else if (check == "lemma25")
        body = check_lemma25(params);
    else if (check == "lemma35")
        body = check_lemma35(params);
    else if (check == "eq22")
        body = check_eq22(params);
    else if (check == "eq1")
        body = check_eq1(params);
    else
        fail("unknown check \"" + check + "\"");
    json r{{"command", "verify"}, {"check", check}, {"params", params}};
    for (auto& [k, v] : body.items()) r[k] = v;
    return r;
}

json sm_growth(const Space& s, const json& params) {
    const auto N = positive(params, "N", 16);
    const auto window = static_cast<std::size_t>(positive(params, "window", static_cast<std::int64_t>(kDefaultWindow)));
    std::optional<std::vector<Rational>> lambda;
    if (params.contains("lambda")) lambda = rationals(params["lambda"]);
    auto rows = growth_report(*s.oracle, N, lambda, window);
    json out = json::array();
    bool stable = true;
    for (const auto& row : rows) {
        json o{{"n", row.n}, {"g", to_json(row.g)}, {"g_over_n", to_json(row.per_n)}};
        if (row.per_lambda) o["g_over_lambda"] = to_json(*row.per_lambda);
        o["stabilized"] = row.stabilized;
        stable = stable && row.stabilized;
        out.push_back(o);
    }
    return json{{"command", "sm growth"}, {"spec", s.echo}, {"N", N}, {"window", window}, {"rows", out},
                {"all_stabilized", stable}, {"ok", true}};
}

json sm_estimate(const Space& s, const json& params) {
    auto a = rationals(get(params, "a"));
    std::vector<std::int64_t> shifts, gaps{1};
    for (const auto& v : get(params, "shifts")) shifts.push_back(integer(v, "shift"));
    if (params.contains("gaps")) {
        gaps.clear();
        for (const auto& v : params["gaps"]) gaps.push_back(integer(v, "gap"));
    }
    const auto window = static_cast<std::size_t>(positive(params, "window", static_cast<std::int64_t>(kDefaultWindow)));
    auto e = sn::sm_estimate(*s.oracle, a, shifts, gaps, window);
    json table = json::array();
    for (const auto& row : e.table) table.push_back({{"shift", row.shift}, {"gap", row.gap}, {"value", to_json(row.value)}});
    return json{{"command", "sm estimate"},
                {"spec", s.echo},
                {"a", to_json(a)},
                {"table", table},
                {"stabilized", e.stabilized},
                {"value", e.value ? to_json(*e.value) : json(nullptr)},
                {"residual", to_string(e.residual)},
                {"ok", true}};
}

json dominate(const Space& a, const Space& b, const json& params) {
    const auto n = positive(params, "n", 4);
    Grid g = grid(params.contains("grid") ? params["grid"] : json(), get_seed(params));
    auto d = domination_constant(*a.oracle, *b.oracle, static_cast<std::size_t>(n), g);
    json r{{"command", "dominate"}, {"a", a.echo}, {"b", b.echo}, {"n", n}, {"grid", grid_echo(g)}};
    json body = dom_json(d);
    for (auto& [k, v] : body.items()) r[k] = v;
    r["ok"] = true;
    return r;
}

json dbasis(const Space& a, const Space& b, const json& params) {
    const auto n = positive(params, "n", 4);
    Grid g = grid(params.contains("grid") ? params["grid"] : json(), get_seed(params));
    auto d = basis_distance(*a.oracle, *b.oracle, static_cast<std::size_t>(n), g);
    return json{{"command", "dbasis"},
                {"a", a.echo},
                {"b", b.echo},
                {"n", n},
                {"grid", grid_echo(g)},
                {"d_lower", to_string(d.d_lower)},
                {"forward", dom_json(d.forward)},
                {"backward", dom_json(d.backward)},
                {"ok", true}};
}

json krivine(const Space& s, const json& params) {
    const auto n = positive(params, "n", 2);
    const auto m_max = positive(params, "m_max", 4);
    const auto budget = positive(params, "budget", 200);
    const LpExponent p = exponent(get(params, "p"));
    Grid g = grid(params.contains("grid") ? params["grid"] : json(), get_seed(params));
    if (!params.contains("grid")) g.random = 100;
    auto r = krivine_block_search(s.oracle, p, static_cast<std::size_t>(n), static_cast<std::size_t>(m_max),
                                  static_cast<std::size_t>(budget), g);
    auto t = [](const KrivineTry& k) {
        return json{{"m", k.m}, {"lambda", to_json(k.lambda)}, {"constant", to_string(k.constant)}};
    };
    json av = json::array();
    for (const auto& k : r.averages) av.push_back(t(k));
    return json{{"command", "krivine"},
                {"spec", s.echo},
                {"n", n},
                {"m_max", m_max},
                {"budget", budget},
                {"best", t(r.best)},
                {"averages", av},
                {"evaluations", r.evaluations},
                {"budget_exhausted", r.budget_exhausted},
                {"note", "heuristic upper bound on the attainable constant; not a claim of optimality"},
                {"ok", true}};
}

json op(const std::string& action, const json& params) {
    json r{{"command", "op " + action}};
    if (action == "certify") {
        ModelSpace m = model_of(params);
        const Polynomial p = polynomial(get(params, "poly"));
        const Rational lambda = params.contains("lambda") ? rational(params["lambda"]) : Rational(0);
        const auto level = get_int(params, "level", 1);
        const auto J = get_int(params, "J", 8);
        auto c = noncompact_certificate(m, p, lambda, level, J);
        r["poly"] = to_json(p.coeffs);
        r["lambda"] = to_string(lambda);
        r["level"] = level;
        r["J"] = J;
        r["failed"] = c.failed;
        if (!c.failed) {
            r["c_min"] = to_string(c.c_min);
            r["pairwise_min"] = to_string(c.pairwise_min);
        }
        r["note"] = c.note;
        r["ok"] = !c.failed && sgn(c.pairwise_min) > 0;
    } else if (action == "apply") {
        const Polynomial p = polynomial(get(params, "poly"));
        DoubleVector A = double_vec(get(params, "A"));
        r["poly"] = to_json(p.coeffs);
        r["A"] = to_json(A);
        r["result"] = to_json(apply_poly(p, A));
        r["ok"] = apply_poly(p, A) == apply_poly_iterated(p, A);
    } else if (action == "monotone") {
        LayeredFamily fam = family(get(params, "model"));
        auto c = check_layer_monotone(fam);
        r["monotone"] = c.ok;
        if (!c.ok) r["failing"] = {{"layer", c.level}, {"i", c.i}};
        r["ok"] = c.ok;
    } else {
        fail("unknown op action \"" + action + "\"");
    }
    return r;
}

}  // namespace sn::cmd
