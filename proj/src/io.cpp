#include "io.hpp"

namespace sn::io {

namespace {

const json& need(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) fail(std::string("missing field \"") + key + "\"");
    return j.at(key);
}

std::string text(const json& j, const char* what) {
    if (!j.is_string()) fail(std::string(what) + " must be a string");
    return j.get<std::string>();
}

const json& entries_of(const json& j) {
    const json& e = j.is_object() ? need(j, "entries") : j;
    if (!e.is_array()) fail("vector entries must be a list");
    return e;
}

class ModelOracle final : public NormOracle {
public:
    explicit ModelOracle(ModelSpace s) : s_(std::move(s)) {}
    Enclosure eval(const Vec& a) const override {
        DoubleVector A;
        for (const auto& [i, v] : a.entries()) A.set({0, i}, v);
        return Enclosure::exact(host_norm(s_, A).value);
    }
    std::string name() const override { return "layered_model"; }

private:
    ModelSpace s_;
};

}  // namespace

json parse(std::string_view text, const char* what) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        fail(std::string("malformed JSON in ") + what + ": " + e.what());
    }
}

Rational rational(const json& j) {
    if (j.is_number_integer()) return Rational(Integer(std::to_string(j.get<std::int64_t>())));
    if (j.is_string()) return parse_rational(j.get<std::string>());
    fail("expected a rational as \"p/q\" or an integer");
}

json to_json(const Rational& q) { return to_string(q); }

json to_json(const Enclosure& e) {
    if (e.is_exact()) return to_string(e.lo);
    return json{{"lo", to_string(e.lo)}, {"hi", to_string(e.hi)}};
}

std::vector<Rational> rationals(const json& j) {
    if (!j.is_array()) fail("expected a list of rationals");
    std::vector<Rational> out;
    for (const auto& v : j) out.push_back(rational(v));
    return out;
}

json to_json(const std::vector<Rational>& v) {
    json out = json::array();
    for (const auto& q : v) out.push_back(to_string(q));
    return out;
}

std::int64_t integer(const json& j, const char* what) {
    if (!j.is_number_integer()) fail(std::string(what) + " must be an integer");
    return j.get<std::int64_t>();
}

Vec vec(const json& j) {
    Vec x;
    for (const auto& e : entries_of(j)) {
        if (!e.is_array() || e.size() != 2) fail("vector entry must be [index, value]");
        const auto i = integer(e[0], "vector index");
        if (i < 1) fail("vector indices start at 1");
        x.add(i, rational(e[1]));
    }
    return x;
}

json to_json(const Vec& x) {
    json e = json::array();
    for (const auto& [i, v] : x.entries()) e.push_back(json::array({i, to_string(v)}));
    return json{{"entries", e}};
}

TreeNode node(const json& j) {
    if (!j.is_array() || j.size() != 2) fail("tree node must be [level, index]");
    const auto l = integer(j[0], "node level");
    const auto i = integer(j[1], "node index");
    if (l < 0 || l > kMaxTreeLevel || i < 0) fail("tree node out of range");
    return TreeNode::make(static_cast<int>(l), static_cast<std::uint64_t>(i));
}

json to_json(const TreeNode& t) { return json::array({t.level, t.index}); }

TreeVec tree_vec(const json& j) {
    TreeVec x;
    for (const auto& e : entries_of(j)) {
        if (!e.is_array() || e.size() != 2) fail("tree vector entry must be [[level, index], value]");
        x.add(node(e[0]), rational(e[1]));
    }
    return x;
}

json to_json(const TreeVec& x) {
    json e = json::array();
    for (const auto& [t, v] : x.entries()) e.push_back(json::array({to_json(t), to_string(v)}));
    return json{{"entries", e}};
}

DoubleVector double_vec(const json& j) {
    DoubleVector A;
    for (const auto& e : entries_of(j)) {
        if (!e.is_array() || e.size() != 3) fail("double vector entry must be [level, position, value]");
        const auto l = integer(e[0], "level");
        const auto p = integer(e[1], "position");
        if (l < 0 || p < 1) fail("levels start at 0 and positions at 1");
        A.add({l, p}, rational(e[2]));
    }
    return A;
}

json to_json(const DoubleVector& A) {
    json e = json::array();
    for (const auto& [k, v] : A.entries()) e.push_back(json::array({k.first, k.second, to_string(v)}));
    return json{{"entries", e}};
}

Polynomial polynomial(const json& j) {
    return Polynomial{rationals(j.is_object() ? need(j, "coeffs") : j)};
}

WeightSeq weights(const json& j) {
    if (j.is_null()) return WeightSeq::harmonic();
    const std::string kind = text(need(j, "kind"), "weight kind");
    if (kind == "harmonic") return WeightSeq::harmonic();
    if (kind == "explicit") {
        if (j.contains("tail") && text(j["tail"], "weight tail") != "harmonic-from-last")
            fail("explicit weights support only the \"harmonic-from-last\" tail");
        return WeightSeq::explicit_values(rationals(need(j, "values")));
    }
    fail("unknown weight kind \"" + kind + "\"");
}

json to_json(const WeightSeq& w) {
    if (w.kind() == WeightSeq::Kind::Harmonic) return json{{"kind", "harmonic"}};
    return json{{"kind", "explicit"}, {"values", to_json(w.values())}, {"tail", "harmonic-from-last"}};
}

XSpaceSpec x_spec(const json& j) {
    const json& n = need(j, "n");
    if (n.contains("kind") && text(n["kind"], "n kind") != "explicit") fail("admissibility sequence kind must be \"explicit\"");
    std::vector<std::int64_t> values;
    const json& vs = need(n, "values");
    if (!vs.is_array()) fail("admissibility values must be a list");
    for (const auto& v : vs) values.push_back(integer(v, "admissibility value"));
    const std::string tail = n.contains("tail") ? text(n["tail"], "tail") : "geometric";
    AdmissibilitySeq::Tail t;
    if (tail == "geometric")
        t = AdmissibilitySeq::Tail::Geometric;
    else if (tail == "linear")
        t = AdmissibilitySeq::Tail::Linear;
    else if (tail == "constant")
        t = AdmissibilitySeq::Tail::Constant;
    else
        fail("unknown admissibility tail \"" + tail + "\"");
    XSpaceSpec s{AdmissibilitySeq(std::move(values), t)};
    if (j.contains("theta")) {
        const json& th = j["theta"];
        if (text(need(th, "kind"), "theta kind") != "geometric") fail("theta kind must be \"geometric\"");
        s.theta_ratio = rational(need(th, "ratio"));
    }
    s.validate();
    return s;
}

LayeredFamily family(const json& j) {
    if (j.contains("default")) return default_family(static_cast<int>(integer(j["default"], "default layer count")));
    const json& ls = need(j, "layers");
    if (!ls.is_array()) fail("layers must be a list");
    std::vector<Layer> layers;
    for (const auto& l : ls) {
        Layer L;
        L.delta = rationals(need(l, "delta"));
        for (const auto& m : need(l, "M")) L.M.push_back(integer(m, "M entry"));
        layers.push_back(std::move(L));
    }
    return LayeredFamily(std::move(layers));
}

LpExponent exponent(const json& j) {
    if (j.is_string() && (j.get<std::string>() == "inf" || j.get<std::string>() == "infinity")) return LpExponent::infinity();
    Rational p = rational(j);
    if (p < 1) fail("lp exponent must be >= 1");
    return LpExponent::of(p);
}

BranchCode code(const json& j) {
    BranchCode b;
    const json& e = j.is_object() ? need(j, "entries") : j;
    if (!e.is_array()) fail("branch code must be a list");
    for (const auto& v : e) {
        const auto x = integer(v, "code entry");
        if (x < 1) fail("code entries must be positive");
        b.entries.push_back(x);
    }
    if (j.is_object() && j.contains("terminated")) b.terminated = j["terminated"].get<bool>();
    return b;
}

json to_json(const BranchCode& b) { return json{{"entries", b.entries}, {"terminated", b.terminated}}; }

Bush bush(const json& j) {
    Bush b;
    for (const auto& p : need(j, "pairs")) {
        if (!p.is_array() || p.size() != 2) fail("bush pair must be [s, t]");
        b.pairs.emplace_back(node(p[0]), node(p[1]));
    }
    return b;
}

json to_json(const Bush& b) {
    json ps = json::array();
    for (const auto& [s, t] : b.pairs) ps.push_back(json::array({to_json(s), to_json(t)}));
    return json{{"pairs", ps}};
}

Grid grid(const json& j, std::uint64_t seed) {
    Grid g;
    g.seed = seed;
    if (j.is_null()) return g;
    if (j.contains("random")) g.random = static_cast<std::size_t>(integer(j["random"], "grid random count"));
    if (j.contains("units")) g.units = j["units"].get<bool>();
    if (j.contains("signs")) g.signs = j["signs"].get<bool>();
    if (j.contains("extra"))
        for (const auto& p : j["extra"]) g.extra.push_back(rationals(p));
    return g;
}

json to_json(const SchreierWitness& w) { return json{{"n", w.n}, {"k", w.k}}; }

SchreierWitness schreier_witness(const json& j) {
    SchreierWitness w;
    w.n = static_cast<std::size_t>(integer(need(j, "n"), "witness n"));
    for (const auto& k : need(j, "k")) w.k.push_back(integer(k, "witness k"));
    return w;
}

json to_json(const std::vector<XBlock>& blocks) {
    json out = json::array();
    for (const auto& b : blocks) out.push_back(json{{"interval", {b.lo, b.hi}}, {"sub", to_json(*b.sub)}});
    return out;
}

json to_json(const XWitness& w) {
    if (w.leaf) return json{{"leaf", w.leaf_index}};
    json groups = json::array();
    for (const auto& g : w.groups) {
        json o{{"levels", {g.first, g.last}}};
        if (g.self)
            o["self"] = true;
        else
            o["blocks"] = to_json(g.blocks);
        groups.push_back(o);
    }
    return json{{"k", w.k}, {"groups", groups}};
}

std::vector<XBlock> x_blocks(const json& j) {
    std::vector<XBlock> out;
    if (!j.is_array()) fail("witness blocks must be a list");
    for (const auto& b : j) {
        const json& iv = need(b, "interval");
        if (!iv.is_array() || iv.size() != 2) fail("witness interval must be [lo, hi]");
        out.push_back({integer(iv[0], "interval"), integer(iv[1], "interval"), x_witness(need(b, "sub"))});
    }
    return out;
}

XWitnessPtr x_witness(const json& j) {
    auto w = std::make_shared<XWitness>();
    if (j.contains("leaf")) {
        w->leaf_index = integer(j["leaf"], "leaf index");
        return w;
    }
    w->leaf = false;
    w->k = integer(need(j, "k"), "witness k");
    for (const auto& g : need(j, "groups")) {
        const json& lv = need(g, "levels");
        if (!lv.is_array() || lv.size() != 2) fail("witness levels must be [first, last]");
        XLevelGroup grp;
        grp.first = integer(lv[0], "levels");
        grp.last = integer(lv[1], "levels");
        grp.self = g.contains("self") && g["self"].get<bool>();
        if (!grp.self) grp.blocks = x_blocks(need(g, "blocks"));
        w->groups.push_back(std::move(grp));
    }
    return w;
}

json to_json(const TWitness& w) {
    if (w.leaf) return json{{"leaf", w.leaf_index}};
    json bl = json::array();
    for (const auto& b : w.blocks) bl.push_back(json{{"interval", {b.lo, b.hi}}, {"sub", to_json(*b.sub)}});
    return json{{"blocks", bl}};
}

TWitnessPtr t_witness(const json& j) {
    auto w = std::make_shared<TWitness>();
    if (j.contains("leaf")) {
        w->leaf_index = integer(j["leaf"], "leaf index");
        return w;
    }
    w->leaf = false;
    for (const auto& b : need(j, "blocks")) {
        const json& iv = need(b, "interval");
        if (!iv.is_array() || iv.size() != 2) fail("witness interval must be [lo, hi]");
        w->blocks.push_back({integer(iv[0], "interval"), integer(iv[1], "interval"), t_witness(need(b, "sub"))});
    }
    return w;
}

json to_json(const std::vector<ChainLink>& chain) {
    json out = json::array();
    for (const auto& l : chain) out.push_back(json{{"bush", to_json(l.bush)}, {"code", to_json(l.code)}});
    return out;
}

std::vector<ChainLink> chain(const json& j) {
    std::vector<ChainLink> out;
    if (!j.is_array()) fail("chain must be a list");
    for (const auto& l : j) out.push_back({bush(need(l, "bush")), code(need(l, "code"))});
    return out;
}

json to_json(const YWitness& w) {
    if (w.leaf) return json{{"leaf", to_json(w.leaf_node)}};
    return json{{"chain", to_json(w.chain)}};
}

YWitness y_witness(const json& j) {
    YWitness w;
    if (j.contains("leaf")) {
        w.leaf_node = node(j["leaf"]);
        return w;
    }
    w.leaf = false;
    w.chain = chain(need(j, "chain"));
    return w;
}

json to_json(const HostWitness& w) {
    if (w.level < 0) return json{{"level", nullptr}};
    return json{{"level", w.level}, {"layer", w.layer}, {"i", w.inner.i}, {"F", w.inner.F}};
}

HostWitness host_witness(const json& j) {
    HostWitness w;
    if (need(j, "level").is_null()) return w;
    w.level = integer(j["level"], "witness level");
    w.layer = static_cast<int>(integer(need(j, "layer"), "witness layer"));
    w.inner.i = static_cast<std::size_t>(integer(need(j, "i"), "witness i"));
    for (const auto& f : need(j, "F")) w.inner.F.push_back(integer(f, "witness F"));
    return w;
}

Space space(const json& j) {
    Space s;
    s.echo = j;
    s.kind = text(need(j, "kind"), "kind");
    const json none;
    const json& wj = j.contains("w") ? j["w"] : none;
    if (s.kind == "lp") {
        s.p = exponent(need(j, "p"));
        s.oracle = lp_oracle(s.p);
    } else if (s.kind == "lorentz") {
        s.w = weights(wj);
        s.oracle = lorentz_oracle(s.w);
    } else if (s.kind == "schreier_lorentz") {
        s.w = weights(wj);
        const std::string r = j.contains("reading") ? text(j["reading"], "reading") : "rearranged";
        if (r == "original")
            s.reading = SchreierReading::Original;
        else if (r != "rearranged")
            fail("reading must be \"rearranged\" or \"original\"");
        s.oracle = schreier_lorentz_oracle(s.w, s.reading);
    } else if (s.kind == "t_dw1") {
        s.t.w = weights(wj);
        const std::string p = j.contains("pairing") ? text(j["pairing"], "pairing") : "sorted";
        if (p == "literal")
            s.t.pairing = BlockPairing::Literal;
        else if (p != "sorted")
            fail("pairing must be \"sorted\" or \"literal\"");
        s.oracle = t_dw1_oracle(s.t);
    } else if (s.kind == "space_x") {
        s.x = x_spec(j);
        s.oracle = space_x_oracle(s.x);
    } else if (s.kind == "space_y") {
        s.oracle = space_y_oracle();
    } else if (s.kind == "layered_model") {
        s.model = ModelSpace::from(family(j));
        if (!s.model->monotone) {
            auto c = check_layer_monotone(s.model->fam);
            fail("layered family is not monotone at layer " + std::to_string(c.level) + ", index " +
                 std::to_string(c.i));
        }
        s.oracle = std::make_shared<ModelOracle>(*s.model);
    } else if (s.kind == "combine_upper" || s.kind == "max_combine") {
        std::vector<OraclePtr> kids;
        const json& ch = need(j, "children");
        if (!ch.is_array()) fail("children must be a list");
        for (const auto& c : ch) kids.push_back(space(c).oracle);
        s.oracle = s.kind == "max_combine" ? max_combine(std::move(kids)) : combine_upper(std::move(kids), rationals(need(j, "C")));
    } else if (s.kind == "scaled") {
        s.oracle = scaled_oracle(rational(need(j, "c")), space(need(j, "child")).oracle);
    } else {
        fail("unknown space kind \"" + s.kind + "\"");
    }
    return s;
}

}  // namespace sn::io
