#include "spreadnorm.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

using json = nlohmann::ordered_json;

namespace {

struct Usage : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Usage("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json parse_file(const std::string& path) {
    try {
        return json::parse(slurp(path));
    } catch (const json::parse_error& e) {
        throw Usage("malformed JSON in " + path + ": " + e.what());
    }
}

// Flag values: JSON when they parse as JSON (other than floats), otherwise plain strings such as "1/3".
json guess(const std::string& v) {
    try {
        json j = json::parse(v);
        if (!j.is_number_float()) return j;
    } catch (const json::parse_error&) {
    }
    return v;
}

class Space {
public:
    explicit Space(const std::string& path) {
        const std::string text = slurp(path);
        const int rc = sn_space_new(text.c_str(), &h_);
        if (rc != SN_OK) throw std::make_pair(rc, std::string(sn_last_error()));
    }
    ~Space() { sn_space_free(h_); }
    Space(const Space&) = delete;
    Space& operator=(const Space&) = delete;
    const sn_space* get() const { return h_; }

private:
    sn_space* h_ = nullptr;
};

int deliver(int rc, char* report, const std::string& out) {
    if (report) {
        if (out.empty()) {
            std::cout << report;
        } else {
            std::ofstream f(out);
            if (!f) {
                sn_string_free(report);
                std::cerr << "error: cannot write " << out << "\n";
                return SN_ERR_INVALID;
            }
            f << report;
        }
        sn_string_free(report);
    }
    if (rc == SN_CHECK_FAILED) std::cerr << "check failed\n";
    if (rc >= SN_ERR_INVALID) std::cerr << "error: " << sn_last_error() << "\n";
    return rc;
}

// Named flags that are forwarded into the parameter object.
struct Forward {
    std::map<std::string, std::string> values;

    void add(CLI::App* app, const std::string& flag, const std::string& key, const std::string& help) {
        app->add_option_function<std::string>(
            "--" + flag, [this, key](const std::string& v) { values[key] = v; }, help);
    }

    json build(const std::string& extra) const {
        json p = json::object();
        if (!extra.empty()) {
            p = guess(extra);
            if (!p.is_object()) throw Usage("--params must be a JSON object");
        }
        for (const auto& [k, v] : values) p[k] = guess(v);
        return p;
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact norm evaluation and verification reports for sequence spaces"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string out, params_text;
    std::uint64_t seed = 1;
    bool seed_given = false;
    app.add_option("--out", out, "write the report to this file");
    app.add_option_function<std::uint64_t>(
        "--seed", [&](const std::uint64_t& s) { seed = s, seed_given = true; }, "random seed");

    // norm
    auto* norm = app.add_subcommand("norm", "evaluate a norm with witness");
    std::string spec_path, vec_text, vec_file;
    int seminorm = 0;
    bool recheck = false;
    norm->add_option("--spec", spec_path, "space spec file")->required();
    norm->add_option("--vec", vec_text, "vector as JSON");
    norm->add_option("--vec-file", vec_file, "vector JSON file");
    norm->add_option("--seminorm", seminorm, "seminorm index (space_x)");
    norm->add_flag("--recheck", recheck, "re-evaluate the emitted witness");

    // verify
    auto* verify = app.add_subcommand("verify", "check an inequality on generated or supplied inputs");
    std::string check, x_spec, model_path;
    Forward vf;
    verify->add_option("check", check, "eq3a, sandwich34, eq24, lemma24, lemma25, lemma35, eq22, eq1")->required();
    verify->add_option("--spec", x_spec, "space_x spec file");
    verify->add_option("--model", model_path, "layered_model spec file");
    verify->add_option("--params", params_text, "extra parameters as a JSON object");
    for (const char* f : {"N", "trials", "m", "k", "K", "K1", "K2", "code", "x", "w", "eps", "blocks", "lambda", "p", "n",
                          "positions", "count", "levels"})
        vf.add(verify, f, f, "");
    vf.add(verify, "block-len", "block_len", "entries per generated block");

    // sm
    auto* sm = app.add_subcommand("sm", "spreading-model tables");
    sm->require_subcommand(1);
    sm->fallthrough();
    auto* growth = sm->add_subcommand("growth", "g(n) for n <= N");
    auto* estimate = sm->add_subcommand("estimate", "spread-out evaluations of one coefficient vector");
    std::string sm_spec;
    Forward gf, ef;
    growth->add_option("--spec", sm_spec, "space spec file")->required();
    gf.add(growth, "N", "N", "largest n");
    gf.add(growth, "lambda", "lambda", "comparison sequence as JSON list");
    gf.add(growth, "window", "window", "stabilization window");
    estimate->add_option("--spec", sm_spec, "space spec file")->required();
    ef.add(estimate, "a", "a", "coefficients as JSON list");
    ef.add(estimate, "shifts", "shifts", "JSON list of shifts");
    ef.add(estimate, "gaps", "gaps", "JSON list of gaps");
    ef.add(estimate, "window", "window", "stabilization window");

    // dominate / dbasis
    std::string a_path, b_path;
    Forward df;
    auto* dominate = app.add_subcommand("dominate", "grid lower bound for the domination constant of b by a");
    auto* dbasis = app.add_subcommand("dbasis", "grid lower bound for the basis distance");
    for (auto* c : {dominate, dbasis}) {
        c->add_option("--a", a_path, "first space spec file")->required();
        c->add_option("--b", b_path, "second space spec file")->required();
        df.add(c, "n", "n", "vector length");
        df.add(c, "grid", "grid", "grid as JSON object");
    }

    // krivine
    auto* kriv = app.add_subcommand("krivine", "block search for l_p^n");
    std::string k_spec;
    Forward kf;
    kriv->add_option("--spec", k_spec, "space spec file")->required();
    for (const char* f : {"p", "n", "budget", "grid"}) kf.add(kriv, f, f, "");
    kf.add(kriv, "m-max", "m_max", "largest block length");

    // op
    auto* op = app.add_subcommand("op", "operator T on the model space");
    op->require_subcommand(1);
    op->fallthrough();
    std::string op_model;
    Forward of;
    auto* certify = op->add_subcommand("certify", "separation certificate for p(T) - lambda I");
    auto* apply = op->add_subcommand("apply", "p(T) A");
    auto* monotone = op->add_subcommand("monotone", "check the layer monotonicity condition");
    certify->add_option("--model", op_model, "layered_model spec file");
    monotone->add_option("--model", op_model, "layered_model spec file")->required();
    for (const char* f : {"poly", "lambda", "level", "J"}) of.add(certify, f, f, "");
    for (const char* f : {"poly", "A"}) of.add(apply, f, f, "");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return SN_ERR_INVALID;
    }

    try {
        char* report = nullptr;
        int rc = SN_OK;
        auto with_seed = [&](json p) {
            if (seed_given || !p.contains("seed")) p["seed"] = seed;
            return p.dump();
        };
        if (*norm) {
            if (vec_text.empty() == vec_file.empty()) throw Usage("give exactly one of --vec and --vec-file");
            const std::string v = vec_file.empty() ? vec_text : slurp(vec_file);
            Space s(spec_path);
            json opts{{"recheck", recheck}};
            if (seminorm != 0) opts["seminorm"] = seminorm;
            rc = sn_norm(s.get(), v.c_str(), opts.dump().c_str(), &report);
        } else if (*verify) {
            json p = vf.build(params_text);
            if (!x_spec.empty()) p["spec"] = parse_file(x_spec);
            if (!model_path.empty()) p["model"] = parse_file(model_path);
            rc = sn_verify(check.c_str(), with_seed(p).c_str(), &report);
        } else if (*growth) {
            Space s(sm_spec);
            rc = sn_sm_growth(s.get(), gf.build("").dump().c_str(), &report);
        } else if (*estimate) {
            Space s(sm_spec);
            rc = sn_sm_estimate(s.get(), ef.build("").dump().c_str(), &report);
        } else if (*dominate || *dbasis) {
            Space a(a_path), b(b_path);
            const std::string p = with_seed(df.build(""));
            rc = *dominate ? sn_dominate(a.get(), b.get(), p.c_str(), &report)
                           : sn_dbasis(a.get(), b.get(), p.c_str(), &report);
        } else if (*kriv) {
            Space s(k_spec);
            rc = sn_krivine(s.get(), with_seed(kf.build("")).c_str(), &report);
        } else if (*op) {
            json p = of.build("");
            if (!op_model.empty()) p["model"] = parse_file(op_model);
            const char* action = *certify ? "certify" : *apply ? "apply" : "monotone";
            rc = sn_op(action, p.dump().c_str(), &report);
        }
        return deliver(rc, report, out);
    } catch (const Usage& e) {
        std::cerr << "error: " << e.what() << "\n";
        return SN_ERR_INVALID;
    } catch (const std::pair<int, std::string>& e) {
        std::cerr << "error: " << e.second << "\n";
        return e.first;
    }
}
