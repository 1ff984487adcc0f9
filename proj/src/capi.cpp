#include "spreadnorm.h"

#include "commands.hpp"

#include <cstring>

struct sn_space {
    sn::io::Space s;
};

namespace {

thread_local std::string last_error;

char* dup(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out) std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

sn::io::json params(const char* text) {
    if (!text || !*text) return sn::io::json::object();
    return sn::io::parse(text, "parameters");
}

template <class F>
int guard(F&& f) {
    last_error.clear();
    try {
        return f();
    } catch (const sn::Error& e) {
        last_error = e.what();
        return e.kind() == sn::ErrorKind::CapExceeded ? SN_ERR_CAP : SN_ERR_INVALID;
    } catch (const nlohmann::json::exception& e) {
        last_error = std::string("schema error: ") + e.what();
        return SN_ERR_INVALID;
    } catch (const std::bad_alloc&) {
        last_error = "out of memory";
        return SN_ERR_CAP;
    } catch (const std::exception& e) {
        last_error = e.what();
        return SN_ERR_INVALID;
    }
}

int emit(const sn::io::json& r, char** report) {
    if (!report) sn::fail("report pointer is null");
    *report = dup(r.dump(2) + "\n");
    if (!*report) throw std::bad_alloc();
    return r.value("ok", false) ? SN_OK : SN_CHECK_FAILED;
}

const sn::io::Space& need(const sn_space* s) {
    if (!s) sn::fail("space handle is null");
    return s->s;
}

}  // namespace

extern "C" {

int sn_space_new(const char* spec_json, sn_space** out) {
    return guard([&] {
        if (!out) sn::fail("output handle pointer is null");
        if (!spec_json) sn::fail("spec is null");
        *out = new sn_space{sn::io::space(sn::io::parse(spec_json, "space spec"))};
        return SN_OK;
    });
}

void sn_space_free(sn_space* space) { delete space; }

const char* sn_space_kind(const sn_space* space) { return space ? space->s.kind.c_str() : ""; }

int sn_norm(const sn_space* space, const char* vector_json, const char* opts_json, char** report) {
    return guard([&] {
        if (!vector_json) sn::fail("vector is null");
        return emit(sn::cmd::norm(need(space), sn::io::parse(vector_json, "vector"), params(opts_json)), report);
    });
}

int sn_verify(const char* check, const char* params_json, char** report) {
    return guard([&] {
        if (!check) sn::fail("check name is null");
        return emit(sn::cmd::verify(check, params(params_json)), report);
    });
}

int sn_sm_growth(const sn_space* space, const char* params_json, char** report) {
    return guard([&] { return emit(sn::cmd::sm_growth(need(space), params(params_json)), report); });
}

int sn_sm_estimate(const sn_space* space, const char* params_json, char** report) {
    return guard([&] { return emit(sn::cmd::sm_estimate(need(space), params(params_json)), report); });
}

int sn_dominate(const sn_space* a, const sn_space* b, const char* params_json, char** report) {
    return guard([&] { return emit(sn::cmd::dominate(need(a), need(b), params(params_json)), report); });
}

int sn_dbasis(const sn_space* a, const sn_space* b, const char* params_json, char** report) {
    return guard([&] { return emit(sn::cmd::dbasis(need(a), need(b), params(params_json)), report); });
}

int sn_krivine(const sn_space* space, const char* params_json, char** report) {
    return guard([&] { return emit(sn::cmd::krivine(need(space), params(params_json)), report); });
}

int sn_op(const char* action, const char* params_json, char** report) {
    return guard([&] {
        if (!action) sn::fail("action is null");
        return emit(sn::cmd::op(action, params(params_json)), report);
    });
}

const char* sn_last_error(void) { return last_error.c_str(); }

void sn_string_free(char* s) { std::free(s); }

}
