#pragma once

#include "io.hpp"

namespace sn::cmd {

using io::json;

// Every report carries "ok"; false means a checked inequality or recheck failed.
json norm(const io::Space& s, const json& vector, const json& opts);
json verify(const std::string& check, const json& params);
json sm_growth(const io::Space& s, const json& params);
json sm_estimate(const io::Space& s, const json& params);
json dominate(const io::Space& a, const io::Space& b, const json& params);
json dbasis(const io::Space& a, const io::Space& b, const json& params);
json krivine(const io::Space& s, const json& params);
json op(const std::string& action, const json& params);

}  // namespace sn::cmd
