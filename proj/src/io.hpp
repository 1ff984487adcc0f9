#pragma once

#include "spreadnorm/operators.hpp"

#include <json.hpp>

namespace sn::io {

using json = nlohmann::ordered_json;

Rational rational(const json& j);
json to_json(const Rational& q);
json to_json(const Enclosure& e);  // "p/q" when exact, else {"lo","hi"}
std::vector<Rational> rationals(const json& j);
json to_json(const std::vector<Rational>& v);
std::int64_t integer(const json& j, const char* what);

// {"entries":[[i,"p/q"],...]} or the bare list
Vec vec(const json& j);
json to_json(const Vec& x);
TreeNode node(const json& j);
json to_json(const TreeNode& t);
TreeVec tree_vec(const json& j);
json to_json(const TreeVec& x);
DoubleVector double_vec(const json& j);
json to_json(const DoubleVector& A);

Polynomial polynomial(const json& j);
WeightSeq weights(const json& j);
json to_json(const WeightSeq& w);
XSpaceSpec x_spec(const json& j);
LayeredFamily family(const json& j);
LpExponent exponent(const json& j);
BranchCode code(const json& j);
json to_json(const BranchCode& b);
Bush bush(const json& j);
json to_json(const Bush& b);
Grid grid(const json& j, std::uint64_t seed);

json to_json(const SchreierWitness& w);
SchreierWitness schreier_witness(const json& j);
json to_json(const XWitness& w);
XWitnessPtr x_witness(const json& j);
json to_json(const std::vector<XBlock>& blocks);
std::vector<XBlock> x_blocks(const json& j);
json to_json(const TWitness& w);
TWitnessPtr t_witness(const json& j);
json to_json(const std::vector<ChainLink>& chain);
std::vector<ChainLink> chain(const json& j);
json to_json(const YWitness& w);
YWitness y_witness(const json& j);
json to_json(const HostWitness& w);
HostWitness host_witness(const json& j);

// A parsed space-spec file.
struct Space {
    std::string kind;
    json echo;
    LpExponent p;
    WeightSeq w = WeightSeq::harmonic();
    SchreierReading reading = SchreierReading::Rearranged;
    TSpec t;
    XSpaceSpec x;
    std::optional<ModelSpace> model;
    OraclePtr oracle;  // coefficient vectors indexed from 1
};

Space space(const json& j);

json parse(std::string_view text, const char* what);

}  // namespace sn::io
