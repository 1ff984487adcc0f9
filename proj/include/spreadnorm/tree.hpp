#pragma once

#include "spreadnorm/core.hpp"

#include <compare>
#include <optional>

namespace sn {

// Node (level, index) of the dyadic tree, 0 <= index < 2^level.
struct TreeNode {
    int level = 0;
    std::uint64_t index = 0;

    static TreeNode make(int level, std::uint64_t index);
    TreeNode parent() const;
    TreeNode child(int bit) const { return make(level + 1, 2 * index + static_cast<std::uint64_t>(bit)); }

    auto operator<=>(const TreeNode&) const = default;
};

inline constexpr int kMaxTreeLevel = 62;

// a strictly above b on a root path
bool precedes(const TreeNode& a, const TreeNode& b);
inline bool precedes_eq(const TreeNode& a, const TreeNode& b) { return a == b || precedes(a, b); }
TreeNode meet(const TreeNode& a, const TreeNode& b);
// {u : a <= u <= b}, listed from a down to b; empty unless a <= b
std::vector<TreeNode> segment(const TreeNode& a, const TreeNode& b);
std::string to_string(const TreeNode& t);

using TreeVec = SparseVector<TreeNode>;

struct BranchCode {
    std::vector<std::int64_t> entries;
    bool terminated = true;  // false: further entries may follow

    friend bool operator==(const BranchCode&, const BranchCode&) = default;
};

// Number of weights fixed by the code entries alone.
std::size_t covered_length(const BranchCode& b);
// First m weights; for an extendable code m must not exceed covered_length.
std::vector<Rational> branch_weights(const BranchCode& b, std::size_t m);

// Root-to-depth path of the 0/1 branch whose 1s sit at positions b1, b1+b2, ...
std::vector<TreeNode> code_to_branch(const BranchCode& b, int depth);
// Inverse on paths from the root; the result is extendable.
BranchCode branch_to_code(const std::vector<TreeNode>& path);
// Code entries of the path from the root to t, plus the number of trailing 0 steps.
std::pair<std::vector<std::int64_t>, int> code_prefix(const TreeNode& t);
// Does the branch of b pass through t?
bool branch_contains(const BranchCode& b, const TreeNode& t);

struct Bush {
    std::vector<std::pair<TreeNode, TreeNode>> pairs;  // (s_j, t_j)
    std::size_t size() const { return pairs.size(); }
    friend bool operator==(const Bush&, const Bush&) = default;
};

struct BushCheck {
    bool ok = true;
    int violated = 0;  // 1..4: chain, s <= t, disjoint segments, segments off the stem
    std::string message;
};

BushCheck is_bush(const Bush& b);
std::vector<TreeNode> bush_nodes(const Bush& b);  // sorted
bool disjoint(const Bush& a, const Bush& b);

struct BushSeminorm {
    Rational value;
    BranchCode code;  // branch through s_n attaining the value
};

// Supremum over branches through s_n of sum_j w_{k+j} |x(t_j)|.
BushSeminorm bush_seminorm(const TreeVec& x, std::size_t k, const Bush& S);
// Same supremum by enumerating continuation entries up to `horizon`.
BushSeminorm bush_seminorm_search(const TreeVec& x, std::size_t k, const Bush& S, std::int64_t horizon);
// Weighted sum for one code, checking that it runs through s_n and covers the needed weights.
Rational evaluate_bush(const TreeVec& x, std::size_t k, const Bush& S, const BranchCode& code);

struct ChainLink {
    Bush bush;
    BranchCode code;
};

struct YWitness {
    bool leaf = true;
    TreeNode leaf_node;
    std::vector<ChainLink> chain;
};

struct YResult {
    Rational value;
    YWitness witness;
};

inline constexpr std::size_t kMaxClosure = 64;

YResult y_norm(const TreeVec& x);
Rational recheck(const TreeVec& x, const YWitness& w);
// Value of a chain of disjoint bushes starting at the given shift.
Rational chain_value(const TreeVec& x, const std::vector<ChainLink>& chain, std::size_t shift);

// Smallest number of leading code entries that forces w^(beta)_j <= w^(b)_j for j <= m.
struct ThresholdResult {
    std::size_t M = 0;
    bool exact_match_only = false;  // only b itself qualifies
};
ThresholdResult eq23_threshold(const BranchCode& b, std::size_t m);

struct Eq22Row {
    std::size_t k = 0;
    Rational partial_sum, lambda, ratio;
};

struct Eq22Result {
    BranchCode code;
    std::vector<Eq22Row> rows;
};

// lambda holds lambda_1..lambda_H.
Eq22Result eq22_builder(const std::vector<Rational>& lambda, std::size_t K);

struct SplitReport {
    Rational total;       // value of the given chain (shift 0)
    Rational head_bound;  // K * sup norm
    Rational tail;        // value of the remaining chain at shift K
    std::vector<ChainLink> tail_chain;
    bool bound_holds = false;  // tail >= total - head_bound
};

SplitReport lemma35_split(const TreeVec& x, const std::vector<ChainLink>& chain, std::size_t K);

}  // namespace sn
