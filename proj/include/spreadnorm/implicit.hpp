#pragma once

#include "spreadnorm/classical.hpp"

#include <memory>

namespace sn {

// Non-decreasing sequence of positive integers given by a prefix and a continuation rule.
class AdmissibilitySeq {
public:
    enum class Tail { Geometric, Linear, Constant };

    AdmissibilitySeq() : AdmissibilitySeq({1}, Tail::Linear) {}
    AdmissibilitySeq(std::vector<std::int64_t> values, Tail tail);

    std::int64_t at(std::int64_t i) const;  // 1-based
    const std::vector<std::int64_t>& values() const noexcept { return values_; }
    Tail tail() const noexcept { return tail_; }

private:
    std::vector<std::int64_t> values_;
    Tail tail_;
};

struct XSpaceSpec {
    AdmissibilitySeq n;
    Rational theta_ratio{1, 3};  // theta_i = ratio^i

    Rational theta(std::int64_t i) const;
    Rational theta_sum(std::int64_t first, std::int64_t last) const;
    void validate() const;
};

struct XWitness;
using XWitnessPtr = std::shared_ptr<const XWitness>;

struct XBlock {
    std::int64_t lo = 0, hi = 0;  // integer interval; lo is a support point
    XWitnessPtr sub;              // witness for the restriction to [lo, hi]
};

// Levels first..last all use the same family; `self` means the single block
// equal to the whole current vector.
struct XLevelGroup {
    std::int64_t first = 1, last = 1;
    bool self = false;
    std::vector<XBlock> blocks;
};

struct XWitness {
    bool leaf = true;
    std::int64_t leaf_index = 0;  // coordinate attaining the sup norm
    std::int64_t k = 0;
    std::vector<XLevelGroup> groups;
};

struct XNormResult {
    Rational value;
    XWitnessPtr witness;
};

struct SeminormResult {
    Rational value;
    std::vector<XBlock> blocks;
};

XNormResult x_norm(const XSpaceSpec& spec, const Vec& x);
SeminormResult x_seminorm(const XSpaceSpec& spec, const Vec& x, std::int64_t i);

Rational recheck(const XSpaceSpec& spec, const Vec& x, const XWitness& w);
Rational recheck_seminorm(const XSpaceSpec& spec, const Vec& x, std::int64_t i, const std::vector<XBlock>& blocks);

enum class BlockPairing { Sorted, Literal };

struct TSpec {
    WeightSeq w = WeightSeq::harmonic();
    BlockPairing pairing = BlockPairing::Sorted;
};

struct TWitness;
using TWitnessPtr = std::shared_ptr<const TWitness>;

struct TBlock {
    std::int64_t lo = 0, hi = 0;
    TWitnessPtr sub;
};

struct TWitness {
    bool leaf = true;
    std::int64_t leaf_index = 0;
    std::vector<TBlock> blocks;  // admissible: blocks.size() <= blocks[0].lo
};

struct TNormResult {
    Rational value;
    TWitnessPtr witness;
};

TNormResult t_dw1_norm(const TSpec& spec, const Vec& x);
Rational recheck(const TSpec& spec, const Vec& x, const TWitness& w);

// Direct evaluation of the defining equations over all successive set families.
enum class OracleMode { SpaceX, TsirelsonLorentz };
inline constexpr std::size_t kBruteForceCap = 7;

struct BruteForceSpec {
    OracleMode mode = OracleMode::SpaceX;
    XSpaceSpec x;
    TSpec t;
};

Rational brute_force_norm(const BruteForceSpec& spec, const Vec& x, std::size_t cap = kBruteForceCap);

struct Eq1Row {
    std::int64_t k = 0;
    Rational p;
    Enclosure value;
};

std::vector<Eq1Row> eq1_report(const std::vector<Integer>& n, const Rational& p, std::int64_t K);

// Inductive choice with p_k = 1 + 1/k: each n_k is picked so the k-th value exceeds k.
struct Eq1Recipe {
    std::vector<Integer> n;
    std::vector<Eq1Row> rows;
};

Eq1Recipe eq1_recipe(std::int64_t K);

}  // namespace sn
