#pragma once

#include "spreadnorm/implicit.hpp"
#include "spreadnorm/tree.hpp"

#include <memory>
#include <optional>
#include <random>

namespace sn {

// Norm on finitely supported coefficient vectors indexed from 1.
class NormOracle {
public:
    virtual ~NormOracle() = default;
    virtual Enclosure eval(const Vec& a) const = 0;
    // value depends only on the ordered coefficients, not on where they sit
    virtual bool subsymmetric() const { return false; }
    virtual std::string name() const = 0;
};

using OraclePtr = std::shared_ptr<const NormOracle>;

OraclePtr lp_oracle(const LpExponent& p);
OraclePtr lorentz_oracle(const WeightSeq& w);
OraclePtr schreier_lorentz_oracle(const WeightSeq& w, SchreierReading reading);
OraclePtr t_dw1_oracle(const TSpec& spec);
OraclePtr space_x_oracle(const XSpaceSpec& spec);
// coordinate n sits on the tree node (floor(log2 n), n - 2^floor(log2 n))
OraclePtr space_y_oracle();
OraclePtr scaled_oracle(const Rational& c, OraclePtr inner);
// a -> sum_i 16 C_i^{-1} N_i(a)
OraclePtr combine_upper(std::vector<OraclePtr> oracles, std::vector<Rational> C);
OraclePtr max_combine(std::vector<OraclePtr> oracles);
// a -> N(sum_i a_i sum_j lambda_j e_{(i-1)m+j})
OraclePtr block_oracle(OraclePtr inner, std::vector<Rational> lambda);

TreeNode tree_node_of(std::int64_t n);
std::int64_t tree_position(const TreeNode& t);

struct SpreadingRow {
    std::int64_t shift = 0, gap = 0;
    Enclosure value;
};

struct SpreadingEstimate {
    std::vector<Rational> a;
    std::vector<SpreadingRow> table;  // shifts outer, gaps inner
    bool stabilized = false;
    std::optional<Enclosure> value;  // common value when stabilized or subsymmetric
    Rational residual;              // largest distance of a table entry from the value
};

inline constexpr std::size_t kDefaultWindow = 3;

// F(shift, gap) = N(sum_i a_i e_{shift + gap (i-1)}); needs n <= every shift.
SpreadingEstimate sm_estimate(const NormOracle& oracle, const std::vector<Rational>& a,
                              const std::vector<std::int64_t>& shifts, const std::vector<std::int64_t>& gaps,
                              std::size_t window = kDefaultWindow);

struct GrowthRow {
    std::int64_t n = 0;
    Enclosure g;
    Enclosure per_n;
    std::optional<Enclosure> per_lambda;
    bool stabilized = false;
};

std::vector<GrowthRow> growth_report(const NormOracle& oracle, std::int64_t N,
                                     const std::optional<std::vector<Rational>>& lambda = std::nullopt,
                                     std::size_t window = kDefaultWindow);

struct Grid {
    bool units = true;
    bool signs = true;  // all +-1 vectors, only used for n <= 10
    std::size_t random = 1000;
    std::uint64_t seed = 1;
    std::vector<std::vector<Rational>> extra;
};

std::vector<std::vector<Rational>> grid_points(const Grid& g, std::size_t n);
Vec vec_of(const std::vector<Rational>& a);

struct DominationReport {
    Rational C_lower;
    std::vector<Rational> argmax;
    std::size_t points = 0;
    bool exact = true;  // all ratios were computed from exact values
};

// max over the grid of N2(a)/N1(a), using lower ends of N2 and upper ends of N1
DominationReport domination_constant(const NormOracle& N1, const NormOracle& N2, std::size_t n, const Grid& grid);

struct DistanceReport {
    Rational d_lower;
    DominationReport forward;   // sup N2/N1
    DominationReport backward;  // sup N1/N2
};

DistanceReport basis_distance(const NormOracle& N1, const NormOracle& N2, std::size_t n, const Grid& grid);

struct KrivineTry {
    std::size_t m = 0;
    std::vector<Rational> lambda;
    Rational constant;
};

struct KrivineResult {
    KrivineTry best;
    std::vector<KrivineTry> averages;  // lambda = (1/m, ..., 1/m) for each m tried
    std::size_t evaluations = 0;
    bool budget_exhausted = false;
};

KrivineResult krivine_block_search(OraclePtr oracle, const LpExponent& p, std::size_t n, std::size_t m_max,
                                   std::size_t budget, const Grid& grid);

}  // namespace sn
