#pragma once

#include "spreadnorm/spreading.hpp"

namespace sn {

// (level, position), level >= 0, position >= 1
using DIndex = std::pair<std::int64_t, std::int64_t>;
using DoubleVector = SparseVector<DIndex>;

struct Polynomial {
    std::vector<Rational> coeffs;  // coeffs[i] multiplies t^i
    Rational at(const Rational& t) const;
    int degree() const;  // -1 for the zero polynomial
};

DoubleVector unit(std::int64_t level, std::int64_t j);
Vec level_slice(const DoubleVector& A, std::int64_t level);

struct MonotoneCheck {
    bool ok = true;
    int level = 0;       // first failing level (1-based), 0 when ok
    std::size_t i = 0;   // its failing index (1-based)
};

MonotoneCheck check_layer_monotone(const LayeredFamily& fam);

struct ModelSpace {
    LayeredFamily fam;  // layer l serves level l-1 and level l
    bool monotone = false;

    static ModelSpace from(LayeredFamily fam);  // runs the monotonicity check
    std::int64_t max_level() const { return fam.levels() - 1; }
};

// Layers 1..4 with delta_i = 2^{-(i-1)}, M_i = l * 4^{i-1}, i = 1..3.
LayeredFamily default_family(int layers = 4);

struct HostWitness {
    std::int64_t level = -1;  // data level attaining the max, -1 for A = 0
    int layer = 0;            // layer used on that level
    LayerWitness inner;
};

struct HostResult {
    Rational value;
    HostWitness witness;
};

HostResult host_norm(const ModelSpace& space, const DoubleVector& A);
Rational recheck(const ModelSpace& space, const DoubleVector& A, const HostWitness& w);

struct Sandwich {
    Rational lower, host, upper;
    bool holds() const { return lower <= host && host <= upper; }
};

Sandwich sandwich(const ModelSpace& space, const DoubleVector& A);

DoubleVector apply_T(const DoubleVector& A);
DoubleVector apply_power(const DoubleVector& A, std::int64_t i);
DoubleVector apply_poly(const Polynomial& p, const DoubleVector& A);
DoubleVector apply_poly_iterated(const Polynomial& p, const DoubleVector& A);

struct Certificate {
    Rational c_min, pairwise_min;
    bool failed = false;
    std::string note;
};

Certificate noncompact_certificate(const ModelSpace& space, const Polynomial& p, const Rational& lambda,
                                   std::int64_t level, std::int64_t J);

// For each n, generators[n][j] is w_j^{M_n}; kappa is the declared l1 equivalence constant.
struct KrivGenerators {
    std::vector<std::vector<Vec>> families;
    Rational kappa{1};

    // disjoint normalized blocks of `length` unit vectors, placed after `start`
    static KrivGenerators unit_blocks(std::size_t count_n, std::size_t count_j, std::int64_t length,
                                      std::int64_t start);
};

struct KrivRow {
    std::size_t n = 0;
    Rational bound;  // (1/9) delta_n ell1(M_n, a)
};

struct KrivReport {
    std::vector<Vec> y;
    Rational lhs;
    std::vector<KrivRow> rows;
    Rational sup_bound;
    bool holds = false;
};

KrivReport build_kriv_vectors(const std::vector<Rational>& delta, const std::vector<std::int64_t>& M,
                              const KrivGenerators& gens, const Vec& a, const Vec& y, const NormOracle& host);

struct FitViolation {
    std::size_t sample = 0;
    Rational lhs, rhs;
};

struct FitResult {
    std::vector<std::int64_t> M;
    std::vector<FitViolation> violations;
    bool ok() const { return violations.empty(); }
};

// violations of oracle(a) <= sup_n delta_n ell1(M_n, a) for a fixed family
std::vector<FitViolation> check_upper_family(const NormOracle& oracle, const std::vector<Vec>& samples,
                                             const std::vector<Rational>& delta, const std::vector<std::int64_t>& M);
FitResult fit_upper_family(const NormOracle& oracle, const std::vector<Vec>& samples,
                           const std::vector<Rational>& delta, std::int64_t M_cap = 1 << 12);

}  // namespace sn
