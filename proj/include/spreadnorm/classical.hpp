#pragma once

#include "spreadnorm/core.hpp"

#include <optional>
#include <variant>

namespace sn {

// Closed interval [lo, hi] of rationals; exact when lo == hi.
struct Enclosure {
    Rational lo, hi;

    static Enclosure exact(const Rational& v) { return {v, v}; }
    bool is_exact() const { return lo == hi; }
    Enclosure operator+(const Enclosure& o) const { return {lo + o.lo, hi + o.hi}; }
    Enclosure scaled(const Rational& c) const;  // c >= 0
    static Enclosure max(const Enclosure& a, const Enclosure& b);
};

// Enclosure of q^(1/k) for q >= 0 with width at most `width`.
Enclosure root_enclosure(const Rational& q, unsigned long k, const Rational& width);

// 1 = w_1 >= w_2 >= ... > 0
class WeightSeq {
public:
    enum class Kind { Harmonic, Explicit };

    static WeightSeq harmonic();
    // Past the list: if the last value is v, continue 1/(1/v + 1), 1/(1/v + 2), ...
    static WeightSeq explicit_values(std::vector<Rational> values);

    Kind kind() const noexcept { return kind_; }
    const std::vector<Rational>& values() const noexcept { return values_; }
    Rational at(std::size_t n) const;  // 1-based
    std::vector<Rational> prefix(std::size_t m) const;

private:
    Kind kind_ = Kind::Harmonic;
    std::vector<Rational> values_;
};

struct LpExponent {
    std::optional<Rational> p;  // nullopt is infinity
    static LpExponent infinity() { return {}; }
    static LpExponent of(const Rational& q) { return {q}; }
    bool is_infinity() const { return !p.has_value(); }
};

inline const Rational& default_enclosure_width() {
    static const Rational w(1, Integer("1000000000000"));
    return w;
}

Enclosure lp_norm(const Vec& x, const LpExponent& p, const Rational& width = default_enclosure_width());

Rational lorentz_norm(const WeightSeq& w, const Vec& x);

enum class SchreierReading { Rearranged, Original };

struct SchreierWitness {
    std::size_t n = 0;
    std::vector<std::int64_t> k;  // n <= k_1 < ... < k_n
};

struct SchreierResult {
    Rational value;
    SchreierWitness witness;
};

SchreierResult schreier_lorentz_norm(const WeightSeq& w, const Vec& x,
                                     SchreierReading reading = SchreierReading::Rearranged);
Rational recheck(const WeightSeq& w, const Vec& x, const SchreierWitness& wit,
                 SchreierReading reading = SchreierReading::Rearranged);

Rational ell1_family_norm(std::int64_t M, const Vec& a);

struct Layer {
    std::vector<Rational> delta;
    std::vector<std::int64_t> M;  // strictly increasing
};

class LayeredFamily {
public:
    LayeredFamily() = default;
    explicit LayeredFamily(std::vector<Layer> layers);

    int levels() const noexcept { return static_cast<int>(layers_.size()); }
    const Layer& layer(int level) const;  // 1-based
    const std::vector<Layer>& layers() const noexcept { return layers_; }

private:
    std::vector<Layer> layers_;
};

struct LayerWitness {
    std::size_t i = 0;  // 1-based index into the level's (delta, M)
    std::vector<std::int64_t> F;
};

struct LayerResult {
    Rational value;
    LayerWitness witness;
};

LayerResult layer_norm(const LayeredFamily& fam, int level, const Vec& a);
Rational recheck(const LayeredFamily& fam, int level, const Vec& a, const LayerWitness& wit);

}  // namespace sn
