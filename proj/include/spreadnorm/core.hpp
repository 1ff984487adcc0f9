#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sn {

using Rational = mpq_class;
using Integer = mpz_class;

enum class ErrorKind { Invalid = 2, CapExceeded = 3 };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(const std::string& msg) { throw Error(ErrorKind::Invalid, msg); }
[[noreturn]] inline void cap_exceeded(const std::string& msg) { throw Error(ErrorKind::CapExceeded, msg); }

// "p/q" with q > 0; integers print without the denominator.
std::string to_string(const Rational& q);
Rational parse_rational(std::string_view text);
Rational pow(const Rational& base, unsigned long exp);
int compare(const Rational& a, const Rational& b);

template <class Idx>
class SparseVector {
public:
    using index_type = Idx;
    using map_type = std::map<Idx, Rational>;

    SparseVector() = default;
    SparseVector(std::initializer_list<std::pair<const Idx, Rational>> init) {
        for (const auto& [i, v] : init) set(i, v);
    }

    void set(const Idx& i, const Rational& v) {
        if (sgn(v) == 0)
            entries_.erase(i);
        else
            entries_[i] = v;
    }
    void add(const Idx& i, const Rational& v) { set(i, get(i) + v); }
    Rational get(const Idx& i) const {
        auto it = entries_.find(i);
        return it == entries_.end() ? Rational(0) : it->second;
    }

    const map_type& entries() const noexcept { return entries_; }
    bool empty() const noexcept { return entries_.empty(); }
    std::size_t size() const noexcept { return entries_.size(); }

    std::vector<Idx> support() const {
        std::vector<Idx> s;
        s.reserve(entries_.size());
        for (const auto& kv : entries_) s.push_back(kv.first);
        return s;
    }

    Rational max_abs() const {
        Rational m = 0;
        for (const auto& kv : entries_) {
            Rational a = abs(kv.second);
            if (a > m) m = a;
        }
        return m;
    }

    SparseVector scaled(const Rational& c) const {
        SparseVector r;
        if (sgn(c) == 0) return r;
        for (const auto& [i, v] : entries_) r.entries_.emplace(i, Rational(v * c));
        return r;
    }

    SparseVector& operator+=(const SparseVector& o) {
        for (const auto& [i, v] : o.entries_) add(i, v);
        return *this;
    }
    SparseVector& operator-=(const SparseVector& o) {
        for (const auto& [i, v] : o.entries_) add(i, -v);
        return *this;
    }
    friend SparseVector operator+(SparseVector a, const SparseVector& b) { return a += b; }
    friend SparseVector operator-(SparseVector a, const SparseVector& b) { return a -= b; }
    friend bool operator==(const SparseVector& a, const SparseVector& b) { return a.entries_ == b.entries_; }

    template <class Pred>
    SparseVector filtered(Pred keep) const {
        SparseVector r;
        for (const auto& [i, v] : entries_)
            if (keep(i)) r.entries_.emplace(i, v);
        return r;
    }

private:
    map_type entries_;
};

using Vec = SparseVector<std::int64_t>;

// Sorted, duplicate-free index set.
template <class Idx>
class FiniteSet {
public:
    FiniteSet() = default;
    FiniteSet(std::vector<Idx> items) : items_(std::move(items)) {
        std::sort(items_.begin(), items_.end());
        items_.erase(std::unique(items_.begin(), items_.end()), items_.end());
    }
    FiniteSet(std::initializer_list<Idx> init) : FiniteSet(std::vector<Idx>(init)) {}

    const std::vector<Idx>& items() const noexcept { return items_; }
    bool empty() const noexcept { return items_.empty(); }
    std::size_t size() const noexcept { return items_.size(); }
    bool contains(const Idx& i) const { return std::binary_search(items_.begin(), items_.end(), i); }
    const Idx& min() const { return items_.front(); }
    const Idx& max() const { return items_.back(); }

    // max(*this) < min(other)
    bool precedes(const FiniteSet& other) const {
        return empty() || other.empty() || items_.back() < other.items_.front();
    }

    FiniteSet intersect(const FiniteSet& o) const {
        std::vector<Idx> r;
        std::set_intersection(items_.begin(), items_.end(), o.items_.begin(), o.items_.end(), std::back_inserter(r));
        return FiniteSet(std::move(r));
    }

    friend bool operator==(const FiniteSet& a, const FiniteSet& b) { return a.items_ == b.items_; }

private:
    std::vector<Idx> items_;
};

template <class Idx>
SparseVector<Idx> restrict(const SparseVector<Idx>& x, const FiniteSet<Idx>& e) {
    return x.filtered([&](const Idx& i) { return e.contains(i); });
}

// Restriction of x to the integer interval [lo, hi].
inline Vec restrict_interval(const Vec& x, std::int64_t lo, std::int64_t hi) {
    return x.filtered([&](std::int64_t i) { return i >= lo && i <= hi; });
}

template <class Idx>
std::vector<Rational> decreasing_rearrangement(const SparseVector<Idx>& x) {
    std::vector<Rational> r;
    r.reserve(x.size());
    for (const auto& kv : x.entries()) r.push_back(abs(kv.second));
    std::sort(r.begin(), r.end(), [](const Rational& a, const Rational& b) { return a > b; });
    return r;
}

// Every split of s into at most max_blocks nonempty consecutive blocks.
template <class Idx>
void for_each_successive_partition(const FiniteSet<Idx>& s, int max_blocks,
                                   const std::function<void(const std::vector<FiniteSet<Idx>>&)>& visit) {
    if (max_blocks < 1) fail("max_blocks must be >= 1");
    const auto& items = s.items();
    const std::size_t n = items.size();
    if (n == 0) return;
    std::vector<std::size_t> cuts;
    std::function<void(std::size_t)> rec = [&](std::size_t start) {
        if (static_cast<int>(cuts.size()) + 1 > max_blocks) return;
        // the last block runs from `start` to the end
        std::vector<FiniteSet<Idx>> blocks;
        std::size_t prev = 0;
        for (std::size_t c : cuts) {
            blocks.emplace_back(std::vector<Idx>(items.begin() + prev, items.begin() + c));
            prev = c;
        }
        blocks.emplace_back(std::vector<Idx>(items.begin() + prev, items.end()));
        visit(blocks);
        for (std::size_t c = start; c < n; ++c) {
            cuts.push_back(c);
            rec(c + 1);
            cuts.pop_back();
        }
    };
    rec(1);
}

template <class Idx>
std::vector<std::vector<FiniteSet<Idx>>> enumerate_successive_partitions(const FiniteSet<Idx>& s, int max_blocks) {
    std::vector<std::vector<FiniteSet<Idx>>> out;
    for_each_successive_partition<Idx>(s, max_blocks, [&](const auto& p) { out.push_back(p); });
    return out;
}

}  // namespace sn
