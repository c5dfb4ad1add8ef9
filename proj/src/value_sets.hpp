#pragma once

// Satisfying sets of single predicates over one value kind, with the
// inclusion and intersection tests the covering and intersection relations
// reduce to.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <vector>

#include "sempub/model.hpp"

namespace sempub::detail {

// [lo, hi] minus a handful of excluded points.
struct IntSet {
    std::int64_t lo = std::numeric_limits<std::int64_t>::min();
    std::int64_t hi = std::numeric_limits<std::int64_t>::max();
    std::vector<std::int64_t> holes;

    static IntSet empty() { return IntSet{1, 0, {}}; }

    static IntSet of(RelOp op, std::int64_t v) {
        constexpr auto kMin = std::numeric_limits<std::int64_t>::min();
        constexpr auto kMax = std::numeric_limits<std::int64_t>::max();
        switch (op) {
            case RelOp::Eq: return IntSet{v, v, {}};
            case RelOp::Ne: return IntSet{kMin, kMax, {v}};
            case RelOp::Lt: return v == kMin ? empty() : IntSet{kMin, v - 1, {}};
            case RelOp::Le: return IntSet{kMin, v, {}};
            case RelOp::Gt: return v == kMax ? empty() : IntSet{v + 1, kMax, {}};
            case RelOp::Ge: return IntSet{v, kMax, {}};
        }
        return empty();
    }

    bool contains(std::int64_t v) const {
        return lo <= v && v <= hi && std::find(holes.begin(), holes.end(), v) == holes.end();
    }

    bool is_empty() const {
        if (lo > hi) return true;
        std::vector<std::int64_t> inside;
        for (auto h : holes) {
            if (lo <= h && h <= hi) inside.push_back(h);
        }
        std::sort(inside.begin(), inside.end());
        inside.erase(std::unique(inside.begin(), inside.end()), inside.end());
        // hi - lo + 1 values, computed without overflowing the full range.
        const auto span = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo);
        return span < inside.size();
    }

    IntSet intersect(const IntSet& o) const {
        IntSet r{std::max(lo, o.lo), std::min(hi, o.hi), holes};
        r.holes.insert(r.holes.end(), o.holes.begin(), o.holes.end());
        return r;
    }

    bool subset_of(const IntSet& o) const {
        constexpr auto kMin = std::numeric_limits<std::int64_t>::min();
        constexpr auto kMax = std::numeric_limits<std::int64_t>::max();
        if (is_empty()) return true;
        if (o.lo > kMin && !IntSet{lo, std::min(hi, o.lo - 1), holes}.is_empty()) return false;
        if (o.hi < kMax && !IntSet{std::max(lo, o.hi + 1), hi, holes}.is_empty()) return false;
        for (auto h : o.holes) {
            if (contains(h)) return false;
        }
        return true;
    }
};

// Subset of {false, true} as a bitmask.
inline unsigned bool_set(RelOp op, bool v) {
    const unsigned bit = v ? 2u : 1u;
    return op == RelOp::Eq ? bit : (3u & ~bit);
}

// Evaluates `lhs op rhs`. Values of different kinds never satisfy a
// relation; ordering operators hold only between integers.
inline bool evaluate(const Value& lhs, RelOp op, const Value& rhs) {
    if (lhs.index() != rhs.index()) return false;
    if (is_integer(lhs)) {
        const auto a = std::get<std::int64_t>(lhs);
        const auto b = std::get<std::int64_t>(rhs);
        switch (op) {
            case RelOp::Eq: return a == b;
            case RelOp::Ne: return a != b;
            case RelOp::Lt: return a < b;
            case RelOp::Le: return a <= b;
            case RelOp::Gt: return a > b;
            case RelOp::Ge: return a >= b;
        }
        return false;
    }
    switch (op) {
        case RelOp::Eq: return lhs == rhs;
        case RelOp::Ne: return lhs != rhs;
        default: return false;
    }
}

// Value part of predicate implication: every value satisfying `narrower`
// satisfies `wider`. Strings range over an unbounded domain.
inline bool value_implies(const Predicate& narrower, const Predicate& wider) {
    if (narrower.value.index() != wider.value.index()) {
        // Only an unsatisfiable predicate implies one of another kind.
        return is_integer(narrower.value) &&
               IntSet::of(narrower.op, std::get<std::int64_t>(narrower.value)).is_empty();
    }
    switch (kind_of(narrower.value)) {
        case ValueKind::Integer:
            return IntSet::of(narrower.op, std::get<std::int64_t>(narrower.value))
                .subset_of(IntSet::of(wider.op, std::get<std::int64_t>(wider.value)));
        case ValueKind::Boolean: {
            const unsigned n = bool_set(narrower.op, std::get<bool>(narrower.value));
            const unsigned w = bool_set(wider.op, std::get<bool>(wider.value));
            return (n & ~w) == 0;
        }
        case ValueKind::String:
            if (narrower.op == RelOp::Eq) return evaluate(narrower.value, wider.op, wider.value);
            // (!= v) only implies (!= v).
            return wider.op == RelOp::Ne && narrower.value == wider.value;
    }
    return false;
}

inline bool value_jointly_satisfiable(const Predicate& a, const Predicate& b) {
    if (a.value.index() != b.value.index()) return false;
    switch (kind_of(a.value)) {
        case ValueKind::Integer:
            return !IntSet::of(a.op, std::get<std::int64_t>(a.value))
                        .intersect(IntSet::of(b.op, std::get<std::int64_t>(b.value)))
                        .is_empty();
        case ValueKind::Boolean:
            return (bool_set(a.op, std::get<bool>(a.value)) & bool_set(b.op, std::get<bool>(b.value))) != 0;
        case ValueKind::String:
            if (a.op == RelOp::Eq) return evaluate(a.value, b.op, b.value);
            if (b.op == RelOp::Eq) return evaluate(b.value, a.op, a.value);
            return true;
    }
    return false;
}

}  // namespace sempub::detail
