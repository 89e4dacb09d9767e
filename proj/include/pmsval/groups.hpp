#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "pmsval/exact_real.hpp"

namespace pmsval {

// ---------------------------------------------------------------------------
// Rank-one components. Every component is a subgroup of R; components built
// from rationals are subgroups of Q, AdjoinedSurd adds one Z-multiple of an
// irrational quadratic surd.

struct Cyclic {
    Rational generator;  ///< positive
    friend bool operator==(const Cyclic&, const Cyclic&) = default;
};

/// scale * Z[1/p^inf]
struct PPowerDivisible {
    long p = 2;
    Rational scale{1};
    friend bool operator==(const PPowerDivisible&, const PPowerDivisible&) = default;
};

struct FullRational {
    friend bool operator==(const FullRational&, const FullRational&) = default;
};

/// The Z factor inserted by the rank construction.
struct FormalInteger {
    friend bool operator==(const FormalInteger&, const FormalInteger&) = default;
};

using RationalComponent = std::variant<Cyclic, PPowerDivisible, FullRational, FormalInteger>;

/// base + Z*tau with tau an irrational surd.
struct AdjoinedSurd {
    RationalComponent base;
    ExactReal tau;
    friend bool operator==(const AdjoinedSurd&, const AdjoinedSurd&) = default;
};

using Component = std::variant<Cyclic, PPowerDivisible, FullRational, FormalInteger, AdjoinedSurd>;

bool contains(const Component& c, const ExactReal& x);
/// Membership in the divisible hull Q (x) c inside R.
bool hull_contains(const Component& c, const ExactReal& x);
/// True when the component is order-dense in R (no smallest positive element).
bool is_dense(const Component& c);
/// A positive member, used as a step size when generating nearby members.
Rational unit_step(const Component& c);
/// The subgroup generated by c and r; throws InvalidAdjoin when r is a member.
Component adjoin(const Component& c, const ExactReal& r);
std::string describe(const Component& c);

// ---------------------------------------------------------------------------

/// Lexicographic product of rank-one components, most significant first.
struct GroupDescriptor {
    std::vector<Component> components;

    std::size_t arity() const noexcept { return components.size(); }
    friend bool operator==(const GroupDescriptor&, const GroupDescriptor&) = default;
};

/// Number of isolated subgroups, i.e. the sum of the component ranks.
int rank(const GroupDescriptor& g);
std::string describe(const GroupDescriptor& g);

/// A tuple of exact reals ordered lexicographically.
struct GroupElement {
    std::vector<ExactReal> coords;

    GroupElement() = default;
    explicit GroupElement(std::vector<ExactReal> c) : coords(std::move(c)) {}
    static GroupElement zero(std::size_t arity);

    std::size_t arity() const noexcept { return coords.size(); }
    std::string to_string() const;

    friend bool operator==(const GroupElement&, const GroupElement&) = default;
};

/// Lex comparison; throws DescriptorMismatch on differing arity.
std::strong_ordering compare(const GroupElement& x, const GroupElement& y);
inline bool operator<(const GroupElement& x, const GroupElement& y) { return compare(x, y) < 0; }
inline bool operator>(const GroupElement& x, const GroupElement& y) { return compare(x, y) > 0; }
inline bool operator<=(const GroupElement& x, const GroupElement& y) { return compare(x, y) <= 0; }
inline bool operator>=(const GroupElement& x, const GroupElement& y) { return compare(x, y) >= 0; }

GroupElement operator+(const GroupElement& x, const GroupElement& y);
GroupElement operator-(const GroupElement& x, const GroupElement& y);
GroupElement operator-(const GroupElement& x);
GroupElement scale(long n, const GroupElement& x);

bool contains(const GroupDescriptor& g, const GroupElement& x);
bool hull_contains(const GroupDescriptor& g, const GroupElement& x);

// ---------------------------------------------------------------------------

/// A coordinate of the completed line {-inf} u R u {+inf}.
struct ExtendedReal {
    enum class Tag { NegInf, Finite, PosInf };
    Tag tag = Tag::Finite;
    ExactReal value;

    static ExtendedReal finite(ExactReal v) { return {Tag::Finite, std::move(v)}; }
    static ExtendedReal pos_inf() { return {Tag::PosInf, {}}; }
    static ExtendedReal neg_inf() { return {Tag::NegInf, {}}; }
    bool is_finite() const noexcept { return tag == Tag::Finite; }

    friend bool operator==(const ExtendedReal&, const ExtendedReal&) = default;
};

std::strong_ordering operator<=>(const ExtendedReal& x, const ExtendedReal& y);

/// Finite group element, tuple carrying +-inf coordinates (sup/inf values), or
/// the value of 0.
class ExtendedValue {
public:
    ExtendedValue() : plus_infinity_(true) {}
    ExtendedValue(const GroupElement& g);  // NOLINT(google-explicit-constructor)
    static ExtendedValue plus_infinity() { return {}; }
    static ExtendedValue tuple(std::vector<ExtendedReal> coords);

    bool is_plus_infinity() const noexcept { return plus_infinity_; }
    bool is_finite() const;
    /// Throws std::logic_error unless is_finite().
    GroupElement element() const;
    const std::vector<ExtendedReal>& coords() const noexcept { return coords_; }
    std::size_t arity() const noexcept { return coords_.size(); }
    std::string to_string() const;

    ExtendedValue operator-() const;

    friend bool operator==(const ExtendedValue&, const ExtendedValue&) = default;

private:
    bool plus_infinity_ = false;
    std::vector<ExtendedReal> coords_;
};

/// Total order: +inf above everything; otherwise coordinatewise lex with
/// -inf < reals < +inf. Throws DescriptorMismatch on differing arity.
std::strong_ordering compare(const ExtendedValue& x, const ExtendedValue& y);
inline bool operator<(const ExtendedValue& x, const ExtendedValue& y) { return compare(x, y) < 0; }
inline bool operator>(const ExtendedValue& x, const ExtendedValue& y) { return compare(x, y) > 0; }
inline bool operator<=(const ExtendedValue& x, const ExtendedValue& y) { return compare(x, y) <= 0; }
inline bool operator>=(const ExtendedValue& x, const ExtendedValue& y) { return compare(x, y) >= 0; }

/// x + y; +inf absorbs, infinite coordinates absorb finite ones, and
/// (+inf) + (-inf) in one coordinate throws UnsupportedArithmetic.
ExtendedValue add(const ExtendedValue& x, const ExtendedValue& y);
/// n * x for n >= 0; 0 * (anything finite or tuple) is the zero tuple.
ExtendedValue scale(long n, const ExtendedValue& x);

// ---------------------------------------------------------------------------

/// Order embedding of a source group into a target group that differs by
/// inserted FormalInteger coordinates (zero-filled) and/or enlarged components.
struct Embedding {
    GroupDescriptor source;
    GroupDescriptor target;
    std::vector<std::size_t> inserted;  ///< sorted positions in target

    GroupElement apply(const GroupElement& x) const;
    ExtendedValue apply(const ExtendedValue& x) const;
    /// Drops the inserted coordinates.
    GroupElement project(const GroupElement& y) const;
    /// True iff y is the image of a member of the source group.
    bool in_image(const GroupElement& y) const;

    static Embedding identity(const GroupDescriptor& g) { return {g, g, {}}; }
};

/// (G_1 (+) .. (+) Z (+) .. (+) G_n) with Z at `position`.
Embedding insert_formal_integer(const GroupDescriptor& g, std::size_t position);

/// Replaces component `position` by the subgroup generated by it and r.
GroupDescriptor adjoin_to_component(const GroupDescriptor& g, std::size_t position, const ExactReal& r);

/// Largest member of c that is <= x (resp. >= x) on the grid of spacing
/// unit_step(c) / p^refine, where p is 2 unless c is p-power divisible.
ExactReal member_at_or_below(const Component& c, const ExactReal& x, unsigned refine = 0);
ExactReal member_at_or_above(const Component& c, const ExactReal& x, unsigned refine = 0);

}  // namespace pmsval
