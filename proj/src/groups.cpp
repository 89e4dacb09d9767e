#include "pmsval/groups.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "pmsval/errors.hpp"

namespace pmsval {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool is_integer(const Rational& q) { return q.get_den() == 1; }

Integer strip_prime(Integer n, long p) {
    Integer pz(p);
    Integer out;
    mpz_remove(out.get_mpz_t(), n.get_mpz_t(), pz.get_mpz_t());
    return out;
}

bool contains_rational(const RationalComponent& c, const Rational& x) {
    return std::visit(overloaded{
                          [&](const Cyclic& cy) { return is_integer(Rational(x / cy.generator)); },
                          [&](const PPowerDivisible& pp) {
                              const Rational y = x / pp.scale;
                              return strip_prime(y.get_den(), pp.p) == 1;
                          },
                          [](const FullRational&) { return true; },
                          [&](const FormalInteger&) { return is_integer(x); },
                      },
                      c);
}

RationalComponent adjoin_rational(const RationalComponent& c, const Rational& r) {
    if (contains_rational(c, r)) return c;
    return std::visit(overloaded{
                          [&](const Cyclic& cy) -> RationalComponent {
                              return Cyclic{rational_gcd(cy.generator, r)};
                          },
                          [&](const FormalInteger&) -> RationalComponent {
                              return Cyclic{rational_gcd(Rational(1), r)};
                          },
                          [&](const PPowerDivisible& pp) -> RationalComponent {
                              const Rational y = r / pp.scale;
                              Rational s = pp.scale / Rational(strip_prime(y.get_den(), pp.p));
                              s.canonicalize();
                              return PPowerDivisible{pp.p, s};
                          },
                          [](const FullRational& f) -> RationalComponent { return f; },
                      },
                      c);
}

Component widen(const RationalComponent& c) {
    return std::visit([](const auto& x) -> Component { return x; }, c);
}

std::string describe_rational(const RationalComponent& c) {
    return std::visit(overloaded{
                          [](const Cyclic& cy) {
                              return cy.generator == 1 ? std::string("Z")
                                                       : "(" + to_string(cy.generator) + ")Z";
                          },
                          [](const PPowerDivisible& pp) {
                              std::string body = "Z[1/" + std::to_string(pp.p) + "^inf]";
                              return pp.scale == 1 ? body : "(" + to_string(pp.scale) + ")" + body;
                          },
                          [](const FullRational&) { return std::string("Q"); },
                          [](const FormalInteger&) { return std::string("Z_new"); },
                      },
                      c);
}

Rational unit_step_rational(const RationalComponent& c) {
    return std::visit(overloaded{
                          [](const Cyclic& cy) { return cy.generator; },
                          [](const PPowerDivisible& pp) { return pp.scale; },
                          [](const FullRational&) { return Rational(1); },
                          [](const FormalInteger&) { return Rational(1); },
                      },
                      c);
}

long grid_base(const RationalComponent& c) {
    if (const auto* pp = std::get_if<PPowerDivisible>(&c)) return pp->p;
    return 2;
}

bool dense_rational(const RationalComponent& c) {
    return std::holds_alternative<PPowerDivisible>(c) || std::holds_alternative<FullRational>(c);
}

Rational grid_spacing(const RationalComponent& c, unsigned refine) {
    Rational step = unit_step_rational(c);
    if (dense_rational(c)) {
        Integer denom;
        mpz_ui_pow_ui(denom.get_mpz_t(), static_cast<unsigned long>(grid_base(c)), refine);
        step /= Rational(denom);
    }
    return step;
}

ExactReal grid_below(const RationalComponent& c, const ExactReal& x, unsigned refine) {
    const Rational step = grid_spacing(c, refine);
    const Integer k = floor(x * Rational(1 / step));
    return ExactReal(Rational(k) * step);
}

void require_same_arity(std::size_t a, std::size_t b, const char* what) {
    if (a != b) {
        throw DescriptorMismatch(std::string(what) + ": arity " + std::to_string(a) + " vs " +
                                 std::to_string(b));
    }
}

}  // namespace

bool contains(const Component& c, const ExactReal& x) {
    if (const auto* adj = std::get_if<AdjoinedSurd>(&c)) {
        if (x.is_rational()) return contains_rational(adj->base, x.as_rational());
        if (x.radicand() != adj->tau.radicand()) return false;
        const Rational k = x.surd_coefficient() / adj->tau.surd_coefficient();
        if (!is_integer(k)) return false;
        const ExactReal rest = x - adj->tau * k;
        return rest.is_rational() && contains_rational(adj->base, rest.as_rational());
    }
    if (!x.is_rational()) return false;
    return std::visit(overloaded{
                          [&](const AdjoinedSurd&) { return false; },
                          [&](const auto& rc) { return contains_rational(RationalComponent{rc}, x.as_rational()); },
                      },
                      c);
}

bool hull_contains(const Component& c, const ExactReal& x) {
    if (x.is_rational()) return true;
    const auto* adj = std::get_if<AdjoinedSurd>(&c);
    return adj != nullptr && adj->tau.radicand() == x.radicand();
}

bool is_dense(const Component& c) {
    return std::visit(overloaded{
                          [](const AdjoinedSurd&) { return true; },
                          [](const auto& rc) { return dense_rational(RationalComponent{rc}); },
                      },
                      c);
}

Rational unit_step(const Component& c) {
    return std::visit(overloaded{
                          [](const AdjoinedSurd& adj) { return unit_step_rational(adj.base); },
                          [](const auto& rc) { return unit_step_rational(RationalComponent{rc}); },
                      },
                      c);
}

Component adjoin(const Component& c, const ExactReal& r) {
    if (contains(c, r)) throw InvalidAdjoin(r.to_string() + " is already a member of " + describe(c));
    if (const auto* adj = std::get_if<AdjoinedSurd>(&c)) {
        if (r.is_rational()) return AdjoinedSurd{adjoin_rational(adj->base, r.as_rational()), adj->tau};
        if (r.radicand() != adj->tau.radicand()) {
            throw UnsupportedArithmetic("component already carries sqrt(" +
                                        std::to_string(adj->tau.radicand()) + "), cannot adjoin " +
                                        r.to_string());
        }
        // Z*tau + Z*r = Z*tau' + Z*q via a unimodular change of basis, where
        // tau' carries gcd of the surd coefficients and q is rational.
        const Rational b0 = adj->tau.surd_coefficient();
        const Rational b1 = r.surd_coefficient();
        Integer denom;
        mpz_lcm(denom.get_mpz_t(), b0.get_den_mpz_t(), b1.get_den_mpz_t());
        const Integer B0 = Integer(b0 * Rational(denom));
        const Integer B1 = Integer(b1 * Rational(denom));
        Integer g, s, t;
        mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), B0.get_mpz_t(), B1.get_mpz_t());
        const ExactReal tau_new = adj->tau * Rational(s) + r * Rational(t);
        const ExactReal kernel = adj->tau * Rational(B1 / g) - r * Rational(B0 / g);
        RationalComponent base = adjoin_rational(adj->base, kernel.as_rational());
        if (tau_new.is_rational()) throw std::logic_error("adjoin: surd part vanished");
        return AdjoinedSurd{base, tau_new};
    }
    const RationalComponent rc = std::visit(
        overloaded{
            [](const AdjoinedSurd&) -> RationalComponent { throw std::logic_error("unreachable"); },
            [](const auto& x) -> RationalComponent { return x; },
        },
        c);
    if (r.is_rational()) return widen(adjoin_rational(rc, r.as_rational()));
    return AdjoinedSurd{rc, r};
}

std::string describe(const Component& c) {
    return std::visit(overloaded{
                          [](const AdjoinedSurd& adj) {
                              return describe_rational(adj.base) + " + Z*(" + adj.tau.to_string() + ")";
                          },
                          [](const auto& rc) { return describe_rational(RationalComponent{rc}); },
                      },
                      c);
}

int rank(const GroupDescriptor& g) {
    if (g.components.empty()) throw InvariantError("empty-descriptor", "a value group needs at least one component");
    return static_cast<int>(g.components.size());
}

std::string describe(const GroupDescriptor& g) {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < g.components.size(); ++i) {
        if (i) os << " (+) ";
        os << describe(g.components[i]);
    }
    os << ")_lex";
    return os.str();
}

GroupElement GroupElement::zero(std::size_t arity) {
    return GroupElement(std::vector<ExactReal>(arity, ExactReal(0L)));
}

std::string GroupElement::to_string() const {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < coords.size(); ++i) {
        if (i) os << ", ";
        os << coords[i];
    }
    os << ")";
    return os.str();
}

std::strong_ordering compare(const GroupElement& x, const GroupElement& y) {
    require_same_arity(x.arity(), y.arity(), "compare");
    for (std::size_t i = 0; i < x.arity(); ++i) {
        const auto c = x.coords[i] <=> y.coords[i];
        if (c != 0) return c;
    }
    return std::strong_ordering::equal;
}

GroupElement operator+(const GroupElement& x, const GroupElement& y) {
    require_same_arity(x.arity(), y.arity(), "add");
    GroupElement out = x;
    for (std::size_t i = 0; i < x.arity(); ++i) out.coords[i] += y.coords[i];
    return out;
}

GroupElement operator-(const GroupElement& x) {
    GroupElement out = x;
    for (auto& c : out.coords) c = -c;
    return out;
}

GroupElement operator-(const GroupElement& x, const GroupElement& y) { return x + (-y); }

GroupElement scale(long n, const GroupElement& x) {
    GroupElement out = x;
    for (auto& c : out.coords) c *= Rational(n);
    return out;
}

bool contains(const GroupDescriptor& g, const GroupElement& x) {
    require_same_arity(g.arity(), x.arity(), "contains");
    for (std::size_t i = 0; i < x.arity(); ++i) {
        if (!contains(g.components[i], x.coords[i])) return false;
    }
    return true;
}

bool hull_contains(const GroupDescriptor& g, const GroupElement& x) {
    require_same_arity(g.arity(), x.arity(), "hull_contains");
    for (std::size_t i = 0; i < x.arity(); ++i) {
        if (!hull_contains(g.components[i], x.coords[i])) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------

std::strong_ordering operator<=>(const ExtendedReal& x, const ExtendedReal& y) {
    auto rank_of = [](ExtendedReal::Tag t) {
        switch (t) {
            case ExtendedReal::Tag::NegInf: return 0;
            case ExtendedReal::Tag::Finite: return 1;
            case ExtendedReal::Tag::PosInf: return 2;
        }
        return 1;
    };
    if (x.tag != y.tag) return rank_of(x.tag) <=> rank_of(y.tag);
    if (x.is_finite()) return x.value <=> y.value;
    return std::strong_ordering::equal;
}

ExtendedValue::ExtendedValue(const GroupElement& g) {
    coords_.reserve(g.arity());
    for (const auto& c : g.coords) coords_.push_back(ExtendedReal::finite(c));
}

ExtendedValue ExtendedValue::tuple(std::vector<ExtendedReal> coords) {
    ExtendedValue v;
    v.plus_infinity_ = false;
    v.coords_ = std::move(coords);
    return v;
}

bool ExtendedValue::is_finite() const {
    if (plus_infinity_) return false;
    return std::all_of(coords_.begin(), coords_.end(), [](const ExtendedReal& c) { return c.is_finite(); });
}

GroupElement ExtendedValue::element() const {
    if (!is_finite()) throw std::logic_error("ExtendedValue::element on non-finite value " + to_string());
    GroupElement g;
    g.coords.reserve(coords_.size());
    for (const auto& c : coords_) g.coords.push_back(c.value);
    return g;
}

std::string ExtendedValue::to_string() const {
    if (plus_infinity_) return "inf";
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < coords_.size(); ++i) {
        if (i) os << ", ";
        switch (coords_[i].tag) {
            case ExtendedReal::Tag::NegInf: os << "-inf"; break;
            case ExtendedReal::Tag::PosInf: os << "inf"; break;
            case ExtendedReal::Tag::Finite: os << coords_[i].value; break;
        }
    }
    os << ")";
    return os.str();
}

ExtendedValue ExtendedValue::operator-() const {
    if (plus_infinity_) throw UnsupportedArithmetic("negation of the value of 0");
    ExtendedValue out = *this;
    for (auto& c : out.coords_) {
        switch (c.tag) {
            case ExtendedReal::Tag::NegInf: c.tag = ExtendedReal::Tag::PosInf; break;
            case ExtendedReal::Tag::PosInf: c.tag = ExtendedReal::Tag::NegInf; break;
            case ExtendedReal::Tag::Finite: c.value = -c.value; break;
        }
    }
    return out;
}

std::strong_ordering compare(const ExtendedValue& x, const ExtendedValue& y) {
    if (x.is_plus_infinity() || y.is_plus_infinity()) {
        return static_cast<int>(x.is_plus_infinity()) <=> static_cast<int>(y.is_plus_infinity());
    }
    require_same_arity(x.arity(), y.arity(), "compare");
    for (std::size_t i = 0; i < x.arity(); ++i) {
        const auto c = x.coords()[i] <=> y.coords()[i];
        if (c != 0) return c;
    }
    return std::strong_ordering::equal;
}

ExtendedValue add(const ExtendedValue& x, const ExtendedValue& y) {
    if (x.is_plus_infinity() || y.is_plus_infinity()) return ExtendedValue::plus_infinity();
    require_same_arity(x.arity(), y.arity(), "add");
    std::vector<ExtendedReal> out;
    out.reserve(x.arity());
    for (std::size_t i = 0; i < x.arity(); ++i) {
        const auto& a = x.coords()[i];
        const auto& b = y.coords()[i];
        if (a.is_finite() && b.is_finite()) {
            out.push_back(ExtendedReal::finite(a.value + b.value));
        } else if (!a.is_finite() && !b.is_finite() && a.tag != b.tag) {
            throw UnsupportedArithmetic("inf + (-inf) in coordinate " + std::to_string(i));
        } else {
            out.push_back(a.is_finite() ? b : a);
        }
    }
    return ExtendedValue::tuple(std::move(out));
}

ExtendedValue scale(long n, const ExtendedValue& x) {
    if (x.is_plus_infinity()) {
        if (n <= 0) throw UnsupportedArithmetic("non-positive multiple of the value of 0");
        return x;
    }
    if (n < 0) return scale(-n, -x);
    std::vector<ExtendedReal> out;
    out.reserve(x.arity());
    for (const auto& c : x.coords()) {
        if (n == 0) {
            out.push_back(ExtendedReal::finite(ExactReal(0L)));
        } else if (c.is_finite()) {
            out.push_back(ExtendedReal::finite(c.value * Rational(n)));
        } else {
            out.push_back(c);
        }
    }
    return ExtendedValue::tuple(std::move(out));
}

// ---------------------------------------------------------------------------

GroupElement Embedding::apply(const GroupElement& x) const {
    require_same_arity(source.arity(), x.arity(), "embedding source");
    GroupElement out;
    out.coords.reserve(target.arity());
    std::size_t next = 0;
    for (std::size_t pos = 0; pos < target.arity(); ++pos) {
        if (std::binary_search(inserted.begin(), inserted.end(), pos)) {
            out.coords.emplace_back(0L);
        } else {
            out.coords.push_back(x.coords[next++]);
        }
    }
    return out;
}

ExtendedValue Embedding::apply(const ExtendedValue& x) const {
    if (x.is_plus_infinity()) return x;
    require_same_arity(source.arity(), x.arity(), "embedding source");
    std::vector<ExtendedReal> out;
    std::size_t next = 0;
    for (std::size_t pos = 0; pos < target.arity(); ++pos) {
        if (std::binary_search(inserted.begin(), inserted.end(), pos)) {
            out.push_back(ExtendedReal::finite(ExactReal(0L)));
        } else {
            out.push_back(x.coords()[next++]);
        }
    }
    return ExtendedValue::tuple(std::move(out));
}

GroupElement Embedding::project(const GroupElement& y) const {
    require_same_arity(target.arity(), y.arity(), "embedding target");
    GroupElement out;
    for (std::size_t pos = 0; pos < y.arity(); ++pos) {
        if (!std::binary_search(inserted.begin(), inserted.end(), pos)) out.coords.push_back(y.coords[pos]);
    }
    return out;
}

bool Embedding::in_image(const GroupElement& y) const {
    if (y.arity() != target.arity()) return false;
    for (std::size_t pos : inserted) {
        if (!y.coords[pos].is_zero()) return false;
    }
    return contains(source, project(y));
}

Embedding insert_formal_integer(const GroupDescriptor& g, std::size_t position) {
    if (position > g.arity()) {
        throw InvariantError("position-out-of-range",
                             "insert position " + std::to_string(position) + " exceeds arity " +
                                 std::to_string(g.arity()));
    }
    Embedding e{g, g, {position}};
    e.target.components.insert(e.target.components.begin() + static_cast<std::ptrdiff_t>(position),
                               FormalInteger{});
    return e;
}

GroupDescriptor adjoin_to_component(const GroupDescriptor& g, std::size_t position, const ExactReal& r) {
    if (position >= g.arity()) {
        throw InvariantError("position-out-of-range", "no component at index " + std::to_string(position));
    }
    GroupDescriptor out = g;
    out.components[position] = adjoin(g.components[position], r);
    return out;
}

ExactReal member_at_or_below(const Component& c, const ExactReal& x, unsigned refine) {
    if (contains(c, x)) return x;
    if (const auto* adj = std::get_if<AdjoinedSurd>(&c)) {
        Rational k = 0;
        if (!x.is_rational() && x.radicand() == adj->tau.radicand()) {
            k = Rational(floor(ExactReal(Rational(x.surd_coefficient() / adj->tau.surd_coefficient()))));
        }
        const ExactReal shift = adj->tau * k;
        return shift + grid_below(adj->base, x - shift, refine);
    }
    const RationalComponent rc = std::visit(
        overloaded{
            [](const AdjoinedSurd&) -> RationalComponent { throw std::logic_error("unreachable"); },
            [](const auto& v) -> RationalComponent { return v; },
        },
        c);
    return grid_below(rc, x, refine);
}

ExactReal member_at_or_above(const Component& c, const ExactReal& x, unsigned refine) {
    return -member_at_or_below(c, -x, refine);
}

}  // namespace pmsval
