#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pmsval/engine.hpp"
#include "pmsval/exact_real.hpp"
#include "pmsval/groups.hpp"
#include "pmsval/pms.hpp"

namespace pmsval {

/// Polynomial in t with rational coefficients; coeffs[i] multiplies t^i.
struct TPoly {
    std::vector<Rational> coeffs;

    TPoly() = default;
    explicit TPoly(std::vector<Rational> c);
    static TPoly constant(const Rational& c) { return TPoly({c}); }
    /// c * t^k
    static TPoly monomial(const Rational& c, std::size_t k);

    bool is_zero() const noexcept { return coeffs.empty(); }
    std::size_t degree() const;
    /// Index of the lowest nonzero coefficient.
    std::size_t order() const;
    std::string to_string() const;

    friend bool operator==(const TPoly&, const TPoly&) = default;
};

TPoly operator+(const TPoly& a, const TPoly& b);
TPoly operator-(const TPoly& a, const TPoly& b);
TPoly operator*(const TPoly& a, const TPoly& b);

/// num / den in Q(t); kept unreduced.
struct RationalFunction {
    TPoly num;
    TPoly den = TPoly::constant(1);

    RationalFunction() = default;
    RationalFunction(TPoly n, TPoly d = TPoly::constant(1));  // NOLINT(google-explicit-constructor)
    static RationalFunction constant(const Rational& c) { return {TPoly::constant(c)}; }

    bool is_zero() const noexcept { return num.is_zero(); }
    bool is_constant() const;
    std::string to_string() const;
};

RationalFunction operator+(const RationalFunction& a, const RationalFunction& b);
RationalFunction operator-(const RationalFunction& a, const RationalFunction& b);
RationalFunction operator*(const RationalFunction& a, const RationalFunction& b);
/// Throws std::domain_error on division by zero.
RationalFunction operator/(const RationalFunction& a, const RationalFunction& b);

/// (Q, v_p) with value group Z, or (Q(t), (ord_t, v_p of the lowest
/// coefficient)) with value group (Z (+) Z)_lex.
struct ConcreteField {
    enum class Kind { RationalsPadic, RationalFunctionComposite };
    Kind kind = Kind::RationalsPadic;
    long p = 2;

    GroupDescriptor value_group() const;
    std::size_t arity() const { return kind == Kind::RationalsPadic ? 1 : 2; }
};

long padic_valuation(const Integer& n, long p);
long padic_valuation(const Rational& q, long p);

/// Exact valuation; +inf for 0. A padic field rejects non-constant elements.
ExtendedValue valuate(const ConcreteField& f, const RationalFunction& x);

/// lead * prod (X - a_i)^{m_i} / prod (X - b_k)^{n_k} with a_i, b_k in the field.
struct ConcreteFunction {
    RationalFunction lead = RationalFunction::constant(1);
    std::vector<std::pair<RationalFunction, long>> num;
    std::vector<std::pair<RationalFunction, long>> den;
};

/// phi(z), computed by multiplying out the factors.
RationalFunction evaluate(const ConcreteFunction& phi, const RationalFunction& z);

struct FitResult {
    enum class Kind { Constant, Affine, Inconsistent };
    Kind kind = Kind::Inconsistent;
    long d = 0;
    GroupElement beta;
    std::string detail;
};

const char* to_string(FitResult::Kind k);

/// Solves values[k] = d * deltas[k] + beta from the last two points and checks
/// it on the last tail_window points (0 means half the prefix).
FitResult fit_pattern(const std::vector<GroupElement>& deltas, const std::vector<ExtendedValue>& values,
                      std::size_t tail_window = 0);

struct CrossCheckReport {
    PmsKind kind = PmsKind::Pcs;
    std::vector<GroupElement> deltas;
    std::vector<ExtendedValue> values;
    FitResult fit;
    DominatingForm tags;
    bool agree = false;
    std::vector<std::string> offending_roots;
};

/// Classifies the sequence, fits v phi(z_nu) against its deltas and compares
/// with the dominating form of the tagging. tagged.num_roots[i] describes
/// phi.num[i] (likewise for den).
CrossCheckReport cross_check(const ConcreteField& f, const std::vector<RationalFunction>& seq,
                             const ConcreteFunction& phi, const FactoredRationalFunction& tagged,
                             std::size_t tail_window = 0);

/// Distance matrix v(z_i - z_j) of a concrete sequence.
std::vector<std::vector<ExtendedValue>> distance_matrix(const ConcreteField& f,
                                                        const std::vector<RationalFunction>& seq);

}  // namespace pmsval
