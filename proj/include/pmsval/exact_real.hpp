#pragma once

#include <compare>
#include <cstdint>
#include <ostream>
#include <string>

#include <gmpxx.h>

namespace pmsval {

using Rational = mpq_class;
using Integer = mpz_class;

/// Parses "p", "-p/q" (canonicalised). Throws SchemaError on malformed text.
Rational parse_rational(const std::string& text);
std::string to_string(const Rational& q);

/// An element of Q or of Q(sqrt d) written a + b*sqrt(d).
///
/// Normal form: d is squarefree and >= 2 whenever b != 0; b == 0 collapses
/// to the rational a with d == 0. Comparison is exact across different
/// radicands; addition across different radicands is not representable and
/// throws UnsupportedArithmetic.
class ExactReal {
public:
    ExactReal() = default;
    ExactReal(Rational q);  // NOLINT(google-explicit-constructor)
    ExactReal(long n);      // NOLINT(google-explicit-constructor)

    static ExactReal surd(Rational a, Rational b, std::int64_t d);

    bool is_rational() const noexcept { return radicand_ == 0; }
    const Rational& rational_part() const noexcept { return a_; }
    const Rational& surd_coefficient() const noexcept { return b_; }
    std::int64_t radicand() const noexcept { return radicand_; }

    /// The rational value; throws std::logic_error for a surd.
    const Rational& as_rational() const;

    int sign() const;
    bool is_zero() const noexcept { return radicand_ == 0 && sgn(a_) == 0; }
    double approx() const;

    ExactReal operator-() const;
    ExactReal& operator+=(const ExactReal& other);
    ExactReal& operator-=(const ExactReal& other);
    ExactReal& operator*=(const Rational& k);

    friend ExactReal operator+(ExactReal x, const ExactReal& y) { return x += y; }
    friend ExactReal operator-(ExactReal x, const ExactReal& y) { return x -= y; }
    friend ExactReal operator*(ExactReal x, const Rational& k) { return x *= k; }
    friend ExactReal operator*(const Rational& k, ExactReal x) { return x *= k; }

    friend bool operator==(const ExactReal& x, const ExactReal& y) {
        return x.radicand_ == y.radicand_ && x.a_ == y.a_ && x.b_ == y.b_;
    }
    friend std::strong_ordering operator<=>(const ExactReal& x, const ExactReal& y);

    std::string to_string() const;

private:
    Rational a_;
    Rational b_;
    std::int64_t radicand_ = 0;
};

std::ostream& operator<<(std::ostream& os, const ExactReal& x);

/// Largest integer <= x, exact.
Integer floor(const ExactReal& x);

/// Sign of a + b*sqrt(d) for rational a, b and d >= 2.
int surd_sign(const Rational& a, const Rational& b, std::int64_t d);

/// Splits n = k^2 * m with m squarefree; returns {k, m}.
std::pair<std::int64_t, std::int64_t> squarefree_split(std::int64_t n);

Rational rational_gcd(const Rational& x, const Rational& y);

}  // namespace pmsval
