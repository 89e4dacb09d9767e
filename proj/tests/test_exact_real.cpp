#include <random>

#include <mpfr.h>

#include "doctest.h"
#include "pmsval/errors.hpp"
#include "pmsval/exact_real.hpp"

using namespace pmsval;

namespace {

// Enclosure [lo, hi] of a + b*sqrt(d) with directed rounding.
struct Interval {
    mpfr_t lo, hi;
    Interval() { mpfr_inits2(256, lo, hi, static_cast<mpfr_ptr>(nullptr)); }
    ~Interval() { mpfr_clears(lo, hi, static_cast<mpfr_ptr>(nullptr)); }
};

void enclose(Interval& out, const Rational& a, const Rational& b, long d) {
    mpfr_t s_lo, s_hi, t;
    mpfr_inits2(256, s_lo, s_hi, t, static_cast<mpfr_ptr>(nullptr));
    mpfr_set_si(s_lo, d, MPFR_RNDN);
    mpfr_sqrt(s_lo, s_lo, MPFR_RNDD);
    mpfr_set_si(s_hi, d, MPFR_RNDN);
    mpfr_sqrt(s_hi, s_hi, MPFR_RNDU);
    const bool neg = sgn(b) < 0;
    mpfr_mul_q(out.lo, neg ? s_hi : s_lo, b.get_mpq_t(), MPFR_RNDD);
    mpfr_mul_q(out.hi, neg ? s_lo : s_hi, b.get_mpq_t(), MPFR_RNDU);
    mpfr_add_q(out.lo, out.lo, a.get_mpq_t(), MPFR_RNDD);
    mpfr_add_q(out.hi, out.hi, a.get_mpq_t(), MPFR_RNDU);
    mpfr_clears(s_lo, s_hi, t, static_cast<mpfr_ptr>(nullptr));
}

Rational rnd(std::mt19937_64& rng, long range) {
    std::uniform_int_distribution<long> num(-range, range), den(1, 12);
    Rational q(num(rng), den(rng));
    q.canonicalize();
    return q;
}

}  // namespace

TEST_CASE("rational parsing and printing") {
    CHECK(parse_rational("-6/4") == Rational(-3, 2));
    CHECK(to_string(Rational(4, 2)) == "2");
    CHECK(to_string(Rational(-1, 3)) == "-1/3");
    CHECK_THROWS_AS(parse_rational("1/0"), SchemaError);
    CHECK_THROWS_AS(parse_rational("abc"), SchemaError);
    CHECK_THROWS_AS(parse_rational(""), SchemaError);
}

TEST_CASE("surd normal form") {
    const ExactReal x = ExactReal::surd(1, 1, 8);  // 1 + 2 sqrt 2
    CHECK(x.radicand() == 2);
    CHECK(x.surd_coefficient() == 2);
    CHECK(ExactReal::surd(3, 2, 9) == ExactReal(9));
    CHECK(ExactReal::surd(3, 0, 5).is_rational());
    CHECK(squarefree_split(72) == std::pair<std::int64_t, std::int64_t>{6, 2});
}

TEST_CASE("surd arithmetic") {
    const ExactReal r2 = ExactReal::surd(0, 1, 2);
    CHECK((r2 + r2) == ExactReal::surd(0, 2, 2));
    CHECK((r2 - r2) == ExactReal(0));
    CHECK((-r2).sign() == -1);
    CHECK((r2 * Rational(3)).surd_coefficient() == 3);
    CHECK_THROWS_AS(r2 + ExactReal::surd(0, 1, 3), UnsupportedArithmetic);
    CHECK(floor(r2) == 1);
    CHECK(floor(-r2) == -2);
    CHECK(floor(ExactReal(Rational(-7, 2))) == -4);
}

TEST_CASE("sign of a + b sqrt d") {
    CHECK(surd_sign(-1, 1, 2) == 1);
    CHECK(surd_sign(-3, 2, 2) == -1);   // 2.828 < 3
    CHECK(surd_sign(3, -2, 2) == 1);
    CHECK(surd_sign(Rational(-7, 5), 1, 2) == 1);
    CHECK(surd_sign(Rational(-3, 2), 1, 2) == -1);
}

TEST_CASE("exact comparison agrees with an MPFR interval enclosure") {
    std::mt19937_64 rng(20261014);
    const long radicands[] = {2, 3, 5, 6, 7, 10, 11};
    std::uniform_int_distribution<int> pick(0, 6);
    int decided = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const Rational a1 = rnd(rng, 30), b1 = rnd(rng, 10), a2 = rnd(rng, 30), b2 = rnd(rng, 10);
        const long d1 = radicands[pick(rng)], d2 = radicands[pick(rng)];
        const ExactReal x = ExactReal::surd(a1, b1, d1), y = ExactReal::surd(a2, b2, d2);
        Interval ix, iy;
        enclose(ix, a1, b1, d1);
        enclose(iy, a2, b2, d2);
        const auto cmp = x <=> y;
        if (mpfr_less_p(ix.hi, iy.lo)) {
            CHECK(cmp == std::strong_ordering::less);
            ++decided;
        } else if (mpfr_greater_p(ix.lo, iy.hi)) {
            CHECK(cmp == std::strong_ordering::greater);
            ++decided;
        } else {
            // Overlapping enclosures at 256 bits only happen for equal values here.
            CHECK(cmp == std::strong_ordering::equal);
        }
    }
    CHECK(decided > 990);
}

TEST_CASE("rational gcd") {
    CHECK(rational_gcd(Rational(1, 2), Rational(1, 3)) == Rational(1, 6));
    CHECK(rational_gcd(Rational(4), Rational(6)) == Rational(2));
    CHECK(rational_gcd(Rational(0), Rational(-3, 4)) == Rational(3, 4));
}
