#include "pmsval/exact_real.hpp"

#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "pmsval/errors.hpp"

namespace pmsval {

Rational parse_rational(const std::string& text) {
    if (text.empty()) throw SchemaError("empty rational literal");
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        const bool ok = (c >= '0' && c <= '9') || c == '/' || (i == 0 && (c == '-' || c == '+'));
        if (!ok) throw SchemaError("malformed rational literal '" + text + "'");
    }
    std::string body = text.front() == '+' ? text.substr(1) : text;
    Rational q;
    if (q.set_str(body, 10) != 0) throw SchemaError("malformed rational literal '" + text + "'");
    if (sgn(q.get_den()) == 0) throw SchemaError("zero denominator in '" + text + "'");
    q.canonicalize();
    return q;
}

std::string to_string(const Rational& q) {
    Rational c = q;
    c.canonicalize();
    return c.get_str(10);
}

std::pair<std::int64_t, std::int64_t> squarefree_split(std::int64_t n) {
    if (n <= 0) throw std::invalid_argument("squarefree_split expects a positive integer");
    std::int64_t square_root = 1;
    std::int64_t rest = n;
    for (std::int64_t f = 2; f * f <= rest; ++f) {
        while (rest % (f * f) == 0) {
            rest /= f * f;
            square_root *= f;
        }
    }
    return {square_root, rest};
}

int surd_sign(const Rational& a, const Rational& b, std::int64_t d) {
    const int sb = sgn(b);
    const int sa = sgn(a);
    if (sb == 0) return sa;
    if (sa == 0) return sb;
    if (sa == sb) return sa;
    // Opposite signs: the larger magnitude wins; a^2 == b^2 d is impossible
    // because d is not a perfect square.
    const Rational lhs = a * a;
    const Rational rhs = b * b * d;
    return cmp(lhs, rhs) > 0 ? sa : sb;
}

Rational rational_gcd(const Rational& x, const Rational& y) {
    if (sgn(x) == 0) return abs(y);
    if (sgn(y) == 0) return abs(x);
    Integer num;
    mpz_gcd(num.get_mpz_t(), Integer(x.get_num() * y.get_den()).get_mpz_t(),
            Integer(y.get_num() * x.get_den()).get_mpz_t());
    Rational g(num, x.get_den() * y.get_den());
    g.canonicalize();
    return g;
}

ExactReal::ExactReal(Rational q) : a_(std::move(q)) { a_.canonicalize(); }

ExactReal::ExactReal(long n) : a_(n) {}

ExactReal ExactReal::surd(Rational a, Rational b, std::int64_t d) {
    if (d <= 0) throw std::invalid_argument("surd radicand must be positive");
    auto [k, m] = squarefree_split(d);
    ExactReal x;
    x.a_ = std::move(a);
    x.a_.canonicalize();
    b *= Rational(static_cast<long>(k));
    b.canonicalize();
    if (m == 1 || sgn(b) == 0) {
        x.a_ += m == 1 ? b : Rational(0);
        return x;
    }
    x.b_ = std::move(b);
    x.radicand_ = m;
    return x;
}

const Rational& ExactReal::as_rational() const {
    if (!is_rational()) throw std::logic_error("ExactReal::as_rational on a surd " + to_string());
    return a_;
}

int ExactReal::sign() const { return is_rational() ? sgn(a_) : surd_sign(a_, b_, radicand_); }

double ExactReal::approx() const {
    double v = a_.get_d();
    if (!is_rational()) v += b_.get_d() * std::sqrt(static_cast<double>(radicand_));
    return v;
}

ExactReal ExactReal::operator-() const {
    ExactReal x = *this;
    x.a_ = -x.a_;
    x.b_ = -x.b_;
    return x;
}

ExactReal& ExactReal::operator+=(const ExactReal& other) {
    if (!other.is_rational()) {
        if (is_rational()) {
            radicand_ = other.radicand_;
            b_ = other.b_;
        } else if (radicand_ != other.radicand_) {
            throw UnsupportedArithmetic("sum of surds with radicands " + std::to_string(radicand_) +
                                        " and " + std::to_string(other.radicand_));
        } else {
            b_ += other.b_;
        }
    }
    a_ += other.a_;
    if (radicand_ != 0 && sgn(b_) == 0) radicand_ = 0;
    return *this;
}

ExactReal& ExactReal::operator-=(const ExactReal& other) { return *this += -other; }

ExactReal& ExactReal::operator*=(const Rational& k) {
    a_ *= k;
    b_ *= k;
    if (radicand_ != 0 && sgn(b_) == 0) radicand_ = 0;
    return *this;
}

std::strong_ordering operator<=>(const ExactReal& x, const ExactReal& y) {
    int s = 0;
    if (x.is_rational() || y.is_rational() || x.radicand_ == y.radicand_) {
        s = (x - y).sign();
    } else {
        // x - y = L - R with L = (a1 - a2) + b1 sqrt(d1), R = b2 sqrt(d2).
        const Rational a = x.a_ - y.a_;
        const int sl = surd_sign(a, x.b_, x.radicand_);
        const int sr = sgn(y.b_);
        if (sl != sr) {
            s = sl > sr ? 1 : -1;
        } else {
            // Same sign: compare squares, L^2 - R^2 is again a surd in sqrt(d1).
            const Rational rat = a * a + x.b_ * x.b_ * x.radicand_ - y.b_ * y.b_ * y.radicand_;
            const Rational irr = 2 * a * x.b_;
            const int sq = surd_sign(rat, irr, x.radicand_);
            s = sl > 0 ? sq : -sq;
        }
    }
    if (s < 0) return std::strong_ordering::less;
    if (s > 0) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

std::string ExactReal::to_string() const {
    if (is_rational()) return pmsval::to_string(a_);
    std::ostringstream os;
    if (sgn(a_) != 0) os << pmsval::to_string(a_) << (sgn(b_) > 0 ? "+" : "");
    os << pmsval::to_string(b_) << "*sqrt(" << radicand_ << ")";
    return os.str();
}

std::ostream& operator<<(std::ostream& os, const ExactReal& x) { return os << x.to_string(); }

Integer floor(const ExactReal& x) {
    if (x.is_rational()) {
        Integer q;
        mpz_fdiv_q(q.get_mpz_t(), x.as_rational().get_num_mpz_t(), x.as_rational().get_den_mpz_t());
        return q;
    }
    mpf_class root(0, 512);
    mpf_class rad(static_cast<double>(x.radicand()), 512);
    mpf_sqrt(root.get_mpf_t(), rad.get_mpf_t());
    mpf_class value = mpf_class(x.rational_part(), 512) + mpf_class(x.surd_coefficient(), 512) * root;
    mpf_class fl(0, 512);
    mpf_floor(fl.get_mpf_t(), value.get_mpf_t());
    Integer n(fl);
    while (ExactReal(Rational(n)) > x) n -= 1;
    while (ExactReal(Rational(n + 1)) <= x) n += 1;
    return n;
}

}  // namespace pmsval
