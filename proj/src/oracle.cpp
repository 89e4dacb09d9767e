#include "pmsval/oracle.hpp"

#include <sstream>
#include <stdexcept>

#include "pmsval/errors.hpp"

namespace pmsval {

TPoly::TPoly(std::vector<Rational> c) : coeffs(std::move(c)) {
    while (!coeffs.empty() && sgn(coeffs.back()) == 0) coeffs.pop_back();
}

TPoly TPoly::monomial(const Rational& c, std::size_t k) {
    std::vector<Rational> v(k + 1, Rational(0));
    v[k] = c;
    return TPoly(std::move(v));
}

std::size_t TPoly::degree() const { return coeffs.empty() ? 0 : coeffs.size() - 1; }

std::size_t TPoly::order() const {
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        if (sgn(coeffs[i]) != 0) return i;
    }
    throw std::domain_error("order of the zero polynomial");
}

std::string TPoly::to_string() const {
    if (coeffs.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        if (sgn(coeffs[i]) == 0) continue;
        if (!first) os << " + ";
        first = false;
        os << pmsval::to_string(coeffs[i]);
        if (i == 1) os << "*t";
        if (i > 1) os << "*t^" << i;
    }
    return os.str();
}

TPoly operator+(const TPoly& a, const TPoly& b) {
    std::vector<Rational> c(std::max(a.coeffs.size(), b.coeffs.size()), Rational(0));
    for (std::size_t i = 0; i < a.coeffs.size(); ++i) c[i] += a.coeffs[i];
    for (std::size_t i = 0; i < b.coeffs.size(); ++i) c[i] += b.coeffs[i];
    return TPoly(std::move(c));
}

TPoly operator-(const TPoly& a, const TPoly& b) {
    std::vector<Rational> c(std::max(a.coeffs.size(), b.coeffs.size()), Rational(0));
    for (std::size_t i = 0; i < a.coeffs.size(); ++i) c[i] += a.coeffs[i];
    for (std::size_t i = 0; i < b.coeffs.size(); ++i) c[i] -= b.coeffs[i];
    return TPoly(std::move(c));
}

TPoly operator*(const TPoly& a, const TPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<Rational> c(a.coeffs.size() + b.coeffs.size() - 1, Rational(0));
    for (std::size_t i = 0; i < a.coeffs.size(); ++i) {
        for (std::size_t j = 0; j < b.coeffs.size(); ++j) c[i + j] += a.coeffs[i] * b.coeffs[j];
    }
    return TPoly(std::move(c));
}

RationalFunction::RationalFunction(TPoly n, TPoly d) : num(std::move(n)), den(std::move(d)) {
    if (den.is_zero()) throw std::domain_error("zero denominator");
}

bool RationalFunction::is_constant() const { return num.degree() == 0 && den.degree() == 0; }

std::string RationalFunction::to_string() const {
    if (den == TPoly::constant(1)) return num.to_string();
    return "(" + num.to_string() + ")/(" + den.to_string() + ")";
}

RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
    if (a.den == b.den) return {a.num + b.num, a.den};
    return {a.num * b.den + b.num * a.den, a.den * b.den};
}

RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) {
    if (a.den == b.den) return {a.num - b.num, a.den};
    return {a.num * b.den - b.num * a.den, a.den * b.den};
}

RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
    return {a.num * b.num, a.den * b.den};
}

RationalFunction operator/(const RationalFunction& a, const RationalFunction& b) {
    if (b.is_zero()) throw std::domain_error("division by zero");
    return {a.num * b.den, a.den * b.num};
}

GroupDescriptor ConcreteField::value_group() const {
    if (kind == Kind::RationalsPadic) return GroupDescriptor{{Cyclic{1}}};
    return GroupDescriptor{{Cyclic{1}, Cyclic{1}}};
}

long padic_valuation(const Integer& n, long p) {
    if (sgn(n) == 0) throw std::domain_error("valuation of 0");
    Integer rest;
    const Integer prime(p);
    return static_cast<long>(mpz_remove(rest.get_mpz_t(), n.get_mpz_t(), prime.get_mpz_t()));
}

long padic_valuation(const Rational& q, long p) {
    return padic_valuation(Integer(q.get_num()), p) - padic_valuation(Integer(q.get_den()), p);
}

ExtendedValue valuate(const ConcreteField& f, const RationalFunction& x) {
    if (x.is_zero()) return ExtendedValue::plus_infinity();
    if (f.kind == ConcreteField::Kind::RationalsPadic) {
        if (!x.is_constant()) throw InvariantError("padic-non-constant", "element of Q(t) in a p-adic field");
        const Rational q = x.num.coeffs[0] / x.den.coeffs[0];
        return GroupElement({ExactReal(Rational(padic_valuation(q, f.p)))});
    }
    const std::size_t on = x.num.order();
    const std::size_t od = x.den.order();
    const long ord = static_cast<long>(on) - static_cast<long>(od);
    const long vp = padic_valuation(x.num.coeffs[on], f.p) - padic_valuation(x.den.coeffs[od], f.p);
    return GroupElement({ExactReal(ord), ExactReal(vp)});
}

RationalFunction evaluate(const ConcreteFunction& phi, const RationalFunction& z) {
    RationalFunction num = phi.lead;
    RationalFunction den = RationalFunction::constant(1);
    for (const auto& [a, m] : phi.num) {
        const RationalFunction f = z - a;
        for (long i = 0; i < m; ++i) num = num * f;
    }
    for (const auto& [b, m] : phi.den) {
        const RationalFunction f = z - b;
        for (long i = 0; i < m; ++i) den = den * f;
    }
    if (den.is_zero()) throw std::domain_error("pole at " + z.to_string());
    return num / den;
}

const char* to_string(FitResult::Kind k) {
    switch (k) {
        case FitResult::Kind::Constant: return "constant";
        case FitResult::Kind::Affine: return "affine";
        case FitResult::Kind::Inconsistent: return "inconsistent";
    }
    return "?";
}

FitResult fit_pattern(const std::vector<GroupElement>& deltas, const std::vector<ExtendedValue>& values,
                      std::size_t tail_window) {
    const std::size_t m = values.size();
    if (deltas.size() != m) throw InvalidConfiguration("one delta per value is required");
    if (m < 4) throw InvalidConfiguration("pattern fitting needs at least four points");
    const std::size_t window = tail_window == 0 ? std::max<std::size_t>(m / 2, 2) : std::min(tail_window, m);
    if (window < 2) throw InvalidConfiguration("tail window must cover at least two points");

    FitResult out;
    for (std::size_t k = m - window; k < m; ++k) {
        if (!values[k].is_finite()) {
            out.detail = "value at index " + std::to_string(k) + " is infinite";
            return out;
        }
    }
    const GroupElement v1 = values[m - 1].element();
    const GroupElement v0 = values[m - 2].element();
    const GroupElement dd = deltas[m - 1] - deltas[m - 2];
    const GroupElement dv = v1 - v0;

    long d = 0;
    std::size_t lead = dd.arity();
    for (std::size_t i = 0; i < dd.arity(); ++i) {
        if (!dd.coords[i].is_zero()) {
            lead = i;
            break;
        }
    }
    if (lead < dd.arity()) {
        if (!dd.coords[lead].is_rational() || !dv.coords[lead].is_rational()) {
            out.detail = "irrational slope";
            return out;
        }
        const Rational q = dv.coords[lead].as_rational() / dd.coords[lead].as_rational();
        if (q.get_den() != 1 || !q.get_num().fits_slong_p()) {
            out.detail = "slope " + to_string(q) + " is not an integer";
            return out;
        }
        d = q.get_num().get_si();
    }
    const GroupElement beta = v1 - scale(d, deltas[m - 1]);
    for (std::size_t k = m - window; k < m; ++k) {
        if (values[k].element() != scale(d, deltas[k]) + beta) {
            out.detail = "index " + std::to_string(k) + " breaks the pattern";
            return out;
        }
    }
    out.kind = d == 0 ? FitResult::Kind::Constant : FitResult::Kind::Affine;
    out.d = d;
    out.beta = beta;
    return out;
}

std::vector<std::vector<ExtendedValue>> distance_matrix(const ConcreteField& f,
                                                        const std::vector<RationalFunction>& seq) {
    const std::size_t n = seq.size();
    std::vector<std::vector<ExtendedValue>> m(n, std::vector<ExtendedValue>(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            m[i][j] = m[j][i] = valuate(f, seq[i] - seq[j]);
        }
    }
    return m;
}

CrossCheckReport cross_check(const ConcreteField& f, const std::vector<RationalFunction>& seq,
                             const ConcreteFunction& phi, const FactoredRationalFunction& tagged,
                             std::size_t tail_window) {
    if (phi.num.size() != tagged.num_roots.size() || phi.den.size() != tagged.den_roots.size()) {
        throw InvalidConfiguration("tagging does not list one tag per concrete root");
    }
    CrossCheckReport rep;
    const auto cls = classify_from_prefix(distance_matrix(f, seq));
    rep.kind = cls.kind;

    PmsDescriptor e;
    e.kind = cls.kind;
    e.group = f.value_group();
    std::vector<std::size_t> indices;
    if (cls.kind == PmsKind::Pcts) {
        e.pcts_delta = cls.deltas.front();
        for (std::size_t nu = 0; nu < seq.size(); ++nu) {
            indices.push_back(nu);
            rep.deltas.push_back(cls.deltas.front());
        }
    } else {
        for (std::size_t k = 0; k < cls.deltas.size(); ++k) indices.push_back(cls.first_index + k);
        rep.deltas = cls.deltas;
    }
    for (std::size_t nu : indices) rep.values.push_back(valuate(f, evaluate(phi, seq[nu])));
    rep.fit = fit_pattern(rep.deltas, rep.values, tail_window);
    rep.tags = dominating_degree(tagged, e);

    if (rep.fit.kind != FitResult::Kind::Inconsistent) {
        if (cls.kind == PmsKind::Pcts) {
            rep.agree = rep.fit.kind == FitResult::Kind::Constant &&
                        rep.fit.beta == scale(rep.tags.d, *e.pcts_delta) + rep.tags.beta;
        } else {
            rep.agree = rep.fit.d == rep.tags.d && rep.fit.beta == rep.tags.beta;
        }
    }

    // Per-root diagnosis from the tail of v(z_nu - root).
    const std::size_t m = indices.size();
    const std::size_t window = tail_window == 0 ? std::max<std::size_t>(m / 2, 2) : std::min(tail_window, m);
    const auto diagnose = [&](const RationalFunction& root, long mult, const TaggedRoot& tag, const std::string& label) {
        bool limit = true, constant = true;
        std::optional<ExtendedValue> last;
        for (std::size_t k = m - window; k < m; ++k) {
            const ExtendedValue w = valuate(f, seq[indices[k]] - root);
            if (compare(w, ExtendedValue(rep.deltas[k])) != 0) limit = false;
            if (last && compare(w, *last) != 0) constant = false;
            last = w;
        }
        bool ok = mult == tag.multiplicity;
        if (tag.is_limit()) {
            ok = ok && limit;
        } else {
            ok = ok && constant && last && compare(*last, ExtendedValue(std::get<UltimateDistance>(tag.tag).beta)) == 0;
        }
        if (!ok) rep.offending_roots.push_back(tag.name.empty() ? label : tag.name);
    };
    for (std::size_t i = 0; i < phi.num.size(); ++i) {
        diagnose(phi.num[i].first, phi.num[i].second, tagged.num_roots[i], "num[" + std::to_string(i) + "]");
    }
    for (std::size_t i = 0; i < phi.den.size(); ++i) {
        diagnose(phi.den[i].first, phi.den[i].second, tagged.den_roots[i], "den[" + std::to_string(i) + "]");
    }
    if (compare(valuate(f, phi.lead), ExtendedValue(tagged.lead_value)) != 0) rep.offending_roots.push_back("lead");
    return rep;
}

}  // namespace pmsval
