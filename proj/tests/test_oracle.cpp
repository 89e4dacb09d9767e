#include "doctest.h"
#include "pmsval/errors.hpp"
#include "pmsval/oracle.hpp"
#include "support/generators.hpp"

using namespace pmsval;

namespace {

GroupElement el(std::initializer_list<ExactReal> xs) { return GroupElement(std::vector<ExactReal>(xs)); }
RationalFunction q(long a, long b = 1) { return RationalFunction::constant(Rational(a, b)); }

TPoly random_poly(testsupport::Rng& rng, std::size_t max_degree) {
    std::vector<Rational> c;
    const long deg = testsupport::uniform(rng, 0, static_cast<long>(max_degree));
    for (long i = 0; i <= deg; ++i) c.push_back(testsupport::random_rational(rng, 12, 12));
    return TPoly(c);
}

RationalFunction random_element(testsupport::Rng& rng, const ConcreteField& f) {
    if (f.kind == ConcreteField::Kind::RationalsPadic) {
        const long p = f.p;
        return RationalFunction::constant(testsupport::random_rational(rng, 50, 50) * testsupport::pow_rational(p, testsupport::uniform(rng, -3, 3)));
    }
    TPoly d;
    do {
        d = random_poly(rng, 2);
    } while (d.is_zero());
    return RationalFunction(random_poly(rng, 3), d);
}

void check_axioms(const ConcreteField& f, testsupport::Rng& rng) {
    for (int k = 0; k < 10000; ++k) {
        const RationalFunction x = random_element(rng, f), y = random_element(rng, f);
        const ExtendedValue vx = valuate(f, x), vy = valuate(f, y);
        CHECK(valuate(f, x * y) == add(vx, vy));
        const ExtendedValue vs = valuate(f, x + y);
        const ExtendedValue lo = vx < vy ? vx : vy;
        CHECK(vs >= lo);
        if (vx != vy) CHECK(vs == lo);
        CHECK(valuate(f, RationalFunction() - x) == vx);
    }
}

}  // namespace

TEST_CASE("polynomials in t") {
    const TPoly a({1, 2}), b({0, 0, 3});
    CHECK((a * b) == TPoly({0, 0, 3, 6}));
    CHECK((a - a).is_zero());
    CHECK(b.order() == 2);
    CHECK(TPoly({0, 0}).is_zero());
    CHECK(TPoly::monomial(5, 3).degree() == 3);
    CHECK_THROWS_AS(q(1) / RationalFunction(), std::domain_error);
}

TEST_CASE("p-adic valuations") {
    const ConcreteField f{ConcreteField::Kind::RationalsPadic, 5};
    CHECK(valuate(f, q(50)) == ExtendedValue(el({2})));
    CHECK(valuate(f, q(3, 125)) == ExtendedValue(el({-3})));
    CHECK(valuate(f, q(0)).is_plus_infinity());
    CHECK(padic_valuation(Rational(-24), 2) == 3);
    CHECK_THROWS_AS(valuate(f, RationalFunction(TPoly({0, 1}))), InvariantError);
}

TEST_CASE("composite valuation on Q(t)") {
    const ConcreteField f{ConcreteField::Kind::RationalFunctionComposite, 3};
    // (9 t^2 + t^3) / (2 t) -> (1, 2)
    const RationalFunction x(TPoly({0, 0, 9, 1}), TPoly({0, 2}));
    CHECK(valuate(f, x) == ExtendedValue(el({1, 2})));
    CHECK(valuate(f, q(1, 3)) == ExtendedValue(el({0, -1})));
    CHECK(f.value_group().arity() == 2);
}

TEST_CASE("valuation axioms on random pairs") {
    testsupport::Rng rng(23);
    check_axioms({ConcreteField::Kind::RationalsPadic, 2}, rng);
    check_axioms({ConcreteField::Kind::RationalsPadic, 5}, rng);
    check_axioms({ConcreteField::Kind::RationalFunctionComposite, 3}, rng);
}

TEST_CASE("evaluating a factored function") {
    ConcreteFunction phi;
    phi.lead = q(2);
    phi.num = {{q(1), 2}};
    phi.den = {{q(3), 1}};
    CHECK((evaluate(phi, q(5)) - q(16)).is_zero());
    CHECK_THROWS_AS(evaluate(phi, q(3)), std::domain_error);
}

TEST_CASE("pattern fitting") {
    std::vector<GroupElement> deltas;
    std::vector<ExtendedValue> values;
    for (long k = 0; k < 8; ++k) {
        deltas.push_back(el({k}));
        values.emplace_back(GroupElement(el({k < 3 ? 0 : 2 * k - 1})));
    }
    const FitResult a = fit_pattern(deltas, values);
    CHECK(a.kind == FitResult::Kind::Affine);
    CHECK(a.d == 2);
    CHECK(a.beta == el({-1}));
    CHECK(fit_pattern(deltas, values, 8).kind == FitResult::Kind::Inconsistent);

    std::vector<ExtendedValue> flat(8, ExtendedValue(GroupElement(el({4}))));
    const FitResult c = fit_pattern(deltas, flat);
    CHECK(c.kind == FitResult::Kind::Constant);
    CHECK(c.beta == el({4}));

    std::vector<ExtendedValue> half = flat;
    for (long k = 0; k < 8; ++k) half[k] = GroupElement(el({Rational(k, 2)}));
    CHECK(fit_pattern(deltas, half).kind == FitResult::Kind::Inconsistent);

    std::vector<ExtendedValue> inf = flat;
    inf.back() = ExtendedValue::plus_infinity();
    CHECK(fit_pattern(deltas, inf).kind == FitResult::Kind::Inconsistent);

    CHECK_THROWS_AS(fit_pattern({el({0}), el({1})}, {flat[0], flat[1]}), InvalidConfiguration);
}

TEST_CASE("cross check on the 5-adic geometric sequence") {
    // z_nu = (5^(nu+1) - 1) / 4, limit -1/4, phi = X + 1/4
    const ConcreteField f{ConcreteField::Kind::RationalsPadic, 5};
    std::vector<RationalFunction> seq;
    Integer pw(5);
    for (int nu = 0; nu < 12; ++nu, pw *= 5) seq.push_back(RationalFunction::constant(Rational(pw - 1, 4)));
    ConcreteFunction phi;
    phi.num = {{q(-1, 4), 1}};
    FactoredRationalFunction tagged;
    tagged.lead_value = el({0});
    tagged.num_roots = {{IsLimitOfE{}, 1, "-1/4"}};
    const CrossCheckReport rep = cross_check(f, seq, phi, tagged);
    CHECK(rep.kind == PmsKind::Pcs);
    CHECK(rep.fit.d == 1);
    CHECK(rep.fit.beta == el({0}));
    CHECK(rep.agree);
    CHECK(rep.offending_roots.empty());

    tagged.num_roots = {{UltimateDistance{el({0})}, 1, "-1/4"}};
    const CrossCheckReport bad = cross_check(f, seq, phi, tagged);
    CHECK_FALSE(bad.agree);
    CHECK(bad.offending_roots == std::vector<std::string>{"-1/4"});

    tagged.num_roots.clear();
    CHECK_THROWS_AS(cross_check(f, seq, phi, tagged), InvalidConfiguration);
}

TEST_CASE("cross check on random p-adic constructions") {
    testsupport::Rng rng(29);
    int checked = 0;
    while (checked < 40) {
        auto inst = testsupport::padic_geometric_instance(rng, 16);
        if (testsupport::has_pole(inst)) continue;
        const CrossCheckReport rep = cross_check(inst.field, inst.seq, inst.phi, inst.tagged, 8);
        CHECK_MESSAGE(rep.agree, inst.label);
        CHECK(rep.offending_roots.empty());
        ++checked;
    }
}

TEST_CASE("cross check on pds constructions") {
    testsupport::Rng rng(31);
    for (int k = 0; k < 20; ++k) {
        const auto inst = testsupport::padic_divergent_instance(rng, 12);
        const CrossCheckReport rep = cross_check(inst.field, inst.seq, inst.phi, inst.tagged);
        CHECK(rep.kind == PmsKind::Pds);
        CHECK(rep.agree);
        CHECK(rep.offending_roots.empty());
    }
}

TEST_CASE("cross check on a pseudo constant sequence") {
    // z_nu = nu in (Q, v_5) for nu = 1..4 differ by units: all distances 0
    const ConcreteField f{ConcreteField::Kind::RationalsPadic, 5};
    const std::vector<RationalFunction> seq = {q(1), q(2), q(3), q(4)};
    ConcreteFunction phi;
    phi.lead = q(25);
    phi.num = {{q(0), 1}};
    FactoredRationalFunction tagged;
    tagged.lead_value = el({2});
    tagged.num_roots = {{UltimateDistance{el({0})}, 1, "0"}};
    const CrossCheckReport rep = cross_check(f, seq, phi, tagged, 2);
    CHECK(rep.kind == PmsKind::Pcts);
    CHECK(rep.agree);
}

TEST_CASE("distance matrices satisfy the isosceles law") {
    testsupport::Rng rng(37);
    for (int k = 0; k < 20; ++k) {
        const auto c = testsupport::composite_instance(rng, 8);
        auto m = distance_matrix(c.inst.field, c.inst.seq);
        CHECK_NOTHROW(classify_from_prefix(m));
    }
}
