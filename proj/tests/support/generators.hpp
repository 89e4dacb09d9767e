#pragma once

// Randomized instance builders shared by the unit and acceptance tests.
// Expected values are derived from the constructions, never from the library.

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "pmsval/engine.hpp"
#include "pmsval/groups.hpp"
#include "pmsval/oracle.hpp"
#include "pmsval/pms.hpp"
#include "pmsval/rank.hpp"

namespace testsupport {

using namespace pmsval;
using Rng = std::mt19937_64;

inline long uniform(Rng& rng, long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); }

inline Rational random_rational(Rng& rng, long num_range = 9, long den_max = 6) {
    Rational q(uniform(rng, -num_range, num_range), uniform(rng, 1, den_max));
    q.canonicalize();
    return q;
}

inline Component random_component(Rng& rng, bool dense) {
    switch (uniform(rng, dense ? 1 : 0, 2)) {
        case 0: return Cyclic{Rational(1, uniform(rng, 1, 3))};
        case 1: {
            const long primes[] = {2, 3, 5};
            return PPowerDivisible{primes[uniform(rng, 0, 2)], Rational(uniform(rng, 1, 3))};
        }
        default: return FullRational{};
    }
}

inline ExactReal random_member(Rng& rng, const Component& c) {
    return ExactReal(unit_step(c) * Rational(uniform(rng, -3, 3)));
}

/// Kind of finite bound drawn for the terminal coordinate.
enum class BoundChoice { Unbounded, Member, HullNotMember, Surd };

inline ExactReal hull_non_member(const Component& c) {
    // 1/7 of the unit step is in Q but outside every component used here
    // except the full rationals.
    return ExactReal(unit_step(c) * Rational(1, 7));
}

struct ChainInstance {
    PmsDescriptor e;
    BoundChoice bound = BoundChoice::Unbounded;
    std::size_t terminal = 0;
};

/// Valid algebraic-type pcs (or pds) with a synthesized delta prefix.
inline ChainInstance random_chain_instance(Rng& rng, std::size_t n, PmsKind kind, std::size_t prefix = 6) {
    ChainInstance out;
    PmsDescriptor& e = out.e;
    e.kind = kind;
    out.terminal = static_cast<std::size_t>(uniform(rng, 0, static_cast<long>(n) - 1));
    long pick = uniform(rng, 0, 3);
    for (std::size_t i = 0; i < n; ++i) {
        const bool dense = i == out.terminal && pick != 0;
        e.group.components.push_back(random_component(rng, dense));
    }
    const Component& term = e.group.components[out.terminal];
    if (pick == 2 && std::holds_alternative<FullRational>(term)) pick = 1;
    out.bound = static_cast<BoundChoice>(pick);

    StageChain chain;
    for (std::size_t i = 0; i < out.terminal; ++i) {
        chain.constants.push_back({random_member(rng, e.group.components[i]), 0});
    }
    Terminal t;
    t.direction = kind == PmsKind::Pcs ? Direction::Increasing : Direction::Decreasing;
    switch (out.bound) {
        case BoundChoice::Unbounded: t.bound = Unbounded{}; break;
        case BoundChoice::Member: t.bound = BoundInGroup{random_member(rng, term)}; break;
        case BoundChoice::HullNotMember: t.bound = BoundNotInGroup{hull_non_member(term)}; break;
        case BoundChoice::Surd: {
            const long d[] = {2, 3, 5, 7};
            t.bound = BoundNotInGroup{
                ExactReal::surd(random_rational(rng, 3, 3), Rational(uniform(rng, 1, 3)) * (uniform(rng, 0, 1) ? 1 : -1),
                                d[uniform(rng, 0, 3)])};
            break;
        }
    }
    chain.terminal = t;
    e.chain = chain;
    if (kind == PmsKind::Pcs) e.pcs_type = Algebraic{static_cast<int>(uniform(rng, 1, 3))};
    if (kind == PmsKind::Pds) e.prefix_offset = 1;
    synthesize_prefix(e, prefix);
    return out;
}

/// Expected rank increment straight from the tree description.
inline int expected_rank_delta(const ChainInstance& c) {
    switch (c.bound) {
        case BoundChoice::Unbounded:
        case BoundChoice::Member:
        case BoundChoice::HullNotMember: return 1;
        case BoundChoice::Surd: return 0;
    }
    return 0;
}

inline GroupElement random_element(Rng& rng, std::size_t n) {
    GroupElement g;
    for (std::size_t i = 0; i < n; ++i) {
        if (uniform(rng, 0, 5) == 0) {
            const long d[] = {2, 3, 5};
            g.coords.push_back(ExactReal::surd(random_rational(rng, 4, 3), random_rational(rng, 3, 3), d[uniform(rng, 0, 2)]));
        } else {
            g.coords.emplace_back(Rational(uniform(rng, -2, 2)));
        }
    }
    return g;
}

inline GroupElement random_rational_element(Rng& rng, std::size_t n) {
    GroupElement g;
    for (std::size_t i = 0; i < n; ++i) g.coords.emplace_back(random_rational(rng, 4, 3));
    return g;
}

inline FactoredRationalFunction random_frf(Rng& rng, std::size_t n, std::size_t max_roots = 4) {
    FactoredRationalFunction f;
    f.lead_value = GroupElement::zero(n);
    for (auto& c : f.lead_value.coords) c = ExactReal(Rational(uniform(rng, -3, 3)));
    const auto root = [&] {
        TaggedRoot r;
        r.multiplicity = uniform(rng, 1, 3);
        if (uniform(rng, 0, 1)) {
            r.tag = IsLimitOfE{};
        } else {
            r.tag = UltimateDistance{random_rational_element(rng, n)};
        }
        return r;
    };
    const long nn = uniform(rng, 0, static_cast<long>(max_roots));
    const long nd = uniform(rng, 0, static_cast<long>(max_roots) - nn);
    for (long i = 0; i < nn; ++i) f.num_roots.push_back(root());
    for (long i = 0; i < nd; ++i) f.den_roots.push_back(root());
    return f;
}

// ---------------------------------------------------------------------------
// Concrete oracle instances.

inline Rational pow_rational(long p, long e) {
    Integer q;
    mpz_ui_pow_ui(q.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(e < 0 ? -e : e));
    return e < 0 ? Rational(1) / Rational(q) : Rational(q);
}

/// Rational with p-adic valuation exactly e and small cofactors.
inline Rational with_valuation(Rng& rng, long p, long e) {
    long a = 0, b = 0;
    do {
        a = uniform(rng, -20, 20);
    } while (a == 0 || a % p == 0);
    do {
        b = uniform(rng, 1, 20);
    } while (b % p == 0);
    return Rational(a, b) * pow_rational(p, e);
}

struct OracleInstance {
    ConcreteField field;
    std::vector<RationalFunction> seq;
    ConcreteFunction phi;
    FactoredRationalFunction tagged;  ///< derived from the construction
    RationalFunction limit;
    std::string label;
};

/// z_nu = s + u * sum_{k <= nu} r^k in (Q, v_p); limit s + u / (1 - r).
/// Roots are the limit or limit + (unit) * p^e with a known ultimate value e.
inline OracleInstance padic_geometric_instance(Rng& rng, std::size_t length, std::size_t max_roots = 4) {
    const long primes[] = {2, 3, 5, 7};
    OracleInstance inst;
    inst.field = {ConcreteField::Kind::RationalsPadic, primes[uniform(rng, 0, 3)]};
    const long p = inst.field.p;
    const long vu = uniform(rng, -2, 2);
    const long m = uniform(rng, 1, 2);
    const Rational s = random_rational(rng, 9, 9);
    const Rational u = with_valuation(rng, p, vu);
    const Rational r = with_valuation(rng, p, m);
    const Rational limit = s + u / (1 - r);
    inst.limit = RationalFunction::constant(limit);
    Rational partial = 0, power = 1;
    for (std::size_t nu = 0; nu < length; ++nu) {
        partial += power;
        power *= r;
        inst.seq.push_back(RationalFunction::constant(s + u * partial));
    }

    const Rational lead = with_valuation(rng, p, uniform(rng, -2, 2));
    inst.phi.lead = RationalFunction::constant(lead);
    inst.tagged.lead_value = GroupElement({ExactReal(Rational(padic_valuation(lead, p)))});
    const long delta0 = vu + m;
    const auto make_root = [&](TaggedRoot& tag) -> Rational {
        tag.multiplicity = uniform(rng, 1, 2);
        if (uniform(rng, 0, 2) == 0) {
            tag.tag = IsLimitOfE{};
            return limit;
        }
        const long e = uniform(rng, delta0 - 3, delta0 + 3);
        tag.tag = UltimateDistance{GroupElement({ExactReal(e)})};
        return limit + with_valuation(rng, p, e);
    };
    const long total = uniform(rng, 1, static_cast<long>(max_roots));
    const long nd = uniform(rng, 0, total / 2);
    std::vector<Rational> used;
    for (long i = 0; i < total; ++i) {
        TaggedRoot tag;
        Rational a = make_root(tag);
        while (std::find(used.begin(), used.end(), a) != used.end()) a = make_root(tag);
        used.push_back(a);
        tag.name = to_string(a);
        const bool den = i < nd;
        (den ? inst.phi.den : inst.phi.num).emplace_back(RationalFunction::constant(a), tag.multiplicity);
        (den ? inst.tagged.den_roots : inst.tagged.num_roots).push_back(tag);
    }
    inst.label = "p=" + std::to_string(p) + " v(u)=" + std::to_string(vu) + " m=" + std::to_string(m);
    return inst;
}

/// True iff some denominator root coincides with a sequence member.
inline bool has_pole(const OracleInstance& inst) {
    for (const auto& z : inst.seq) {
        for (const auto& [b, _] : inst.phi.den) {
            if ((z - b).is_zero()) return true;
        }
    }
    return false;
}

/// z_nu = a + c t^k sum_{i <= nu} (p^m)^i in Q(t): deltas (k, v_p(c) + m (nu + 1)).
struct CompositeInstance {
    OracleInstance inst;
    long k = 0, vc = 0, m = 1;
};

inline CompositeInstance composite_instance(Rng& rng, std::size_t length, std::size_t max_roots = 3) {
    const long primes[] = {2, 3, 5};
    CompositeInstance out;
    OracleInstance& inst = out.inst;
    inst.field = {ConcreteField::Kind::RationalFunctionComposite, primes[uniform(rng, 0, 2)]};
    const long p = inst.field.p;
    out.k = uniform(rng, 0, 3);
    out.m = uniform(rng, 1, 2);
    out.vc = uniform(rng, -1, 1);
    const Rational c = with_valuation(rng, p, out.vc);
    std::vector<Rational> acoef;
    for (int i = 0; i < 3; ++i) acoef.push_back(random_rational(rng, 5, 4));
    const RationalFunction a{TPoly(acoef)};
    const Rational pm = pow_rational(p, out.m);
    const RationalFunction limit = a + RationalFunction(TPoly::monomial(c / (1 - pm), static_cast<std::size_t>(out.k)));
    inst.limit = limit;
    Rational partial = 0, power = 1;
    for (std::size_t nu = 0; nu < length; ++nu) {
        partial += power;
        power *= pm;
        inst.seq.push_back(a + RationalFunction(TPoly::monomial(c * partial, static_cast<std::size_t>(out.k))));
    }
    inst.phi.lead = RationalFunction::constant(1);
    inst.tagged.lead_value = GroupElement::zero(2);
    const long delta0 = out.vc + out.m;
    const long total = uniform(rng, 1, static_cast<long>(max_roots));
    for (long i = 0; i < total; ++i) {
        TaggedRoot tag;
        tag.multiplicity = 1;
        RationalFunction root = limit;
        switch (uniform(rng, 0, 3)) {
            case 0: tag.tag = IsLimitOfE{}; break;
            case 1: {  // higher t-order perturbation: still a limit
                root = limit + RationalFunction(TPoly::monomial(random_rational(rng, 5, 3) + 7, static_cast<std::size_t>(out.k + uniform(rng, 1, 2))));
                tag.tag = IsLimitOfE{};
                break;
            }
            case 2: {  // same t-order, p-adically close but not a limit
                const long e = uniform(rng, delta0 - 2, delta0 + 2);
                root = limit + RationalFunction(TPoly::monomial(with_valuation(rng, p, e), static_cast<std::size_t>(out.k)));
                tag.tag = UltimateDistance{GroupElement({ExactReal(out.k), ExactReal(e)})};
                break;
            }
            default: {  // lower t-order perturbation (if any), or a far p-adic one
                if (out.k > 0) {
                    const long kk = uniform(rng, 0, out.k - 1);
                    const Rational w = with_valuation(rng, p, uniform(rng, -1, 2));
                    root = limit + RationalFunction(TPoly::monomial(w, static_cast<std::size_t>(kk)));
                    tag.tag = UltimateDistance{GroupElement({ExactReal(kk), ExactReal(padic_valuation(w, p))})};
                } else {
                    const long e = delta0 - 3;
                    root = limit + RationalFunction::constant(with_valuation(rng, p, e));
                    tag.tag = UltimateDistance{GroupElement({ExactReal(0L), ExactReal(e)})};
                }
                break;
            }
        }
        tag.name = root.to_string();
        inst.phi.num.emplace_back(root, 1);
        inst.tagged.num_roots.push_back(tag);
    }
    inst.label = "p=" + std::to_string(p) + " k=" + std::to_string(out.k) + " m=" + std::to_string(out.m);
    return out;
}

/// z_nu = p^(-nu) in (Q, v_p): a pds with delta_nu = -nu; every element of Q is a limit.
inline OracleInstance padic_divergent_instance(Rng& rng, std::size_t length) {
    const long primes[] = {2, 3, 5};
    OracleInstance inst;
    inst.field = {ConcreteField::Kind::RationalsPadic, primes[uniform(rng, 0, 2)]};
    const long p = inst.field.p;
    for (std::size_t nu = 0; nu < length; ++nu) inst.seq.push_back(RationalFunction::constant(pow_rational(p, -static_cast<long>(nu))));
    const Rational lead = with_valuation(rng, p, uniform(rng, -2, 2));
    inst.phi.lead = RationalFunction::constant(lead);
    inst.tagged.lead_value = GroupElement({ExactReal(Rational(padic_valuation(lead, p)))});
    const long total = uniform(rng, 1, 3);
    for (long i = 0; i < total; ++i) {
        const Rational a = random_rational(rng, 30, 30);
        TaggedRoot tag;
        tag.tag = IsLimitOfE{};
        tag.multiplicity = uniform(rng, 1, 2);
        inst.phi.num.emplace_back(RationalFunction::constant(a), tag.multiplicity);
        inst.tagged.num_roots.push_back(tag);
    }
    return inst;
}

}  // namespace testsupport
