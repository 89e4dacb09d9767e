#include "pmsval/engine.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "pmsval/errors.hpp"

namespace pmsval {

const char* to_string(AlphaPosition p) {
    switch (p) {
        case AlphaPosition::AboveAll: return "above_all";
        case AlphaPosition::BelowAll: return "below_all";
        case AlphaPosition::Inside: return "inside";
    }
    return "?";
}

const char* to_string(ExtensionKind k) {
    switch (k) {
        case ExtensionKind::Immediate: return "immediate";
        case ExtensionKind::ValueTranscendental: return "value_transcendental";
        case ExtensionKind::ResidueTranscendental: return "residue_transcendental";
    }
    return "?";
}

std::string KeyPolySketch::to_string() const {
    return "{" + family + "} u {Q: deg " + std::to_string(q_degree) + "}";
}

void validate(const FactoredRationalFunction& phi, const GroupDescriptor& g) {
    if (phi.lead_value.arity() != g.arity()) throw DescriptorMismatch("lead value arity");
    if (!contains(g, phi.lead_value)) {
        throw InvariantError("lead-membership", phi.lead_value.to_string() + " is not in " + describe(g));
    }
    std::set<std::string> names;
    for (const auto* side : {&phi.num_roots, &phi.den_roots}) {
        for (const auto& r : *side) {
            if (r.multiplicity < 1) throw InvariantError("multiplicity", "root multiplicity must be positive");
            if (const auto* u = std::get_if<UltimateDistance>(&r.tag)) {
                if (u->beta.arity() != g.arity()) throw DescriptorMismatch("root distance arity");
                if (!hull_contains(g, u->beta)) {
                    throw InvariantError("beta-membership",
                                         u->beta.to_string() + " is not in the divisible hull of " + describe(g));
                }
            }
        }
    }
    for (const auto& r : phi.num_roots) {
        if (!r.name.empty()) names.insert(r.name);
    }
    for (const auto& r : phi.den_roots) {
        if (!r.name.empty() && names.count(r.name)) {
            throw InvariantError("non-reduced", "root '" + r.name + "' appears in numerator and denominator");
        }
    }
}

DominatingForm dominating_degree(const FactoredRationalFunction& phi, const PmsDescriptor& e) {
    validate(phi, e.group);
    DominatingForm out{0, phi.lead_value};
    auto accumulate = [&](const std::vector<TaggedRoot>& roots, long sign) {
        for (const auto& r : roots) {
            if (r.is_limit()) {
                out.d += sign * r.multiplicity;
            } else {
                out.beta = out.beta + scale(sign * r.multiplicity, std::get<UltimateDistance>(r.tag).beta);
            }
        }
    };
    accumulate(phi.num_roots, 1);
    accumulate(phi.den_roots, -1);
    return out;
}

VEValue v_E(const FactoredRationalFunction& phi, const PmsDescriptor& e, const AlphaPlacement* placement,
            bool require_placement) {
    VEValue out;
    out.form = dominating_degree(phi, e);
    const long d = out.form.d;
    const GroupElement& beta = out.form.beta;
    out.symbolic = std::to_string(d) + "*alpha + " + beta.to_string();

    if (e.is_transcendental_pcs()) {
        const auto has_limit = [](const std::vector<TaggedRoot>& rs) {
            return std::any_of(rs.begin(), rs.end(), [](const TaggedRoot& r) { return r.is_limit(); });
        };
        if (has_limit(phi.num_roots) || has_limit(phi.den_roots)) {
            throw InvariantError("limit-of-transcendental-pcs",
                                 "a pcs of transcendental type has no limit in the algebraic closure");
        }
    }
    if (e.kind == PmsKind::Pcts) {
        if (!e.pcts_delta) throw InvariantError("missing-delta", "pcts needs its constant delta");
        out.value = ExtendedValue(scale(d, *e.pcts_delta) + beta);
        out.symbolic = out.value->to_string();
        out.in_vK = out.torsion_over_vK = true;
        return out;
    }
    if (d == 0) {
        out.value = ExtendedValue(beta);
        out.symbolic = beta.to_string();
        out.in_vK = out.torsion_over_vK = true;
        return out;
    }
    if (placement) {
        out.value = ExtendedValue(scale(d, placement->alpha) + placement->embedding.apply(beta));
    } else if (require_placement) {
        throw InvariantError("missing-extended-descriptor", "d != 0 needs the extended group and alpha");
    }
    return out;
}

MonomialValue monomial_value(const std::vector<std::pair<long, ExtendedValue>>& coeffs, const ExtendedValue& alpha) {
    std::optional<ExtendedValue> best;
    for (const auto& [i, vc] : coeffs) {
        if (i < 0) throw InvariantError("negative-exponent", "monomial exponents must be non-negative");
        if (vc.is_plus_infinity()) continue;
        ExtendedValue term = add(vc, scale(i, alpha));
        if (!best || term < *best) best = std::move(term);
    }
    if (!best) return {ExtendedValue::plus_infinity(), true};
    return {*best, false};
}

bool pair_equality(const ExtendedValue& alpha, const ExtendedValue& alpha2, const ExtendedValue& v_ab) {
    return compare(alpha, alpha2) == 0 && v_ab >= alpha;
}

MaxDistanceResult max_distance_check(const UltrametricConfiguration& cfg, const std::string& y) {
    MaxDistanceResult out;
    std::optional<ExtendedValue> anchor_value;
    for (const auto& a : cfg.points) {
        if (a == y) continue;
        const auto d = cfg.dist(y, a);
        if (d && d->is_finite() && !cfg.in_base_group(*d)) {
            out.precondition_met = true;
            out.anchor = a;
            anchor_value = *d;
            break;
        }
    }
    if (!out.precondition_met) return out;
    for (const auto& b : cfg.points) {
        if (b == y) continue;
        const auto d = cfg.dist(y, b);
        if (d && *d > *anchor_value) {
            out.violator = b;
            break;
        }
    }
    return out;
}

AlphaPosition classify_alpha_position(const PmsDescriptor& e) {
    switch (e.kind) {
        case PmsKind::Pcts: return AlphaPosition::Inside;
        case PmsKind::Pds: return diverges_to_infinity(e) ? AlphaPosition::BelowAll : AlphaPosition::Inside;
        case PmsKind::Pcs:
            if (!e.pcs_type) throw InvariantError("pcs-type-undeclared", "declare the pcs type");
            if (e.is_transcendental_pcs()) {
                throw InvariantError("not-applicable", "a pcs of transcendental type has no pair of definition");
            }
            return is_cauchy(e) ? AlphaPosition::AboveAll : AlphaPosition::Inside;
    }
    return AlphaPosition::Inside;
}

ExtendedValue delta_of_polynomial(const FactoredRationalFunction& f, const std::vector<ExtendedValue>& distances) {
    if (!f.den_roots.empty()) throw InvariantError("not-a-polynomial", "delta(f) is defined for polynomials");
    if (f.num_roots.empty()) throw InvariantError("constant-polynomial", "delta(f) is undefined for constants");
    if (distances.size() != f.num_roots.size()) throw InvalidConfiguration("one distance per root is required");
    return *std::max_element(distances.begin(), distances.end(),
                             [](const auto& a, const auto& b) { return a < b; });
}

namespace {

ExtendedValue probe_image(const Embedding& emb, const GroupElement& beta) {
    const std::size_t src = emb.source.arity();
    const std::size_t tgt = emb.target.arity();
    if (beta.arity() == src) {
        if (!hull_contains(emb.source, beta)) {
            throw InvariantError("probe-outside-base", beta.to_string() + " is not in the divisible hull of vK");
        }
        return ExtendedValue(emb.apply(beta));
    }
    if (beta.arity() == tgt) {
        for (std::size_t pos : emb.inserted) {
            if (!beta.coords[pos].is_zero()) {
                throw InvariantError("probe-outside-base", beta.to_string() + " is not in the image of vK");
            }
        }
        if (!hull_contains(emb.source, emb.project(beta))) {
            throw InvariantError("probe-outside-base", beta.to_string() + " is not in the image of vK");
        }
        return ExtendedValue(beta);
    }
    throw DescriptorMismatch("probe arity " + std::to_string(beta.arity()));
}

ProbeCheck check_iii(const PmsDescriptor& e, const AlphaPlacement& placement, const std::vector<GroupElement>& probes,
                     bool pcs) {
    ProbeCheck out;
    const ExtendedValue alpha(placement.alpha);
    for (const auto& beta : probes) {
        const ExtendedValue y = probe_image(placement.embedding, beta);
        const bool lhs = pcs ? y > alpha : y < alpha;
        const bool rhs = pcs ? exceeds_all_deltas(e, y, &placement.embedding)
                             : below_all_deltas(e, y, &placement.embedding);
        ++out.probes_checked;
        if (lhs != rhs) {
            out.holds = false;
            out.counterexample = beta;
            return out;
        }
    }
    return out;
}

}  // namespace

ProbeCheck check_pcs_equivalence_iii(const PmsDescriptor& e, const AlphaPlacement& placement,
                                     const std::vector<GroupElement>& probes) {
    if (e.kind != PmsKind::Pcs) throw WrongKind("the pcs checker expects a pcs");
    return check_iii(e, placement, probes, true);
}

ProbeCheck check_pds_equivalence_iii(const PmsDescriptor& e, const AlphaPlacement& placement,
                                     const std::vector<GroupElement>& probes) {
    if (e.kind != PmsKind::Pds) throw WrongKind("the pds checker expects a pds");
    return check_iii(e, placement, probes, false);
}

ExtensionReport extension_report(const PmsDescriptor& e, const AlphaPlacement* placement) {
    validate(e);
    ExtensionReport r;
    r.ic_label = "K^h";
    switch (e.kind) {
        case PmsKind::Pcts: {
            r.kind = ExtensionKind::ResidueTranscendental;
            r.pure = true;
            const GroupElement delta = placement ? placement->embedding.apply(*e.pcts_delta) : *e.pcts_delta;
            r.pair = PairOfDefinition{"z_0", ExtendedValue(delta), std::nullopt};
            break;
        }
        case PmsKind::Pds:
            r.kind = ExtensionKind::ValueTranscendental;
            r.pure = true;
            if (placement) r.pair = PairOfDefinition{"z_nu", ExtendedValue(placement->alpha), std::nullopt};
            break;
        case PmsKind::Pcs:
            if (!e.pcs_type) throw InvariantError("pcs-type-undeclared", "declare the pcs type");
            if (e.is_transcendental_pcs()) {
                r.kind = ExtensionKind::Immediate;
                r.pure = true;
                break;
            }
            r.kind = ExtensionKind::ValueTranscendental;
            r.pure = e.limit_in_field;
            r.ic_label = "K^h (algebraic-type pcs)";
            r.key_poly_sketch = KeyPolySketch{"X - z_nu", std::get<Algebraic>(*e.pcs_type).min_poly_degree};
            if (placement) r.pair = PairOfDefinition{"a", ExtendedValue(placement->alpha), std::nullopt};
            break;
    }
    return r;
}

UltrametricConfiguration induced_configuration(const PmsDescriptor& e, const AlphaPlacement& placement) {
    if (e.prefix.empty()) throw InvariantError("empty-prefix", "the induced configuration needs a delta prefix");
    const Embedding& emb = placement.embedding;
    std::map<std::size_t, GroupElement> delta;
    for (std::size_t k = 0; k < e.prefix.size(); ++k) delta.emplace(e.prefix_offset + k, emb.apply(e.prefix[k]));
    const std::size_t last_delta = e.prefix_offset + e.prefix.size() - 1;
    const std::size_t last_point = e.kind == PmsKind::Pcs ? last_delta + 1 : last_delta;

    UltrametricConfiguration cfg;
    cfg.group = emb.target;
    cfg.base = emb;
    for (std::size_t nu = 0; nu <= last_point; ++nu) cfg.sequence.push_back("z_" + std::to_string(nu));
    cfg.points = cfg.sequence;
    cfg.points.push_back("X");
    const auto known = [&](std::size_t nu) -> const GroupElement* {
        const auto it = delta.find(nu);
        return it == delta.end() ? nullptr : &it->second;
    };
    const ExtendedValue alpha(placement.alpha);

    for (std::size_t mu = 0; mu <= last_point; ++mu) {
        for (std::size_t nu = mu + 1; nu <= last_point; ++nu) {
            const std::size_t idx = e.kind == PmsKind::Pds ? nu : mu;
            if (const auto* d = known(idx)) cfg.set(cfg.sequence[mu], cfg.sequence[nu], *d);
        }
    }
    switch (e.kind) {
        case PmsKind::Pcs:
            cfg.points.push_back("a");
            cfg.known_limits.insert("a");
            cfg.set("X", "a", alpha);
            for (std::size_t nu = 0; nu <= last_point; ++nu) {
                if (const auto* d = known(nu)) {
                    cfg.set("X", cfg.sequence[nu], *d);
                    cfg.set("a", cfg.sequence[nu], *d);
                }
            }
            break;
        case PmsKind::Pds:
            for (const auto& z : cfg.sequence) cfg.set("X", z, alpha);
            break;
        case PmsKind::Pcts:
            for (std::size_t nu = 0; nu <= last_point; ++nu) {
                if (const auto* d = known(nu)) cfg.set("X", cfg.sequence[nu], *d);
            }
            break;
    }
    return cfg;
}

}  // namespace pmsval
