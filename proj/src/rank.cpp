#include "pmsval/rank.hpp"

#include <sstream>

#include "pmsval/errors.hpp"

namespace pmsval {

const char* to_string(Branch b) {
    switch (b) {
        case Branch::SupInfinite: return "sup_infinite";
        case Branch::BoundNotInGroup: return "bound_not_in_group";
        case Branch::BoundInGroupStrict: return "bound_in_group_strict";
        case Branch::BoundInGroupConstant: return "bound_in_group_constant";
    }
    return "?";
}

const char* to_string(Leaf l) { return l == Leaf::RankPlusOne ? "rank_plus_one" : "rank_same"; }

namespace {

Branch terminal_branch(const PmsDescriptor& e) {
    const auto& t = *e.chain->terminal;
    const auto r = bound_value(t.bound);
    if (!r) return Branch::SupInfinite;
    return hull_contains(e.group.components[e.chain->terminal_index()], *r) ? Branch::BoundInGroupStrict
                                                                            : Branch::BoundNotInGroup;
}

void verify_alpha(const PmsDescriptor& e, const AlphaPlacement& placement) {
    const bool pcs = e.kind == PmsKind::Pcs;
    const ExtendedValue alpha(placement.alpha);
    for (std::size_t k = 0; k < e.prefix.size(); ++k) {
        const ExtendedValue d(placement.embedding.apply(e.prefix[k]));
        if (pcs ? !(alpha > d) : !(alpha < d)) {
            throw InvariantError("alpha-contract", "alpha " + placement.alpha.to_string() + " does not lie " +
                                                       (pcs ? "above" : "below") + " delta_" +
                                                       std::to_string(e.prefix_offset + k));
        }
    }
    const auto probes = auto_probes(e);
    const ProbeCheck check = pcs ? check_pcs_equivalence_iii(e, placement, probes)
                                 : check_pds_equivalence_iii(e, placement, probes);
    if (!check.holds) {
        throw InvariantError("alpha-contract", "probe " + check.counterexample->to_string() +
                                                   " separates alpha from the delta tail");
    }
}

}  // namespace

RankResult rank_of_vE(const PmsDescriptor& e, bool self_check) {
    validate(e);
    RankResult out;
    out.input_rank = rank(e.group);
    if (e.kind == PmsKind::Pcs && !e.pcs_type) throw InvariantError("pcs-type-undeclared", "declare the pcs type");
    if (e.kind == PmsKind::Pcts || e.is_transcendental_pcs()) {
        out.short_circuit = true;
        out.output_rank = out.input_rank;
        out.extended_group = e.group;
        out.trace.leaf = Leaf::RankSame;
        if (e.kind == PmsKind::Pcs) out.sup_or_inf = sup_of(e);
        return out;
    }

    const auto& chain = *e.chain;
    const std::size_t j = chain.terminal_index();
    for (std::size_t i = 0; i < j; ++i) out.trace.steps.push_back({i + 1, Branch::BoundInGroupConstant});
    const Branch branch = terminal_branch(e);
    out.trace.steps.push_back({j + 1, branch});

    const long sign = e.kind == PmsKind::Pcs ? 1 : -1;
    std::vector<ExactReal> alpha;
    for (const auto& c : chain.constants) alpha.push_back(c.value);
    Embedding emb;
    switch (branch) {
        case Branch::SupInfinite:
            emb = insert_formal_integer(e.group, j);
            alpha.emplace_back(sign);
            out.trace.leaf = Leaf::RankPlusOne;
            break;
        case Branch::BoundNotInGroup: {
            const ExactReal r = *bound_value(chain.terminal->bound);
            emb = Embedding{e.group, adjoin_to_component(e.group, j, r), {}};
            alpha.push_back(r);
            out.trace.leaf = Leaf::RankSame;
            break;
        }
        case Branch::BoundInGroupStrict: {
            const ExactReal r = *bound_value(chain.terminal->bound);
            const GroupDescriptor widened =
                contains(e.group.components[j], r) ? e.group : adjoin_to_component(e.group, j, r);
            emb = Embedding{e.group, insert_formal_integer(widened, j + 1).target, {j + 1}};
            alpha.push_back(r);
            alpha.emplace_back(-sign);
            out.trace.leaf = Leaf::RankPlusOne;
            break;
        }
        case Branch::BoundInGroupConstant:
            throw std::logic_error("constant branch cannot terminate");
    }
    while (alpha.size() < emb.target.arity()) alpha.emplace_back(0L);

    out.extended_group = emb.target;
    out.output_rank = rank(out.extended_group);
    const int expected = out.input_rank + (*out.trace.leaf == Leaf::RankPlusOne ? 1 : 0);
    if (out.output_rank != expected) {
        throw InvariantError("rank-recomputation", "constructed group has rank " + std::to_string(out.output_rank) +
                                                       ", tree predicts " + std::to_string(expected));
    }
    out.placement = AlphaPlacement{std::move(emb), GroupElement(std::move(alpha))};
    out.sup_or_inf = e.kind == PmsKind::Pcs ? sup_of(e) : inf_of(e);
    if (self_check) verify_alpha(e, *out.placement);
    return out;
}

std::vector<GroupElement> auto_probes(const PmsDescriptor& e) {
    validate(e);
    if (!e.chain) return {GroupElement::zero(e.group.arity())};
    const auto& chain = *e.chain;
    const std::size_t n = e.group.arity();
    const std::size_t j = chain.terminal_index();
    std::vector<std::vector<ExactReal>> choices(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Component& comp = e.group.components[i];
        const ExactReal s(unit_step(comp));
        if (i < j) {
            const ExactReal& c = chain.constants[i].value;
            choices[i] = {c - s, c, c + s};
        } else if (i == j) {
            const auto r = bound_value(chain.terminal->bound);
            if (!r) {
                ExactReal lo(0L), hi(0L);
                for (const auto& d : e.prefix) {
                    lo = std::min(lo, d.coords[j]);
                    hi = std::max(hi, d.coords[j]);
                }
                choices[i] = {lo - s, ExactReal(0L), hi + s};
            } else if (hull_contains(comp, *r)) {
                const ExactReal q = s * Rational(1, 4);
                choices[i] = {*r - s, *r - q, *r, *r + q, *r + s};
            } else {
                choices[i] = {member_at_or_below(comp, *r, 0), member_at_or_below(comp, *r, 4),
                              member_at_or_above(comp, *r, 4), member_at_or_above(comp, *r, 0)};
            }
        } else {
            choices[i] = {-s, ExactReal(0L), s};
        }
    }
    std::vector<GroupElement> out{GroupElement{}};
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<GroupElement> next;
        next.reserve(out.size() * choices[i].size());
        for (const auto& partial : out) {
            for (const auto& x : choices[i]) {
                GroupElement g = partial;
                g.coords.push_back(x);
                next.push_back(std::move(g));
            }
        }
        out = std::move(next);
    }
    return out;
}

std::vector<LeafShape> enumerate_leaves(std::size_t n) {
    if (n < 1 || n > 4) throw InvariantError("leaf-rank-range", "leaf enumeration supports ranks 1..4");
    std::vector<LeafShape> out;
    for (std::size_t level = 1; level <= n; ++level) {
        out.push_back({level, Branch::SupInfinite, 1});
        out.push_back({level, Branch::BoundNotInGroup, 0});
        out.push_back({level, Branch::BoundInGroupStrict, 1});
    }
    return out;
}

namespace {

/// Positive members of a dense component tending to 0.
ExactReal small_member(const Component& comp, unsigned k) {
    Integer two_k;
    mpz_ui_pow_ui(two_k.get_mpz_t(), 2, k);
    return member_at_or_below(comp, ExactReal(unit_step(comp) / Rational(two_k)), k);
}

/// Strictly increasing members of comp below r, resumed from *refine.
ExactReal next_below(const Component& comp, const ExactReal& r, const std::optional<ExactReal>& prev,
                     unsigned* refine) {
    const bool literal = contains(comp, r);
    for (unsigned guard = 0; guard < 256; ++guard) {
        const unsigned k = (*refine)++;
        const ExactReal x = literal ? r - small_member(comp, k) : member_at_or_below(comp, r, k);
        if (x < r && (!prev || x > *prev)) return x;
    }
    throw InvariantError("prefix-synthesis", "cannot approach " + r.to_string() + " inside " + describe(comp));
}

}  // namespace

void synthesize_prefix(PmsDescriptor& e, std::size_t length) {
    e.prefix.clear();
    if (e.kind == PmsKind::Pcts) {
        if (!e.pcts_delta) throw InvariantError("missing-delta", "pcts needs its constant delta");
        e.prefix.assign(length, *e.pcts_delta);
        return;
    }
    if (!e.chain || !e.chain->terminal) throw InvariantError("missing-chain", "prefix synthesis needs a chain");
    const auto& chain = *e.chain;
    const std::size_t n = e.group.arity();
    const std::size_t j = chain.terminal_index();
    const Component& comp = e.group.components[j];
    const bool pcs = e.kind == PmsKind::Pcs;
    const auto bound = bound_value(chain.terminal->bound);
    std::optional<ExactReal> prev;
    unsigned refine = 0;
    for (std::size_t k = 0; k < length; ++k) {
        const std::size_t nu = e.prefix_offset + k;
        std::vector<ExactReal> coords;
        for (const auto& c : chain.constants) coords.push_back(c.value);
        ExactReal x;
        if (!bound) {
            x = ExactReal(unit_step(comp) * Rational(static_cast<long>(nu)));
            if (!pcs) x = -x;
        } else {
            // A pds approaches from above: mirror, approach from below, mirror back.
            const ExactReal target = pcs ? *bound : -*bound;
            const std::optional<ExactReal> mprev = prev ? std::optional<ExactReal>(pcs ? *prev : -*prev) : std::nullopt;
            x = next_below(comp, target, mprev, &refine);
            if (!pcs) x = -x;
        }
        prev = x;
        coords.push_back(x);
        while (coords.size() < n) coords.emplace_back(0L);
        e.prefix.emplace_back(std::move(coords));
    }
}

PmsDescriptor make_leaf_instance(std::size_t n, const LeafShape& leaf, PmsKind kind, std::size_t prefix_length) {
    if (leaf.level < 1 || leaf.level > n) throw InvariantError("leaf-level", "leaf level outside 1..n");
    if (kind == PmsKind::Pcts) throw WrongKind("leaf instances are pcs or pds");
    PmsDescriptor e;
    e.kind = kind;
    e.group.components.assign(n, FullRational{});
    StageChain chain;
    for (std::size_t i = 0; i + 1 < leaf.level; ++i) chain.constants.push_back({ExactReal(0L), 0});
    Terminal t;
    t.direction = kind == PmsKind::Pcs ? Direction::Increasing : Direction::Decreasing;
    switch (leaf.branch) {
        case Branch::SupInfinite: t.bound = Unbounded{}; break;
        case Branch::BoundNotInGroup: t.bound = BoundNotInGroup{ExactReal::surd(0, 1, 2)}; break;
        case Branch::BoundInGroupStrict: t.bound = BoundInGroup{ExactReal(0L)}; break;
        case Branch::BoundInGroupConstant: throw InvariantError("leaf-branch", "a constant entry is not a leaf");
    }
    chain.terminal = t;
    e.chain = chain;
    if (kind == PmsKind::Pcs) e.pcs_type = Algebraic{2};
    if (kind == PmsKind::Pds) e.prefix_offset = 1;
    synthesize_prefix(e, prefix_length);
    return e;
}

TheoremCheck theorem_rank_check(const PmsDescriptor& e) {
    const RankResult r = rank_of_vE(e);
    if (r.short_circuit) throw InvariantError("not-applicable", "expects an algebraic-type pcs or a pds");
    TheoremCheck out;
    out.input_rank = r.input_rank;
    out.rank_incremented = r.output_rank == r.input_rank + 1;
    if (e.kind == PmsKind::Pcs) {
        out.predicate = is_cauchy(e) || sup_of(e).in_divisible_hull;
    } else {
        out.predicate = diverges_to_infinity(e) || inf_of(e).in_divisible_hull;
    }
    out.holds = (!out.predicate || out.rank_incremented) && (out.input_rank != 1 || !out.rank_incremented || out.predicate);
    return out;
}

namespace {

std::string sub(std::size_t i) { return std::to_string(i); }

}  // namespace

std::string decision_tree_dot(std::size_t n, PmsKind kind, const TreeTrace* trace) {
    if (n < 1) throw InvariantError("leaf-rank-range", "tree needs rank >= 1");
    if (kind == PmsKind::Pcts) throw WrongKind("the tree covers pcs and pds");
    const bool pcs = kind == PmsKind::Pcs;
    const auto taken = [&](std::size_t level, Branch b) {
        if (!trace) return false;
        for (const auto& s : trace->steps) {
            if (s.level == level && s.branch == b) return true;
        }
        return false;
    };
    const auto style = [&](bool on) { return on ? std::string(", color=red, fontcolor=red, penwidth=2") : std::string(); };

    std::ostringstream os;
    os << "digraph rank_tree {\n"
       << "  node [fontname=\"Helvetica\"];\n"
       << "  label=\"" << (pcs ? "pcs of algebraic type" : "pds") << ", rank " << n << "\";\n";
    for (std::size_t i = 1; i <= n; ++i) {
        const std::string d = "δ_{" + sub(i) + ",ν}";
        const std::string r = "r_" + sub(i);
        const std::string g = "Γ_" + sub(i);
        const bool on_level = !trace || taken(i, Branch::SupInfinite) || taken(i, Branch::BoundNotInGroup) ||
                              taken(i, Branch::BoundInGroupStrict) || taken(i, Branch::BoundInGroupConstant);
        os << "  L" << i << " [shape=ellipse, label=\"level " << i << ": " << (pcs ? "sup" : "inf") << "{" << d
           << "}\"" << style(trace && on_level) << "];\n";
        os << "  U" << i << " [shape=box, label=\"(*) rank+1\"" << style(taken(i, Branch::SupInfinite)) << "];\n";
        os << "  N" << i << " [shape=box, label=\"(#) rank same\"" << style(taken(i, Branch::BoundNotInGroup)) << "];\n";
        os << "  S" << i << " [shape=box, label=\"(*) rank+1\"" << style(taken(i, Branch::BoundInGroupStrict))
           << "];\n";
        os << "  L" << i << " -> U" << i << " [label=\"" << (pcs ? "sup{" + d + "} = ∞" : "inf{" + d + "} = -∞")
           << "\"" << style(taken(i, Branch::SupInfinite)) << "];\n";
        os << "  L" << i << " -> N" << i << " [label=\"" << r << " ∉ " << g << "\""
           << style(taken(i, Branch::BoundNotInGroup)) << "];\n";
        os << "  L" << i << " -> S" << i << " [label=\"" << r << " ∈ " << g << ", " << d << (pcs ? " < " : " > ")
           << r << "\"" << style(taken(i, Branch::BoundInGroupStrict)) << "];\n";
        if (i < n) {
            os << "  L" << i << " -> L" << i + 1 << " [label=\"" << d << " = " << r << " ultimately\""
               << style(taken(i, Branch::BoundInGroupConstant)) << "];\n";
        } else {
            os << "  C [shape=square, label=\"contradiction\"];\n";
            os << "  L" << i << " -> C [style=dashed, label=\"" << d << " = " << r << " ultimately\"];\n";
        }
    }
    os << "}\n";
    return os.str();
}

}  // namespace pmsval
