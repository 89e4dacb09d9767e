#include "pmsval/pms.hpp"

#include <algorithm>
#include <array>

#include "pmsval/errors.hpp"

namespace pmsval {

const char* to_string(PmsKind k) {
    switch (k) {
        case PmsKind::Pcs: return "pcs";
        case PmsKind::Pds: return "pds";
        case PmsKind::Pcts: return "pcts";
    }
    return "?";
}

const char* to_string(Tristate t) {
    switch (t) {
        case Tristate::False: return "false";
        case Tristate::True: return "true";
        case Tristate::Indeterminate: return "indeterminate";
    }
    return "?";
}

std::size_t StageChain::tail_start() const noexcept {
    std::size_t s = 0;
    for (const auto& c : constants) s = std::max(s, c.stage);
    return s;
}

std::optional<ExactReal> bound_value(const Bound& b) {
    if (const auto* in = std::get_if<BoundInGroup>(&b)) return in->r;
    if (const auto* out = std::get_if<BoundNotInGroup>(&b)) return out->r;
    return std::nullopt;
}

bool PmsDescriptor::is_algebraic_pcs() const {
    return kind == PmsKind::Pcs && pcs_type && std::holds_alternative<Algebraic>(*pcs_type);
}

bool PmsDescriptor::is_transcendental_pcs() const {
    return kind == PmsKind::Pcs && pcs_type && std::holds_alternative<Transcendental>(*pcs_type);
}

namespace {

void validate_point_prefix(const PmsDescriptor& e) {
    for (std::size_t k = 0; k < e.prefix.size(); ++k) {
        const auto& d = e.prefix[k];
        if (d.arity() != e.group.arity()) {
            throw DescriptorMismatch("prefix element " + std::to_string(k) + " has arity " +
                                     std::to_string(d.arity()));
        }
        if (!contains(e.group, d)) {
            throw InvariantError("prefix-membership", "delta " + d.to_string() + " is not in " + describe(e.group));
        }
    }
    for (std::size_t k = 1; k < e.prefix.size(); ++k) {
        const auto c = compare(e.prefix[k - 1], e.prefix[k]);
        const bool ok = (e.kind == PmsKind::Pcs && c < 0) || (e.kind == PmsKind::Pds && c > 0) ||
                        (e.kind == PmsKind::Pcts && c == 0);
        if (!ok) {
            throw InvariantError("prefix-monotonicity",
                                 "prefix is not " + std::string(e.kind == PmsKind::Pcs   ? "strictly increasing"
                                                                : e.kind == PmsKind::Pds ? "strictly decreasing"
                                                                                         : "constant") +
                                     " at index " + std::to_string(e.prefix_offset + k));
        }
    }
}

void validate_chain(const PmsDescriptor& e) {
    if (!e.chain) throw InvariantError("missing-chain", std::string(to_string(e.kind)) + " needs a stage chain");
    const StageChain& chain = *e.chain;
    const std::size_t n = e.group.arity();
    std::size_t last_stage = 0;
    for (std::size_t i = 0; i < chain.constants.size(); ++i) {
        if (i >= n) throw InvariantError("chain-too-long", "more chain entries than group components");
        const auto& c = chain.constants[i];
        if (!contains(e.group.components[i], c.value)) {
            throw InvariantError("constant-membership",
                                 c.value.to_string() + " is not in component " + describe(e.group.components[i]));
        }
        if (c.stage < last_stage) throw InvariantError("stage-order", "stage labels must be non-decreasing");
        last_stage = c.stage;
    }
    if (!chain.terminal) {
        throw InvariantError("all-constant-chain",
                             "an ultimately constant delta sequence contradicts strict monotonicity");
    }
    const std::size_t j = chain.terminal_index();
    if (j >= n) throw InvariantError("chain-too-long", "terminal entry beyond the last component");
    const Terminal& t = *chain.terminal;
    const Direction expected = e.kind == PmsKind::Pcs ? Direction::Increasing : Direction::Decreasing;
    if (t.direction != expected) {
        throw InvariantError("terminal-direction", std::string(to_string(e.kind)) + " terminal must be " +
                                                       (expected == Direction::Increasing ? "increasing" : "decreasing"));
    }
    const Component& comp = e.group.components[j];
    if (const auto* in = std::get_if<BoundInGroup>(&t.bound)) {
        if (!contains(comp, in->r)) {
            throw InvariantError("bound-membership", in->r.to_string() + " is not in " + describe(comp));
        }
    } else if (const auto* out = std::get_if<BoundNotInGroup>(&t.bound)) {
        if (contains(comp, out->r)) {
            throw InvariantError("bound-membership", out->r.to_string() + " is a member of " + describe(comp));
        }
    }
    if (bound_value(t.bound) && !is_dense(comp)) {
        throw InvariantError("bound-on-discrete-component",
                             "a monotone sequence in the discrete component " + describe(comp) +
                                 " with a finite unattained bound cannot exist");
    }

    // Prefix coordinates must agree with the declared constants from their
    // stage on, and the terminal coordinate must respect direction and bound.
    const auto bound = bound_value(t.bound);
    const std::size_t tail = chain.tail_start();
    std::optional<ExactReal> previous;
    for (std::size_t k = 0; k < e.prefix.size(); ++k) {
        const std::size_t nu = e.prefix_offset + k;
        const auto& d = e.prefix[k];
        for (std::size_t i = 0; i < chain.constants.size(); ++i) {
            if (nu >= chain.constants[i].stage && d.coords[i] != chain.constants[i].value) {
                throw InvariantError("prefix-chain-consistency",
                                     "delta_" + std::to_string(nu) + " coordinate " + std::to_string(i) +
                                         " differs from the declared constant");
            }
        }
        if (nu < tail) continue;
        const ExactReal& x = d.coords[j];
        if (bound) {
            const bool ok = expected == Direction::Increasing ? x < *bound : x > *bound;
            if (!ok) {
                throw InvariantError("prefix-bound", "delta_" + std::to_string(nu) + " terminal coordinate " +
                                                         x.to_string() + " reaches the bound");
            }
        }
        if (previous) {
            const bool ok = expected == Direction::Increasing ? *previous <= x : *previous >= x;
            if (!ok) throw InvariantError("prefix-direction", "terminal coordinate moves against its direction");
        }
        previous = x;
    }
}

}  // namespace

void validate(const PmsDescriptor& e) {
    rank(e.group);
    validate_point_prefix(e);
    if (e.kind == PmsKind::Pcts) {
        if (!e.pcts_delta) throw InvariantError("missing-delta", "pcts needs its constant delta");
        if (e.pcts_delta->arity() != e.group.arity()) throw DescriptorMismatch("pcts delta arity");
        if (!contains(e.group, *e.pcts_delta)) throw InvariantError("prefix-membership", "pcts delta not in group");
        for (const auto& d : e.prefix) {
            if (d != *e.pcts_delta) throw InvariantError("prefix-chain-consistency", "pcts prefix differs from delta");
        }
        return;
    }
    if (e.kind == PmsKind::Pds && e.pcs_type) throw InvariantError("pcs-type-on-pds", "only a pcs carries a type");
    validate_chain(e);
}

PmsDescriptor mirror(const PmsDescriptor& e) {
    PmsDescriptor m = e;
    if (e.kind == PmsKind::Pcs) {
        m.kind = PmsKind::Pds;
        m.pcs_type.reset();
    } else if (e.kind == PmsKind::Pds) {
        m.kind = PmsKind::Pcs;
        m.pcs_type = Algebraic{1};
    }
    for (auto& d : m.prefix) d = -d;
    if (m.pcts_delta) m.pcts_delta = -*m.pcts_delta;
    if (m.chain) {
        for (auto& c : m.chain->constants) c.value = -c.value;
        if (m.chain->terminal) {
            auto& t = *m.chain->terminal;
            t.direction = t.direction == Direction::Increasing ? Direction::Decreasing : Direction::Increasing;
            if (auto* in = std::get_if<BoundInGroup>(&t.bound)) in->r = -in->r;
            if (auto* out = std::get_if<BoundNotInGroup>(&t.bound)) out->r = -out->r;
        }
    }
    return m;
}

// ---------------------------------------------------------------------------

void UltrametricConfiguration::set(const std::string& a, const std::string& b, ExtendedValue v) {
    if (a == b) {
        if (!v.is_plus_infinity()) throw InvalidConfiguration("self-distance of " + a + " must be +inf");
        return;
    }
    dist_[std::minmax(a, b)] = std::move(v);
}

std::optional<ExtendedValue> UltrametricConfiguration::dist(const std::string& a, const std::string& b) const {
    if (a == b) return ExtendedValue::plus_infinity();
    const auto it = dist_.find(std::minmax(a, b));
    if (it == dist_.end()) return std::nullopt;
    return it->second;
}

bool UltrametricConfiguration::has_point(const std::string& p) const {
    return std::find(points.begin(), points.end(), p) != points.end();
}

std::optional<std::size_t> UltrametricConfiguration::sequence_index(const std::string& p) const {
    const auto it = std::find(sequence.begin(), sequence.end(), p);
    if (it == sequence.end()) return std::nullopt;
    return static_cast<std::size_t>(it - sequence.begin());
}

bool UltrametricConfiguration::in_base_group(const ExtendedValue& x) const {
    if (!x.is_finite()) return false;
    if (base) return base->in_image(x.element());
    if (group) return contains(*group, x.element());
    throw InvariantError("missing-group", "configuration does not name the group of its distances");
}

void check_isosceles(const UltrametricConfiguration& cfg) {
    const auto& pts = cfg.points;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            const auto ij = cfg.dist(pts[i], pts[j]);
            if (!ij) continue;
            for (std::size_t k = j + 1; k < pts.size(); ++k) {
                const auto ik = cfg.dist(pts[i], pts[k]);
                const auto jk = cfg.dist(pts[j], pts[k]);
                if (!ik || !jk) continue;
                std::array<ExtendedValue, 3> v{*ij, *ik, *jk};
                std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a < b; });
                if (compare(v[0], v[1]) != 0) {
                    throw InvalidConfiguration("isosceles law fails on {" + pts[i] + ", " + pts[j] + ", " +
                                               pts[k] + "}: minimum " + v[0].to_string() + " attained once");
                }
            }
        }
    }
}

PrefixClassification classify_from_prefix(const std::vector<std::vector<ExtendedValue>>& dist) {
    const std::size_t n = dist.size();
    if (n < 3) throw InvalidConfiguration("classification needs at least three sequence members");
    for (const auto& row : dist) {
        if (row.size() != n) throw InvalidConfiguration("distance matrix is not square");
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            if (!dist[i][j].is_finite()) throw NotAPms("members " + std::to_string(i) + " and " + std::to_string(j) + " coincide");
            if (compare(dist[i][j], dist[j][i]) != 0) throw InvalidConfiguration("distance matrix is not symmetric");
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            for (std::size_t k = j + 1; k < n; ++k) {
                std::array<ExtendedValue, 3> v{dist[i][j], dist[i][k], dist[j][k]};
                std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a < b; });
                if (compare(v[0], v[1]) != 0) {
                    throw InvalidConfiguration("isosceles law fails on members " + std::to_string(i) + ", " +
                                               std::to_string(j) + ", " + std::to_string(k));
                }
            }
        }
    }

    bool constant = true, increasing = true, decreasing = true;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (compare(dist[i][j], dist[0][1]) != 0) constant = false;
            for (std::size_t k = j + 1; k < n; ++k) {
                const auto c = compare(dist[i][j], dist[j][k]);
                if (c >= 0) increasing = false;
                if (c <= 0) decreasing = false;
            }
        }
    }
    PrefixClassification out{};
    if (constant) {
        out.kind = PmsKind::Pcts;
        out.deltas.push_back(dist[0][1].element());
    } else if (increasing) {
        out.kind = PmsKind::Pcs;
        for (std::size_t nu = 0; nu + 1 < n; ++nu) out.deltas.push_back(dist[nu][nu + 1].element());
    } else if (decreasing) {
        out.kind = PmsKind::Pds;
        out.first_index = 1;
        for (std::size_t nu = 1; nu < n; ++nu) out.deltas.push_back(dist[nu][0].element());
    } else {
        throw NotAPms("pairwise distances are neither increasing, decreasing nor constant");
    }
    return out;
}

PrefixClassification classify_from_prefix(const UltrametricConfiguration& cfg) {
    const std::size_t n = cfg.sequence.size();
    std::vector<std::vector<ExtendedValue>> m(n, std::vector<ExtendedValue>(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            const auto d = cfg.dist(cfg.sequence[i], cfg.sequence[j]);
            if (!d) {
                throw IndeterminateError("distance between " + cfg.sequence[i] + " and " + cfg.sequence[j] +
                                         " is unknown");
            }
            m[i][j] = *d;
        }
    }
    return classify_from_prefix(m);
}

// ---------------------------------------------------------------------------

namespace {

/// Symbolic comparison of a target-group value with the ultimate tail of the
/// (embedded) delta sequence. Returns true iff value > delta_nu for all nu
/// (pcs, greater = true) or value < delta_nu for all nu (pds, greater = false).
bool beyond_all_deltas(const PmsDescriptor& e, const ExtendedValue& value, const Embedding* emb, bool greater) {
    if (!e.chain || !e.chain->terminal) throw InvariantError("missing-chain", "symbolic tail needs a stage chain");
    if (value.is_plus_infinity()) return greater;
    const auto& chain = *e.chain;
    const std::size_t target_arity = emb ? emb->target.arity() : e.group.arity();
    if (value.arity() != target_arity) throw DescriptorMismatch("probe arity does not match the group");
    std::size_t source = 0;
    for (std::size_t pos = 0; pos < target_arity; ++pos) {
        const bool inserted = emb && std::binary_search(emb->inserted.begin(), emb->inserted.end(), pos);
        const ExtendedReal& x = value.coords()[pos];
        if (inserted || source < chain.terminal_index()) {
            const ExtendedReal ref =
                ExtendedReal::finite(inserted ? ExactReal(0L) : chain.constants[source].value);
            const auto c = x <=> ref;
            if (c != 0) return greater ? c > 0 : c < 0;
            if (!inserted) ++source;
            continue;
        }
        // Terminal coordinate: the tail approaches the bound without reaching it.
        const auto bound = bound_value(chain.terminal->bound);
        if (!bound) return false;
        const auto c = x <=> ExtendedReal::finite(*bound);
        return greater ? c >= 0 : c <= 0;
    }
    return false;
}

std::map<std::size_t, GroupElement> delta_table(const PmsDescriptor& e, const UltrametricConfiguration& cfg) {
    std::map<std::size_t, GroupElement> table;
    bool from_cfg = false;
    if (cfg.sequence.size() >= 3) {
        try {
            const auto cls = classify_from_prefix(cfg);
            if (cls.kind != e.kind) {
                throw InvalidConfiguration(std::string("configuration sequence classifies as ") + to_string(cls.kind) +
                                           " but the descriptor declares " + to_string(e.kind));
            }
            for (std::size_t k = 0; k < cls.deltas.size(); ++k) table.emplace(cls.first_index + k, cls.deltas[k]);
            from_cfg = true;
        } catch (const IndeterminateError&) {
        }
    }
    if (!from_cfg) {
        for (std::size_t k = 0; k < e.prefix.size(); ++k) {
            GroupElement d = e.prefix[k];
            table.emplace(e.prefix_offset + k, cfg.base ? cfg.base->apply(d) : d);
        }
        if (e.kind == PmsKind::Pcts && e.pcts_delta) {
            const GroupElement d = cfg.base ? cfg.base->apply(*e.pcts_delta) : *e.pcts_delta;
            for (std::size_t nu = 0; nu < cfg.sequence.size(); ++nu) table.emplace(nu, d);
        }
    }
    return table;
}

std::size_t tail_start_of(const PmsDescriptor& e) { return e.chain ? e.chain->tail_start() : 0; }

struct TailWitness {
    std::size_t nu;
    ExtendedValue value;
};

std::vector<TailWitness> tail_witnesses(const std::string& y, const PmsDescriptor& e,
                                        const UltrametricConfiguration& cfg) {
    std::vector<TailWitness> out;
    const std::size_t tail = tail_start_of(e);
    for (std::size_t nu = tail; nu < cfg.sequence.size(); ++nu) {
        if (cfg.sequence[nu] == y) continue;
        if (const auto d = cfg.dist(y, cfg.sequence[nu])) out.push_back({nu, *d});
    }
    return out;
}

}  // namespace

Tristate is_limit(const std::string& y, const PmsDescriptor& e, const UltrametricConfiguration& cfg) {
    if (!cfg.has_point(y)) throw InvalidConfiguration("unknown point '" + y + "'");
    check_isosceles(cfg);
    if (cfg.sequence_index(y)) return e.kind == PmsKind::Pcs ? Tristate::False : Tristate::True;

    const auto deltas = delta_table(e, cfg);
    std::size_t witnessed = 0;
    bool all_match = true;
    for (const auto& w : tail_witnesses(y, e, cfg)) {
        const auto it = deltas.find(w.nu);
        if (it == deltas.end()) continue;
        ++witnessed;
        if (compare(w.value, ExtendedValue(it->second)) != 0) all_match = false;
    }
    if (witnessed >= kMinTailWitnesses) return all_match ? Tristate::True : Tristate::False;

    const Embedding* emb = cfg.base ? &*cfg.base : nullptr;
    for (const auto& l : cfg.known_limits) {
        if (l == y) continue;
        const auto d = cfg.dist(y, l);
        if (!d) continue;
        if (d->is_plus_infinity()) return Tristate::True;
        if (e.kind == PmsKind::Pcts) {
            if (!e.pcts_delta) continue;
            const ExtendedValue delta = emb ? emb->apply(ExtendedValue(*e.pcts_delta)) : ExtendedValue(*e.pcts_delta);
            return *d >= delta ? Tristate::True : Tristate::False;
        }
        if (!e.chain || !e.chain->terminal) continue;
        if (e.kind == PmsKind::Pcs) return beyond_all_deltas(e, *d, emb, true) ? Tristate::True : Tristate::False;
        return beyond_all_deltas(e, *d, emb, false) ? Tristate::False : Tristate::True;
    }
    return Tristate::Indeterminate;
}

Dichotomy limit_dichotomy_check(const std::string& y, const PmsDescriptor& e, const UltrametricConfiguration& cfg) {
    const Tristate t = is_limit(y, e, cfg);
    if (t == Tristate::Indeterminate) throw IndeterminateError("cannot witness whether '" + y + "' is a limit");
    if (t == Tristate::True) return {true, std::nullopt};

    const auto witnesses = tail_witnesses(y, e, cfg);
    if (!witnesses.empty()) {
        for (const auto& w : witnesses) {
            if (compare(w.value, witnesses.front().value) != 0) {
                throw InvalidConfiguration("v(" + y + " - z_nu) is neither the delta sequence nor ultimately constant");
            }
        }
        return {false, witnesses.front().value};
    }
    for (const auto& l : cfg.known_limits) {
        if (l == y) continue;
        if (const auto d = cfg.dist(y, l)) return {false, *d};
    }
    throw IndeterminateError("no tail data for '" + y + "'");
}

bool is_cauchy(const PmsDescriptor& e) {
    if (e.kind != PmsKind::Pcs) throw WrongKind("Cauchy is defined for a pcs");
    validate(e);
    return e.chain->terminal_index() == 0 && std::holds_alternative<Unbounded>(e.chain->terminal->bound);
}

bool diverges_to_infinity(const PmsDescriptor& e) {
    if (e.kind != PmsKind::Pds) throw WrongKind("divergence to infinity is defined for a pds");
    validate(e);
    return e.chain->terminal_index() == 0 && std::holds_alternative<Unbounded>(e.chain->terminal->bound);
}

bool exceeds_all_deltas(const PmsDescriptor& e, const GroupElement& beta) {
    if (e.kind != PmsKind::Pcs) throw WrongKind("exceeds_all_deltas expects a pcs");
    return beyond_all_deltas(e, ExtendedValue(beta), nullptr, true);
}

bool below_all_deltas(const PmsDescriptor& e, const GroupElement& beta) {
    if (e.kind != PmsKind::Pds) throw WrongKind("below_all_deltas expects a pds");
    return beyond_all_deltas(e, ExtendedValue(beta), nullptr, false);
}

bool exceeds_all_deltas(const PmsDescriptor& e, const ExtendedValue& beta, const Embedding* emb) {
    if (e.kind != PmsKind::Pcs) throw WrongKind("exceeds_all_deltas expects a pcs");
    return beyond_all_deltas(e, beta, emb, true);
}

bool below_all_deltas(const PmsDescriptor& e, const ExtendedValue& beta, const Embedding* emb) {
    if (e.kind != PmsKind::Pds) throw WrongKind("below_all_deltas expects a pds");
    return beyond_all_deltas(e, beta, emb, false);
}

namespace {

SupInf extremum(const PmsDescriptor& e, bool upper) {
    validate(e);
    const auto& chain = *e.chain;
    const std::size_t n = e.group.arity();
    const std::size_t j = chain.terminal_index();
    std::vector<ExtendedReal> coords;
    for (const auto& c : chain.constants) coords.push_back(ExtendedReal::finite(c.value));
    const auto bound = bound_value(chain.terminal->bound);
    if (bound) {
        coords.push_back(ExtendedReal::finite(*bound));
    } else {
        coords.push_back(upper ? ExtendedReal::pos_inf() : ExtendedReal::neg_inf());
    }
    while (coords.size() < n) coords.push_back(upper ? ExtendedReal::neg_inf() : ExtendedReal::pos_inf());
    SupInf out{ExtendedValue::tuple(std::move(coords)), false};
    out.in_divisible_hull = bound && j + 1 == n && hull_contains(e.group.components[j], *bound);
    return out;
}

}  // namespace

SupInf sup_of(const PmsDescriptor& e) {
    if (e.kind != PmsKind::Pcs) throw WrongKind("sup is taken over a pcs");
    return extremum(e, true);
}

SupInf inf_of(const PmsDescriptor& e) {
    if (e.kind != PmsKind::Pds) throw WrongKind("inf is taken over a pds");
    return extremum(e, false);
}

}  // namespace pmsval
