#include "pmsval/commands.hpp"

#include <algorithm>

#include "pmsval/errors.hpp"

namespace pmsval {

using io::json;

namespace {

const json* find(const json& j, const char* key) {
    const auto it = j.find(key);
    return it == j.end() ? nullptr : &*it;
}

void check_problem(const json& problem) {
    if (!problem.is_object()) throw SchemaError("/: a problem file is a JSON object");
    static const char* allowed[] = {"version", "name", "description", "group", "sequence", "functions",
                                    "configuration", "oracle", "probes", "rank", "kind"};
    for (const auto& [key, _] : problem.items()) {
        if (std::none_of(std::begin(allowed), std::end(allowed), [&](const char* a) { return key == a; })) {
            throw SchemaError("/: unknown member '" + key + "'");
        }
    }
    if (const json* v = find(problem, "version")) {
        if (*v != kSchemaVersion) throw SchemaError("/version: unsupported schema version");
    }
}

std::optional<GroupDescriptor> top_group(const json& problem) {
    if (const json* g = find(problem, "group")) return io::parse_group(*g, "/group");
    return std::nullopt;
}

std::optional<PmsDescriptor> load_sequence(const json& problem) {
    const json* s = find(problem, "sequence");
    if (!s) return std::nullopt;
    const auto g = top_group(problem);
    PmsDescriptor e = io::parse_pms(*s, "/sequence", g ? &*g : nullptr);
    validate(e);
    return e;
}

PmsDescriptor require_sequence(const json& problem, const char* command) {
    auto e = load_sequence(problem);
    if (!e) throw SchemaError(std::string("/: '") + command + "' needs a 'sequence' member");
    return *e;
}

bool tree_applies(const PmsDescriptor& e) { return e.kind == PmsKind::Pds || e.is_algebraic_pcs(); }

json group_report(const GroupDescriptor& g) {
    json j = io::to_json(g);
    j["label"] = kExtendedGroupLabel;
    return j;
}

json rank_report(const RankResult& r, PmsKind kind) {
    json j{{"input_rank", r.input_rank},
           {"output_rank", r.output_rank},
           {"extended_group", group_report(r.extended_group)},
           {"trace", io::to_json(r.trace)},
           {"short_circuit", r.short_circuit}};
    j["alpha"] = r.placement ? io::to_json(r.placement->alpha) : json(nullptr);
    if (r.placement) {
        json ins = json::array();
        for (auto p : r.placement->embedding.inserted) ins.push_back(p);
        j["inserted_positions"] = ins;
    }
    if (r.sup_or_inf) j[kind == PmsKind::Pds ? "inf" : "sup"] = io::to_json(*r.sup_or_inf);
    return j;
}

json classification_json(const PrefixClassification& c) {
    json deltas = json::array();
    for (const auto& d : c.deltas) deltas.push_back(io::to_json(d));
    return {{"kind", to_string(c.kind)}, {"deltas", deltas}, {"first_index", c.first_index}};
}

CommandResult cmd_classify(const json& problem) {
    CommandResult out;
    json& rep = out.report;
    const auto e = load_sequence(problem);
    const json* cj = find(problem, "configuration");
    if (!e && !cj) throw SchemaError("/: 'classify' needs 'sequence' or 'configuration'");

    if (e) {
        std::optional<RankResult> r;
        if (tree_applies(*e)) r = rank_of_vE(*e);
        json s{{"kind", to_string(e->kind)}};
        json prefix = json::array();
        for (const auto& d : e->prefix) prefix.push_back(io::to_json(d));
        s["prefix"] = prefix;
        s["prefix_offset"] = e->prefix_offset;
        if (e->kind == PmsKind::Pcs) s["cauchy"] = is_cauchy(*e);
        if (e->kind == PmsKind::Pds) s["diverges_to_infinity"] = diverges_to_infinity(*e);
        if (e->kind != PmsKind::Pcs || e->pcs_type) {
            const AlphaPlacement* pl = r && r->placement ? &*r->placement : nullptr;
            s["extension_report"] = io::to_json(extension_report(*e, pl));
            if (!e->is_transcendental_pcs()) s["alpha_position"] = to_string(classify_alpha_position(*e));
        }
        rep["sequence"] = s;
        rep["kind"] = to_string(e->kind);
    }
    if (cj) {
        const auto g = top_group(problem);
        const UltrametricConfiguration cfg = io::parse_configuration(*cj, "/configuration", g ? &*g : nullptr);
        check_isosceles(cfg);
        json c{{"isosceles", true}};
        if (cfg.sequence.size() >= 3) {
            const auto cls = classify_from_prefix(cfg);
            c["classification"] = classification_json(cls);
            if (e && cls.kind != e->kind) {
                throw InvalidConfiguration(std::string("configuration classifies as ") + to_string(cls.kind) +
                                           " but the sequence declares " + to_string(e->kind));
            }
            if (!e) rep["kind"] = to_string(cls.kind);
        }
        if (e) {
            json limits = json::object();
            for (const auto& p : cfg.points) {
                if (!cfg.sequence_index(p)) limits[p] = to_string(is_limit(p, *e, cfg));
            }
            c["limits"] = limits;
        }
        rep["configuration"] = c;
    }
    return out;
}

CommandResult cmd_ve(const json& problem) {
    CommandResult out;
    const PmsDescriptor e = require_sequence(problem, "ve");
    const json* fj = find(problem, "functions");
    if (!fj || !fj->is_array()) throw SchemaError("/: 've' needs a 'functions' array");
    std::optional<RankResult> r;
    if (tree_applies(e)) r = rank_of_vE(e);
    const AlphaPlacement* pl = r && r->placement ? &*r->placement : nullptr;
    json results = json::array();
    for (std::size_t i = 0; i < fj->size(); ++i) {
        const auto phi = io::parse_frf((*fj)[i], "/functions/" + std::to_string(i));
        const VEValue v = v_E(phi, e, pl);
        results.push_back({{"index", i},
                           {"dominating_form", io::to_json(v.form)},
                           {"value", v.value ? io::to_json(*v.value) : json(nullptr)},
                           {"symbolic", v.symbolic},
                           {"in_vK", v.in_vK},
                           {"torsion_over_vK", v.torsion_over_vK}});
    }
    out.report["kind"] = to_string(e.kind);
    out.report["functions"] = results;
    if (pl) {
        out.report["extended_group"] = group_report(pl->embedding.target);
        out.report["alpha"] = io::to_json(pl->alpha);
    }
    return out;
}

CommandResult cmd_rank(const json& problem, const CommandOptions& opt) {
    CommandResult out;
    const PmsDescriptor e = require_sequence(problem, "rank");
    const RankResult r = rank_of_vE(e);
    out.report = rank_report(r, e.kind);
    out.report["kind"] = to_string(e.kind);
    if (!r.short_circuit) {
        const TheoremCheck t = theorem_rank_check(e);
        out.report["theorem_check"] = {
            {"predicate", t.predicate}, {"rank_incremented", t.rank_incremented}, {"holds", t.holds}};
        if (!t.holds) out.exit_code = 1;
    }
    if (opt.want_dot && !r.short_circuit) out.dot = decision_tree_dot(e.group.arity(), e.kind, &r.trace);
    return out;
}

CommandResult cmd_sup(const json& problem) {
    CommandResult out;
    const PmsDescriptor e = require_sequence(problem, "sup");
    out.report["kind"] = to_string(e.kind);
    if (e.kind == PmsKind::Pcs) {
        out.report["sup"] = io::to_json(sup_of(e));
    } else if (e.kind == PmsKind::Pds) {
        out.report["inf"] = io::to_json(inf_of(e));
    } else {
        throw WrongKind("sup/inf is taken over a pcs or a pds");
    }
    return out;
}

CommandResult cmd_probe(const json& problem, const CommandOptions& opt) {
    CommandResult out;
    const PmsDescriptor e = require_sequence(problem, "probe");
    if (!tree_applies(e)) throw InvariantError("not-applicable", "probes need an algebraic-type pcs or a pds");
    const RankResult r = rank_of_vE(e, false);
    std::vector<GroupElement> probes;
    std::string source = "auto";
    const json* pj = opt.probes ? &*opt.probes : find(problem, "probes");
    if (pj) {
        if (!pj->is_array()) throw SchemaError("/probes: expected an array");
        for (std::size_t i = 0; i < pj->size(); ++i) probes.push_back(io::parse_element((*pj)[i], "/probes/" + std::to_string(i)));
        source = "supplied";
    } else {
        probes = auto_probes(e);
    }
    const ProbeCheck c = e.kind == PmsKind::Pcs ? check_pcs_equivalence_iii(e, *r.placement, probes)
                                                : check_pds_equivalence_iii(e, *r.placement, probes);
    out.report = {{"kind", to_string(e.kind)},
                  {"holds", c.holds},
                  {"counterexample", c.counterexample ? io::to_json(*c.counterexample) : json(nullptr)},
                  {"probes_checked", c.probes_checked},
                  {"probe_source", source},
                  {"alpha", io::to_json(r.placement->alpha)},
                  {"extended_group", group_report(r.extended_group)}};
    if (!c.holds) out.exit_code = 1;
    return out;
}

CommandResult cmd_oracle(const json& problem, const CommandOptions& opt) {
    CommandResult out;
    const json* oj = find(problem, "oracle");
    if (!oj) throw SchemaError("/: 'oracle-check' needs an 'oracle' member");
    const json& o = *oj;
    if (!o.is_object()) throw SchemaError("/oracle: expected an object");
    for (const auto& [key, _] : o.items()) {
        if (key != "field" && key != "sequence" && key != "functions" && key != "tail_window") {
            throw SchemaError("/oracle: unknown member '" + key + "'");
        }
    }
    if (!o.contains("field") || !o.contains("sequence") || !o.contains("functions")) {
        throw SchemaError("/oracle: needs 'field', 'sequence' and 'functions'");
    }
    const ConcreteField field = io::parse_field(o["field"], "/oracle/field");
    if (!o["sequence"].is_array()) throw SchemaError("/oracle/sequence: expected an array");
    std::vector<RationalFunction> seq;
    for (std::size_t i = 0; i < o["sequence"].size(); ++i) {
        seq.push_back(io::parse_field_element(o["sequence"][i], "/oracle/sequence/" + std::to_string(i)));
    }
    std::size_t window = 0;
    if (opt.tail_window) {
        window = *opt.tail_window;
    } else if (o.contains("tail_window")) {
        if (!o["tail_window"].is_number_integer() || o["tail_window"].get<long>() < 1) throw SchemaError("/oracle/tail_window: expected an integer");
        window = o["tail_window"].get<std::size_t>();
    }
    if (!o["functions"].is_array()) throw SchemaError("/oracle/functions: expected an array");
    json results = json::array();
    bool all = true;
    for (std::size_t i = 0; i < o["functions"].size(); ++i) {
        const std::string w = "/oracle/functions/" + std::to_string(i);
        const json& fj = o["functions"][i];
        if (!fj.is_object() || !fj.contains("concrete") || !fj.contains("tagged")) {
            throw SchemaError(w + ": needs 'concrete' and 'tagged'");
        }
        const ConcreteFunction phi = io::parse_concrete_function(fj["concrete"], w + "/concrete");
        const FactoredRationalFunction tagged = io::parse_frf(fj["tagged"], w + "/tagged");
        const CrossCheckReport rep = cross_check(field, seq, phi, tagged, window);
        json values = json::array();
        for (const auto& v : rep.values) values.push_back(io::to_json(v));
        results.push_back({{"index", i},
                           {"kind", to_string(rep.kind)},
                           {"fit", io::to_json(rep.fit)},
                           {"tags", io::to_json(rep.tags)},
                           {"agree", rep.agree},
                           {"offending_roots", rep.offending_roots},
                           {"values", values}});
        all = all && rep.agree;
    }
    const auto cls = classify_from_prefix(distance_matrix(field, seq));
    out.report = {{"classification", classification_json(cls)}, {"functions", results}, {"all_agree", all}};
    out.exit_code = all ? 0 : 1;
    return out;
}

CommandResult cmd_leaves(const json& problem, const CommandOptions& opt) {
    CommandResult out;
    std::size_t n = 0;
    if (opt.rank) {
        n = *opt.rank;
    } else if (const json* r = find(problem, "rank")) {
        if (!r->is_number_integer() || r->get<long>() < 1) throw SchemaError("/rank: expected a positive integer");
        n = r->get<std::size_t>();
    } else {
        throw SchemaError("/: 'leaves' needs a rank (--rank or a 'rank' member)");
    }
    PmsKind kind = PmsKind::Pcs;
    if (const json* k = find(problem, "kind")) {
        if (*k == "pds") {
            kind = PmsKind::Pds;
        } else if (*k != "pcs") {
            throw SchemaError("/kind: expected \"pcs\" or \"pds\"");
        }
    }
    json leaves = json::array();
    bool consistent = true;
    for (const auto& leaf : enumerate_leaves(n)) {
        const PmsDescriptor e = make_leaf_instance(n, leaf, kind);
        const RankResult r = rank_of_vE(e);
        const int observed = r.output_rank - r.input_rank;
        const bool ok = observed == leaf.expected_delta && r.output_rank == rank(r.extended_group);
        consistent = consistent && ok;
        leaves.push_back({{"level", leaf.level},
                          {"branch", to_string(leaf.branch)},
                          {"mark", leaf.mark()},
                          {"expected_delta", leaf.expected_delta},
                          {"observed_delta", observed},
                          {"output_rank", r.output_rank},
                          {"alpha", io::to_json(r.placement->alpha)},
                          {"extended_group", describe(r.extended_group)}});
    }
    out.report = {{"rank", n}, {"kind", to_string(kind)}, {"leaves", leaves}, {"all_consistent", consistent}};
    if (!consistent) out.exit_code = 1;
    if (opt.want_dot) out.dot = decision_tree_dot(n, kind, nullptr);
    return out;
}

}  // namespace

CommandResult run_command(const std::string& command, const json& problem, const CommandOptions& options) {
    check_problem(problem);
    CommandResult r;
    if (command == "classify") {
        r = cmd_classify(problem);
    } else if (command == "ve") {
        r = cmd_ve(problem);
    } else if (command == "rank") {
        r = cmd_rank(problem, options);
    } else if (command == "sup") {
        r = cmd_sup(problem);
    } else if (command == "probe") {
        r = cmd_probe(problem, options);
    } else if (command == "oracle-check") {
        r = cmd_oracle(problem, options);
    } else if (command == "leaves") {
        r = cmd_leaves(problem, options);
    } else {
        throw SchemaError("unknown command '" + command + "'");
    }
    r.report["command"] = command;
    r.report["version"] = kSchemaVersion;
    return r;
}

CommandResult error_report(const std::exception& e) {
    CommandResult r;
    json err{{"message", e.what()}};
    if (dynamic_cast<const SchemaError*>(&e)) {
        err["type"] = "schema";
        r.exit_code = 2;
    } else if (const auto* inv = dynamic_cast<const InvariantError*>(&e)) {
        err["type"] = "invariant";
        err["invariant"] = inv->invariant();
        r.exit_code = 3;
    } else if (dynamic_cast<const IndeterminateError*>(&e)) {
        err["type"] = "indeterminate";
        r.exit_code = 4;
    } else if (dynamic_cast<const std::domain_error*>(&e)) {
        err["type"] = "invariant";
        err["invariant"] = "domain";
        r.exit_code = 3;
    } else {
        err["type"] = "internal";
        r.exit_code = 1;
    }
    r.report = {{"error", err}, {"version", kSchemaVersion}};
    return r;
}

}  // namespace pmsval
