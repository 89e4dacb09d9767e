#include "pmsval/json_io.hpp"

#include <algorithm>
#include <initializer_list>
#include <set>

#include "pmsval/errors.hpp"

namespace pmsval::io {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw SchemaError(where + ": " + what);
}

void require_object(const json& j, const std::string& where) {
    if (!j.is_object()) fail(where, "expected an object");
}

void check_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
    require_object(j, where);
    for (const auto& [key, _] : j.items()) {
        if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
            fail(where, "unknown member '" + key + "'");
        }
    }
}

const json& member(const json& j, const char* key, const std::string& where) {
    require_object(j, where);
    const auto it = j.find(key);
    if (it == j.end()) fail(where, std::string("missing member '") + key + "'");
    return *it;
}

const json& array_at(const json& j, const std::string& where) {
    if (!j.is_array()) fail(where, "expected an array");
    return j;
}

std::string string_at(const json& j, const std::string& where) {
    if (!j.is_string()) fail(where, "expected a string");
    return j.get<std::string>();
}

long integer_at(const json& j, const std::string& where) {
    if (!j.is_number_integer()) fail(where, "expected an integer");
    return j.get<long>();
}

std::size_t index_at(const json& j, const std::string& where) {
    const long v = integer_at(j, where);
    if (v < 0) fail(where, "expected a non-negative integer");
    return static_cast<std::size_t>(v);
}

Rational rational_at(const json& j, const std::string& where) {
    if (j.is_number_integer()) return Rational(j.get<long>());
    if (j.is_string()) {
        try {
            return parse_rational(j.get<std::string>());
        } catch (const SchemaError& e) {
            fail(where, e.what());
        }
    }
    fail(where, "expected an exact rational (integer or \"p/q\" string)");
}

long prime_at(const json& j, const std::string& where) {
    const long p = integer_at(j, where);
    if (p < 2 || mpz_probab_prime_p(Integer(p).get_mpz_t(), 30) == 0) fail(where, "expected a prime");
    return p;
}

std::string sub(const std::string& where, const std::string& key) { return where + "/" + key; }
std::string sub(const std::string& where, std::size_t i) { return where + "/" + std::to_string(i); }

RationalComponent rational_component(const Component& c, const std::string& where) {
    return std::visit(
        [&](const auto& v) -> RationalComponent {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, AdjoinedSurd>) {
                fail(where, "surd components cannot be nested");
            } else {
                return v;
            }
        },
        c);
}

}  // namespace

ExactReal parse_exact(const json& j, const std::string& where) {
    if (j.is_object()) {
        if (j.contains("rat")) {
            check_keys(j, {"rat"}, where);
            return ExactReal(rational_at(j["rat"], sub(where, "rat")));
        }
        check_keys(j, {"surd"}, where);
        const json& s = member(j, "surd", where);
        const std::string w = sub(where, "surd");
        check_keys(s, {"a", "b", "d"}, w);
        const Rational a = s.contains("a") ? rational_at(s["a"], sub(w, "a")) : Rational(0);
        const Rational b = rational_at(member(s, "b", w), sub(w, "b"));
        const long d = integer_at(member(s, "d", w), sub(w, "d"));
        if (d <= 0) fail(sub(w, "d"), "radicand must be positive");
        return ExactReal::surd(a, b, d);
    }
    return ExactReal(rational_at(j, where));
}

json to_json(const ExactReal& x) {
    if (x.is_rational()) return to_string(x.as_rational());
    return json{{"surd",
                 {{"a", to_string(x.rational_part())}, {"b", to_string(x.surd_coefficient())}, {"d", x.radicand()}}}};
}

Component parse_component(const json& j, const std::string& where) {
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        if (s == "Z") return Cyclic{1};
        if (s == "Q") return FullRational{};
        if (s == "Z_new") return FormalInteger{};
        fail(where, "unknown component shorthand '" + s + "'");
    }
    const std::string kind = string_at(member(j, "kind", where), sub(where, "kind"));
    if (kind == "cyclic") {
        check_keys(j, {"kind", "gen"}, where);
        const Rational g = j.contains("gen") ? rational_at(j["gen"], sub(where, "gen")) : Rational(1);
        if (sgn(g) <= 0) fail(sub(where, "gen"), "generator must be positive");
        return Cyclic{g};
    }
    if (kind == "p_power") {
        check_keys(j, {"kind", "p", "scale"}, where);
        const long p = prime_at(member(j, "p", where), sub(where, "p"));
        const Rational s = j.contains("scale") ? rational_at(j["scale"], sub(where, "scale")) : Rational(1);
        if (sgn(s) <= 0) fail(sub(where, "scale"), "scale must be positive");
        return PPowerDivisible{p, s};
    }
    if (kind == "rational") {
        check_keys(j, {"kind"}, where);
        return FullRational{};
    }
    if (kind == "formal_integer") {
        check_keys(j, {"kind"}, where);
        return FormalInteger{};
    }
    if (kind == "adjoined_surd") {
        check_keys(j, {"kind", "base", "tau"}, where);
        const RationalComponent base =
            rational_component(parse_component(member(j, "base", where), sub(where, "base")), sub(where, "base"));
        const ExactReal tau = parse_exact(member(j, "tau", where), sub(where, "tau"));
        if (tau.is_rational()) fail(sub(where, "tau"), "tau must be irrational");
        return AdjoinedSurd{base, tau};
    }
    fail(sub(where, "kind"), "unknown component kind '" + kind + "'");
}

json to_json(const Component& c) {
    return std::visit(
        [](const auto& v) -> json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Cyclic>) {
                return {{"kind", "cyclic"}, {"gen", to_string(v.generator)}};
            } else if constexpr (std::is_same_v<T, PPowerDivisible>) {
                return {{"kind", "p_power"}, {"p", v.p}, {"scale", to_string(v.scale)}};
            } else if constexpr (std::is_same_v<T, FullRational>) {
                return {{"kind", "rational"}};
            } else if constexpr (std::is_same_v<T, FormalInteger>) {
                return {{"kind", "formal_integer"}};
            } else {
                return {{"kind", "adjoined_surd"}, {"base", to_json(Component(std::visit([](const auto& b) -> Component { return b; }, v.base)))},
                        {"tau", to_json(v.tau)}};
            }
        },
        c);
}

GroupDescriptor parse_group(const json& j, const std::string& where) {
    const json* comps = &j;
    std::string w = where;
    if (j.is_object()) {
        // "describe" and "rank" are informational; a stated rank must match.
        check_keys(j, {"components", "describe", "rank"}, where);
        comps = &member(j, "components", where);
        w = sub(where, "components");
    }
    array_at(*comps, w);
    GroupDescriptor g;
    for (std::size_t i = 0; i < comps->size(); ++i) g.components.push_back(parse_component((*comps)[i], sub(w, i)));
    if (g.components.empty()) fail(w, "a group needs at least one component");
    if (j.is_object() && j.contains("rank")) {
        if (!j["rank"].is_number_integer() || j["rank"].get<long>() != rank(g)) {
            fail(sub(where, "rank"), "stated rank does not match the components");
        }
    }
    return g;
}

json to_json(const GroupDescriptor& g) {
    json comps = json::array();
    for (const auto& c : g.components) comps.push_back(to_json(c));
    return {{"components", comps}, {"describe", describe(g)}, {"rank", rank(g)}};
}

GroupElement parse_element(const json& j, const std::string& where) {
    if (!j.is_array()) return GroupElement({parse_exact(j, where)});
    GroupElement g;
    for (std::size_t i = 0; i < j.size(); ++i) g.coords.push_back(parse_exact(j[i], sub(where, i)));
    if (g.coords.empty()) fail(where, "empty element");
    return g;
}

json to_json(const GroupElement& g) {
    json a = json::array();
    for (const auto& x : g.coords) a.push_back(to_json(x));
    return a;
}

ExtendedValue parse_extended(const json& j, const std::string& where) {
    if (j.is_string() && (j == "inf" || j == "+inf")) return ExtendedValue::plus_infinity();
    if (!j.is_array()) return parse_element(j, where);
    std::vector<ExtendedReal> coords;
    bool finite = true;
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (j[i] == "inf" || j[i] == "+inf") {
            coords.push_back(ExtendedReal::pos_inf());
            finite = false;
        } else if (j[i] == "-inf") {
            coords.push_back(ExtendedReal::neg_inf());
            finite = false;
        } else {
            coords.push_back(ExtendedReal::finite(parse_exact(j[i], sub(where, i))));
        }
    }
    if (finite) return parse_element(j, where);
    return ExtendedValue::tuple(std::move(coords));
}

json to_json(const ExtendedValue& v) {
    if (v.is_plus_infinity()) return "inf";
    json a = json::array();
    for (const auto& c : v.coords()) {
        switch (c.tag) {
            case ExtendedReal::Tag::NegInf: a.push_back("-inf"); break;
            case ExtendedReal::Tag::PosInf: a.push_back("inf"); break;
            case ExtendedReal::Tag::Finite: a.push_back(to_json(c.value)); break;
        }
    }
    return a;
}

StageChain parse_chain(const json& j, const std::string& where) {
    array_at(j, where);
    StageChain chain;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string w = sub(where, i);
        if (chain.terminal) fail(w, "entries after the terminal entry");
        const json& entry = j[i];
        if (entry.contains("const")) {
            check_keys(entry, {"const"}, w);
            const json& c = entry["const"];
            const std::string wc = sub(w, "const");
            check_keys(c, {"v", "from"}, wc);
            ConstantFrom cf;
            cf.value = parse_exact(member(c, "v", wc), sub(wc, "v"));
            cf.stage = c.contains("from") ? index_at(c["from"], sub(wc, "from")) : 0;
            chain.constants.push_back(cf);
            continue;
        }
        check_keys(entry, {"terminal"}, w);
        const json& t = member(entry, "terminal", w);
        const std::string wt = sub(w, "terminal");
        check_keys(t, {"dir", "bound"}, wt);
        Terminal term;
        const std::string dir = string_at(member(t, "dir", wt), sub(wt, "dir"));
        if (dir == "inc") {
            term.direction = Direction::Increasing;
        } else if (dir == "dec") {
            term.direction = Direction::Decreasing;
        } else {
            fail(sub(wt, "dir"), "expected \"inc\" or \"dec\"");
        }
        const json& b = member(t, "bound", wt);
        const std::string wb = sub(wt, "bound");
        if (b == "unbounded") {
            term.bound = Unbounded{};
        } else if (b.is_object() && b.contains("in_group")) {
            check_keys(b, {"in_group"}, wb);
            term.bound = BoundInGroup{parse_exact(b["in_group"], sub(wb, "in_group"))};
        } else if (b.is_object() && b.contains("not_in_group")) {
            check_keys(b, {"not_in_group"}, wb);
            term.bound = BoundNotInGroup{parse_exact(b["not_in_group"], sub(wb, "not_in_group"))};
        } else {
            fail(wb, "expected \"unbounded\", {\"in_group\": r} or {\"not_in_group\": r}");
        }
        chain.terminal = term;
    }
    return chain;
}

json to_json(const StageChain& c) {
    json a = json::array();
    for (const auto& k : c.constants) a.push_back({{"const", {{"v", to_json(k.value)}, {"from", k.stage}}}});
    if (c.terminal) {
        json bound;
        if (std::holds_alternative<Unbounded>(c.terminal->bound)) {
            bound = "unbounded";
        } else if (const auto* in = std::get_if<BoundInGroup>(&c.terminal->bound)) {
            bound = {{"in_group", to_json(in->r)}};
        } else {
            bound = {{"not_in_group", to_json(std::get<BoundNotInGroup>(c.terminal->bound).r)}};
        }
        a.push_back({{"terminal",
                      {{"dir", c.terminal->direction == Direction::Increasing ? "inc" : "dec"}, {"bound", bound}}}});
    }
    return a;
}

PmsDescriptor parse_pms(const json& j, const std::string& where, const GroupDescriptor* fallback_group) {
    check_keys(j, {"kind", "group", "chain", "pcs_type", "prefix", "prefix_offset", "delta", "limit_in_field"}, where);
    PmsDescriptor e;
    const std::string kind = string_at(member(j, "kind", where), sub(where, "kind"));
    if (kind == "pcs") {
        e.kind = PmsKind::Pcs;
    } else if (kind == "pds") {
        e.kind = PmsKind::Pds;
        e.prefix_offset = 1;
    } else if (kind == "pcts") {
        e.kind = PmsKind::Pcts;
    } else {
        fail(sub(where, "kind"), "expected \"pcs\", \"pds\" or \"pcts\"");
    }
    if (j.contains("group")) {
        e.group = parse_group(j["group"], sub(where, "group"));
    } else if (fallback_group) {
        e.group = *fallback_group;
    } else {
        fail(where, "missing member 'group'");
    }
    if (j.contains("chain")) e.chain = parse_chain(j["chain"], sub(where, "chain"));
    if (j.contains("pcs_type")) {
        const json& t = j["pcs_type"];
        const std::string wt = sub(where, "pcs_type");
        if (t == "transcendental") {
            e.pcs_type = Transcendental{};
        } else if (t.is_object() && t.contains("algebraic")) {
            check_keys(t, {"algebraic"}, wt);
            const json& a = t["algebraic"];
            check_keys(a, {"deg"}, sub(wt, "algebraic"));
            const long deg = integer_at(member(a, "deg", sub(wt, "algebraic")), sub(wt, "algebraic/deg"));
            if (deg < 1) fail(sub(wt, "algebraic/deg"), "degree must be positive");
            e.pcs_type = Algebraic{static_cast<int>(deg)};
        } else {
            fail(wt, "expected \"transcendental\" or {\"algebraic\": {\"deg\": n}}");
        }
    }
    if (j.contains("prefix")) {
        const json& p = array_at(j["prefix"], sub(where, "prefix"));
        for (std::size_t i = 0; i < p.size(); ++i) e.prefix.push_back(parse_element(p[i], sub(where, "prefix/" + std::to_string(i))));
    }
    if (j.contains("prefix_offset")) e.prefix_offset = index_at(j["prefix_offset"], sub(where, "prefix_offset"));
    if (j.contains("delta")) e.pcts_delta = parse_element(j["delta"], sub(where, "delta"));
    if (j.contains("limit_in_field")) {
        if (!j["limit_in_field"].is_boolean()) fail(sub(where, "limit_in_field"), "expected a boolean");
        e.limit_in_field = j["limit_in_field"].get<bool>();
    }
    return e;
}

json to_json(const PmsDescriptor& e) {
    json j;
    j["kind"] = to_string(e.kind);
    j["group"] = to_json(e.group);
    if (e.chain) j["chain"] = to_json(*e.chain);
    if (e.pcs_type) {
        if (std::holds_alternative<Transcendental>(*e.pcs_type)) {
            j["pcs_type"] = "transcendental";
        } else {
            j["pcs_type"] = {{"algebraic", {{"deg", std::get<Algebraic>(*e.pcs_type).min_poly_degree}}}};
        }
    }
    json prefix = json::array();
    for (const auto& d : e.prefix) prefix.push_back(to_json(d));
    j["prefix"] = prefix;
    j["prefix_offset"] = e.prefix_offset;
    if (e.pcts_delta) j["delta"] = to_json(*e.pcts_delta);
    j["limit_in_field"] = e.limit_in_field;
    return j;
}

namespace {

TaggedRoot parse_root(const json& j, const std::string& where) {
    check_keys(j, {"limit", "beta", "mult", "name"}, where);
    TaggedRoot r;
    if (j.contains("limit")) {
        if (j["limit"] != true) fail(sub(where, "limit"), "only \"limit\": true is meaningful");
        if (j.contains("beta")) fail(where, "a root is either a limit or has an ultimate distance");
        r.tag = IsLimitOfE{};
    } else {
        r.tag = UltimateDistance{parse_element(member(j, "beta", where), sub(where, "beta"))};
    }
    if (j.contains("mult")) {
        r.multiplicity = integer_at(j["mult"], sub(where, "mult"));
        if (r.multiplicity < 1) fail(sub(where, "mult"), "multiplicity must be positive");
    }
    if (j.contains("name")) r.name = string_at(j["name"], sub(where, "name"));
    return r;
}

json root_json(const TaggedRoot& r) {
    json j{{"mult", r.multiplicity}};
    if (r.is_limit()) {
        j["limit"] = true;
    } else {
        j["beta"] = to_json(std::get<UltimateDistance>(r.tag).beta);
    }
    if (!r.name.empty()) j["name"] = r.name;
    return j;
}

}  // namespace

FactoredRationalFunction parse_frf(const json& j, const std::string& where) {
    check_keys(j, {"lead", "num", "den", "name"}, where);
    FactoredRationalFunction f;
    f.lead_value = parse_element(member(j, "lead", where), sub(where, "lead"));
    for (const char* side : {"num", "den"}) {
        if (!j.contains(side)) continue;
        const json& a = array_at(j[side], sub(where, side));
        auto& roots = std::string(side) == "num" ? f.num_roots : f.den_roots;
        for (std::size_t i = 0; i < a.size(); ++i) roots.push_back(parse_root(a[i], sub(sub(where, side), i)));
    }
    return f;
}

json to_json(const FactoredRationalFunction& f) {
    json num = json::array(), den = json::array();
    for (const auto& r : f.num_roots) num.push_back(root_json(r));
    for (const auto& r : f.den_roots) den.push_back(root_json(r));
    return {{"lead", to_json(f.lead_value)}, {"num", num}, {"den", den}};
}

UltrametricConfiguration parse_configuration(const json& j, const std::string& where,
                                             const GroupDescriptor* fallback_group) {
    check_keys(j, {"points", "sequence", "limits", "dist", "group"}, where);
    UltrametricConfiguration cfg;
    std::set<std::string> seen;
    const auto add_point = [&](const std::string& p) {
        if (seen.insert(p).second) cfg.points.push_back(p);
    };
    if (j.contains("points")) {
        const json& a = array_at(j["points"], sub(where, "points"));
        for (std::size_t i = 0; i < a.size(); ++i) add_point(string_at(a[i], sub(sub(where, "points"), i)));
    }
    if (j.contains("sequence")) {
        const json& a = array_at(j["sequence"], sub(where, "sequence"));
        for (std::size_t i = 0; i < a.size(); ++i) {
            cfg.sequence.push_back(string_at(a[i], sub(sub(where, "sequence"), i)));
            add_point(cfg.sequence.back());
        }
    }
    if (j.contains("group")) {
        cfg.group = parse_group(j["group"], sub(where, "group"));
    } else if (fallback_group) {
        cfg.group = *fallback_group;
    }
    if (j.contains("dist")) {
        const json& a = array_at(j["dist"], sub(where, "dist"));
        for (std::size_t i = 0; i < a.size(); ++i) {
            const std::string w = sub(sub(where, "dist"), i);
            check_keys(a[i], {"p", "q", "v"}, w);
            const std::string p = string_at(member(a[i], "p", w), sub(w, "p"));
            const std::string q = string_at(member(a[i], "q", w), sub(w, "q"));
            const ExtendedValue v = parse_extended(member(a[i], "v", w), sub(w, "v"));
            if (cfg.group && v.is_finite() && v.arity() != cfg.group->arity()) fail(sub(w, "v"), "arity differs from the group");
            add_point(p);
            add_point(q);
            try {
                cfg.set(p, q, v);
            } catch (const InvariantError& e) {
                fail(w, e.what());
            }
        }
    }
    if (j.contains("limits")) {
        const json& a = array_at(j["limits"], sub(where, "limits"));
        for (std::size_t i = 0; i < a.size(); ++i) {
            const std::string p = string_at(a[i], sub(sub(where, "limits"), i));
            if (!seen.count(p)) fail(sub(sub(where, "limits"), i), "unknown point '" + p + "'");
            cfg.known_limits.insert(p);
        }
    }
    return cfg;
}

ConcreteField parse_field(const json& j, const std::string& where) {
    check_keys(j, {"kind", "p"}, where);
    ConcreteField f;
    const std::string kind = string_at(member(j, "kind", where), sub(where, "kind"));
    if (kind == "padic") {
        f.kind = ConcreteField::Kind::RationalsPadic;
    } else if (kind == "composite") {
        f.kind = ConcreteField::Kind::RationalFunctionComposite;
    } else {
        fail(sub(where, "kind"), "expected \"padic\" or \"composite\"");
    }
    f.p = prime_at(member(j, "p", where), sub(where, "p"));
    return f;
}

namespace {

TPoly parse_tpoly(const json& j, const std::string& where) {
    array_at(j, where);
    std::vector<Rational> c;
    for (std::size_t i = 0; i < j.size(); ++i) c.push_back(rational_at(j[i], sub(where, i)));
    return TPoly(std::move(c));
}

}  // namespace

RationalFunction parse_field_element(const json& j, const std::string& where) {
    if (j.is_array()) return RationalFunction(parse_tpoly(j, where));
    if (j.is_object()) {
        check_keys(j, {"num", "den"}, where);
        TPoly num = parse_tpoly(member(j, "num", where), sub(where, "num"));
        TPoly den = j.contains("den") ? parse_tpoly(j["den"], sub(where, "den")) : TPoly::constant(1);
        if (den.is_zero()) fail(sub(where, "den"), "zero denominator");
        return {std::move(num), std::move(den)};
    }
    return RationalFunction::constant(rational_at(j, where));
}

json to_json(const RationalFunction& x) {
    const auto poly = [](const TPoly& p) {
        json a = json::array();
        for (const auto& c : p.coeffs) a.push_back(to_string(c));
        return a;
    };
    return {{"num", poly(x.num)}, {"den", poly(x.den)}};
}

ConcreteFunction parse_concrete_function(const json& j, const std::string& where) {
    check_keys(j, {"lead", "num", "den"}, where);
    ConcreteFunction f;
    if (j.contains("lead")) f.lead = parse_field_element(j["lead"], sub(where, "lead"));
    if (f.lead.is_zero()) fail(sub(where, "lead"), "the zero function is not allowed");
    for (const char* side : {"num", "den"}) {
        if (!j.contains(side)) continue;
        const json& a = array_at(j[side], sub(where, side));
        auto& roots = std::string(side) == "num" ? f.num : f.den;
        for (std::size_t i = 0; i < a.size(); ++i) {
            const std::string w = sub(sub(where, side), i);
            check_keys(a[i], {"root", "mult"}, w);
            const long m = a[i].contains("mult") ? integer_at(a[i]["mult"], sub(w, "mult")) : 1;
            if (m < 1) fail(sub(w, "mult"), "multiplicity must be positive");
            roots.emplace_back(parse_field_element(member(a[i], "root", w), sub(w, "root")), m);
        }
    }
    return f;
}

json to_json(const DominatingForm& f) { return {{"d", f.d}, {"beta", to_json(f.beta)}}; }

json to_json(const TreeTrace& t) {
    json steps = json::array();
    for (const auto& s : t.steps) steps.push_back({{"level", s.level}, {"branch", to_string(s.branch)}});
    return {{"steps", steps}, {"leaf", t.leaf ? json(to_string(*t.leaf)) : json(nullptr)}};
}

json to_json(const SupInf& s) { return {{"value", to_json(s.value)}, {"in_divisible_hull", s.in_divisible_hull}}; }

json to_json(const ExtensionReport& r) {
    json j{{"extension_kind", to_string(r.kind)}, {"pure", r.pure}, {"ic_label", r.ic_label}};
    if (r.pair) {
        j["pair"] = {{"point", r.pair->point}, {"alpha", to_json(r.pair->alpha)},
                     {"minimal", r.pair->minimal ? json(*r.pair->minimal) : json(nullptr)}};
    } else {
        j["pair"] = nullptr;
    }
    j["key_poly_sketch"] = r.key_poly_sketch ? json(r.key_poly_sketch->to_string()) : json(nullptr);
    return j;
}

json to_json(const FitResult& f) {
    json j{{"kind", to_string(f.kind)}, {"detail", f.detail}};
    if (f.kind != FitResult::Kind::Inconsistent) {
        j["d"] = f.d;
        j["beta"] = to_json(f.beta);
    }
    return j;
}

}  // namespace pmsval::io
