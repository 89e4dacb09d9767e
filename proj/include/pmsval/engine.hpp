#pragma once

#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "pmsval/groups.hpp"
#include "pmsval/pms.hpp"

namespace pmsval {

struct IsLimitOfE {
    friend bool operator==(const IsLimitOfE&, const IsLimitOfE&) = default;
};
struct UltimateDistance {
    GroupElement beta;
    friend bool operator==(const UltimateDistance&, const UltimateDistance&) = default;
};

/// A root of a rational function known only through its relation to E.
struct TaggedRoot {
    std::variant<IsLimitOfE, UltimateDistance> tag;
    long multiplicity = 1;
    std::string name;  ///< optional label used in diagnostics

    bool is_limit() const { return std::holds_alternative<IsLimitOfE>(tag); }
};

/// c * prod (X - a_i)^{m_i} / prod (X - b_k)^{n_k}, roots given by tags.
struct FactoredRationalFunction {
    GroupElement lead_value;
    std::vector<TaggedRoot> num_roots;
    std::vector<TaggedRoot> den_roots;
};

/// Arity, multiplicity and membership checks against the group of E.
void validate(const FactoredRationalFunction& phi, const GroupDescriptor& g);

/// v phi(z_nu) = d * delta_nu + beta for all large nu.
struct DominatingForm {
    long d = 0;
    GroupElement beta;
    friend bool operator==(const DominatingForm&, const DominatingForm&) = default;
};

DominatingForm dominating_degree(const FactoredRationalFunction& phi, const PmsDescriptor& e);

/// Extended group together with the formal value alpha = v(X - a).
struct AlphaPlacement {
    Embedding embedding;
    GroupElement alpha;
};

struct VEValue {
    DominatingForm form;
    std::optional<ExtendedValue> value;  ///< unset when d != 0 and no placement was given
    std::string symbolic;                ///< "d*alpha + beta" rendering
    bool in_vK = false;
    bool torsion_over_vK = false;
};

/// v_E(phi). With d != 0 the value lives in placement->embedding.target; when
/// require_placement is set and no placement is given, throws InvariantError.
VEValue v_E(const FactoredRationalFunction& phi, const PmsDescriptor& e, const AlphaPlacement* placement = nullptr,
            bool require_placement = false);

struct MonomialValue {
    ExtendedValue value;
    bool zero_polynomial = false;
};

/// min_i (v c_i + i alpha) for f = sum c_i (X - a)^i.
MonomialValue monomial_value(const std::vector<std::pair<long, ExtendedValue>>& coeffs, const ExtendedValue& alpha);

bool pair_equality(const ExtendedValue& alpha, const ExtendedValue& alpha2, const ExtendedValue& v_ab);

struct MaxDistanceResult {
    bool precondition_met = false;
    std::string anchor;                    ///< point a with v(y - a) outside vK
    std::optional<std::string> violator;   ///< point b with v(y - b) > v(y - a)
};

MaxDistanceResult max_distance_check(const UltrametricConfiguration& cfg, const std::string& y);

enum class AlphaPosition { AboveAll, BelowAll, Inside };
const char* to_string(AlphaPosition p);

AlphaPosition classify_alpha_position(const PmsDescriptor& e);

/// max over the roots c of f of v(X - c); distances[i] belongs to num_roots[i].
ExtendedValue delta_of_polynomial(const FactoredRationalFunction& f, const std::vector<ExtendedValue>& distances);

struct ProbeCheck {
    bool holds = true;
    std::optional<GroupElement> counterexample;
    std::size_t probes_checked = 0;
};

/// Probes are elements of the divisible hull of vK (source arity) or of the
/// image of vK in the extension group (target arity).
/// pcs: beta > alpha  <=>  beta > delta_nu for every nu.
ProbeCheck check_pcs_equivalence_iii(const PmsDescriptor& e, const AlphaPlacement& placement,
                                     const std::vector<GroupElement>& probes);
/// pds: beta < alpha  <=>  beta < delta_nu for every nu.
ProbeCheck check_pds_equivalence_iii(const PmsDescriptor& e, const AlphaPlacement& placement,
                                     const std::vector<GroupElement>& probes);

enum class ExtensionKind { Immediate, ValueTranscendental, ResidueTranscendental };
const char* to_string(ExtensionKind k);

struct PairOfDefinition {
    std::string point;
    ExtendedValue alpha;
    std::optional<bool> minimal;
};

struct KeyPolySketch {
    std::string family = "X - z_nu";
    int q_degree = 1;
    std::string to_string() const;
};

struct ExtensionReport {
    ExtensionKind kind = ExtensionKind::Immediate;
    bool pure = false;
    std::string ic_label;
    std::optional<PairOfDefinition> pair;
    std::optional<KeyPolySketch> key_poly_sketch;
};

ExtensionReport extension_report(const PmsDescriptor& e, const AlphaPlacement* placement = nullptr);

/// Points z_0.., X and (pcs) a limit "a" of E in the algebraic closure, with
/// the distances v_E forces; lives in placement.embedding.target.
UltrametricConfiguration induced_configuration(const PmsDescriptor& e, const AlphaPlacement& placement);

}  // namespace pmsval
