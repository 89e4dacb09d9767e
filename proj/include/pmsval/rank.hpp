#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pmsval/engine.hpp"
#include "pmsval/groups.hpp"
#include "pmsval/pms.hpp"

namespace pmsval {

enum class Branch { SupInfinite, BoundNotInGroup, BoundInGroupStrict, BoundInGroupConstant };
enum class Leaf { RankPlusOne, RankSame };

const char* to_string(Branch b);
const char* to_string(Leaf l);

struct TreeStep {
    std::size_t level = 1;  ///< 1-based coordinate level
    Branch branch = Branch::SupInfinite;
};

struct TreeTrace {
    std::vector<TreeStep> steps;
    std::optional<Leaf> leaf;
};

struct RankResult {
    int input_rank = 0;
    int output_rank = 0;
    GroupDescriptor extended_group;
    std::optional<AlphaPlacement> placement;  ///< unset on the short-circuit path
    TreeTrace trace;
    std::optional<SupInf> sup_or_inf;
    bool short_circuit = false;  ///< transcendental pcs or pcts: v_E K(X) = vK
};

/// Walks the decision tree over the chain and builds the extended group and
/// alpha. With self_check the alpha contract is verified on auto_probes and
/// on every prefix delta; a failure throws InvariantError("alpha-contract").
RankResult rank_of_vE(const PmsDescriptor& e, bool self_check = true);

/// Probe values around the chain constants and the bound, in the divisible
/// hull of vK (source arity).
std::vector<GroupElement> auto_probes(const PmsDescriptor& e);

struct LeafShape {
    std::size_t level = 1;  ///< level of the terminal entry
    Branch branch = Branch::SupInfinite;
    int expected_delta = 0;
    std::string mark() const { return expected_delta == 1 ? "(*)" : "(#)"; }
};

/// 3 leaves per level: Unbounded (*), bound outside the hull (#), bound in the
/// group with strict approach (*); earlier levels are constant.
std::vector<LeafShape> enumerate_leaves(std::size_t n);

/// Q^n instance realizing the leaf, with constants 0 and bounds sqrt(2) / 0.
PmsDescriptor make_leaf_instance(std::size_t n, const LeafShape& leaf, PmsKind kind = PmsKind::Pcs,
                                 std::size_t prefix_length = 8);

/// Fills e.prefix with `length` deltas consistent with the chain, starting at
/// e.prefix_offset. Constants take their value from stage 0.
void synthesize_prefix(PmsDescriptor& e, std::size_t length);

struct TheoremCheck {
    bool predicate = false;  ///< Cauchy / sup in hull / diverges / inf in hull
    bool rank_incremented = false;
    bool holds = false;  ///< predicate => +1, and for input rank 1 also the converse
    int input_rank = 0;
};

TheoremCheck theorem_rank_check(const PmsDescriptor& e);

/// Graphviz source of the full rank-n tree; the trace path is drawn in red.
std::string decision_tree_dot(std::size_t n, PmsKind kind, const TreeTrace* trace = nullptr);

}  // namespace pmsval
