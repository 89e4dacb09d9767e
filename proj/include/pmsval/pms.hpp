#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "pmsval/groups.hpp"

namespace pmsval {

enum class PmsKind { Pcs, Pds, Pcts };
enum class Direction { Increasing, Decreasing };

const char* to_string(PmsKind k);

struct Unbounded {
    friend bool operator==(const Unbounded&, const Unbounded&) = default;
};
struct BoundInGroup {
    ExactReal r;
    friend bool operator==(const BoundInGroup&, const BoundInGroup&) = default;
};
struct BoundNotInGroup {
    ExactReal r;
    friend bool operator==(const BoundNotInGroup&, const BoundNotInGroup&) = default;
};
using Bound = std::variant<Unbounded, BoundInGroup, BoundNotInGroup>;

/// Coordinate that is constant from stage `stage` on.
struct ConstantFrom {
    ExactReal value;
    std::size_t stage = 0;
    friend bool operator==(const ConstantFrom&, const ConstantFrom&) = default;
};

/// Coordinate that moves monotonically towards (but never reaches) its bound.
struct Terminal {
    Direction direction = Direction::Increasing;
    Bound bound;
    friend bool operator==(const Terminal&, const Terminal&) = default;
};

/// Asymptotic coordinate profile of the delta sequence: coordinates
/// 0 .. constants.size()-1 are ultimately constant, coordinate
/// constants.size() is the terminal one.
struct StageChain {
    std::vector<ConstantFrom> constants;
    std::optional<Terminal> terminal;

    std::size_t terminal_index() const noexcept { return constants.size(); }
    /// Largest stage label; prefix indices at or beyond it are tail witnesses.
    std::size_t tail_start() const noexcept;
    friend bool operator==(const StageChain&, const StageChain&) = default;
};

/// Finite origin of a bound r: nullopt when unbounded.
std::optional<ExactReal> bound_value(const Bound& b);

struct Transcendental {
    friend bool operator==(const Transcendental&, const Transcendental&) = default;
};
struct Algebraic {
    int min_poly_degree = 1;
    friend bool operator==(const Algebraic&, const Algebraic&) = default;
};
using PcsType = std::variant<Transcendental, Algebraic>;

/// Symbolic description of a pseudo monotone sequence.
///
/// prefix[k] is delta_{prefix_offset + k}. For sequences read off concrete
/// points the pds deltas start at index 1 (delta_nu = v(z_nu - z_mu), mu < nu).
struct PmsDescriptor {
    PmsKind kind = PmsKind::Pcs;
    GroupDescriptor group;
    std::optional<StageChain> chain;
    std::optional<GroupElement> pcts_delta;
    std::optional<PcsType> pcs_type;
    std::vector<GroupElement> prefix;
    std::size_t prefix_offset = 0;
    /// Declared: some limit of the sequence lies in the base field.
    bool limit_in_field = false;

    bool is_algebraic_pcs() const;
    bool is_transcendental_pcs() const;
};

/// Throws InvariantError naming the violated invariant.
void validate(const PmsDescriptor& e);

/// Pcs <-> Pds by negating every delta, constant and bound.
PmsDescriptor mirror(const PmsDescriptor& e);

// ---------------------------------------------------------------------------

/// Finite point set with (partially known) pairwise valuation distances.
struct UltrametricConfiguration {
    std::vector<std::string> points;
    std::vector<std::string> sequence;     ///< names of z_0, z_1, ... in order
    std::set<std::string> known_limits;    ///< points declared to be limits
    std::optional<GroupDescriptor> group;  ///< where distances live
    std::optional<Embedding> base;         ///< embedding of vK when group is an extension

    void set(const std::string& a, const std::string& b, ExtendedValue v);
    /// v(a - b); self-distance is +inf; nullopt when unknown.
    std::optional<ExtendedValue> dist(const std::string& a, const std::string& b) const;
    bool has_point(const std::string& p) const;
    /// Index of p in `sequence`, if it is a sequence member.
    std::optional<std::size_t> sequence_index(const std::string& p) const;
    /// True iff the finite value x lies in (the image of) vK.
    bool in_base_group(const ExtendedValue& x) const;

private:
    std::map<std::pair<std::string, std::string>, ExtendedValue> dist_;
};

/// Throws InvalidConfiguration unless the minimum of every fully known
/// triangle is attained at least twice.
void check_isosceles(const UltrametricConfiguration& cfg);

struct PrefixClassification {
    PmsKind kind;
    std::vector<GroupElement> deltas;
    std::size_t first_index = 0;  ///< index nu of deltas[0]
};

/// dist is the symmetric matrix of v(z_i - z_j) for i != j (diagonal ignored).
PrefixClassification classify_from_prefix(const std::vector<std::vector<ExtendedValue>>& dist);
PrefixClassification classify_from_prefix(const UltrametricConfiguration& cfg);

enum class Tristate { False, True, Indeterminate };
const char* to_string(Tristate t);

/// Minimum number of tail indices needed to witness "sufficiently large".
inline constexpr std::size_t kMinTailWitnesses = 2;

Tristate is_limit(const std::string& y, const PmsDescriptor& e, const UltrametricConfiguration& cfg);

struct Dichotomy {
    bool is_limit = false;
    std::optional<ExtendedValue> ultimate_value;  ///< set iff !is_limit
};

/// Limit, or ultimately constant v(y - z_nu). Throws IndeterminateError when
/// the data cannot decide and InvalidConfiguration when neither pattern shows.
Dichotomy limit_dichotomy_check(const std::string& y, const PmsDescriptor& e,
                                const UltrametricConfiguration& cfg);

bool is_cauchy(const PmsDescriptor& e);
bool diverges_to_infinity(const PmsDescriptor& e);

/// beta > delta_nu for every nu, decided from the chain (pcs only).
bool exceeds_all_deltas(const PmsDescriptor& e, const GroupElement& beta);
/// beta < delta_nu for every nu, decided from the chain (pds only).
bool below_all_deltas(const PmsDescriptor& e, const GroupElement& beta);
/// Same comparisons for a value of an extension group; the deltas are carried
/// along `emb` (nullptr means the descriptor's own group).
bool exceeds_all_deltas(const PmsDescriptor& e, const ExtendedValue& beta, const Embedding* emb);
bool below_all_deltas(const PmsDescriptor& e, const ExtendedValue& beta, const Embedding* emb);

struct SupInf {
    ExtendedValue value;
    bool in_divisible_hull = false;  ///< value lies in the divisible hull of vK
};

SupInf sup_of(const PmsDescriptor& e);
SupInf inf_of(const PmsDescriptor& e);

}  // namespace pmsval
