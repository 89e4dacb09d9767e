#include <regex>
#include <sstream>
#include <set>

#include "doctest.h"
#include "pmsval/errors.hpp"
#include "pmsval/rank.hpp"
#include "support/generators.hpp"

using namespace pmsval;

namespace {

GroupElement el(std::initializer_list<ExactReal> xs) { return GroupElement(std::vector<ExactReal>(xs)); }

PmsDescriptor half_z_pcs() {
    PmsDescriptor e;
    e.kind = PmsKind::Pcs;
    e.group = {{Cyclic{Rational(1, 2)}, Cyclic{1}}};
    StageChain c;
    c.constants.push_back({ExactReal(Rational(1, 2)), 0});
    c.terminal = Terminal{Direction::Increasing, Unbounded{}};
    e.chain = c;
    e.pcs_type = Algebraic{1};
    for (int nu = 0; nu < 8; ++nu) e.prefix.push_back(el({Rational(1, 2), nu + 1}));
    return e;
}

PmsDescriptor dyadic_pcs() {
    PmsDescriptor e;
    e.kind = PmsKind::Pcs;
    e.group = {{PPowerDivisible{2, 1}}};
    e.chain = StageChain{{}, Terminal{Direction::Increasing, BoundInGroup{ExactReal(0L)}}};
    e.pcs_type = Algebraic{2};
    Rational d = -1;
    for (int nu = 0; nu < 10; ++nu, d /= 2) e.prefix.push_back(el({d}));
    return e;
}

// Edge endpoints must be declared nodes and braces must balance.
void check_dot(const std::string& dot) {
    CHECK(dot.rfind("digraph", 0) == 0);
    long depth = 0;
    for (char c : dot) {
        if (c == '{') ++depth;
        if (c == '}') --depth;
        CHECK(depth >= 0);
    }
    CHECK(depth == 0);
    std::set<std::string> nodes;
    const std::regex node_re(R"(^  (\w+) \[shape)"), edge_re(R"(^  (\w+) -> (\w+) )");
    std::istringstream in(dot);
    std::vector<std::pair<std::string, std::string>> edges;
    for (std::string line; std::getline(in, line);) {
        std::smatch m;
        if (std::regex_search(line, m, node_re)) nodes.insert(m[1]);
        if (std::regex_search(line, m, edge_re)) edges.emplace_back(m[1], m[2]);
    }
    CHECK_FALSE(edges.empty());
    for (const auto& [a, b] : edges) {
        CHECK(nodes.count(a) == 1);
        CHECK(nodes.count(b) == 1);
    }
}

std::size_t count(const std::string& s, const std::string& needle) {
    std::size_t n = 0;
    for (auto pos = s.find(needle); pos != std::string::npos; pos = s.find(needle, pos + 1)) ++n;
    return n;
}

}  // namespace

TEST_CASE("rank two group with an unbounded terminal coordinate") {
    const RankResult r = rank_of_vE(half_z_pcs());
    CHECK(r.input_rank == 2);
    CHECK(r.output_rank == 3);
    CHECK(r.placement->alpha == el({Rational(1, 2), 1, 0}));
    CHECK(r.sup_or_inf->value == ExtendedValue::tuple({ExtendedReal::finite(ExactReal(Rational(1, 2))), ExtendedReal::pos_inf()}));
    CHECK_FALSE(r.sup_or_inf->in_divisible_hull);
    REQUIRE(r.trace.steps.size() == 2);
    CHECK(r.trace.steps[0].branch == Branch::BoundInGroupConstant);
    CHECK(r.trace.steps[1].branch == Branch::SupInfinite);
    CHECK(*r.trace.leaf == Leaf::RankPlusOne);
    CHECK(rank(r.extended_group) == 3);
}

TEST_CASE("negative deltas with supremum zero in the group") {
    const RankResult r = rank_of_vE(dyadic_pcs());
    CHECK(r.input_rank == 1);
    CHECK(r.output_rank == 2);
    CHECK(r.placement->alpha == el({0, -1}));
    CHECK(r.sup_or_inf->value == ExtendedValue(el({0})));
    CHECK(r.sup_or_inf->in_divisible_hull);
    CHECK(r.trace.steps.back().branch == Branch::BoundInGroupStrict);
}

TEST_CASE("a surd bound keeps the rank") {
    PmsDescriptor e;
    e.kind = PmsKind::Pcs;
    e.group = {{FullRational{}}};
    e.chain = StageChain{{}, Terminal{Direction::Increasing, BoundNotInGroup{ExactReal::surd(0, 1, 2)}}};
    e.pcs_type = Algebraic{2};
    synthesize_prefix(e, 6);
    const RankResult r = rank_of_vE(e);
    CHECK(r.output_rank == 1);
    CHECK(r.placement->alpha == el({ExactReal::surd(0, 1, 2)}));
    CHECK(contains(r.extended_group, el({ExactReal::surd(1, 3, 2)})));
    CHECK(*r.trace.leaf == Leaf::RankSame);
}

TEST_CASE("a rational bound outside the group is adjoined before the new factor") {
    PmsDescriptor e;
    e.kind = PmsKind::Pcs;
    e.group = {{PPowerDivisible{2, 1}}};
    e.chain = StageChain{{}, Terminal{Direction::Increasing, BoundNotInGroup{ExactReal(Rational(1, 3))}}};
    e.pcs_type = Algebraic{3};
    synthesize_prefix(e, 6);
    const RankResult r = rank_of_vE(e);
    CHECK(r.output_rank == 2);
    CHECK(r.placement->alpha == el({Rational(1, 3), -1}));
    CHECK(contains(r.extended_group, el({Rational(1, 3), 0})));
}

TEST_CASE("short circuits and errors") {
    PmsDescriptor t = dyadic_pcs();
    t.pcs_type = Transcendental{};
    const RankResult rt = rank_of_vE(t);
    CHECK(rt.short_circuit);
    CHECK(rt.output_rank == rt.input_rank);
    CHECK_FALSE(rt.placement.has_value());

    PmsDescriptor u = dyadic_pcs();
    u.pcs_type.reset();
    CHECK_THROWS_AS(rank_of_vE(u), InvariantError);

    PmsDescriptor c;
    c.kind = PmsKind::Pcts;
    c.group = {{Cyclic{1}}};
    c.pcts_delta = el({1});
    CHECK(rank_of_vE(c).short_circuit);
    CHECK_THROWS_AS(theorem_rank_check(c), InvariantError);
}

TEST_CASE("mirrored instances") {
    const RankResult a = rank_of_vE(dyadic_pcs());
    const RankResult b = rank_of_vE(mirror(dyadic_pcs()));
    CHECK(b.output_rank == a.output_rank);
    CHECK(b.placement->alpha == -a.placement->alpha);
    CHECK(b.sup_or_inf->value == -a.sup_or_inf->value);
}

TEST_CASE("leaf enumeration") {
    for (std::size_t n = 1; n <= 4; ++n) {
        const auto leaves = enumerate_leaves(n);
        CHECK(leaves.size() == 3 * n);
        for (const auto& leaf : leaves) {
            for (PmsKind kind : {PmsKind::Pcs, PmsKind::Pds}) {
                const RankResult r = rank_of_vE(make_leaf_instance(n, leaf, kind));
                CHECK(r.output_rank - r.input_rank == leaf.expected_delta);
                CHECK(r.output_rank == rank(r.extended_group));
                CHECK(r.trace.steps.back().level == leaf.level);
                CHECK(r.trace.steps.back().branch == leaf.branch);
            }
        }
    }
    CHECK_THROWS_AS(enumerate_leaves(5), InvariantError);
    CHECK(enumerate_leaves(1)[1].mark() == "(#)");
}

TEST_CASE("theorem predicate on random chains") {
    testsupport::Rng rng(17);
    for (int k = 0; k < 90; ++k) {
        const std::size_t n = static_cast<std::size_t>(k % 3 + 1);
        const auto inst = testsupport::random_chain_instance(rng, n, k % 2 ? PmsKind::Pcs : PmsKind::Pds);
        const TheoremCheck t = theorem_rank_check(inst.e);
        CHECK(t.holds);
        CHECK(t.rank_incremented == (testsupport::expected_rank_delta(inst) == 1));
        if (t.predicate) CHECK(t.rank_incremented);
    }
}

TEST_CASE("auto probes lie in the divisible hull") {
    const PmsDescriptor e = half_z_pcs();
    for (const auto& p : auto_probes(e)) CHECK(hull_contains(e.group, p));
}

TEST_CASE("synthesized prefixes satisfy the chain") {
    testsupport::Rng rng(19);
    for (int k = 0; k < 60; ++k) {
        const auto inst = testsupport::random_chain_instance(rng, 3, k % 2 ? PmsKind::Pcs : PmsKind::Pds, 10);
        CHECK_NOTHROW(validate(inst.e));
        CHECK(inst.e.prefix.size() == 10);
    }
}

TEST_CASE("decision tree rendering") {
    for (std::size_t n = 1; n <= 3; ++n) {
        const std::string plain = decision_tree_dot(n, PmsKind::Pcs);
        check_dot(plain);
        CHECK(count(plain, "color=red") == 0);
        CHECK(count(plain, "contradiction") == 1);
    }
    const RankResult r = rank_of_vE(half_z_pcs());
    const std::string traced = decision_tree_dot(2, PmsKind::Pcs, &r.trace);
    check_dot(traced);
    CHECK(count(traced, "color=red") > 0);
    const std::string pds = decision_tree_dot(2, PmsKind::Pds);
    CHECK(pds.find("inf{") != std::string::npos);
    CHECK_THROWS_AS(decision_tree_dot(2, PmsKind::Pcts), WrongKind);
}
