#include <fstream>
#include <sstream>

#include "doctest.h"
#include "pmsval/commands.hpp"
#include "pmsval/errors.hpp"
#include "pmsval/json_io.hpp"
#include "support/generators.hpp"

using namespace pmsval;
using io::json;

namespace {

json load(const std::string& name) {
    std::ifstream in(std::string(PMSVAL_DATA_DIR) + "/problems/" + name);
    REQUIRE(in.good());
    return json::parse(in);
}

int exit_code_of(const std::string& command, const json& problem) {
    try {
        return run_command(command, problem).exit_code;
    } catch (const std::exception& e) {
        return error_report(e).exit_code;
    }
}

}  // namespace

TEST_CASE("exact values round-trip through JSON") {
    const ExactReal xs[] = {ExactReal(Rational(-3, 4)), ExactReal::surd(1, -2, 3), ExactReal(0L)};
    for (const auto& x : xs) CHECK(io::parse_exact(io::to_json(x), "/") == x);
    CHECK(io::to_json(ExactReal(Rational(1, 2))) == json("1/2"));
    CHECK(io::parse_exact(json(3), "/") == ExactReal(3));
    CHECK(io::parse_exact(json::object({{"rat", "-6/4"}}), "/") == ExactReal(Rational(-3, 2)));
    const ExtendedValue sup = ExtendedValue::tuple({ExtendedReal::finite(ExactReal(1)), ExtendedReal::pos_inf()});
    CHECK(io::parse_extended(io::to_json(sup), "/") == sup);
    CHECK(io::parse_extended(io::to_json(ExtendedValue::plus_infinity()), "/").is_plus_infinity());
}

TEST_CASE("descriptors round-trip through JSON") {
    testsupport::Rng rng(41);
    for (int k = 0; k < 40; ++k) {
        const auto inst = testsupport::random_chain_instance(rng, static_cast<std::size_t>(k % 3 + 1),
                                                            k % 2 ? PmsKind::Pcs : PmsKind::Pds);
        const json j = io::to_json(inst.e);
        const PmsDescriptor back = io::parse_pms(j, "/");
        CHECK(back.group == inst.e.group);
        CHECK(back.chain == inst.e.chain);
        CHECK(back.prefix == inst.e.prefix);
        CHECK(back.prefix_offset == inst.e.prefix_offset);
        CHECK(io::to_json(back) == j);
    }
    const GroupDescriptor g{{Cyclic{Rational(1, 2)}, AdjoinedSurd{FullRational{}, ExactReal::surd(0, 1, 2)}, FormalInteger{}}};
    CHECK(io::parse_group(io::to_json(g), "/") == g);
}

TEST_CASE("schema errors carry a path") {
    CHECK_THROWS_AS(io::parse_exact(json("1//2"), "/x"), SchemaError);
    CHECK_THROWS_AS(io::parse_group(json::object({{"components", json::array()}, {"extra", 1}}), "/group"), SchemaError);
    try {
        io::parse_element(json::array({"1", true}), "/probes/0");
        FAIL("expected a schema error");
    } catch (const SchemaError& e) {
        CHECK(std::string(e.what()).find("/probes/0") != std::string::npos);
    }
}

TEST_CASE("bundled problems") {
    const json r3 = run_command("rank", load("example-rank3.json")).report;
    CHECK(r3["output_rank"] == 3);
    CHECK(r3["alpha"] == json::array({"1/2", "1", "0"}));
    CHECK(r3["sup"]["in_divisible_hull"] == false);

    const json r2 = run_command("rank", load("dyadic-sup-zero.json")).report;
    CHECK(r2["output_rank"] == 2);
    CHECK(r2["alpha"] == json::array({"0", "-1"}));

    const json ve = run_command("ve", load("dyadic-sup-zero.json")).report;
    CHECK(ve["functions"][0]["value"] == json::array({"0", "-2"}));
    CHECK(ve["functions"][1]["in_vK"] == true);

    CHECK(run_command("oracle-check", load("oracle-5adic.json")).exit_code == 0);
    CHECK(run_command("oracle-check", load("oracle-5adic-mistagged.json")).exit_code == 1);
    CHECK(run_command("oracle-check", load("oracle-composite.json")).exit_code == 0);
    CHECK(run_command("classify", load("pcts-configuration.json")).report["kind"] == "pcts");
    CHECK(run_command("probe", load("sqrt2-bound.json")).report["holds"] == true);
    CHECK(run_command("classify", load("transcendental-pcs.json")).report["sequence"]["extension_report"]["extension_kind"] ==
          "immediate");
}

TEST_CASE("reports are deterministic") {
    for (const char* name : {"example-rank3.json", "oracle-composite.json", "sqrt2-bound.json"}) {
        const json p = load(name);
        for (const char* cmd : {"classify", "rank", "sup"}) {
            if (std::string(name) == "oracle-composite.json") continue;
            CHECK(run_command(cmd, p).report.dump() == run_command(cmd, p).report.dump());
        }
    }
}

TEST_CASE("exit codes") {
    json p = load("example-rank3.json");
    CHECK(exit_code_of("rank", p) == 0);
    p["sequence"]["chain"] = json::array({load("example-rank3.json")["sequence"]["chain"][0]});
    CHECK(exit_code_of("rank", p) == 3);
    p = load("example-rank3.json");
    p["bogus"] = 1;
    CHECK(exit_code_of("rank", p) == 2);
    p = load("example-rank3.json");
    p["version"] = "9";
    CHECK(exit_code_of("rank", p) == 2);
    CHECK(exit_code_of("nonsense", load("example-rank3.json")) == 2);
    CHECK(exit_code_of("leaves", json::object({{"rank", 2}})) == 0);
    CHECK(exit_code_of("leaves", json::object()) == 2);
    CHECK(error_report(IndeterminateError("x")).exit_code == 4);
    CHECK(error_report(std::domain_error("x")).exit_code == 3);
}
