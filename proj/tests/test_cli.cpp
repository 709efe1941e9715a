#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sys/wait.h>

#include "pcurv/sampling.hpp"
#include "pcurv/scenario.hpp"

using namespace pcurv;

namespace {

json load(const std::string& name) {
    std::ifstream in(std::string(PCURV_SCENARIO_DIR) + "/" + name);
    return json::parse(in);
}

int run_cli(const std::string& args) {
    std::string cmd = std::string(PCURV_CLI) + " " + args + " > /dev/null 2>&1";
    int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

const json& block(const json& report, const std::string& name) {
    for (const auto& b : report["commands"])
        if (b["command"] == name) return b;
    throw std::runtime_error("missing block " + name);
}

}  // namespace

TEST_CASE("element literals round trip") {
    Field F(FieldSpec{5, 2, 3, 5, {}});
    SplitMix64 r(3);
    for (int it = 0; it < 50; ++it) {
        Elem x = random_element(F, r);
        json j = to_json(x);
        CHECK(elem_from_json(F, j, F.nu) == x);
        CHECK(to_json(elem_from_json(F, j, F.nu)).dump() == j.dump());
    }
    EMat m = random_metric(F, 3, r);
    CHECK(emat_from_json(F, to_json(m), F.nu) == m);
    CHECK(elem_from_json(F, json{{"int", -3}}, F.nu) == F.from_int(-3));
    CHECK_THROWS_AS(elem_from_json(F, json{{"float", 1.5}}, F.nu), Error);
    CHECK_THROWS_AS(elem_from_json(F, json{{"digits", json::array()}}, F.nu), Error);
}

TEST_CASE("report for the n = 2 monoid reproduces the symbol tables") {
    auto s = parse_scenario(load("c2_monoid.json"));
    auto rr = run(s);
    CHECK(rr.ok);
    const auto& res = block(rr.report, "monoid-analyze")["result"];
    CHECK(res["alpha"] == json::parse("[[[1,0],[0,1]],[[0,1],[1,0]]]"));
    CHECK(res["ell"] == json::parse("[[[0,0],[0,0]],[[0,0],[0,0]]]"));
    CHECK(res["abelian"] == true);
    CHECK(block(rr.report, "ideal-bases")["result"]["expected_match"]["3"] == "pass");
    CHECK(rr.report["schema"] == kSchema);
}

TEST_CASE("abelian n = 2 verification scenario") {
    auto rr = run(parse_scenario(load("abelian_n2.json")));
    CHECK(rr.ok);
    CHECK(rr.report["tery_check"] == "pass");
    CHECK(rr.report["ursuh_check"] == "pass");
    CHECK(rr.report["symmetry_violations"].empty());
}

TEST_CASE("empty command list") {
    auto rr = run(parse_scenario(load("empty.json")));
    CHECK(rr.ok);
    CHECK(rr.report["commands"].empty());
    CHECK(rr.report["summary"]["passed"] == 0);
}

TEST_CASE("reports are deterministic and seeds matter") {
    json j = load("nonabelian_n3.json");
    auto a = run(parse_scenario(j)).report.dump();
    auto b = run(parse_scenario(j)).report.dump();
    CHECK(a == b);
    auto c = run(parse_scenario(j, std::nullopt, 4)).report;
    CHECK(c["provenance"]["seed"] == 4);
    CHECK(c["provenance"]["scenario_hash"] == json::parse(a)["provenance"]["scenario_hash"]);
}

TEST_CASE("schema errors carry a path") {
    auto expect = [](const std::string& text, const std::string& where) {
        try {
            parse_scenario(json::parse(text));
            FAIL("no error for " << text);
        } catch (const Error& e) {
            CHECK(e.kind == "SchemaError");
            CHECK(std::string(e.what()).find(where) != std::string::npos);
        }
    };
    expect(R"({"commands": []})", "field");
    expect(R"({"field": {"p": 5, "e": 2}, "nope": 1})", "nope");
    expect(R"({"field": {"p": 5, "e": 2}, "commands": ["fly"]})", "commands");
    expect(R"({"field": {"p": 5, "e": 2}, "flavor": "einstein"})", "flavor");
    expect(R"({"field": {"p": 5, "e": 2}, "metric": {"entries": [[{"int": 1}, {"int": 2}], [{"int": 3}, {"int": 1}]]}})",
           "metric.entries");
    expect(R"({"field": {"p": 5, "e": 2}, "labeling": {"omega": [0, 0]}})", "labeling.omega");
    expect(R"({"field": {"p": 5, "e": 2}, "monoid": {"group": {"order": 3}}})", "monoid.group");
    expect(R"({"field": {"p": 5, "e": 2}, "torsion": {"kind": "twisted"}})", "torsion.kind");
    CHECK_THROWS_AS(parse_scenario(json::parse(R"({"field": {"p": 4, "e": 2}})")), Error);
}

TEST_CASE("random metric constraints") {
    Field F(FieldSpec{5, 2, 3, 4, {}});
    auto M = WeilMonoid::galois(F, {0, 1, 2}, 1);
    auto L = Labeling::canonical(3);
    SplitMix64 r(2);
    MetricConstraints c;
    c.ad_invariant = true;
    for (int it = 0; it < 10; ++it) {
        EMat q = generate_random_metric(F, M, L, 3, c, r);
        CHECK(q(0, 0) == q(1, 1));
        CHECK(q(1, 1) == q(2, 2));
        CHECK(q(0, 1) == q(1, 2));
        CHECK(q(0, 2) == q(0, 1));
    }
    MetricConstraints d;
    d.diagonal = true;
    EMat q = generate_random_metric(F, M, L, 3, d, r);
    CHECK(q(0, 1).is_zero());

    Field E(FieldSpec{5, 1, 2, 4, {}});
    auto M2 = WeilMonoid::galois(E, {0, 1}, 1);
    Cocycle u{{0, 1}, {GaugeElement::identity(E, 2), GaugeElement::permutation(E, {1, 0})}};
    MetricConstraints cc;
    cc.cocycle = &u;
    for (int it = 0; it < 5; ++it) {
        EMat m = generate_random_metric(E, M2, Labeling::canonical(2), 2, cc, r);
        CHECK(is_metric_compatible(E, u, m));
    }
}

TEST_CASE("module errors surface in command blocks") {
    json j = load("nonabelian_n3.json");
    auto rr = run(parse_scenario(j), std::vector<std::string>{"verify-tery"});
    CHECK_FALSE(rr.ok);
    CHECK(block(rr.report, "verify-tery")["error"]["kind"] == "NotAbelian");
}

TEST_CASE("command line exit codes") {
    std::string dir = PCURV_SCENARIO_DIR;
    CHECK(run_cli("--scenario " + dir + "/abelian_n2.json --quiet") == 0);
    CHECK(run_cli("--scenario " + dir + "/empty.json --quiet") == 0);
    CHECK(run_cli("--scenario " + dir + "/nonabelian_n3.json --command verify-tery --quiet") == 1);
    CHECK(run_cli("--scenario /nonexistent.json --quiet") == 2);
    CHECK(run_cli("--scenario " + dir + "/abelian_n2.json --precision 1 --quiet") == 2);
    CHECK(run_cli("--bogus") == 2);
}
