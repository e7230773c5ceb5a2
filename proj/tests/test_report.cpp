#include <catch2/catch_amalgamated.hpp>

#include "qgal/report.hpp"
#include "qgal/suites.hpp"

using namespace qgal;

namespace {

SuiteConfig tiny_config(const std::string& suite) {
    SuiteConfig cfg;
    cfg.suite = suite;
    cfg.fock_cutoff = 16;
    cfg.series_order = 30;
    cfg.coeff_window = 2;
    cfg.nmin = -1;
    cfg.nmax = 1;
    cfg.seed = 99;
    return cfg;
}

} // namespace

TEST_CASE("report JSON round trip") {
    SuiteConfig cfg = tiny_config("qcalc-identities");
    Report rep = run_suite(cfg);
    CHECK(rep.all_pass());

    ojson j = rep.to_json();
    Report back = Report::from_json(j);
    CHECK(back.to_json().dump(2) == j.dump(2));
    CHECK(back.suite == "qcalc-identities");
    CHECK(back.passed() == rep.passed());
}

TEST_CASE("same seed and config give a byte-identical report body") {
    SuiteConfig cfg = tiny_config("finite-classify");
    cfg.group = "Z2xZ2";
    Report a = run_suite(cfg);
    Report b = run_suite(cfg);
    CHECK(a.to_json().dump() == b.to_json().dump());

    // a seeded suite with actual randomness inside
    SuiteConfig cfg2 = tiny_config("finite-cocycle");
    cfg2.group = "catalog";
    Report c = run_suite(cfg2);
    Report d = run_suite(cfg2);
    CHECK(c.to_json().dump() == d.to_json().dump());
}

TEST_CASE("config validation") {
    SuiteConfig cfg = tiny_config("no-such-suite");
    CHECK_THROWS_AS(run_suite(cfg), ConfigError);

    SuiteConfig bad = tiny_config("qcalc-identities");
    bad.tol["x"] = -1.0;
    CHECK_THROWS_AS(run_suite(bad), ConfigError);

    SuiteConfig badp = tiny_config("qcalc-identities");
    badp.fock_cutoff = 1;
    CHECK_THROWS_AS(run_suite(badp), ConfigError);
}

TEST_CASE("registry contents and order") {
    const auto& reg = suite_registry();
    CHECK(reg.size() == 12);
    CHECK(reg.front().first == "qcalc-identities");
    bool has_fusion = false, has_classify = false;
    for (const auto& [n, f] : reg) {
        if (n == "suq2-fusion") has_fusion = true;
        if (n == "finite-classify") has_classify = true;
    }
    CHECK(has_fusion);
    CHECK(has_classify);
    // stable ordering
    const auto& reg2 = suite_registry();
    for (std::size_t i = 0; i < reg.size(); ++i) CHECK(reg[i].first == reg2[i].first);
}

TEST_CASE("group and cocycle JSON input") {
    FiniteGroup z2 = group_from_json_text(R"({"elements":["e","g"],"table":[[0,1],[1,0]]})");
    CHECK(z2.order() == 2);
    CHECK_THROWS_AS(group_from_json_text(R"({"elements":["e"],"table":[[0,1]]})"), ConfigError);
    CHECK_THROWS_AS(group_from_json_text(R"({"elements":["e","g"],"table":[[1,0],[0,1]]})"), ConfigError);

    CocycleTable t = cocycle_from_json_text(R"({"den":4,"turn":[[0,1],[3,0]]})");
    CHECK(t.den == 4);
    CHECK(std::abs(t.value(0, 1) - cplx(0.0, 1.0)) <= 1e-15);
    CHECK_THROWS_AS(cocycle_from_json_text(R"({"den":0,"turn":[[0]]})"), ConfigError);
}

TEST_CASE("element serialization uses [re, im] pairs") {
    GroupModel gm(group_preset("Z2"));
    Element x = gm.lambda(1) * cplx(0.5, -0.25);
    ojson j = element_to_json(x);
    CHECK(j["(1)"][0].get<double>() == 0.5);
    CHECK(j["(1)"][1].get<double>() == -0.25);
}
