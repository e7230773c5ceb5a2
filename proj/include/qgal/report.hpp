#pragma once

#include <json.hpp>

#include <map>
#include <string>
#include <vector>

#include "qgal/algebra.hpp"
#include "qgal/corep.hpp"
#include "qgal/errors.hpp"

namespace qgal {

using ojson = nlohmann::ordered_json;

// One verified identity: measured value against its target, with the
// truncation-tail estimate that guards the verdict.
struct CaseResult {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    double abs_err = 0.0;
    double rel_err = 0.0;
    double tail = 0.0;
    double tol = 0.0;
    bool pass = false;
    std::string note;

    static CaseResult check(std::string name, double lhs, double rhs, double tol,
                            double tail = 0.0, std::string note = "") {
        CaseResult c;
        c.name = std::move(name);
        c.lhs = lhs;
        c.rhs = rhs;
        c.abs_err = std::abs(lhs - rhs);
        c.rel_err = c.abs_err / std::max(std::abs(rhs), 1e-300);
        c.tail = tail;
        c.tol = tol;
        c.pass = c.abs_err <= tol && tail <= 10 * tol;
        c.note = std::move(note);
        return c;
    }

    // residual-style case: lhs is a residual that must stay below tol
    static CaseResult residual(std::string name, double value, double tol, double tail = 0.0,
                               std::string note = "") {
        CaseResult c;
        c.name = std::move(name);
        c.lhs = value;
        c.rhs = 0.0;
        c.abs_err = std::abs(value);
        c.rel_err = c.abs_err;
        c.tail = tail;
        c.tol = tol;
        c.pass = c.abs_err <= tol && tail <= 10 * tol;
        c.note = std::move(note);
        return c;
    }

    static CaseResult boolean(std::string name, bool ok, std::string note = "") {
        CaseResult c;
        c.name = std::move(name);
        c.lhs = ok ? 1.0 : 0.0;
        c.rhs = 1.0;
        c.abs_err = ok ? 0.0 : 1.0;
        c.rel_err = c.abs_err;
        c.tol = 0.0;
        c.pass = ok;
        c.note = std::move(note);
        return c;
    }
};

struct Report {
    std::string schema = "qgal-report/1";
    std::string suite;
    ojson params;
    std::vector<CaseResult> cases;
    std::vector<std::string> notes;
    std::uint64_t seed = 0;
    std::string version = "0.1.0";
    std::string generated_at; // excluded from determinism comparisons

    int passed() const {
        int n = 0;
        for (const auto& c : cases) n += c.pass ? 1 : 0;
        return n;
    }
    int failed() const { return static_cast<int>(cases.size()) - passed(); }
    bool all_pass() const { return failed() == 0; }

    void add(CaseResult c) { cases.push_back(std::move(c)); }

    ojson to_json() const {
        ojson j;
        j["schema"] = schema;
        j["suite"] = suite;
        j["params"] = params;
        j["seed"] = seed;
        j["version"] = version;
        ojson cs = ojson::array();
        for (const auto& c : cases) {
            ojson e;
            e["name"] = c.name;
            e["lhs"] = c.lhs;
            e["rhs"] = c.rhs;
            e["abs_err"] = c.abs_err;
            e["rel_err"] = c.rel_err;
            e["tail_estimate"] = c.tail;
            e["tol"] = c.tol;
            e["verdict"] = c.pass ? "pass" : "fail";
            if (!c.note.empty()) e["note"] = c.note;
            cs.push_back(e);
        }
        j["cases"] = cs;
        j["summary"] = {{"passed", passed()}, {"failed", failed()}, {"total", cases.size()}};
        j["notes"] = notes;
        if (!generated_at.empty()) j["generated_at"] = generated_at;
        return j;
    }

    static Report from_json(const ojson& j) {
        Report r;
        r.schema = j.at("schema").get<std::string>();
        if (r.schema != "qgal-report/1") throw ConfigError("unknown report schema " + r.schema);
        r.suite = j.at("suite").get<std::string>();
        r.params = j.at("params");
        r.seed = j.at("seed").get<std::uint64_t>();
        r.version = j.at("version").get<std::string>();
        for (const auto& e : j.at("cases")) {
            CaseResult c;
            c.name = e.at("name").get<std::string>();
            c.lhs = e.at("lhs").get<double>();
            c.rhs = e.at("rhs").get<double>();
            c.abs_err = e.at("abs_err").get<double>();
            c.rel_err = e.at("rel_err").get<double>();
            c.tail = e.at("tail_estimate").get<double>();
            c.tol = e.at("tol").get<double>();
            c.pass = e.at("verdict").get<std::string>() == "pass";
            if (e.contains("note")) c.note = e.at("note").get<std::string>();
            r.cases.push_back(std::move(c));
        }
        for (const auto& n : j.at("notes")) r.notes.push_back(n.get<std::string>());
        if (j.contains("generated_at")) r.generated_at = j.at("generated_at").get<std::string>();
        return r;
    }
};

// ---------------------------------------------------------------------------
// Sparse data serialization: label -> [re, im]
// ---------------------------------------------------------------------------

inline ojson element_to_json(const Element& e) {
    // deterministic order
    std::map<Label, cplx> sorted(e.terms().begin(), e.terms().end());
    ojson j = ojson::object();
    for (const auto& [l, c] : sorted) j[l.str()] = {c.real(), c.imag()};
    return j;
}

inline ojson corep_to_json(const Corep& c) {
    ojson j;
    j["rows"] = c.rows();
    j["cols"] = c.cols();
    ojson ent = ojson::object();
    for (const auto& [ij, e] : c.entries())
        ent["(" + std::to_string(ij.first) + "," + std::to_string(ij.second) + ")"] = element_to_json(e);
    j["entries"] = ent;
    return j;
}

} // namespace qgal
