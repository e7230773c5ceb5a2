// qgal: batch driver for the verification suites.
//
//   qgal list                 show the suite registry
//   qgal run <suite> [...]    run one suite, print one line per case
//   qgal report <path>        pretty-print a stored JSON report
//
// Exit status of `run`: 0 all cases pass, 2 some case failed, 1 bad
// configuration or input.

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <string>

#include "qgal/report.hpp"
#include "qgal/suites.hpp"

namespace {

std::string now_utc() {
    auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void print_case(const qgal::CaseResult& c) {
    std::printf("  [%s] %-58s lhs=% .6e rhs=% .6e err=%.3e", c.pass ? "pass" : "FAIL",
                c.name.c_str(), c.lhs, c.rhs, c.abs_err);
    if (c.tail > 0.0) std::printf(" tail=%.1e", c.tail);
    if (!c.note.empty()) std::printf("  (%s)", c.note.c_str());
    std::printf("\n");
}

void print_report(const qgal::Report& rep) {
    std::printf("suite %s  (seed %llu, version %s)\n", rep.suite.c_str(),
                static_cast<unsigned long long>(rep.seed), rep.version.c_str());
    for (const auto& c : rep.cases) print_case(c);
    for (const auto& n : rep.notes) std::printf("  note: %s\n", n.c_str());
    std::printf("summary: %d/%zu passed\n", rep.passed(), rep.cases.size());
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical verification suites for projective corepresentation structure"};
    app.require_subcommand(1);

    auto* list = app.add_subcommand("list", "list available suites");

    qgal::SuiteConfig cfg;
    std::vector<std::string> tol_overrides;
    auto* run = app.add_subcommand("run", "run a suite");
    run->add_option("suite", cfg.suite, "suite name (see `qgal list`)")->required();
    run->add_option("--q", cfg.q, "deformation parameter in (0,1)");
    run->add_option("--fock-cutoff", cfg.fock_cutoff, "row/column cutoff D");
    run->add_option("--shift-window", cfg.shift_window, "shift window half-width K");
    run->add_option("--series-order", cfg.series_order, "coproduct series order P");
    run->add_option("--coeff-window", cfg.coeff_window, "matrix coefficient window w");
    run->add_option("--nmin", cfg.nmin, "lowest class label");
    run->add_option("--nmax", cfg.nmax, "highest class label");
    run->add_option("--group", cfg.group, "group preset name, or 'catalog'");
    run->add_option("--group-file", cfg.group_file, "JSON multiplication table");
    run->add_option("--cocycle", cfg.cocycle_file, "JSON cocycle phase table");
    run->add_option("--seed", cfg.seed, "random seed for generic elements");
    run->add_flag("--corrupt", cfg.corrupt, "negative control: corrupt a coefficient");
    run->add_option("--tol", tol_overrides, "tolerance override name=value (repeatable)");
    run->add_option("--out", cfg.out, "write the JSON report here");
    run->set_config("--config", "", "flat key = value configuration file");

    std::string report_path;
    auto* show = app.add_subcommand("report", "pretty-print a stored report");
    show->add_option("path", report_path, "report JSON file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (list->parsed()) {
            for (const auto& [name, fn] : qgal::suite_registry()) std::printf("%s\n", name.c_str());
            return 0;
        }
        if (show->parsed()) {
            std::ifstream in(report_path);
            if (!in) throw qgal::ConfigError("cannot read '" + report_path + "'");
            qgal::ojson j = qgal::ojson::parse(in);
            print_report(qgal::Report::from_json(j));
            return 0;
        }

        for (const auto& kv : tol_overrides) {
            auto eq = kv.find('=');
            if (eq == std::string::npos) throw qgal::ConfigError("tolerance override needs name=value");
            cfg.tol[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
        }

        qgal::Report rep = qgal::run_suite(cfg);
        rep.generated_at = now_utc();
        print_report(rep);
        if (!cfg.out.empty()) {
            std::ofstream out(cfg.out);
            if (!out) throw qgal::ConfigError("cannot write '" + cfg.out + "'");
            out << rep.to_json().dump(2) << "\n";
        }
        return rep.all_pass() ? 0 : 2;
    } catch (const qgal::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 1;
    } catch (const qgal::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
