#include "miniqt/harness/suite.hpp"
#include "miniqt/harness/verify.hpp"
#include "miniqt/symex/ssa.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

using namespace miniqt;

int main(int argc, char **argv)
{
    CLI::App app{"Bounded model checker for MiniQt programs"};
    app.set_version_flag("--version", "miniqt-bmc 1.0");

    VerifierConfig config;
    std::string file;
    bool noUnwindingAssertions = false;
    std::uint64_t memLimit = 0;
    bool showGoto = false, showSsa = false;
    std::string smtOut;
    std::string solver = "internal";
    std::string heuristic = "activity";
    unsigned jobs = 1;

    app.add_option("file", file, "MiniQt source file to verify");
    app.add_option("--unwind", config.unwind, "Loop and recursion unwinding bound")
        ->capture_default_str();
    app.add_flag("--no-unwinding-assertions", noUnwindingAssertions,
                 "Assume instead of assert that loops terminate within the bound");
    app.add_option("-I", config.includePaths, "Operational model directory (repeatable)")
        ->allow_extra_args(false);
    app.add_option("--memlimit", memLimit, "Memory limit in KiB (0 = none)");
    app.add_option("--timeout", config.timeoutSeconds, "Time limit in seconds")
        ->capture_default_str();
    app.add_flag("--show-goto", showGoto, "Print the GOTO program");
    app.add_flag("--show-ssa", showSsa, "Print the SSA equations and claims");
    app.add_option("--smt-out", smtOut, "Write the SMT-LIB2 query to this file");
    app.add_option("--solver", solver, "internal, or external-stdout to print the query and stop")
        ->check(CLI::IsMember({"internal", "external-stdout"}))
        ->capture_default_str();
    app.add_option("--sat-heuristic", heuristic, "SAT decision order: index or activity")
        ->check(CLI::IsMember({"index", "activity"}))
        ->capture_default_str();
    app.add_flag("--strict-positive-interval", config.strictPositiveInterval,
                 "QTimer intervals must be > 0 instead of >= 0");
    app.add_option("--container-capacity", config.containerCapacity,
                   "Capacity of model container arrays")
        ->capture_default_str();
    app.add_option("--int-width", config.intWidth, "Bit width of int")->capture_default_str();
    app.add_option("--jobs", jobs, "Parallel suite cases")->capture_default_str();

    auto *suite = app.add_subcommand("suite", "Run a benchmark manifest");
    suite->fallthrough();
    std::string manifest, reportPath;
    suite->add_option("manifest", manifest, "Manifest file")->required();
    suite->add_option("--report", reportPath, "Write the JSON report to this file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    config.unwindingAssertions = !noUnwindingAssertions;
    if (memLimit > 0)
        config.memLimitKb = memLimit;

    if (suite->parsed()) {
        try {
            harness::SuiteReport report = harness::run_suite(manifest, config, jobs);
            std::cout << harness::report_text(report);
            if (!reportPath.empty()) {
                std::ofstream out(reportPath);
                if (!out) {
                    std::cerr << "cannot write " << reportPath << "\n";
                    return 1;
                }
                out << harness::report_json(report);
            }
            return report.counts.successful == report.counts.total() ? 0 : 10;
        } catch (const Error &e) {
            std::cerr << "error: " << e.what() << "\n";
            return 1;
        }
    }

    if (file.empty()) {
        std::cerr << app.help();
        return 1;
    }

    harness::VerifyOptions options;
    options.solver.order =
        heuristic == "activity" ? smt::DecisionOrder::Activity : smt::DecisionOrder::VariableIndex;
    options.solver.restarts = heuristic == "activity";
    if (showGoto)
        options.hooks.onGoto = [](const gotoir::GotoProgram &p) {
            std::cout << gotoir::format_program(p) << "\n";
        };
    if (showSsa)
        options.hooks.onSsa = [](const symex::SsaSystem &s) {
            std::cout << symex::format_ssa(s) << "\n";
        };
    bool smtWriteFailed = false;
    if (!smtOut.empty() || solver == "external-stdout")
        options.hooks.onFormula = [&](const smt::TermManager &tm, smt::TermRef f) {
            std::string script = smt::emit_smtlib(tm, f);
            if (!smtOut.empty()) {
                std::ofstream out(smtOut);
                out << script;
                smtWriteFailed = !out;
            }
            if (solver == "external-stdout") {
                std::cout << script;
                return false;
            }
            return true;
        };

    harness::VerificationResult r = harness::verify_file(file, config, options);
    if (smtWriteFailed) {
        std::cerr << "cannot write " << smtOut << "\n";
        return 1;
    }
    if (r.verdict == harness::Verdict::Deferred)
        return harness::exit_code(r.verdict);
    std::ostream &os = r.verdict == harness::Verdict::ToolError ? std::cerr : std::cout;
    os << harness::format_result(r);
    if (r.verdict != harness::Verdict::Failed)
        os << "\n";
    return harness::exit_code(r.verdict);
}
