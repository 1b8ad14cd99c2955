#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "json.hpp"
#include "miniqt/harness/suite.hpp"
#include "miniqt/frontend/frontend.hpp"
#include "miniqt/harness/verify.hpp"
#include "support.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sys/wait.h>
#include <unistd.h>

using namespace miniqt;
using namespace miniqt::harness;
namespace fs = std::filesystem;

namespace {

VerificationResult failed_with(const std::string &message)
{
    VerificationResult r;
    r.verdict = Verdict::Failed;
    smt::Counterexample cex;
    cex.violated.message = message;
    r.counterexample = cex;
    return r;
}

VerificationResult with_verdict(Verdict v)
{
    VerificationResult r;
    r.verdict = v;
    return r;
}

struct TempFile {
    fs::path path;
    TempFile(const std::string &name, const std::string &text)
    {
        path = fs::temp_directory_path() / (std::to_string(::getpid()) + "-" + name);
        std::ofstream(path) << text;
    }
    ~TempFile() { fs::remove(path); }
};

int cli(const std::string &args)
{
    std::string cmd = std::string(MINIQT_BMC) + " " + args + " > /dev/null 2>&1";
    int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

} // namespace

TEST_CASE("rates round half up to two decimals")
{
    CHECK(rate_of(51, 54).to_string() == "94.44");
    CHECK(rate_of(1, 54).to_string() == "1.85");
    CHECK(rate_of(2, 54).to_string() == "3.70");
    CHECK(rate_of(0, 7).to_string() == "0.00");
    CHECK(rate_of(7, 7).to_string() == "100.00");
    CHECK(rate_of(1, 8).to_string() == "12.50");
    CHECK(rate_of(1, 3).to_string() == "33.33");
    CHECK(rate_of(2, 3).to_string() == "66.67");
    CHECK_THROWS_AS(rate_of(0, 0), ZeroTotal);

    Counts c;
    c.successful = 51;
    c.falseIncorrect = 1;
    c.falseCorrect = 2;
    auto r = compute_rates(c);
    CHECK(r.successful.to_string() == "94.44");
    CHECK(r.falseIncorrect.to_string() == "1.85");
    CHECK(r.falseCorrect.to_string() == "3.70");
    CHECK(r.failed.to_string() == "0.00");
    CHECK_THROWS_AS(compute_rates(Counts{}), ZeroTotal);
}

TEST_CASE("rates match exact rational rounding")
{
    for (std::size_t t = 1; t <= 120; ++t)
        for (std::size_t c = 0; c <= t; ++c) {
            // 100*c/t in hundredths, rounded half up: floor((20000c + t) / 2t).
            long double exact = 10000.0L * static_cast<long double>(c) / static_cast<long double>(t);
            auto h = rate_of(c, t).hundredths;
            CHECK(static_cast<long double>(h) <= exact + 0.5L);
            CHECK(static_cast<long double>(h) > exact - 0.5L - 1e-9L);
        }
}

TEST_CASE("classification")
{
    BenchmarkCase safe{"a.mqt", false, std::nullopt, "a.mqt"};
    BenchmarkCase bad{"b.mqt", true, std::string("must not be empty"), "b.mqt"};
    BenchmarkCase anyBad{"c.mqt", true, std::nullopt, "c.mqt"};

    CHECK(classify(safe, with_verdict(Verdict::Successful)) == Outcome::Successful);
    CHECK(classify(safe, failed_with("x")) == Outcome::FalseIncorrect);
    CHECK(classify(bad, with_verdict(Verdict::Successful)) == Outcome::FalseCorrect);
    CHECK(classify(bad, failed_with("The list must not be empty")) == Outcome::Successful);
    CHECK(classify(bad, failed_with("array bounds violated")) == Outcome::WrongProperty);
    CHECK(classify(anyBad, failed_with("anything")) == Outcome::Successful);
    CHECK(classify(safe, with_verdict(Verdict::ToolError)) == Outcome::Failed);
    CHECK(classify(bad, with_verdict(Verdict::Timeout)) == Outcome::Timeout);
    CHECK(classify(bad, with_verdict(Verdict::MemOut)) == Outcome::MemOut);

    Counts c;
    for (auto o : {Outcome::Successful, Outcome::Successful, Outcome::Timeout, Outcome::WrongProperty})
        c.add(o);
    CHECK(c.successful == 2);
    CHECK(c.timeout == 1);
    CHECK(c.wrongProperty == 1);
    CHECK(c.total() == 4);
}

TEST_CASE("manifest parsing")
{
    auto cases = parse_manifest("# comment\n\nqlist/a.mqt TRUE\nb.mqt   FALSE  The list must not be empty\n"
                                "c.mqt FALSE\n",
                                "/base");
    REQUIRE(cases.size() == 3);
    CHECK(cases[0].path == "/base/qlist/a.mqt");
    CHECK(cases[0].description == "qlist/a.mqt");
    CHECK_FALSE(cases[0].expectFailed);
    CHECK(cases[1].expectFailed);
    CHECK(cases[1].expectedMessage == std::optional<std::string>("The list must not be empty"));
    CHECK_FALSE(cases[2].expectedMessage.has_value());

    CHECK_THROWS_AS(parse_manifest("a.mqt MAYBE\n", "/"), Error);
    CHECK_THROWS_AS(parse_manifest("a.mqt\n", "/"), Error);
    CHECK_THROWS_AS(load_manifest("/nonexistent/manifest.txt"), Error);
}

TEST_CASE("verify_source verdicts and report text")
{
    auto ok = verify_source("int main() { int x = 1; assert(x == 1); return 0; }", "t.mqt", {});
    CHECK(ok.verdict == Verdict::Successful);
    CHECK(format_result(ok) == "VERIFICATION SUCCESSFUL");

    auto bad = verify_source("int main() { int x = nondet_int(); assert(x != 3); return 0; }", "t.mqt", {});
    REQUIRE(bad.verdict == Verdict::Failed);
    std::string text = format_result(bad);
    CHECK(text.find("VERIFICATION FAILED") == 0);
    CHECK(text.find("Violated property: assertion x != 3") != std::string::npos);
    CHECK(text.find("  location: t.mqt:1") != std::string::npos);
    CHECK(text.find("Inputs: nondet_int#1=3") != std::string::npos);

    auto err = verify_source("int main() { return y; }", "t.mqt", {});
    CHECK(err.verdict == Verdict::ToolError);
    CHECK(err.errorKind == "UndefinedSymbol");

    auto inc = verify_source("#include <Nope>\nint main() { return 0; }", "t.mqt", {});
    CHECK(inc.errorKind == "IncludeNotFound");

    VerifierConfig tiny;
    tiny.memLimitKb = 1;
    auto mem = verify_file(testing::benchmarks_dir() + "/core/div_mod_identity.mqt", tiny);
    CHECK(mem.verdict == Verdict::MemOut);

    CHECK(exit_code(Verdict::Successful) == 0);
    CHECK(exit_code(Verdict::Failed) == 10);
    CHECK(exit_code(Verdict::ToolError) == 1);
    CHECK(exit_code(Verdict::Timeout) == 2);
    CHECK(exit_code(Verdict::MemOut) == 2);
    CHECK(exit_code(Verdict::Deferred) == 3);
}

TEST_CASE("hooks observe the pipeline and can defer solving")
{
    bool sawGoto = false, sawSsa = false;
    VerifyOptions o;
    o.hooks.onGoto = [&](const gotoir::GotoProgram &) { sawGoto = true; };
    o.hooks.onSsa = [&](const symex::SsaSystem &) { sawSsa = true; };
    o.hooks.onFormula = [](const smt::TermManager &, smt::TermRef) { return false; };
    auto r = verify_source("int main() { return 0; }", "t.mqt", {}, o);
    CHECK(sawGoto);
    CHECK(sawSsa);
    CHECK(r.verdict == Verdict::Deferred);
}

TEST_CASE("suite run and JSON report")
{
    TempFile safe("safe.mqt", "int main() { int x = 2; assert(x > 1); return 0; }\n");
    TempFile bad("bad.mqt", "int main() { int x = nondet_int(); assert(x > 1); return 0; }\n");
    std::vector<BenchmarkCase> cases{
        {safe.path.string(), false, std::nullopt, "safe.mqt"},
        {bad.path.string(), true, std::string("assertion x > 1"), "bad.mqt"},
        {bad.path.string(), false, std::nullopt, "bad-as-safe.mqt"},
    };
    auto report = run_cases(cases, {}, 2);
    REQUIRE(report.cases.size() == 3);
    CHECK(report.cases[0].outcome == Outcome::Successful);
    CHECK(report.cases[1].outcome == Outcome::Successful);
    CHECK(report.cases[2].outcome == Outcome::FalseIncorrect);
    CHECK(report.counts.total() == 3);
    CHECK(report.rates.successful.to_string() == "66.67");

    auto j = nlohmann::json::parse(report_json(report));
    CHECK(j["total"] == 3);
    CHECK(j["counts"]["successful"] == 2);
    CHECK(j["counts"]["falseIncorrect"] == 1);
    CHECK(j["rates"]["falseIncorrect"] == "33.33");
    REQUIRE(j["cases"].size() == 3);
    CHECK(j["cases"][2]["path"] == "bad-as-safe.mqt");
    CHECK(j["cases"][2]["outcome"] == "false-incorrect");
    CHECK(j["cases"][1]["message"] == "assertion x > 1");

    std::string text = report_text(report);
    CHECK(text.find("successful:") != std::string::npos);
    CHECK(text.find("66.67%") != std::string::npos);
}

TEST_CASE("command line exit codes")
{
    std::string bench = testing::benchmarks_dir();
    std::string models = " -I " + testing::models_dir();
    CHECK(cli(bench + "/qlist/push_front_front.mqt" + models) == 0);
    CHECK(cli(bench + "/qlist/empty_front.mqt" + models) == 10);
    CHECK(cli(bench + "/qlist/empty_front.mqt") == 1);
    CHECK(cli("/nonexistent.mqt") == 1);
    CHECK(cli(bench + "/core/loop_too_long.mqt --no-unwinding-assertions") == 0);
    CHECK(cli(bench + "/core/div_mod_identity.mqt --memlimit 1") == 2);
    CHECK(cli(bench + "/core/nondet_neq.mqt --solver external-stdout") == 3);
    CHECK(cli(bench + "/core/nondet_neq.mqt --sat-heuristic index") == 10);
    CHECK(cli("--unwind") == 1);

    TempFile broken("broken.txt", "x.mqt PERHAPS\n");
    CHECK(cli("suite " + broken.path.string()) == 1);
}

TEST_CASE("command line SMT-LIB output")
{
    auto out = fs::temp_directory_path() / (std::to_string(::getpid()) + "-q.smt2");
    CHECK(cli(testing::benchmarks_dir() + "/core/nondet_neq.mqt --smt-out " + out.string()) == 10);
    std::string text = frontend::read_file(out.string());
    CHECK(text.rfind("(set-logic QF_BV)", 0) == 0);
    CHECK(text.find("|nondet_int#1|") != std::string::npos);
    fs::remove(out);
}
