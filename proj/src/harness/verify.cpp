#include "miniqt/harness/verify.hpp"

#include "miniqt/frontend/frontend.hpp"
#include "miniqt/goto/lower.hpp"
#include "miniqt/resource.hpp"
#include "miniqt/symex/symex.hpp"

#include <chrono>
#include <new>
#include <sstream>

namespace miniqt::harness {

std::string to_string(Verdict v)
{
    switch (v) {
    case Verdict::Successful:
        return "SUCCESSFUL";
    case Verdict::Failed:
        return "FAILED";
    case Verdict::Timeout:
        return "TIMEOUT";
    case Verdict::MemOut:
        return "MEMOUT";
    case Verdict::ToolError:
        return "ERROR";
    case Verdict::Deferred:
        return "DEFERRED";
    }
    return "?";
}

int exit_code(Verdict v)
{
    switch (v) {
    case Verdict::Successful:
        return 0;
    case Verdict::Failed:
        return 10;
    case Verdict::Timeout:
    case Verdict::MemOut:
        return 2;
    case Verdict::Deferred:
        return 3;
    case Verdict::ToolError:
        return 1;
    }
    return 1;
}

namespace {

void run_pipeline(const frontend::TypedAst &typed, const VerifierConfig &config,
                  const VerifyOptions &options, ResourceGuard &guard, VerificationResult &r)
{
    gotoir::GotoProgram program = gotoir::lower_to_goto(typed);
    auto problems = gotoir::validate_goto(program);
    if (!problems.empty())
        throw Error("InternalError", "malformed GOTO program: " + problems.front());
    for (const auto &[name, fn] : program.functions)
        r.stats.instructions += fn.body.size();
    if (options.hooks.onGoto)
        options.hooks.onGoto(program);

    symex::SsaSystem ssa = symex::symex(program, config, &guard);
    r.stats.equations = ssa.equations.size();
    r.stats.claims = ssa.claims.size();
    if (options.hooks.onSsa)
        options.hooks.onSsa(ssa);

    smt::TermRef formula = smt::encode(ssa);
    if (options.hooks.onFormula && !options.hooks.onFormula(*ssa.terms, formula)) {
        r.verdict = Verdict::Deferred;
        return;
    }

    guard.check();
    smt::Cnf cnf = smt::bitblast(*ssa.terms, formula, &guard);
    r.stats.cnfVars = static_cast<std::size_t>(cnf.numVars);
    r.stats.cnfClauses = cnf.clauses.size();
    smt::SolveResult solved = smt::sat_solve(cnf, options.solver, &guard);
    r.stats.solver = solved.stats;
    if (solved.status == smt::SolveStatus::Unsat) {
        r.verdict = Verdict::Successful;
        return;
    }
    r.counterexample = smt::eval_model(solved, ssa, cnf);
    r.verdict = Verdict::Failed;
}

VerificationResult guarded(const std::function<frontend::TypedAst()> &load,
                           const VerifierConfig &config, const VerifyOptions &options)
{
    VerificationResult r;
    auto start = std::chrono::steady_clock::now();
    try {
        config.validate();
        ResourceGuard guard = ResourceGuard::from(config);
        frontend::TypedAst typed = load();
        run_pipeline(typed, config, options, guard, r);
    } catch (const ResourceLimit &e) {
        r.verdict = e.which() == ResourceLimit::Kind::Timeout ? Verdict::Timeout : Verdict::MemOut;
        r.errorKind = e.kind();
        r.errorMessage = e.what();
    } catch (const Error &e) {
        r.verdict = Verdict::ToolError;
        r.errorKind = e.kind();
        r.errorMessage = e.what();
    } catch (const std::bad_alloc &) {
        r.verdict = Verdict::MemOut;
        r.errorKind = "MemOut";
        r.errorMessage = "out of memory";
    } catch (const std::exception &e) {
        r.verdict = Verdict::ToolError;
        r.errorKind = "InternalError";
        r.errorMessage = e.what();
    }
    r.counterexample = r.verdict == Verdict::Failed ? r.counterexample : std::nullopt;
    r.wallTimeSeconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    r.peakMemoryKb = peak_rss_kb();
    return r;
}

std::string short_location(const SourceLocation &loc)
{
    return loc.file + ":" + std::to_string(loc.line);
}

} // namespace

VerificationResult verify_file(const std::string &path, const VerifierConfig &config,
                               const VerifyOptions &options)
{
    return guarded([&] { return frontend::load_program(path, config); }, config, options);
}

VerificationResult verify_source(const std::string &source, const std::string &file,
                                 const VerifierConfig &config, const VerifyOptions &options)
{
    return guarded([&] { return frontend::load_source(source, file, config); }, config, options);
}

std::string format_counterexample(const VerificationResult &r)
{
    if (r.verdict != Verdict::Failed || !r.counterexample)
        return format_result(r);
    const smt::Counterexample &cex = *r.counterexample;
    std::ostringstream os;
    os << "VERIFICATION FAILED\n";
    os << "Violated property: " << cex.violated.message << "\n";
    os << "  location: " << short_location(cex.violated.loc) << "\n";
    os << "  property class: " << to_string(cex.violated.property) << "\n";
    os << "\nCounterexample:\n";
    std::size_t n = 0;
    for (const auto &s : cex.steps) {
        os << "State " << ++n << ": ";
        if (s.kind == smt::TraceStep::Kind::Call)
            os << "call " << s.name;
        else
            os << s.name << " = " << s.value;
        os << " (" << short_location(s.loc) << ")\n";
    }
    if (!cex.inputValues.empty()) {
        os << "Inputs:";
        for (const auto &[name, value] : cex.inputValues)
            os << " " << name << "=" << value;
        os << "\n";
    }
    return os.str();
}

std::string format_result(const VerificationResult &r)
{
    switch (r.verdict) {
    case Verdict::Successful:
        return "VERIFICATION SUCCESSFUL";
    case Verdict::Failed:
        return format_counterexample(r);
    case Verdict::Timeout:
        return "TIMEOUT: " + r.errorMessage;
    case Verdict::MemOut:
        return "MEMOUT: " + r.errorMessage;
    case Verdict::Deferred:
        return "formula emitted for an external solver";
    case Verdict::ToolError:
        return "ERROR (" + r.errorKind + "): " + r.errorMessage;
    }
    return "";
}

} // namespace miniqt::harness
