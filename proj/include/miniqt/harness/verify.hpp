#pragma once

#include "miniqt/goto/goto_program.hpp"
#include "miniqt/smt/backend.hpp"
#include "miniqt/symex/ssa.hpp"

#include <functional>
#include <optional>
#include <string>

namespace miniqt::harness {

enum class Verdict {
    Successful,
    Failed,
    Timeout,
    MemOut,
    ToolError,
    /// Formula handed to an external solver; no verdict of our own.
    Deferred,
};

std::string to_string(Verdict v);

struct FormulaStats {
    std::size_t instructions = 0;
    std::size_t equations = 0;
    std::size_t claims = 0;
    std::size_t cnfVars = 0;
    std::size_t cnfClauses = 0;
    smt::SolverStatistics solver;
};

struct VerificationResult {
    Verdict verdict = Verdict::ToolError;
    std::optional<smt::Counterexample> counterexample; // set iff Failed
    std::string errorKind;                             // ToolError: IncludeNotFound, ParseError, ...
    std::string errorMessage;
    double wallTimeSeconds = 0;
    std::uint64_t peakMemoryKb = 0;
    FormulaStats stats;
};

/// Optional observers of intermediate artifacts (used by --show-goto,
/// --show-ssa and --smt-out). Returning false from onFormula stops before
/// solving and yields a Deferred verdict.
struct PipelineHooks {
    std::function<void(const gotoir::GotoProgram &)> onGoto;
    std::function<void(const symex::SsaSystem &)> onSsa;
    std::function<bool(const smt::TermManager &, smt::TermRef)> onFormula;
};

struct VerifyOptions {
    smt::SolverOptions solver{smt::DecisionOrder::Activity, true};
    PipelineHooks hooks;
};

/// Full pipeline: load + type-check, lower, symex, encode, bit-blast, solve.
/// Never throws; diagnostics come back as ToolError.
VerificationResult verify_file(const std::string &path, const VerifierConfig &config,
                               const VerifyOptions &options = {});
VerificationResult verify_source(const std::string &source, const std::string &file,
                                 const VerifierConfig &config, const VerifyOptions &options = {});

/// `VERIFICATION SUCCESSFUL`, or the counterexample report for Failed
/// results, or a one-line diagnostic for the other verdicts.
std::string format_result(const VerificationResult &r);
std::string format_counterexample(const VerificationResult &r);

/// 0 Successful, 10 Failed, 1 ToolError, 2 Timeout/MemOut, 3 Deferred.
int exit_code(Verdict v);

} // namespace miniqt::harness
