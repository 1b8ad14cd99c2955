#pragma once

#include "miniqt/common.hpp"
#include "miniqt/frontend/ast.hpp"
#include "miniqt/goto/goto_program.hpp"
#include "miniqt/symex/interpreter.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace miniqt::testing {

std::string source_dir();
std::string models_dir();
std::string benchmarks_dir();

/// Every .mqt file under benchmarks/, sorted.
std::vector<std::string> corpus_files();

/// Default configuration with the shipped models on the include path.
VerifierConfig model_config();

// ---- random programs -------------------------------------------------------

struct GenOptions {
    unsigned maxNondet = 2;
    unsigned maxLoopIterations = 5;
    unsigned maxStatements = 5;
    unsigned maxDepth = 2;
    bool helperFunction = true;
};

struct GeneratedProgram {
    std::string source;
    unsigned nondetCount = 0;
};

/// Random scalar MiniQt program meant for a small integer width (literals
/// stay in [-8, 7]). Nondet reads only happen in straight-line code at the
/// start of main, and every loop runs at most maxLoopIterations times.
GeneratedProgram generate_program(std::uint64_t seed, const GenOptions &options = {});

// ---- AST-level reference semantics ----------------------------------------

struct AstOutcome {
    enum class Kind { Completed, Violated, Blocked, StepLimit };
    Kind kind = Kind::Completed;
    std::string message;
    SourceLocation loc;
};

/// Direct evaluator over the typed AST for programs without classes. Used as
/// a second, lowering-independent semantics for the GOTO interpreter.
AstOutcome evaluate_ast(const frontend::TypedAst &ast, const std::vector<std::int64_t> &inputs,
                        std::size_t stepLimit = 100000);

// ---- exhaustive oracle -----------------------------------------------------

struct OracleVerdict {
    bool violation = false;
    std::vector<std::int64_t> witness;
    std::string message;
    SourceLocation loc;
    std::size_t runs = 0;
};

/// Runs the concrete interpreter on every assignment of `nondetCount` inputs
/// drawn from the full signed range of `width` bits.
OracleVerdict exhaustive_oracle(const gotoir::GotoProgram &p, unsigned nondetCount,
                                unsigned width, const symex::InterpreterOptions &options);

/// Every assignment of `count` values from the signed `width`-bit range.
std::vector<std::vector<std::int64_t>> all_inputs(unsigned count, unsigned width);

} // namespace miniqt::testing
