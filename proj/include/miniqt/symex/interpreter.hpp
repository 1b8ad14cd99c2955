#pragma once

#include "miniqt/goto/goto_program.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace miniqt::symex {

struct InterpreterOptions {
    /// When set, loops and recursion are bounded like the BMC unwinder so a
    /// counterexample that violates an unwinding assertion can be replayed.
    std::optional<unsigned> unwind;
    bool unwindingAssertions = true;
    std::size_t stepLimit = 1'000'000;
};

enum class Verdict { Completed, AssertionViolated, AssumeBlocked, StepLimit };

std::string to_string(Verdict v);

struct Execution {
    Verdict verdict = Verdict::Completed;
    std::string message;
    SourceLocation loc;
    PropertyClass property = PropertyClass::UserAssertion;
    std::size_t inputsConsumed = 0;
    std::size_t steps = 0;
    /// (function, instruction index) in execution order.
    std::vector<std::pair<std::string, std::size_t>> visited;
};

/// Raised when the program asks for more nondeterministic values than given.
class NondetUnderflow : public Error {
  public:
    NondetUnderflow() : Error("NondetUnderflow", "ran out of nondeterministic inputs") {}
};

/// Runs `p` concretely with two's complement arithmetic at the program's
/// integer width, feeding `inputs` to nondet reads in order.
Execution interpret(const gotoir::GotoProgram &p, const std::vector<std::int64_t> &inputs,
                    const InterpreterOptions &options = {});

} // namespace miniqt::symex
