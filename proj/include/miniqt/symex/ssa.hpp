#pragma once

#include "miniqt/common.hpp"
#include "miniqt/smt/term.hpp"

#include <memory>
#include <string>
#include <vector>

namespace miniqt::symex {

using smt::TermRef;

/// A versioned scalar. `baseName` is fully scoped: `main::x`,
/// `main::mylist._size`, `main::mylist._list[3]`, `nondet_int`.
struct SsaVariable {
    std::string baseName;
    unsigned version = 0;

    std::string full_name() const { return baseName + "#" + std::to_string(version); }
    bool operator==(const SsaVariable &) const = default;
};

enum class EquationKind { Assignment, Declaration, Parameter, ReturnValue, Phi, GuardDef };

/// `guard ⊢ lhs := rhs`. Hidden equations (phi nodes, guard definitions,
/// temporaries) are left out of counterexample traces.
struct SsaEquation {
    TermRef guard;
    SsaVariable lhs;
    TermRef lhsTerm;
    TermRef rhs;
    SourceLocation loc;
    EquationKind kind = EquationKind::Assignment;
    bool hidden = false;
    /// The step is shown only when this evaluates to true (array writes at a
    /// symbolic index touch every element but only one really changes).
    TermRef visibleWhen;
};

struct SsaClaim {
    TermRef guard;
    TermRef condition;
    std::string message;
    PropertyClass property = PropertyClass::UserAssertion;
    SourceLocation loc;
    /// Number of equations emitted before this claim.
    std::size_t position = 0;
    /// GOTO provenance: function and instruction index.
    std::string function;
    std::size_t pc = 0;
};

struct SsaInput {
    SsaVariable var;
    TermRef term;
    TermRef guard;
    SourceLocation loc;
    std::size_t position = 0;
};

struct SsaCall {
    TermRef guard;
    std::string callee;
    SourceLocation loc;
    std::size_t position = 0;
};

/// Guarded SSA equations plus claims, sharing one term manager.
struct SsaSystem {
    std::shared_ptr<smt::TermManager> terms;
    std::vector<SsaEquation> equations;
    std::vector<SsaClaim> claims;
    std::vector<SsaInput> inputs;
    std::vector<SsaCall> calls;
    unsigned intWidth = 32;
};

/// `guard ⊢ name#ver := term`, one equation per line, then the claims.
std::string format_ssa(const SsaSystem &ssa);

/// One message per (baseName, version) defined more than once.
std::vector<std::string> find_duplicate_definitions(const SsaSystem &ssa);

} // namespace miniqt::symex
