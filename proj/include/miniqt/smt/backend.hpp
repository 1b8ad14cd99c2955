#pragma once

#include "miniqt/resource.hpp"
#include "miniqt/smt/term.hpp"
#include "miniqt/symex/ssa.hpp"

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

namespace miniqt::smt {

/// C ∧ ¬P: every equation as `guard ⇒ lhs = rhs`, every claim as
/// `guard ⇒ condition`. Satisfiable iff some claim can fail within the bound.
TermRef encode(const symex::SsaSystem &ssa);

/// Propositional formula in DIMACS-style literals (v or -v, v >= 1).
struct Cnf {
    int numVars = 0;
    std::vector<std::vector<int>> clauses;
    /// Literal of every bit (LSB first; Bool terms have one) of each Var
    /// term that occurs in the formula. Literals may be constant (±trueVar).
    std::unordered_map<TermRef, std::vector<int>> varMap;
    /// Variable fixed to true by a unit clause; 0 when unused.
    int trueVar = 0;
};

/// Tseitin transformation of a Boolean term; bit-vector operators expand to
/// ripple-carry adders, comparators, shift-and-add multipliers and
/// restoring dividers.
Cnf bitblast(const TermManager &tm, TermRef root, ResourceGuard *guard = nullptr);

enum class SolveStatus { Sat, Unsat };

struct SolverStatistics {
    std::uint64_t decisions = 0;
    std::uint64_t conflicts = 0;
    std::uint64_t propagations = 0;
    std::uint64_t learned = 0;
};

struct SolveResult {
    SolveStatus status = SolveStatus::Unsat;
    /// Indexed by variable; entry 0 unused. Empty when Unsat.
    std::vector<bool> model;
    SolverStatistics stats;

    bool value(int literal) const
    {
        bool v = model.at(static_cast<std::size_t>(literal < 0 ? -literal : literal));
        return literal < 0 ? !v : v;
    }
};

enum class DecisionOrder {
    VariableIndex, // lowest unassigned variable, phase false
    Activity,      // VSIDS-style activity with phase saving
};

struct SolverOptions {
    DecisionOrder order = DecisionOrder::VariableIndex;
    bool restarts = false;
};

/// CDCL with two watched literals and first-UIP clause learning.
SolveResult sat_solve(const Cnf &cnf, const SolverOptions &options = {},
                      ResourceGuard *guard = nullptr);

/// True when every clause has a literal that is true under `model`.
bool satisfies(const Cnf &cnf, const std::vector<bool> &model);

/// SMT-LIB2 QF_BV script: declarations, one assert, check-sat, get-model.
std::string emit_smtlib(const TermManager &tm, TermRef root);

struct TraceStep {
    enum class Kind { Assignment, Call };
    Kind kind = Kind::Assignment;
    SourceLocation loc;
    std::string name; // variable, or callee for Call steps
    std::string value;
    std::int64_t raw = 0;
};

struct ViolatedProperty {
    std::string message;
    SourceLocation loc;
    PropertyClass property = PropertyClass::UserAssertion;
};

struct Counterexample {
    std::vector<TraceStep> steps;
    ViolatedProperty violated;
    /// Nondet inputs on the violating path, in the order they are read.
    std::vector<std::pair<std::string, std::int64_t>> inputValues;

    std::vector<std::int64_t> input_sequence() const;
};

class NoViolatedClaim : public Error {
  public:
    NoViolatedClaim() : Error("NoViolatedClaim", "model satisfies every claim") {}
};

/// Reads variable values back from a satisfying assignment and picks the
/// first claim (in SSA order) whose guard holds and whose condition fails.
Counterexample eval_model(const SolveResult &result, const symex::SsaSystem &ssa, const Cnf &cnf);

} // namespace miniqt::smt
