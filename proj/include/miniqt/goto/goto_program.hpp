#pragma once

#include "miniqt/common.hpp"
#include "miniqt/frontend/types.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace miniqt::gotoir {

enum class GotoExprKind {
    Const,  // value (Int or Bool)
    Symbol, // name: function-local variable, parameter, or "this"
    Member, // ops[0] object, name = field
    Index,  // ops[0] array (Member), ops[1] index
    Unary,  // name = op: "!" or "-"
    Binary, // name = op
    Nondet, // fresh nondeterministic value; only as the whole rhs of ASSIGN
};

/// Side-effect free expression used inside GOTO instructions. Calls and
/// short-circuit operators with side effects have been hoisted out.
struct GotoExpr {
    GotoExprKind kind = GotoExprKind::Const;
    SemType type;
    std::int64_t value = 0;
    std::string name;
    std::vector<GotoExpr> ops;

    static GotoExpr constant(std::int64_t v, SemType t);
    static GotoExpr boolean(bool v) { return constant(v ? 1 : 0, SemType::boolean()); }
    static GotoExpr symbol(std::string n, SemType t);
    static GotoExpr member(GotoExpr object, std::string field, SemType t);
    static GotoExpr index(GotoExpr array, GotoExpr idx, SemType elem);
    static GotoExpr unary(std::string op, GotoExpr operand, SemType t);
    static GotoExpr binary(std::string op, GotoExpr lhs, GotoExpr rhs, SemType t);
    static GotoExpr nondet(SemType t);

    bool is_true() const { return kind == GotoExprKind::Const && type.is_bool() && value != 0; }
};

std::string to_string(const GotoExpr &e);

/// Logical negation with double-negation folding.
GotoExpr negate(GotoExpr e);

enum class InstrKind { Decl, Assign, Assume, Assert, Goto, Call, Return, Skip, EndFunction };

std::string to_string(InstrKind kind);

/// Role of an instruction in a structured loop, tagged at lowering time so
/// the unwinder does not need to recover loops from the CFG.
enum class LoopRole { None, ExitTest, BackEdge };

struct GotoInstruction {
    InstrKind kind = InstrKind::Skip;
    SourceLocation loc;

    // DECL
    std::string var;
    SemType type;

    // ASSIGN: lhs := rhs.  RETURN: rhs optional.  CALL: lhs optional result.
    std::optional<GotoExpr> lhs;
    std::optional<GotoExpr> rhs;

    // ASSUME / ASSERT condition; GOTO guard (jump taken when true).
    GotoExpr cond = GotoExpr::boolean(true);

    // ASSERT
    std::string message;
    PropertyClass property = PropertyClass::UserAssertion;

    // GOTO
    std::size_t target = 0;

    // CALL
    std::string callee;
    std::vector<GotoExpr> args;

    int loopId = -1;
    LoopRole loopRole = LoopRole::None;

    bool unconditional() const { return kind == InstrKind::Goto && cond.is_true(); }
};

struct GotoParam {
    std::string name;
    SemType type;
};

struct GotoFunction {
    std::string name;
    std::vector<GotoParam> params; // methods: params[0] is "this"
    SemType returnType;
    std::vector<GotoInstruction> body;
    bool fromModel = false;
};

/// Per-class layout needed to explode objects into scalars.
struct ClassLayout {
    std::string name;
    std::vector<std::pair<std::string, SemType>> fields;
};

struct GotoProgram {
    std::map<std::string, GotoFunction> functions;
    std::map<std::string, ClassLayout> classes;
    std::string entry = "main";
    unsigned intWidth = 32;
};

/// `<index>: <KIND> <args> // <file>:<line>`, one instruction per line.
std::string format_function(const GotoFunction &f);
std::string format_program(const GotoProgram &p);

/// Returns one diagnostic per violated GotoProgram invariant; empty iff the
/// program is well formed.
std::vector<std::string> validate_goto(const GotoProgram &p);

} // namespace miniqt::gotoir
