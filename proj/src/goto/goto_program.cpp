#include "miniqt/goto/goto_program.hpp"

#include <sstream>

namespace miniqt::gotoir {

GotoExpr GotoExpr::constant(std::int64_t v, SemType t)
{
    GotoExpr e;
    e.kind = GotoExprKind::Const;
    e.value = v;
    e.type = std::move(t);
    return e;
}

GotoExpr GotoExpr::symbol(std::string n, SemType t)
{
    GotoExpr e;
    e.kind = GotoExprKind::Symbol;
    e.name = std::move(n);
    e.type = std::move(t);
    return e;
}

GotoExpr GotoExpr::member(GotoExpr object, std::string field, SemType t)
{
    GotoExpr e;
    e.kind = GotoExprKind::Member;
    e.name = std::move(field);
    e.type = std::move(t);
    e.ops.push_back(std::move(object));
    return e;
}

GotoExpr GotoExpr::index(GotoExpr array, GotoExpr idx, SemType elem)
{
    GotoExpr e;
    e.kind = GotoExprKind::Index;
    e.type = std::move(elem);
    e.ops.push_back(std::move(array));
    e.ops.push_back(std::move(idx));
    return e;
}

GotoExpr GotoExpr::unary(std::string op, GotoExpr operand, SemType t)
{
    GotoExpr e;
    e.kind = GotoExprKind::Unary;
    e.name = std::move(op);
    e.type = std::move(t);
    e.ops.push_back(std::move(operand));
    return e;
}

GotoExpr GotoExpr::binary(std::string op, GotoExpr lhs, GotoExpr rhs, SemType t)
{
    GotoExpr e;
    e.kind = GotoExprKind::Binary;
    e.name = std::move(op);
    e.type = std::move(t);
    e.ops.push_back(std::move(lhs));
    e.ops.push_back(std::move(rhs));
    return e;
}

GotoExpr GotoExpr::nondet(SemType t)
{
    GotoExpr e;
    e.kind = GotoExprKind::Nondet;
    e.type = std::move(t);
    return e;
}

GotoExpr negate(GotoExpr e)
{
    if (e.kind == GotoExprKind::Unary && e.name == "!")
        return std::move(e.ops[0]);
    if (e.kind == GotoExprKind::Const)
        return GotoExpr::boolean(e.value == 0);
    return GotoExpr::unary("!", std::move(e), SemType::boolean());
}

std::string to_string(const GotoExpr &e)
{
    switch (e.kind) {
    case GotoExprKind::Const:
        if (e.type.is_bool())
            return e.value ? "true" : "false";
        return std::to_string(e.value);
    case GotoExprKind::Symbol:
        return e.name;
    case GotoExprKind::Member:
        return to_string(e.ops[0]) + "." + e.name;
    case GotoExprKind::Index:
        return to_string(e.ops[0]) + "[" + to_string(e.ops[1]) + "]";
    case GotoExprKind::Unary:
        return e.name + to_string(e.ops[0]);
    case GotoExprKind::Binary:
        return "(" + to_string(e.ops[0]) + " " + e.name + " " + to_string(e.ops[1]) + ")";
    case GotoExprKind::Nondet:
        return e.type.is_bool() ? "nondet_bool()" : "nondet_int()";
    }
    return "?";
}

std::string to_string(InstrKind kind)
{
    switch (kind) {
    case InstrKind::Decl:
        return "DECL";
    case InstrKind::Assign:
        return "ASSIGN";
    case InstrKind::Assume:
        return "ASSUME";
    case InstrKind::Assert:
        return "ASSERT";
    case InstrKind::Goto:
        return "GOTO";
    case InstrKind::Call:
        return "CALL";
    case InstrKind::Return:
        return "RETURN";
    case InstrKind::Skip:
        return "SKIP";
    case InstrKind::EndFunction:
        return "END_FUNCTION";
    }
    return "?";
}

namespace {

std::string format_args(const GotoInstruction &in)
{
    switch (in.kind) {
    case InstrKind::Decl:
        return in.var + " : " + to_string(in.type);
    case InstrKind::Assign:
        return to_string(*in.lhs) + " := " + to_string(*in.rhs);
    case InstrKind::Assume:
        return to_string(in.cond);
    case InstrKind::Assert:
        return to_string(in.cond) + " \"" + in.message + "\" [" + to_string(in.property) + "]";
    case InstrKind::Goto: {
        std::string out = std::to_string(in.target);
        if (!in.unconditional())
            out += " if " + to_string(in.cond);
        if (in.loopRole == LoopRole::ExitTest)
            out += " [loop " + std::to_string(in.loopId) + " exit]";
        else if (in.loopRole == LoopRole::BackEdge)
            out += " [loop " + std::to_string(in.loopId) + " back-edge]";
        return out;
    }
    case InstrKind::Call: {
        std::string out = in.lhs ? to_string(*in.lhs) + " := " : "";
        out += in.callee + "(";
        for (std::size_t i = 0; i < in.args.size(); ++i)
            out += (i ? ", " : "") + to_string(in.args[i]);
        return out + ")";
    }
    case InstrKind::Return:
        return in.rhs ? to_string(*in.rhs) : "";
    case InstrKind::Skip:
    case InstrKind::EndFunction:
        return "";
    }
    return "";
}

} // namespace

std::string format_function(const GotoFunction &f)
{
    std::ostringstream os;
    os << f.name << "(";
    for (std::size_t i = 0; i < f.params.size(); ++i)
        os << (i ? ", " : "") << f.params[i].name << " : " << to_string(f.params[i].type);
    os << ") -> " << to_string(f.returnType) << "\n";
    for (std::size_t i = 0; i < f.body.size(); ++i) {
        const auto &in = f.body[i];
        std::string args = format_args(in);
        os << i << ": " << to_string(in.kind) << (args.empty() ? "" : " ") << args << " // "
           << in.loc.file << ":" << in.loc.line << "\n";
    }
    return os.str();
}

std::string format_program(const GotoProgram &p)
{
    std::string out;
    for (const auto &[name, f] : p.functions)
        out += format_function(f) + "\n";
    return out;
}

std::vector<std::string> validate_goto(const GotoProgram &p)
{
    std::vector<std::string> diags;
    if (!p.functions.count(p.entry))
        diags.push_back("missing-entry: entry function '" + p.entry + "' not defined");
    for (const auto &[name, f] : p.functions) {
        const auto n = f.body.size();
        if (n == 0 || f.body.back().kind != InstrKind::EndFunction)
            diags.push_back("missing-terminator: " + name + " does not end with END_FUNCTION");
        for (std::size_t i = 0; i < n; ++i) {
            const auto &in = f.body[i];
            std::string where = name + ":" + std::to_string(i);
            if (in.kind == InstrKind::Goto && in.target >= n)
                diags.push_back("dangling-target: " + where + " jumps to " +
                                std::to_string(in.target));
            if (in.kind == InstrKind::Assert && in.message.empty())
                diags.push_back("empty-message: " + where + " assertion has no message");
            if (in.kind == InstrKind::Call && !p.functions.count(in.callee))
                diags.push_back("unknown-callee: " + where + " calls '" + in.callee + "'");
            if (in.kind == InstrKind::Assign && (!in.lhs || !in.rhs))
                diags.push_back("malformed-assign: " + where);
            if (in.kind == InstrKind::EndFunction && i + 1 != n)
                diags.push_back("misplaced-terminator: " + where);
            if (in.loc.line < 1 || in.loc.file.empty())
                diags.push_back("missing-location: " + where);
        }
    }
    return diags;
}

} // namespace miniqt::gotoir
