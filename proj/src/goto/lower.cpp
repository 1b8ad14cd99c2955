#include "miniqt/goto/lower.hpp"

#include "miniqt/frontend/parser.hpp"

namespace miniqt::gotoir {

using frontend::Expr;
using frontend::ExprKind;
using frontend::FuncDecl;
using frontend::Stmt;
using frontend::StmtKind;

namespace {

bool needs_prelude(const Expr &e)
{
    if (e.kind == ExprKind::Call || e.kind == ExprKind::MethodCall || e.kind == ExprKind::Index)
        return true;
    for (const auto &a : e.args)
        if (needs_prelude(a))
            return true;
    return false;
}

std::string strip_parens(std::string s)
{
    if (s.size() >= 2 && s.front() == '(' && s.back() == ')') {
        int depth = 0;
        for (std::size_t i = 0; i < s.size(); ++i) {
            depth += s[i] == '(' ? 1 : s[i] == ')' ? -1 : 0;
            if (depth == 0 && i + 1 < s.size())
                return s;
        }
        return s.substr(1, s.size() - 2);
    }
    return s;
}

class FunctionLowerer {
  public:
    FunctionLowerer(GotoFunction &out, unsigned width, int &loopCounter)
        : fn_(out), width_(width), loops_(loopCounter)
    {
    }

    void lower_body(const Stmt &body, const SourceLocation &endLoc)
    {
        stmt(body);
        GotoInstruction end;
        end.kind = InstrKind::EndFunction;
        end.loc = endLoc;
        fn_.body.push_back(std::move(end));
    }

  private:
    std::size_t emit(GotoInstruction in)
    {
        fn_.body.push_back(std::move(in));
        return fn_.body.size() - 1;
    }

    std::size_t here() const { return fn_.body.size(); }

    GotoInstruction make(InstrKind k, const SourceLocation &loc)
    {
        GotoInstruction in;
        in.kind = k;
        in.loc = loc;
        return in;
    }

    std::size_t emit_skip(const SourceLocation &loc) { return emit(make(InstrKind::Skip, loc)); }

    std::size_t emit_goto(GotoExpr guard, const SourceLocation &loc, std::size_t target = 0)
    {
        auto in = make(InstrKind::Goto, loc);
        in.cond = std::move(guard);
        in.target = target;
        return emit(std::move(in));
    }

    GotoExpr new_temp(const SemType &t, const SourceLocation &loc)
    {
        std::string name = "$tmp" + std::to_string(++temps_);
        auto d = make(InstrKind::Decl, loc);
        d.var = name;
        d.type = t;
        emit(std::move(d));
        return GotoExpr::symbol(name, t);
    }

    void emit_assign(GotoExpr lhs, GotoExpr rhs, const SourceLocation &loc)
    {
        auto in = make(InstrKind::Assign, loc);
        in.lhs = std::move(lhs);
        in.rhs = std::move(rhs);
        emit(std::move(in));
    }

    PropertyClass assertion_class() const
    {
        return fn_.fromModel ? PropertyClass::ModelPrecondition : PropertyClass::UserAssertion;
    }

    // ---- expressions -------------------------------------------------------

    GotoExpr expr(const Expr &e)
    {
        switch (e.kind) {
        case ExprKind::IntLit:
            return GotoExpr::constant(e.value, e.type);
        case ExprKind::BoolLit:
            return GotoExpr::boolean(e.value != 0);
        case ExprKind::StringLit:
            // Opaque: strings carry no value through the program.
            return GotoExpr::constant(0, e.type);
        case ExprKind::Name:
            return GotoExpr::symbol(e.resolved, e.type);
        case ExprKind::This:
            return GotoExpr::symbol("this", e.type);
        case ExprKind::Member:
            return GotoExpr::member(expr(e.args[0]), e.text, e.type);
        case ExprKind::Index: {
            GotoExpr base = expr(e.args[0]);
            GotoExpr idx = expr(e.args[1]);
            emit_bounds_check(base, idx, e.loc);
            return GotoExpr::index(std::move(base), std::move(idx), e.type);
        }
        case ExprKind::Unary:
            return GotoExpr::unary(e.text, expr(e.args[0]), e.type);
        case ExprKind::Binary:
            if ((e.text == "&&" || e.text == "||") && needs_prelude(e.args[1]))
                return short_circuit(e);
            {
                GotoExpr l = expr(e.args[0]);
                GotoExpr r = expr(e.args[1]);
                return GotoExpr::binary(e.text, std::move(l), std::move(r), e.type);
            }
        case ExprKind::Call:
        case ExprKind::MethodCall:
            if (auto result = call(e, true))
                return *result;
            return GotoExpr::constant(0, e.type);
        }
        return GotoExpr::boolean(false);
    }

    void emit_bounds_check(const GotoExpr &array, const GotoExpr &idx, const SourceLocation &loc)
    {
        const SemType &at = array.type;
        SemType it = SemType::integer(width_);
        GotoExpr lo = GotoExpr::binary("<=", GotoExpr::constant(0, it), idx, SemType::boolean());
        GotoExpr hi = GotoExpr::binary("<", idx, GotoExpr::constant(at.capacity, it),
                                       SemType::boolean());
        auto in = make(InstrKind::Assert, loc);
        in.cond = GotoExpr::binary("&&", std::move(lo), std::move(hi), SemType::boolean());
        in.message = kBoundsMessage;
        in.property = PropertyClass::ArrayBounds;
        emit(std::move(in));
    }

    GotoExpr short_circuit(const Expr &e)
    {
        GotoExpr lhs = expr(e.args[0]);
        GotoExpr tmp = new_temp(SemType::boolean(), e.loc);
        emit_assign(tmp, std::move(lhs), e.loc);
        // `a && b` skips b when a is false; `a || b` when a is true.
        GotoExpr skipIf = e.text == "&&" ? negate(tmp) : tmp;
        std::size_t jump = emit_goto(std::move(skipIf), e.loc);
        GotoExpr rhs = expr(e.args[1]);
        emit_assign(tmp, std::move(rhs), e.loc);
        fn_.body[jump].target = emit_skip(e.loc);
        return tmp;
    }

    std::optional<GotoExpr> call(const Expr &e, bool wantResult)
    {
        if (e.resolved == "nondet_int") {
            GotoExpr tmp = new_temp(e.type, e.loc);
            emit_assign(tmp, GotoExpr::nondet(e.type), e.loc);
            return tmp;
        }
        auto in = make(InstrKind::Call, e.loc);
        in.callee = e.resolved;
        for (const auto &a : e.args)
            in.args.push_back(expr(a));
        std::optional<GotoExpr> result;
        if (wantResult && e.type.is_scalar()) {
            result = new_temp(e.type, e.loc);
            in.lhs = *result;
        }
        emit(std::move(in));
        return result;
    }

    // ---- statements --------------------------------------------------------

    void stmt(const Stmt &s)
    {
        switch (s.kind) {
        case StmtKind::Empty:
            return;
        case StmtKind::Block:
            for (const auto &c : s.body)
                stmt(c);
            return;
        case StmtKind::VarDecl: {
            auto d = make(InstrKind::Decl, s.loc);
            d.var = s.resolved;
            d.type = s.type;
            if (s.type.is_class()) {
                emit(std::move(d));
                if (!s.text.empty()) {
                    auto c = make(InstrKind::Call, s.loc);
                    c.callee = s.text;
                    c.args.push_back(GotoExpr::symbol(s.resolved, s.type));
                    for (const auto &a : s.exprs)
                        c.args.push_back(expr(a));
                    emit(std::move(c));
                }
                return;
            }
            if (s.exprs.empty()) {
                emit(std::move(d));
                return;
            }
            GotoExpr init = expr(s.exprs[0]);
            emit(std::move(d));
            emit_assign(GotoExpr::symbol(s.resolved, s.type), std::move(init), s.loc);
            return;
        }
        case StmtKind::Assign:
            assign(s);
            return;
        case StmtKind::If: {
            GotoExpr c = expr(s.exprs[0]);
            std::size_t toElse = emit_goto(negate(std::move(c)), s.loc);
            stmt(s.body[0]);
            if (s.body.size() > 1) {
                std::size_t toEnd = emit_goto(GotoExpr::boolean(true), s.loc);
                fn_.body[toElse].target = here();
                stmt(s.body[1]);
                fn_.body[toEnd].target = emit_skip(s.loc);
            } else {
                fn_.body[toElse].target = emit_skip(s.loc);
            }
            return;
        }
        case StmtKind::While:
            loop(s.loc, s.exprs.empty() ? nullptr : &s.exprs[0], s.body[0], nullptr);
            return;
        case StmtKind::For:
            stmt(s.body[0]);
            loop(s.loc, s.exprs.empty() ? nullptr : &s.exprs[0], s.body[2], &s.body[1]);
            return;
        case StmtKind::ExprStmt:
            expr_stmt(s);
            return;
        case StmtKind::Assert: {
            GotoExpr c = expr(s.exprs[0]);
            auto in = make(InstrKind::Assert, s.loc);
            in.cond = std::move(c);
            in.message = "assertion " + strip_parens(frontend::print_expr(s.exprs[0]));
            in.property = assertion_class();
            emit(std::move(in));
            return;
        }
        case StmtKind::Return: {
            auto in = make(InstrKind::Return, s.loc);
            if (!s.exprs.empty())
                in.rhs = expr(s.exprs[0]);
            emit(std::move(in));
            return;
        }
        }
    }

    void loop(const SourceLocation &loc, const Expr *cond, const Stmt &body, const Stmt *step)
    {
        int id = loops_++;
        std::size_t head = here();
        GotoExpr c = cond ? expr(*cond) : GotoExpr::boolean(true);
        std::size_t exitTest = emit_goto(negate(std::move(c)), loc);
        fn_.body[exitTest].loopId = id;
        fn_.body[exitTest].loopRole = LoopRole::ExitTest;
        stmt(body);
        if (step)
            stmt(*step);
        std::size_t back = emit_goto(GotoExpr::boolean(true), loc, head);
        fn_.body[back].loopId = id;
        fn_.body[back].loopRole = LoopRole::BackEdge;
        fn_.body[exitTest].target = emit_skip(loc);
    }

    void assign(const Stmt &s)
    {
        const Expr &lhsAst = s.exprs[0];
        std::optional<GotoExpr> rhs;
        if (s.exprs.size() > 1)
            rhs = expr(s.exprs[1]);
        GotoExpr lhs = expr(lhsAst);
        SemType t = lhsAst.type;
        GotoExpr value;
        if (s.text == "=") {
            value = std::move(*rhs);
        } else if (s.text == "++" || s.text == "--") {
            value = GotoExpr::binary(s.text == "++" ? "+" : "-", lhs, GotoExpr::constant(1, t), t);
        } else {
            std::string op = s.text.substr(0, 1);
            value = GotoExpr::binary(op, lhs, std::move(*rhs), t);
        }
        emit_assign(std::move(lhs), std::move(value), s.loc);
    }

    void expr_stmt(const Stmt &s)
    {
        const Expr &e = s.exprs[0];
        if (e.kind == ExprKind::Call && e.resolved == "__VERIFIER_assert") {
            GotoExpr c = expr(e.args[0]);
            auto in = make(InstrKind::Assert, s.loc);
            in.cond = std::move(c);
            in.message = e.args[1].text;
            in.property = assertion_class();
            emit(std::move(in));
            return;
        }
        if (e.kind == ExprKind::Call && e.resolved == "__VERIFIER_assume") {
            GotoExpr c = expr(e.args[0]);
            auto in = make(InstrKind::Assume, s.loc);
            in.cond = std::move(c);
            emit(std::move(in));
            return;
        }
        if ((e.kind == ExprKind::Call && e.resolved != "nondet_int") ||
            e.kind == ExprKind::MethodCall) {
            call(e, false);
            return;
        }
        // Evaluate for the side effects of its sub-expressions only.
        expr(e);
    }

    GotoFunction &fn_;
    unsigned width_;
    int &loops_;
    int temps_ = 0;
};

GotoFunction lower_function(const FuncDecl &f, const std::string &ownerClass, unsigned width,
                            int &loops)
{
    GotoFunction out;
    out.name = f.mangled;
    out.returnType = f.returnSemType;
    out.fromModel = f.fromModel;
    if (!ownerClass.empty())
        out.params.push_back({"this", SemType::class_type(ownerClass)});
    for (const auto &p : f.params)
        out.params.push_back({p.name, p.semType});
    FunctionLowerer lowerer(out, width, loops);
    SourceLocation endLoc = f.body.loc;
    lowerer.lower_body(f.body, endLoc);
    return out;
}

} // namespace

GotoProgram lower_to_goto(const frontend::TypedAst &ast)
{
    GotoProgram p;
    p.intWidth = ast.intWidth;
    int loops = 0;
    for (const auto &c : ast.program.classes) {
        ClassLayout layout;
        layout.name = c.name;
        for (const auto &f : c.fields)
            layout.fields.emplace_back(f.name, f.semType);
        p.classes.emplace(c.name, std::move(layout));
        for (const auto &m : c.methods)
            p.functions.emplace(m.mangled, lower_function(m, c.name, ast.intWidth, loops));
    }
    for (const auto &f : ast.program.functions)
        p.functions.emplace(f.mangled, lower_function(f, "", ast.intWidth, loops));
    return p;
}

} // namespace miniqt::gotoir
