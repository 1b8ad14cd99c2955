#include "support.hpp"

#include "miniqt/frontend/parser.hpp"

#include <algorithm>
#include <filesystem>
#include <map>
#include <random>
#include <sstream>

namespace miniqt::testing {

std::string source_dir() { return MINIQT_SOURCE_DIR; }
std::string models_dir() { return source_dir() + "/models"; }
std::string benchmarks_dir() { return source_dir() + "/benchmarks"; }

std::vector<std::string> corpus_files()
{
    std::vector<std::string> out;
    for (const auto &e : std::filesystem::recursive_directory_iterator(benchmarks_dir()))
        if (e.is_regular_file() && e.path().extension() == ".mqt")
            out.push_back(e.path().string());
    std::sort(out.begin(), out.end());
    return out;
}

VerifierConfig model_config()
{
    VerifierConfig c;
    c.includePaths = {models_dir()};
    return c;
}

// ---- generator -------------------------------------------------------------

namespace {

class Generator {
  public:
    Generator(std::uint64_t seed, const GenOptions &opt) : rng_(seed), opt_(opt) {}

    GeneratedProgram run()
    {
        GeneratedProgram g;
        hasHelper_ = opt_.helperFunction && chance(40);
        if (hasHelper_) {
            out_ << "int helper(int p, int q) {\n";
            scopes_.push_back({"p", "q"});
            line(1, "int r = " + expr(1, false) + ";");
            scopes_.back().push_back("r");
            if (chance(60))
                line(1, "if (" + cond(1, false) + ")\n        r = " + expr(1, false) + ";");
            line(1, "return r;");
            scopes_.pop_back();
            out_ << "}\n\n";
        }
        out_ << "int main() {\n";
        scopes_.push_back({});
        unsigned nondets = pick(0, static_cast<int>(opt_.maxNondet));
        for (unsigned i = 0; i < nondets; ++i) {
            std::string v = fresh("n");
            line(1, "int " + v + " = nondet_int();");
            scopes_.back().push_back(v);
        }
        g.nondetCount = nondets;
        std::string v = fresh("v");
        line(1, "int " + v + " = " + expr(1, true) + ";");
        scopes_.back().push_back(v);
        block_body(1, 0, pick(1, static_cast<int>(opt_.maxStatements)));
        if (chance(70))
            line(1, "assert(" + cond(2, true) + ");");
        line(1, "return 0;");
        scopes_.pop_back();
        out_ << "}\n";
        g.source = out_.str();
        return g;
    }

  private:
    int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
    bool chance(int percent) { return pick(1, 100) <= percent; }

    std::string fresh(const std::string &prefix) { return prefix + std::to_string(counter_++); }

    void line(int indent, const std::string &text)
    {
        out_ << std::string(static_cast<std::size_t>(indent) * 4, ' ') << text << "\n";
    }

    std::vector<std::string> visible() const
    {
        std::vector<std::string> all;
        for (const auto &s : scopes_)
            all.insert(all.end(), s.begin(), s.end());
        return all;
    }

    std::vector<std::string> assignable() const
    {
        std::vector<std::string> all;
        for (const auto &s : scopes_)
            for (const auto &v : s)
                if (v[0] == 'v' || v[0] == 'n' || v[0] == 'r')
                    all.push_back(v);
        return all;
    }

    std::string literal() { return std::to_string(pick(-8, 7)); }

    std::string expr(int depth, bool calls)
    {
        auto vars = visible();
        int kind = pick(0, depth > 0 ? 9 : 3);
        if (kind <= 1 || vars.empty())
            return kind == 0 || vars.empty() ? literal() : vars[static_cast<std::size_t>(pick(0, static_cast<int>(vars.size()) - 1))];
        if (kind <= 3)
            return vars[static_cast<std::size_t>(pick(0, static_cast<int>(vars.size()) - 1))];
        if (kind == 4)
            return "-(" + expr(depth - 1, calls) + ")";
        if (kind == 9 && calls && hasHelper_)
            return "helper(" + expr(depth - 1, false) + ", " + expr(depth - 1, false) + ")";
        static const char *ops[] = {"+", "-", "*", "/", "%", "+", "-"};
        std::string op = ops[pick(0, 6)];
        return "(" + expr(depth - 1, calls) + " " + op + " " + expr(depth - 1, calls) + ")";
    }

    std::string cond(int depth, bool calls)
    {
        int kind = pick(0, depth > 0 ? 5 : 2);
        if (kind <= 2) {
            static const char *ops[] = {"<", "<=", ">", ">=", "==", "!="};
            return expr(1, calls) + " " + ops[pick(0, 5)] + " " + expr(1, calls);
        }
        if (kind == 3)
            return "!(" + cond(depth - 1, calls) + ")";
        return "(" + cond(depth - 1, calls) + (kind == 4 ? " && " : " || ") +
               cond(depth - 1, calls) + ")";
    }

    void block_body(int indent, unsigned depth, int count)
    {
        for (int i = 0; i < count; ++i)
            statement(indent, depth);
    }

    void statement(int indent, unsigned depth)
    {
        int kind = pick(0, depth < opt_.maxDepth ? 9 : 5);
        auto targets = assignable();
        switch (kind) {
        case 0:
        case 1: {
            if (targets.empty())
                break;
            const std::string &t = targets[static_cast<std::size_t>(pick(0, static_cast<int>(targets.size()) - 1))];
            static const char *ops[] = {" = ", " += ", " -= ", " *= ", " = "};
            int op = pick(0, 5);
            if (op == 5)
                line(indent, t + (chance(50) ? "++;" : "--;"));
            else
                line(indent, t + ops[op] + expr(2, true) + ";");
            return;
        }
        case 2: {
            std::string v = fresh("v");
            line(indent, "int " + v + " = " + expr(2, true) + ";");
            scopes_.back().push_back(v);
            return;
        }
        case 3:
            line(indent, "assert(" + cond(2, true) + ");");
            return;
        case 4:
            if (chance(30))
                line(indent, "__VERIFIER_assume(" + cond(1, false) + ");");
            else
                line(indent, "__VERIFIER_assert(" + cond(1, true) + ", \"check " +
                                 std::to_string(counter_++) + "\");");
            return;
        case 5:
            break;
        case 6:
        case 7: {
            line(indent, "if (" + cond(2, true) + ") {");
            nested(indent, depth);
            if (chance(50)) {
                line(indent, "} else {");
                nested(indent, depth);
            }
            line(indent, "}");
            return;
        }
        case 8: {
            std::string i = fresh("i");
            line(indent, "for (int " + i + " = 0; " + i + " < " +
                             std::to_string(pick(0, static_cast<int>(opt_.maxLoopIterations))) +
                             "; " + i + "++) {");
            scopes_.push_back({i});
            nested(indent, depth);
            scopes_.pop_back();
            line(indent, "}");
            return;
        }
        case 9: {
            std::string w = fresh("w");
            line(indent, "int " + w + " = 0;");
            line(indent, "while (" + w + " < " +
                             std::to_string(pick(1, static_cast<int>(opt_.maxLoopIterations))) +
                             " && " + cond(1, false) + ") {");
            scopes_.push_back({w});
            nested(indent, depth);
            scopes_.pop_back();
            line(indent + 1, w + "++;");
            line(indent, "}");
            scopes_.back().push_back(w);
            return;
        }
        }
        if (!targets.empty())
            line(indent, targets.front() + " = " + expr(1, false) + ";");
    }

    void nested(int indent, unsigned depth)
    {
        scopes_.push_back({});
        block_body(indent + 1, depth + 1, pick(1, 3));
        scopes_.pop_back();
    }

    std::mt19937_64 rng_;
    GenOptions opt_;
    std::ostringstream out_;
    std::vector<std::vector<std::string>> scopes_;
    bool hasHelper_ = false;
    int counter_ = 0;
};

} // namespace

GeneratedProgram generate_program(std::uint64_t seed, const GenOptions &options)
{
    return Generator(seed, options).run();
}

// ---- AST evaluator ---------------------------------------------------------

namespace {

using frontend::Expr;
using frontend::ExprKind;
using frontend::Stmt;
using frontend::StmtKind;

struct Stop {
    AstOutcome outcome;
};

class AstEvaluator {
  public:
    AstEvaluator(const frontend::TypedAst &ast, const std::vector<std::int64_t> &inputs,
                 std::size_t stepLimit)
        : ast_(ast), inputs_(inputs), limit_(stepLimit), width_(ast.intWidth)
    {
    }

    AstOutcome run()
    {
        try {
            call("main", {});
        } catch (const Stop &s) {
            return s.outcome;
        }
        return {};
    }

  private:
    using Env = std::map<std::string, std::int64_t>;

    std::int64_t wrap(std::int64_t v) const
    {
        std::uint64_t mask = (std::uint64_t{1} << width_) - 1;
        std::uint64_t u = static_cast<std::uint64_t>(v) & mask;
        if (u >> (width_ - 1))
            u |= ~mask;
        return static_cast<std::int64_t>(u);
    }

    void tick(const SourceLocation &loc)
    {
        if (++steps_ > limit_)
            throw Stop{{AstOutcome::Kind::StepLimit, "", loc}};
    }

    std::int64_t call(const std::string &name, const std::vector<std::int64_t> &args)
    {
        const frontend::FuncDecl *f = ast_.program.find_function(name);
        if (!f)
            throw Error("AstEvalError", "unknown function " + name);
        Env env;
        for (std::size_t i = 0; i < f->params.size(); ++i)
            env[f->params[i].name] = args.at(i);
        std::optional<std::int64_t> ret;
        exec(f->body, env, ret);
        return ret.value_or(0);
    }

    std::int64_t arith(const std::string &op, std::int64_t a, std::int64_t b) const
    {
        if (op == "+")
            return wrap(a + b);
        if (op == "-")
            return wrap(a - b);
        if (op == "*")
            return wrap(static_cast<std::int64_t>(static_cast<std::uint64_t>(a) *
                                                  static_cast<std::uint64_t>(b)));
        if (op == "/")
            return b == 0 ? (a < 0 ? 1 : -1) : wrap(a / b);
        if (op == "%")
            return b == 0 ? a : wrap(a % b);
        throw Error("AstEvalError", "bad operator " + op);
    }

    std::int64_t eval(const Expr &e, Env &env)
    {
        switch (e.kind) {
        case ExprKind::IntLit:
            return wrap(e.value);
        case ExprKind::BoolLit:
            return e.value != 0;
        case ExprKind::Name:
            return env.at(e.resolved);
        case ExprKind::Unary: {
            std::int64_t a = eval(e.args[0], env);
            return e.text == "!" ? !a : wrap(-a);
        }
        case ExprKind::Binary: {
            const std::string &op = e.text;
            if (op == "&&")
                return eval(e.args[0], env) ? eval(e.args[1], env) != 0 : 0;
            if (op == "||")
                return eval(e.args[0], env) ? 1 : eval(e.args[1], env) != 0;
            std::int64_t a = eval(e.args[0], env);
            std::int64_t b = eval(e.args[1], env);
            if (op == "==")
                return a == b;
            if (op == "!=")
                return a != b;
            if (op == "<")
                return a < b;
            if (op == "<=")
                return a <= b;
            if (op == ">")
                return a > b;
            if (op == ">=")
                return a >= b;
            return arith(op, a, b);
        }
        case ExprKind::Call: {
            if (e.resolved == "nondet_int") {
                if (next_ >= inputs_.size())
                    throw Error("AstEvalError", "out of inputs");
                return wrap(inputs_[next_++]);
            }
            std::vector<std::int64_t> args;
            for (const auto &a : e.args)
                args.push_back(eval(a, env));
            return call(e.resolved, args);
        }
        default:
            throw Error("AstEvalError", "unsupported expression");
        }
    }

    // Binary expressions print with one outer pair of parentheses that the
    // message leaves out.
    static std::string assertion_message(const Expr &e)
    {
        std::string text = frontend::print_expr(e);
        if (e.kind == ExprKind::Binary)
            text = text.substr(1, text.size() - 2);
        return "assertion " + text;
    }

    void check(bool ok, const std::string &message, const SourceLocation &loc)
    {
        if (!ok)
            throw Stop{{AstOutcome::Kind::Violated, message, loc}};
    }

    // Returns true when a return statement was executed.
    bool exec(const Stmt &s, Env &env, std::optional<std::int64_t> &ret)
    {
        tick(s.loc);
        switch (s.kind) {
        case StmtKind::Empty:
            return false;
        case StmtKind::Block:
            for (const auto &c : s.body)
                if (exec(c, env, ret))
                    return true;
            return false;
        case StmtKind::VarDecl:
            env[s.resolved] = s.exprs.empty() ? 0 : eval(s.exprs[0], env);
            return false;
        case StmtKind::Assign: {
            const std::string &target = s.exprs[0].resolved;
            std::optional<std::int64_t> rhs;
            if (s.exprs.size() > 1)
                rhs = eval(s.exprs[1], env);
            std::int64_t cur = env.at(target);
            if (s.text == "=")
                env[target] = *rhs;
            else if (s.text == "++")
                env[target] = wrap(cur + 1);
            else if (s.text == "--")
                env[target] = wrap(cur - 1);
            else
                env[target] = arith(s.text.substr(0, 1), cur, *rhs);
            return false;
        }
        case StmtKind::If:
            if (eval(s.exprs[0], env))
                return exec(s.body[0], env, ret);
            if (s.body.size() > 1)
                return exec(s.body[1], env, ret);
            return false;
        case StmtKind::While:
            while (eval(s.exprs[0], env)) {
                tick(s.loc);
                if (exec(s.body[0], env, ret))
                    return true;
            }
            return false;
        case StmtKind::For:
            if (exec(s.body[0], env, ret))
                return true;
            while (s.exprs.empty() || eval(s.exprs[0], env)) {
                tick(s.loc);
                if (exec(s.body[2], env, ret))
                    return true;
                exec(s.body[1], env, ret);
            }
            return false;
        case StmtKind::Assert:
            check(eval(s.exprs[0], env) != 0, assertion_message(s.exprs[0]), s.loc);
            return false;
        case StmtKind::ExprStmt: {
            const Expr &e = s.exprs[0];
            if (e.kind == ExprKind::Call && e.resolved == "__VERIFIER_assert") {
                check(eval(e.args[0], env) != 0, e.args[1].text, s.loc);
                return false;
            }
            if (e.kind == ExprKind::Call && e.resolved == "__VERIFIER_assume") {
                if (!eval(e.args[0], env))
                    throw Stop{{AstOutcome::Kind::Blocked, "", s.loc}};
                return false;
            }
            eval(e, env);
            return false;
        }
        case StmtKind::Return:
            ret = s.exprs.empty() ? 0 : eval(s.exprs[0], env);
            return true;
        }
        return false;
    }

    const frontend::TypedAst &ast_;
    const std::vector<std::int64_t> &inputs_;
    std::size_t limit_;
    unsigned width_;
    std::size_t next_ = 0;
    std::size_t steps_ = 0;
};

} // namespace

AstOutcome evaluate_ast(const frontend::TypedAst &ast, const std::vector<std::int64_t> &inputs,
                        std::size_t stepLimit)
{
    return AstEvaluator(ast, inputs, stepLimit).run();
}

// ---- oracle ----------------------------------------------------------------

std::vector<std::vector<std::int64_t>> all_inputs(unsigned count, unsigned width)
{
    std::int64_t lo = -(std::int64_t{1} << (width - 1));
    std::int64_t hi = (std::int64_t{1} << (width - 1)) - 1;
    std::vector<std::vector<std::int64_t>> out{{}};
    for (unsigned i = 0; i < count; ++i) {
        std::vector<std::vector<std::int64_t>> next;
        for (const auto &prefix : out)
            for (std::int64_t v = lo; v <= hi; ++v) {
                auto p = prefix;
                p.push_back(v);
                next.push_back(std::move(p));
            }
        out = std::move(next);
    }
    return out;
}

OracleVerdict exhaustive_oracle(const gotoir::GotoProgram &p, unsigned nondetCount,
                                unsigned width, const symex::InterpreterOptions &options)
{
    OracleVerdict v;
    for (const auto &inputs : all_inputs(nondetCount, width)) {
        ++v.runs;
        auto run = symex::interpret(p, inputs, options);
        if (run.verdict == symex::Verdict::AssertionViolated) {
            v.violation = true;
            v.witness = inputs;
            v.message = run.message;
            v.loc = run.loc;
            return v;
        }
    }
    return v;
}

} // namespace miniqt::testing
