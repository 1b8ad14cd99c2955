#include "miniqt/frontend/parser.hpp"

#include <charconv>
#include <limits>

namespace miniqt::frontend {

Expr Expr::int_lit(std::int64_t v, SourceLocation l)
{
    Expr e;
    e.kind = ExprKind::IntLit;
    e.value = v;
    e.loc = std::move(l);
    return e;
}

Expr Expr::bool_lit(bool v, SourceLocation l)
{
    Expr e;
    e.kind = ExprKind::BoolLit;
    e.value = v ? 1 : 0;
    e.loc = std::move(l);
    return e;
}

Expr Expr::name(std::string n, SourceLocation l)
{
    Expr e;
    e.kind = ExprKind::Name;
    e.text = std::move(n);
    e.loc = std::move(l);
    return e;
}

Expr Expr::unary(std::string op, Expr operand, SourceLocation l)
{
    Expr e;
    e.kind = ExprKind::Unary;
    e.text = std::move(op);
    e.loc = std::move(l);
    e.args.push_back(std::move(operand));
    return e;
}

Expr Expr::binary(std::string op, Expr lhs, Expr rhs, SourceLocation l)
{
    Expr e;
    e.kind = ExprKind::Binary;
    e.text = std::move(op);
    e.loc = std::move(l);
    e.args.push_back(std::move(lhs));
    e.args.push_back(std::move(rhs));
    return e;
}

const ClassDecl *Program::find_class(const std::string &name) const
{
    for (const auto &c : classes)
        if (c.name == name)
            return &c;
    return nullptr;
}

const FuncDecl *Program::find_function(const std::string &name) const
{
    for (const auto &f : functions)
        if (f.name == name)
            return &f;
    return nullptr;
}

namespace {

class Parser {
  public:
    explicit Parser(const std::vector<Token> &tokens) : toks_(tokens) {}

    Program program()
    {
        Program p;
        while (!at_end()) {
            if (peek().kind == TokenKind::Directive) {
                p.includes.push_back(include_directive());
            } else if (peek_kw("template") || peek_kw("class")) {
                p.classes.push_back(class_decl());
            } else {
                p.functions.push_back(function_decl());
            }
        }
        return p;
    }

    Expr expression_only()
    {
        Expr e = expression();
        if (!at_end())
            fail("end of input");
        return e;
    }

    Stmt statements_only()
    {
        Stmt block;
        block.kind = StmtKind::Block;
        if (!at_end())
            block.loc = peek().loc;
        while (!at_end())
            block.body.push_back(statement());
        return block;
    }

  private:
    // ---- token helpers -------------------------------------------------

    bool at_end() const { return pos_ >= toks_.size(); }

    const Token &peek(std::size_t ahead = 0) const
    {
        static const Token kEof{TokenKind::Punctuation, "<eof>", {}};
        return pos_ + ahead < toks_.size() ? toks_[pos_ + ahead] : kEof;
    }

    bool peek_is(std::string_view text, std::size_t ahead = 0) const
    {
        if (pos_ + ahead >= toks_.size())
            return false;
        const Token &t = toks_[pos_ + ahead];
        return t.text == text && t.kind != TokenKind::StringLiteral;
    }

    bool peek_kw(std::string_view kw) const
    {
        return !at_end() && peek().kind == TokenKind::Keyword && peek().text == kw;
    }

    SourceLocation loc_here() const
    {
        if (!at_end())
            return peek().loc;
        if (!toks_.empty()) {
            SourceLocation l = toks_.back().loc;
            l.column += static_cast<int>(toks_.back().text.size());
            return l;
        }
        return {};
    }

    [[noreturn]] void fail(const std::string &expected) const
    {
        std::string found = at_end() ? "end-of-input" : "'" + peek().text + "'";
        throw ParseError(loc_here(), expected, found);
    }

    const Token &advance() { return toks_[pos_++]; }

    bool accept(std::string_view text)
    {
        if (peek_is(text)) {
            ++pos_;
            return true;
        }
        return false;
    }

    const Token &expect(std::string_view text)
    {
        if (!peek_is(text))
            fail("'" + std::string(text) + "'");
        return advance();
    }

    const Token &expect_ident(const char *what = "identifier")
    {
        if (at_end() || peek().kind != TokenKind::Identifier)
            fail(what);
        return advance();
    }

    // ---- declarations --------------------------------------------------

    IncludeDirective include_directive()
    {
        IncludeDirective inc;
        inc.loc = advance().loc;
        expect("<");
        inc.name = expect_ident("header name").text;
        expect(">");
        return inc;
    }

    bool at_type_start() const
    {
        if (at_end())
            return false;
        const Token &t = peek();
        if (t.kind == TokenKind::Keyword)
            return t.text == "int" || t.text == "bool" || t.text == "void" || t.text == "const";
        return t.kind == TokenKind::Identifier;
    }

    TypeName type_name()
    {
        accept("const");
        TypeName t;
        t.loc = loc_here();
        if (peek_kw("int") || peek_kw("bool") || peek_kw("void")) {
            t.name = advance().text;
            return t;
        }
        t.name = expect_ident("type").text;
        if (accept("<")) {
            t.args.push_back(type_name());
            expect(">");
        }
        return t;
    }

    ClassDecl class_decl()
    {
        ClassDecl c;
        c.loc = loc_here();
        if (accept("template")) {
            expect("<");
            expect("class");
            c.templateParam = expect_ident("template parameter").text;
            expect(">");
        }
        expect("class");
        c.name = expect_ident("class name").text;
        expect("{");
        while (!peek_is("}")) {
            if (at_end())
                fail("'}'");
            if (peek_kw("public") || peek_kw("private")) {
                advance();
                expect(":");
                continue;
            }
            member(c);
        }
        expect("}");
        accept(";");
        return c;
    }

    void member(ClassDecl &c)
    {
        if (peek().kind == TokenKind::Identifier && peek().text == c.name && peek_is("(", 1)) {
            FuncDecl ctor;
            ctor.loc = peek().loc;
            ctor.name = advance().text;
            ctor.isConstructor = true;
            ctor.returnType = TypeName{"void", {}, ctor.loc};
            ctor.params = params();
            ctor.body = block();
            c.methods.push_back(std::move(ctor));
            return;
        }
        TypeName t = type_name();
        const Token &name = expect_ident("member name");
        if (peek_is("(")) {
            FuncDecl m;
            m.returnType = std::move(t);
            m.name = name.text;
            m.loc = name.loc;
            m.params = params();
            m.body = block();
            c.methods.push_back(std::move(m));
            return;
        }
        FieldDecl f;
        f.type = std::move(t);
        f.name = name.text;
        f.loc = name.loc;
        if (accept("[")) {
            ArraySize size;
            if (!at_end() && peek().kind == TokenKind::IntegerLiteral)
                size.literal = parse_int(advance());
            else
                size.constant = expect_ident("array capacity").text;
            expect("]");
            f.arraySize = std::move(size);
        }
        expect(";");
        c.fields.push_back(std::move(f));
    }

    std::vector<Param> params()
    {
        std::vector<Param> ps;
        expect("(");
        if (!peek_is(")")) {
            do {
                Param p;
                p.loc = loc_here();
                p.type = type_name();
                p.name = expect_ident("parameter name").text;
                ps.push_back(std::move(p));
            } while (accept(","));
        }
        expect(")");
        return ps;
    }

    FuncDecl function_decl()
    {
        if (!at_type_start())
            fail("declaration");
        FuncDecl f;
        f.returnType = type_name();
        const Token &name = expect_ident("function name");
        f.name = name.text;
        f.loc = name.loc;
        f.params = params();
        f.body = block();
        return f;
    }

    // ---- statements ----------------------------------------------------

    Stmt block()
    {
        Stmt b;
        b.kind = StmtKind::Block;
        b.loc = expect("{").loc;
        while (!peek_is("}")) {
            if (at_end())
                fail("'}'");
            b.body.push_back(statement());
        }
        expect("}");
        return b;
    }

    Stmt statement()
    {
        SourceLocation loc = loc_here();
        if (peek_is("{"))
            return block();
        if (accept(";")) {
            Stmt s;
            s.loc = loc;
            return s;
        }
        if (accept("if")) {
            Stmt s;
            s.kind = StmtKind::If;
            s.loc = loc;
            expect("(");
            s.exprs.push_back(expression());
            expect(")");
            s.body.push_back(statement());
            if (accept("else"))
                s.body.push_back(statement());
            return s;
        }
        if (accept("while")) {
            Stmt s;
            s.kind = StmtKind::While;
            s.loc = loc;
            expect("(");
            s.exprs.push_back(expression());
            expect(")");
            s.body.push_back(statement());
            return s;
        }
        if (accept("for"))
            return for_statement(loc);
        if (accept("assert")) {
            Stmt s;
            s.kind = StmtKind::Assert;
            s.loc = loc;
            expect("(");
            s.exprs.push_back(expression());
            expect(")");
            expect(";");
            return s;
        }
        if (accept("return")) {
            Stmt s;
            s.kind = StmtKind::Return;
            s.loc = loc;
            if (!peek_is(";"))
                s.exprs.push_back(expression());
            expect(";");
            return s;
        }
        Stmt s = simple_statement();
        expect(";");
        return s;
    }

    Stmt for_statement(SourceLocation loc)
    {
        Stmt s;
        s.kind = StmtKind::For;
        s.loc = loc;
        expect("(");
        Stmt init;
        init.loc = loc_here();
        if (!peek_is(";"))
            init = simple_statement();
        expect(";");
        if (!peek_is(";"))
            s.exprs.push_back(expression());
        expect(";");
        Stmt step;
        step.loc = loc_here();
        if (!peek_is(")"))
            step = simple_statement();
        expect(")");
        s.body.push_back(std::move(init));
        s.body.push_back(std::move(step));
        s.body.push_back(statement());
        return s;
    }

    /// Declaration, assignment or expression statement without the trailing `;`.
    Stmt simple_statement()
    {
        if (auto decl = try_var_decl())
            return std::move(*decl);
        SourceLocation loc = loc_here();
        if (peek_is("++") || peek_is("--")) {
            Stmt s;
            s.kind = StmtKind::Assign;
            s.loc = loc;
            s.text = advance().text;
            s.exprs.push_back(postfix());
            return s;
        }
        Expr lhs = expression();
        static constexpr std::string_view kAssignOps[] = {"=", "+=", "-=", "*=", "/=", "%="};
        for (auto op : kAssignOps) {
            if (peek_is(op) && peek().kind == TokenKind::Operator) {
                advance();
                Stmt s;
                s.kind = StmtKind::Assign;
                s.loc = loc;
                s.text = std::string(op);
                s.exprs.push_back(std::move(lhs));
                s.exprs.push_back(expression());
                return s;
            }
        }
        if (peek_is("++") || peek_is("--")) {
            Stmt s;
            s.kind = StmtKind::Assign;
            s.loc = loc;
            s.text = advance().text;
            s.exprs.push_back(std::move(lhs));
            return s;
        }
        Stmt s;
        s.kind = StmtKind::ExprStmt;
        s.loc = loc;
        s.exprs.push_back(std::move(lhs));
        return s;
    }

    std::optional<Stmt> try_var_decl()
    {
        if (!at_type_start())
            return std::nullopt;
        const Token &first = peek();
        bool definitely = first.kind == TokenKind::Keyword;
        std::size_t save = pos_;
        SourceLocation loc = loc_here();
        TypeName t;
        try {
            t = type_name();
            if (at_end() || peek().kind != TokenKind::Identifier) {
                if (definitely)
                    fail("variable name");
                pos_ = save;
                return std::nullopt;
            }
        } catch (const ParseError &) {
            if (definitely)
                throw;
            pos_ = save;
            return std::nullopt;
        }
        Stmt s;
        s.kind = StmtKind::VarDecl;
        s.loc = loc;
        s.declType = std::move(t);
        s.name = advance().text;
        if (accept("=")) {
            s.exprs.push_back(expression());
        } else if (accept("(")) {
            s.ctorArgs = true;
            if (!peek_is(")")) {
                do {
                    s.exprs.push_back(expression());
                } while (accept(","));
            }
            expect(")");
        }
        return s;
    }

    // ---- expressions ---------------------------------------------------

    Expr expression() { return logical_or(); }

    Expr binary_level(Expr (Parser::*next)(), std::initializer_list<std::string_view> ops)
    {
        Expr lhs = (this->*next)();
        for (;;) {
            bool matched = false;
            for (auto op : ops) {
                if (peek_is(op) && peek().kind == TokenKind::Operator) {
                    SourceLocation loc = advance().loc;
                    Expr rhs = (this->*next)();
                    lhs = Expr::binary(std::string(op), std::move(lhs), std::move(rhs), loc);
                    matched = true;
                    break;
                }
            }
            if (!matched)
                return lhs;
        }
    }

    Expr logical_or() { return binary_level(&Parser::logical_and, {"||"}); }
    Expr logical_and() { return binary_level(&Parser::equality, {"&&"}); }
    Expr equality() { return binary_level(&Parser::relational, {"==", "!="}); }
    Expr relational() { return binary_level(&Parser::additive, {"<=", ">=", "<", ">"}); }
    Expr additive() { return binary_level(&Parser::multiplicative, {"+", "-"}); }
    Expr multiplicative() { return binary_level(&Parser::unary, {"*", "/", "%"}); }

    Expr unary()
    {
        SourceLocation loc = loc_here();
        if (peek_is("!") && peek().kind == TokenKind::Operator) {
            advance();
            return Expr::unary("!", unary(), loc);
        }
        if (peek_is("-") && peek().kind == TokenKind::Operator) {
            advance();
            if (!at_end() && peek().kind == TokenKind::IntegerLiteral) {
                const Token &lit = advance();
                return Expr::int_lit(-parse_int(lit, true), loc);
            }
            return Expr::unary("-", unary(), loc);
        }
        return postfix();
    }

    std::vector<Expr> call_args()
    {
        std::vector<Expr> args;
        expect("(");
        if (!peek_is(")")) {
            do {
                args.push_back(expression());
            } while (accept(","));
        }
        expect(")");
        return args;
    }

    Expr postfix()
    {
        Expr e = primary();
        for (;;) {
            SourceLocation loc = loc_here();
            if (peek_is(".") || peek_is("->")) {
                bool arrow = advance().text == "->";
                std::string member = expect_ident("member name").text;
                Expr m;
                m.loc = loc;
                m.text = std::move(member);
                m.arrow = arrow;
                m.args.push_back(std::move(e));
                if (peek_is("(")) {
                    m.kind = ExprKind::MethodCall;
                    for (auto &a : call_args())
                        m.args.push_back(std::move(a));
                } else {
                    m.kind = ExprKind::Member;
                }
                e = std::move(m);
            } else if (accept("[")) {
                Expr idx;
                idx.kind = ExprKind::Index;
                idx.loc = loc;
                idx.args.push_back(std::move(e));
                idx.args.push_back(expression());
                expect("]");
                e = std::move(idx);
            } else {
                return e;
            }
        }
    }

    Expr primary()
    {
        if (at_end())
            fail("expression");
        const Token &t = peek();
        SourceLocation loc = t.loc;
        switch (t.kind) {
        case TokenKind::IntegerLiteral:
            advance();
            return Expr::int_lit(parse_int(t), loc);
        case TokenKind::StringLiteral: {
            advance();
            Expr e;
            e.kind = ExprKind::StringLit;
            e.loc = loc;
            e.text = t.text.substr(1, t.text.size() - 2);
            return e;
        }
        case TokenKind::Keyword:
            if (t.text == "true" || t.text == "false") {
                advance();
                return Expr::bool_lit(t.text == "true", loc);
            }
            if (t.text == "this") {
                advance();
                Expr e;
                e.kind = ExprKind::This;
                e.loc = loc;
                return e;
            }
            break;
        case TokenKind::Identifier: {
            advance();
            if (peek_is("(")) {
                Expr call;
                call.kind = ExprKind::Call;
                call.loc = loc;
                call.text = t.text;
                call.args = call_args();
                return call;
            }
            return Expr::name(t.text, loc);
        }
        case TokenKind::Punctuation:
            if (t.text == "(") {
                advance();
                Expr e = expression();
                expect(")");
                return e;
            }
            break;
        default:
            break;
        }
        fail("expression");
    }

    static std::int64_t parse_int(const Token &t, bool negated = false)
    {
        std::uint64_t v = 0;
        auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
        constexpr auto kMax = static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max());
        if (ec != std::errc() || v > kMax + (negated ? 1 : 0))
            throw ParseError(t.loc, "integer literal in range", "'" + t.text + "'");
        if (negated && v == kMax + 1)
            return std::numeric_limits<std::int64_t>::min();
        return static_cast<std::int64_t>(v);
    }

    const std::vector<Token> &toks_;
    std::size_t pos_ = 0;
};

} // namespace

Program parse(const std::vector<Token> &tokens)
{
    return Parser(tokens).program();
}

Program parse_source(std::string_view source, const std::string &file)
{
    return parse(tokenize(source, file));
}

Expr parse_expression(const std::vector<Token> &tokens)
{
    return Parser(tokens).expression_only();
}

Stmt parse_statements(const std::vector<Token> &tokens)
{
    return Parser(tokens).statements_only();
}

} // namespace miniqt::frontend
