#include "miniqt/frontend/parser.hpp"

#include <sstream>

namespace miniqt {

std::string to_string(const SemType &t)
{
    using K = SemType::Kind;
    switch (t.kind) {
    case K::Error:
        return "<error>";
    case K::Bool:
        return "bool";
    case K::Int:
        return "int" + std::to_string(t.width);
    case K::Void:
        return "void";
    case K::StringLiteral:
        return "string";
    case K::Class:
        return t.className;
    case K::Array:
        return to_string(t.element()) + "[" + std::to_string(t.capacity) + "]";
    }
    return "?";
}

} // namespace miniqt

namespace miniqt::frontend {

std::string print_type(const TypeName &t)
{
    std::string out = t.name;
    if (!t.args.empty())
        out += "<" + print_type(t.args.front()) + ">";
    return out;
}

std::string print_expr(const Expr &e)
{
    switch (e.kind) {
    case ExprKind::IntLit:
        return std::to_string(e.value);
    case ExprKind::BoolLit:
        return e.value ? "true" : "false";
    case ExprKind::StringLit:
        return "\"" + e.text + "\"";
    case ExprKind::Name:
        return e.text;
    case ExprKind::This:
        return "this";
    case ExprKind::Member:
        return print_expr(e.args[0]) + (e.arrow ? "->" : ".") + e.text;
    case ExprKind::Index:
        return print_expr(e.args[0]) + "[" + print_expr(e.args[1]) + "]";
    case ExprKind::Unary: {
        std::string inner = print_expr(e.args[0]);
        // Avoid `--x`, which would lex as a decrement, and `-4`, which would
        // re-parse as a negative literal.
        if (e.text == "-" && !inner.empty() &&
            (inner[0] == '-' || e.args[0].kind == ExprKind::IntLit))
            inner = "(" + inner + ")";
        return e.text + inner;
    }
    case ExprKind::Binary:
        return "(" + print_expr(e.args[0]) + " " + e.text + " " + print_expr(e.args[1]) + ")";
    case ExprKind::Call:
    case ExprKind::MethodCall: {
        std::string out;
        std::size_t first = 0;
        if (e.kind == ExprKind::MethodCall) {
            out = print_expr(e.args[0]) + (e.arrow ? "->" : ".");
            first = 1;
        }
        out += e.text + "(";
        for (std::size_t i = first; i < e.args.size(); ++i) {
            if (i > first)
                out += ", ";
            out += print_expr(e.args[i]);
        }
        return out + ")";
    }
    }
    return "?";
}

namespace {

std::string pad(int indent) { return std::string(static_cast<std::size_t>(indent) * 2, ' '); }

/// Statement text without indentation or trailing `;` (for `for` headers).
std::string simple_stmt(const Stmt &s)
{
    switch (s.kind) {
    case StmtKind::Empty:
        return "";
    case StmtKind::VarDecl: {
        std::string out = print_type(s.declType) + " " + s.name;
        if (s.ctorArgs) {
            out += "(";
            for (std::size_t i = 0; i < s.exprs.size(); ++i)
                out += (i ? ", " : "") + print_expr(s.exprs[i]);
            out += ")";
        } else if (!s.exprs.empty()) {
            out += " = " + print_expr(s.exprs[0]);
        }
        return out;
    }
    case StmtKind::Assign:
        if (s.text == "++" || s.text == "--")
            return print_expr(s.exprs[0]) + s.text;
        return print_expr(s.exprs[0]) + " " + s.text + " " + print_expr(s.exprs[1]);
    case StmtKind::ExprStmt:
        return print_expr(s.exprs[0]);
    default:
        return "?";
    }
}

} // namespace

std::string print_stmt(const Stmt &s, int indent)
{
    std::string p = pad(indent);
    switch (s.kind) {
    case StmtKind::Empty:
        return p + ";\n";
    case StmtKind::Block: {
        std::string out = p + "{\n";
        for (const auto &c : s.body)
            out += print_stmt(c, indent + 1);
        return out + p + "}\n";
    }
    case StmtKind::VarDecl:
    case StmtKind::Assign:
    case StmtKind::ExprStmt:
        return p + simple_stmt(s) + ";\n";
    case StmtKind::If: {
        std::string out = p + "if (" + print_expr(s.exprs[0]) + ")\n" + print_stmt(s.body[0], indent + 1);
        if (s.body.size() > 1)
            out += p + "else\n" + print_stmt(s.body[1], indent + 1);
        return out;
    }
    case StmtKind::While:
        return p + "while (" + print_expr(s.exprs[0]) + ")\n" + print_stmt(s.body[0], indent + 1);
    case StmtKind::For: {
        std::string cond = s.exprs.empty() ? "" : " " + print_expr(s.exprs[0]);
        std::string step = s.body[1].kind == StmtKind::Empty ? "" : " " + simple_stmt(s.body[1]);
        return p + "for (" + simple_stmt(s.body[0]) + ";" + cond + ";" + step + ")\n" +
               print_stmt(s.body[2], indent + 1);
    }
    case StmtKind::Assert:
        return p + "assert(" + print_expr(s.exprs[0]) + ");\n";
    case StmtKind::Return:
        return p + (s.exprs.empty() ? "return;\n" : "return " + print_expr(s.exprs[0]) + ";\n");
    }
    return p + "?\n";
}

namespace {

std::string print_params(const std::vector<Param> &ps)
{
    std::string out = "(";
    for (std::size_t i = 0; i < ps.size(); ++i)
        out += (i ? ", " : "") + print_type(ps[i].type) + " " + ps[i].name;
    return out + ")";
}

} // namespace

std::string print_program(const Program &p)
{
    std::ostringstream os;
    for (const auto &inc : p.includes)
        os << "#include <" << inc.name << ">\n";
    for (const auto &c : p.classes) {
        if (c.templateParam)
            os << "template<class " << *c.templateParam << ">\n";
        os << "class " << c.name << " {\n";
        for (const auto &f : c.fields) {
            os << "  " << print_type(f.type) << " " << f.name;
            if (f.arraySize) {
                os << "[";
                if (f.arraySize->literal)
                    os << *f.arraySize->literal;
                else
                    os << f.arraySize->constant;
                os << "]";
            }
            os << ";\n";
        }
        for (const auto &m : c.methods) {
            os << "  ";
            if (!m.isConstructor)
                os << print_type(m.returnType) << " ";
            os << m.name << print_params(m.params) << "\n" << print_stmt(m.body, 1);
        }
        os << "};\n";
    }
    for (const auto &f : p.functions)
        os << print_type(f.returnType) << " " << f.name << print_params(f.params) << "\n"
           << print_stmt(f.body, 0);
    return os.str();
}

// ---- structural equality ---------------------------------------------------

bool structurally_equal(const Expr &a, const Expr &b)
{
    if (a.kind != b.kind || a.text != b.text || a.value != b.value ||
        a.args.size() != b.args.size())
        return false;
    // `.` and `->` are interchangeable only on `this`; keep them distinct.
    if ((a.kind == ExprKind::Member || a.kind == ExprKind::MethodCall) && a.arrow != b.arrow)
        return false;
    for (std::size_t i = 0; i < a.args.size(); ++i)
        if (!structurally_equal(a.args[i], b.args[i]))
            return false;
    return true;
}

bool structurally_equal(const Stmt &a, const Stmt &b)
{
    if (a.kind != b.kind || !(a.declType == b.declType) || a.name != b.name || a.text != b.text ||
        a.ctorArgs != b.ctorArgs || a.exprs.size() != b.exprs.size() ||
        a.body.size() != b.body.size())
        return false;
    for (std::size_t i = 0; i < a.exprs.size(); ++i)
        if (!structurally_equal(a.exprs[i], b.exprs[i]))
            return false;
    for (std::size_t i = 0; i < a.body.size(); ++i)
        if (!structurally_equal(a.body[i], b.body[i]))
            return false;
    return true;
}

namespace {

bool equal_funcs(const FuncDecl &a, const FuncDecl &b)
{
    if (!(a.returnType == b.returnType) || a.name != b.name || a.isConstructor != b.isConstructor ||
        a.params.size() != b.params.size())
        return false;
    for (std::size_t i = 0; i < a.params.size(); ++i)
        if (!(a.params[i].type == b.params[i].type) || a.params[i].name != b.params[i].name)
            return false;
    return structurally_equal(a.body, b.body);
}

} // namespace

bool structurally_equal(const Program &a, const Program &b)
{
    if (a.includes.size() != b.includes.size() || a.classes.size() != b.classes.size() ||
        a.functions.size() != b.functions.size())
        return false;
    for (std::size_t i = 0; i < a.includes.size(); ++i)
        if (a.includes[i].name != b.includes[i].name)
            return false;
    for (std::size_t i = 0; i < a.classes.size(); ++i) {
        const auto &x = a.classes[i];
        const auto &y = b.classes[i];
        if (x.name != y.name || x.templateParam != y.templateParam ||
            x.fields.size() != y.fields.size() || x.methods.size() != y.methods.size())
            return false;
        for (std::size_t j = 0; j < x.fields.size(); ++j) {
            const auto &f = x.fields[j];
            const auto &g = y.fields[j];
            if (!(f.type == g.type) || f.name != g.name ||
                f.arraySize.has_value() != g.arraySize.has_value())
                return false;
            if (f.arraySize && (f.arraySize->literal != g.arraySize->literal ||
                                f.arraySize->constant != g.arraySize->constant))
                return false;
        }
        for (std::size_t j = 0; j < x.methods.size(); ++j)
            if (!equal_funcs(x.methods[j], y.methods[j]))
                return false;
    }
    for (std::size_t i = 0; i < a.functions.size(); ++i)
        if (!equal_funcs(a.functions[i], b.functions[i]))
            return false;
    return true;
}

} // namespace miniqt::frontend
