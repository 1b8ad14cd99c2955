#pragma once

#include "miniqt/common.hpp"
#include "miniqt/frontend/types.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace miniqt::frontend {

/// Syntactic type as written, e.g. `int` or `QList<int>`.
struct TypeName {
    std::string name;
    std::vector<TypeName> args;
    SourceLocation loc;

    bool operator==(const TypeName &o) const { return name == o.name && args == o.args; }
};

enum class ExprKind {
    IntLit,
    BoolLit,
    StringLit,
    Name,       // text = identifier
    This,
    Member,     // args[0] = object, text = field; arrow marks `->`
    Index,      // args[0] = array, args[1] = index
    Unary,      // text = op, args[0]
    Binary,     // text = op, args[0], args[1]
    Call,       // text = callee, args
    MethodCall, // args[0] = receiver, text = method, args[1..]
};

/// Expression node. After type checking `type` is set on every node and
/// `resolved` carries the binding: the unique local name for Name, or the
/// mangled callee for Call/MethodCall.
struct Expr {
    ExprKind kind = ExprKind::IntLit;
    SourceLocation loc;
    std::string text;
    std::int64_t value = 0;
    bool arrow = false;
    std::vector<Expr> args;

    SemType type;
    std::string resolved;

    static Expr int_lit(std::int64_t v, SourceLocation l = {});
    static Expr bool_lit(bool v, SourceLocation l = {});
    static Expr name(std::string n, SourceLocation l = {});
    static Expr unary(std::string op, Expr operand, SourceLocation l = {});
    static Expr binary(std::string op, Expr lhs, Expr rhs, SourceLocation l = {});
};

enum class StmtKind {
    Empty,
    Block,   // body = statements
    VarDecl, // declType, name; exprs = [init] or ctor args (ctorArgs = true)
    Assign,  // text = op (=, +=, -=, *=, /=, %=, ++, --); exprs = [lhs, rhs?]
    If,      // exprs = [cond]; body = [then, else?]
    While,   // exprs = [cond]; body = [body]
    For,     // exprs = [cond] or []; body = [init, step, body]
    ExprStmt,
    Assert,  // exprs = [cond]
    Return,  // exprs = [value?]
};

struct Stmt {
    StmtKind kind = StmtKind::Empty;
    SourceLocation loc;
    TypeName declType;
    std::string name;
    std::string text;
    bool ctorArgs = false;
    std::vector<Expr> exprs;
    std::vector<Stmt> body;

    /// Unique per-function name assigned by the type checker (VarDecl).
    std::string resolved;
    SemType type;
};

struct Param {
    TypeName type;
    std::string name;
    SourceLocation loc;
    SemType semType;
};

struct FuncDecl {
    TypeName returnType;
    std::string name;
    std::vector<Param> params;
    Stmt body;
    SourceLocation loc;
    bool isConstructor = false;
    bool fromModel = false;

    /// Set by the type checker: `main`, `QList_int::front`, ...
    std::string mangled;
    SemType returnSemType;
};

/// Array capacity is either a literal or a named built-in constant such as
/// `__CONTAINER_CAPACITY`.
struct ArraySize {
    std::optional<std::int64_t> literal;
    std::string constant;
};

struct FieldDecl {
    TypeName type;
    std::string name;
    std::optional<ArraySize> arraySize;
    SourceLocation loc;
    SemType semType;
};

struct ClassDecl {
    std::string name;
    std::optional<std::string> templateParam;
    std::vector<FieldDecl> fields;
    std::vector<FuncDecl> methods;
    SourceLocation loc;
    bool fromModel = false;
};

struct IncludeDirective {
    std::string name;
    SourceLocation loc;
};

/// A parsed (and later type-checked) program. Declarations from model files
/// are prepended by include resolution and flagged `fromModel`.
struct Program {
    std::vector<IncludeDirective> includes;
    std::vector<ClassDecl> classes;
    std::vector<FuncDecl> functions;

    const ClassDecl *find_class(const std::string &name) const;
    const FuncDecl *find_function(const std::string &name) const;
};

/// Typed program: monomorphized, every expression annotated.
struct TypedAst {
    Program program;
    unsigned intWidth = 32;
};

} // namespace miniqt::frontend
