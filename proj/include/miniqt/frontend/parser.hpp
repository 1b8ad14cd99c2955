#pragma once

#include "miniqt/frontend/ast.hpp"
#include "miniqt/frontend/lexer.hpp"

#include <string>
#include <vector>

namespace miniqt::frontend {

/// Recursive-descent parser for MiniQt. `for` loops stay as AST nodes;
/// `#include <Name>` directives are recorded in Program::includes.
Program parse(const std::vector<Token> &tokens);

/// tokenize + parse of a whole file.
Program parse_source(std::string_view source, const std::string &file);

/// Parses a single expression (used by tests and tools).
Expr parse_expression(const std::vector<Token> &tokens);

/// Parses a sequence of statements as a block body (used by tests).
Stmt parse_statements(const std::vector<Token> &tokens);

// Pretty printing. Binary expressions are fully parenthesized so that the
// output re-parses to the same tree.
std::string print_expr(const Expr &e);
std::string print_type(const TypeName &t);
std::string print_stmt(const Stmt &s, int indent = 0);
std::string print_program(const Program &p);

/// Structural equality ignoring source locations and type annotations.
bool structurally_equal(const Program &a, const Program &b);
bool structurally_equal(const Expr &a, const Expr &b);
bool structurally_equal(const Stmt &a, const Stmt &b);

} // namespace miniqt::frontend
