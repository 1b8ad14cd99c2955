#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "miniqt/frontend/frontend.hpp"
#include "miniqt/frontend/lexer.hpp"
#include "miniqt/frontend/parser.hpp"
#include "support.hpp"

#include <random>

using namespace miniqt;
using namespace miniqt::frontend;

TEST_CASE("lexer splits tokens and tracks positions")
{
    auto toks = tokenize("int x = 42; // note\nassert(x >= 1);", "t.mqt");
    REQUIRE(toks.size() == 12);
    CHECK(toks[0].is(TokenKind::Keyword, "int"));
    CHECK(toks[1].kind == TokenKind::Identifier);
    CHECK(toks[3].kind == TokenKind::IntegerLiteral);
    CHECK(toks[3].text == "42");
    CHECK(toks[5].loc.line == 2);
    CHECK(toks[5].loc.column == 1);
    CHECK(toks[8].is(TokenKind::Operator, ">="));
}

TEST_CASE("lexer handles directives, strings and block comments")
{
    auto toks = tokenize("#include <QList>\n/* a\n b */ \"hi there\"", "t.mqt");
    REQUIRE(toks.size() >= 2);
    CHECK(toks[0].kind == TokenKind::Directive);
    CHECK(toks.back().kind == TokenKind::StringLiteral);
    CHECK(toks.back().text == "\"hi there\"");
    CHECK(toks.back().loc.line == 3);
}

TEST_CASE("lexer rejects illegal characters with a position")
{
    try {
        tokenize("int x = @;", "t.mqt");
        FAIL("expected LexError");
    } catch (const LexError &e) {
        CHECK(e.location().line == 1);
        CHECK(e.location().column == 9);
    }
    CHECK_THROWS_AS(tokenize("/* open", "t.mqt"), LexError);
    CHECK_THROWS_AS(tokenize("\"open", "t.mqt"), LexError);
}

TEST_CASE("parser respects precedence")
{
    auto e = parse_expression(tokenize("1 + 2 * 3 < 4 && !b || c == d", "t"));
    CHECK(print_expr(e) == "((((1 + (2 * 3)) < 4) && !b) || (c == d))");
}

TEST_CASE("parser reports expected and found")
{
    try {
        parse_source("int main() { int x = ; }", "t.mqt");
        FAIL("expected ParseError");
    } catch (const ParseError &e) {
        CHECK(e.location().line == 1);
        CHECK(e.found().find(";") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_source("int main() { return 0; ", "t.mqt"), ParseError);
}

TEST_CASE("parser records includes and classes")
{
    auto p = parse_source("#include <QList>\nclass C { int a; int f() { return a; } };\n"
                          "int main() { QList<int> l; C c; return c.f(); }",
                          "t.mqt");
    REQUIRE(p.includes.size() == 1);
    CHECK(p.includes[0].name == "QList");
    REQUIRE(p.classes.size() == 1);
    CHECK(p.classes[0].fields.size() == 1);
    CHECK(p.classes[0].methods.size() == 1);
    REQUIRE(p.functions.size() == 1);
    CHECK(p.functions[0].name == "main");
}

TEST_CASE("printer round trip on the benchmark corpus and models")
{
    auto files = testing::corpus_files();
    REQUIRE(files.size() == 54);
    for (const auto &m : {"QList.mqt", "QTimer.mqt", "QFile.mqt"})
        files.push_back(testing::models_dir() + "/" + m);
    for (const auto &f : files) {
        INFO(f);
        Program a = parse_source(read_file(f), f);
        Program b = parse_source(print_program(a), f);
        CHECK(structurally_equal(a, b));
        CHECK(print_program(b) == print_program(a));
    }
}

TEST_CASE("printer round trip on generated programs")
{
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        auto g = testing::generate_program(seed);
        INFO(g.source);
        Program a = parse_source(g.source, "gen.mqt");
        Program b = parse_source(print_program(a), "gen.mqt");
        CHECK(structurally_equal(a, b));
    }
}

TEST_CASE("include resolution")
{
    VerifierConfig empty;
    auto p = parse_source("#include <QList>\nint main() { return 0; }", "t.mqt");
    try {
        resolve_includes(p, empty);
        FAIL("expected IncludeNotFound");
    } catch (const IncludeNotFound &e) {
        CHECK(e.name() == "QList");
    }

    auto merged = resolve_includes(p, testing::model_config());
    REQUIRE(merged.find_class("QList") != nullptr);
    CHECK(merged.find_class("QList")->fromModel);
    CHECK_FALSE(merged.find_function("main")->fromModel);

    auto twice = parse_source("#include <QList>\n#include <QList>\nint main() { return 0; }", "t.mqt");
    auto once = resolve_includes(twice, testing::model_config());
    CHECK(once.classes.size() == 1);
}

TEST_CASE("type checking monomorphizes and mangles")
{
    auto ast = load_source("#include <QList>\nint main() { QList<int> l; l.push_front(1); "
                           "return l.front(); }",
                           "t.mqt", testing::model_config());
    REQUIRE(ast.program.find_class("QList_int") != nullptr);
    CHECK(ast.program.find_class("QList") == nullptr);
    const FuncDecl *main = ast.program.find_function("main");
    REQUIRE(main);
    const Stmt &call = main->body.body[1];
    REQUIRE(call.kind == StmtKind::ExprStmt);
    CHECK(call.exprs[0].resolved == "QList_int::push_front");
    const Stmt &ret = main->body.body[2];
    CHECK(ret.exprs[0].resolved == "QList_int::front");
    CHECK(ret.exprs[0].type.is_int());
}

TEST_CASE("type checking renames shadowed locals")
{
    auto ast = load_source("int main() { int x = 1; { int x = 2; x = 3; } return x; }", "t.mqt", {});
    const Stmt &body = ast.program.find_function("main")->body;
    CHECK(body.body[0].resolved == "x");
    CHECK(body.body[1].body[0].resolved != "x");
    CHECK(body.body[1].body[1].exprs[0].resolved == body.body[1].body[0].resolved);
    CHECK(body.body[2].exprs[0].resolved == "x");
}

TEST_CASE("type errors")
{
    CHECK_THROWS_AS(load_source("int main() { return y; }", "t.mqt", {}), UndefinedSymbol);
    CHECK_THROWS_AS(load_source("int main() { int x = 1; int x = 2; return 0; }", "t.mqt", {}),
                    TypeError);
    CHECK_THROWS_AS(load_source("int f(int a) { return a; } int main() { return f(); }", "t.mqt", {}),
                    TypeError);
    CHECK_THROWS_AS(load_source("int main() { bool b = 1 + true; return 0; }", "t.mqt", {}),
                    TypeError);
    CHECK_THROWS_AS(load_source("int f() { return 0; }", "t.mqt", {}), Error);
}

TEST_CASE("generated programs type check")
{
    VerifierConfig c;
    c.intWidth = 4;
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        auto g = testing::generate_program(seed);
        INFO(g.source);
        CHECK_NOTHROW(load_source(g.source, "gen.mqt", c));
    }
}
