#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "miniqt/frontend/frontend.hpp"
#include "miniqt/goto/lower.hpp"
#include "support.hpp"

using namespace miniqt;
using namespace miniqt::gotoir;

namespace {

GotoProgram lower(const std::string &src, const VerifierConfig &c = {})
{
    return lower_to_goto(frontend::load_source(src, "t.mqt", c));
}

std::vector<std::string> lines(const std::string &text)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start < text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string::npos)
            end = text.size();
        out.push_back(text.substr(start, end - start));
        start = end + 1;
    }
    return out;
}

std::size_t count(const GotoFunction &f, InstrKind k)
{
    std::size_t n = 0;
    for (const auto &i : f.body)
        n += i.kind == k;
    return n;
}

} // namespace

TEST_CASE("while loop becomes a guarded exit and a back-edge")
{
    auto p = lower("int main() { int x = 0; while (x < 3) x = x + 1; return x; }");
    const auto &f = p.functions.at("main");
    auto text = lines(format_function(f));
    REQUIRE(text.size() >= 6);
    CHECK(text[3].rfind("2: GOTO 5 if !(x < 3) [loop 0 exit]", 0) == 0);
    CHECK(text[5].rfind("4: GOTO 2 [loop 0 back-edge]", 0) == 0);
    CHECK(f.body[2].loopRole == LoopRole::ExitTest);
    CHECK(f.body[4].loopRole == LoopRole::BackEdge);
    CHECK(f.body[4].target == 2);
    CHECK(f.body.back().kind == InstrKind::EndFunction);
    CHECK(validate_goto(p).empty());
}

TEST_CASE("if/else and for loops lower to jumps only")
{
    auto p = lower("int main() { int s = 0; for (int i = 0; i < 4; i++) { if (i == 2) s = s + 1; "
                   "else s = s - 1; } return s; }");
    const auto &f = p.functions.at("main");
    CHECK(count(f, InstrKind::Goto) == 4);
    int exits = 0, backs = 0;
    for (const auto &i : f.body) {
        exits += i.loopRole == LoopRole::ExitTest;
        backs += i.loopRole == LoopRole::BackEdge;
    }
    CHECK(exits == 1);
    CHECK(backs == 1);
    CHECK(validate_goto(p).empty());
}

TEST_CASE("calls are hoisted and short-circuit through temporaries")
{
    auto p = lower("int f(int a) { assert(a > 0); return a; }\n"
                   "int main() { int x = nondet_int(); if (x > 0 && f(x) > 1) x = 0; return x; }");
    const auto &m = p.functions.at("main");
    CHECK(count(m, InstrKind::Call) == 1);
    std::size_t callAt = 0;
    for (std::size_t i = 0; i < m.body.size(); ++i)
        if (m.body[i].kind == InstrKind::Call)
            callAt = i;
    bool guardedBefore = false;
    for (std::size_t i = 0; i < callAt; ++i)
        if (m.body[i].kind == InstrKind::Goto && m.body[i].target > callAt)
            guardedBefore = true;
    CHECK(guardedBefore);
    REQUIRE(p.functions.count("f"));
    CHECK(count(p.functions.at("f"), InstrKind::Assert) == 1);
}

TEST_CASE("array accesses carry a bounds assertion")
{
    auto p = lower("class B { int a[4]; };\nint main() { B b; int i = nondet_int(); b.a[i] = 1; "
                   "return b.a[0]; }");
    const auto &m = p.functions.at("main");
    std::size_t bounds = 0;
    for (const auto &i : m.body)
        if (i.kind == InstrKind::Assert && i.message == kBoundsMessage) {
            ++bounds;
            CHECK(i.property == PropertyClass::ArrayBounds);
        }
    CHECK(bounds == 2);
}

TEST_CASE("assertion messages")
{
    auto p = lower("int main() { int x = 1; assert((x != 3)); __VERIFIER_assert(x > 0, \"positive\"); "
                   "return 0; }");
    std::vector<std::string> msgs;
    for (const auto &i : p.functions.at("main").body)
        if (i.kind == InstrKind::Assert)
            msgs.push_back(i.message);
    REQUIRE(msgs.size() == 2);
    CHECK(msgs[0] == "assertion x != 3");
    CHECK(msgs[1] == "positive");
}

TEST_CASE("methods take this as their first parameter")
{
    auto p = lower("#include <QList>\nint main() { QList<int> l; l.push_back(1); return l.size(); }",
                   testing::model_config());
    const auto &pb = p.functions.at("QList_int::push_back");
    REQUIRE(pb.params.size() == 2);
    CHECK(pb.params[0].name == "this");
    CHECK(pb.fromModel);
    CHECK(p.classes.count("QList_int"));
}

TEST_CASE("validate_goto reports malformed programs")
{
    auto p = lower("int main() { int x = 0; while (x < 3) x = x + 1; return x; }");
    CHECK(validate_goto(p).empty());

    auto bad = p;
    for (auto &i : bad.functions.at("main").body)
        if (i.kind == InstrKind::Goto)
            i.target = 999;
    CHECK_FALSE(validate_goto(bad).empty());

    auto noEnd = p;
    noEnd.functions.at("main").body.pop_back();
    CHECK_FALSE(validate_goto(noEnd).empty());

    auto noEntry = p;
    noEntry.entry = "nope";
    CHECK_FALSE(validate_goto(noEntry).empty());
}

TEST_CASE("whole corpus lowers to valid flat GOTO programs")
{
    for (const auto &file : testing::corpus_files()) {
        INFO(file);
        auto p = lower_to_goto(frontend::load_program(file, testing::model_config()));
        CHECK(validate_goto(p).empty());
        for (const auto &[name, f] : p.functions)
            for (const auto &i : f.body)
                if (i.kind == InstrKind::Goto)
                    CHECK(i.target < f.body.size());
    }
}
