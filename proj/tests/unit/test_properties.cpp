#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "miniqt/frontend/frontend.hpp"
#include "miniqt/goto/lower.hpp"
#include "miniqt/harness/verify.hpp"
#include "miniqt/symex/interpreter.hpp"
#include "miniqt/symex/symex.hpp"
#include "support.hpp"

#include <deque>
#include <map>
#include <random>
#include <set>
#include <sstream>

using namespace miniqt;

namespace {

// A random QList session plus the outcome a plain deque with a capacity predicts.
struct ListScenario {
    std::string source;
    std::optional<std::string> violation;
};

ListScenario random_list_session(std::mt19937_64 &rng, unsigned capacity)
{
    std::deque<int> ref;
    std::ostringstream body;
    std::optional<std::string> violation;
    auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    int ops = pick(1, 12);
    for (int k = 0; k < ops && !violation; ++k) {
        int v = pick(-9, 9);
        switch (pick(0, 10)) {
        case 0:
        case 1:
            body << "    l.push_back(" << v << ");\n";
            if (ref.size() == capacity)
                violation = "array bounds violated";
            ref.push_back(v);
            break;
        case 2:
        case 3:
            body << "    l." << (pick(0, 1) ? "push_front(" : "prepend(") << v << ");\n";
            if (ref.size() == capacity)
                violation = "array bounds violated";
            ref.push_front(v);
            break;
        case 4:
            body << "    l.pop_front();\n";
            if (ref.empty())
                violation = "The list must not be empty";
            else
                ref.pop_front();
            break;
        case 5:
            body << "    l.pop_back();\n";
            if (ref.empty())
                violation = "The list must not be empty";
            else
                ref.pop_back();
            break;
        case 6:
            if (ref.empty()) {
                body << "    l.front();\n";
                violation = "The list must not be empty";
            } else {
                body << "    assert(l.front() == " << ref.front() << ");\n";
            }
            break;
        case 7:
            if (ref.empty()) {
                body << "    l.last();\n";
                violation = "The list must not be empty";
            } else {
                body << "    assert(l.back() == " << ref.back() << ");\n";
            }
            break;
        case 8: {
            int i = pick(-1, static_cast<int>(capacity));
            if (i < 0 || i >= static_cast<int>(ref.size())) {
                body << "    l.at(" << i << ");\n";
                violation = "index out of range";
            } else {
                body << "    assert(l.at(" << i << ") == " << ref[static_cast<std::size_t>(i)] << ");\n";
            }
            break;
        }
        case 9: {
            bool has = std::find(ref.begin(), ref.end(), v) != ref.end();
            body << "    assert(" << (has ? "" : "!") << "l.contains(" << v << "));\n";
            break;
        }
        default:
            if (pick(0, 3) == 0) {
                body << "    l.clear();\n";
                ref.clear();
            }
            body << "    assert(l.size() == " << ref.size() << ");\n";
            body << "    assert(" << (ref.empty() ? "" : "!") << "l.isEmpty());\n";
            break;
        }
    }
    ListScenario s;
    s.source = "#include <QList>\nint main() {\n    QList<int> l;\n" + body.str() + "    return 0;\n}\n";
    s.violation = violation;
    return s;
}

} // namespace

TEST_CASE("QList model behaves like a bounded deque")
{
    std::mt19937_64 rng(4242);
    int violations = 0;
    for (int round = 0; round < 400; ++round) {
        unsigned capacity = 1 + static_cast<unsigned>(round % 4);
        auto s = random_list_session(rng, capacity);
        VerifierConfig c = testing::model_config();
        c.containerCapacity = capacity;
        INFO(s.source);
        INFO("capacity " << capacity);

        auto p = gotoir::lower_to_goto(frontend::load_source(s.source, "session.mqt", c));
        auto run = symex::interpret(p, {});
        if (s.violation) {
            ++violations;
            REQUIRE(run.verdict == symex::Verdict::AssertionViolated);
            CHECK(run.message == *s.violation);
        } else {
            CHECK(run.verdict == symex::Verdict::Completed);
        }

        // The symbolic route must agree on a sample.
        if (round % 8 == 0) {
            auto r = harness::verify_source(s.source, "session.mqt", c);
            if (s.violation) {
                REQUIRE(r.verdict == harness::Verdict::Failed);
                CHECK(r.counterexample->violated.message == *s.violation);
            } else {
                CHECK(r.verdict == harness::Verdict::Successful);
            }
        }
    }
    CHECK(violations > 50);
}

TEST_CASE("SSA definitions are unique across the corpus")
{
    auto c = testing::model_config();
    for (const auto &file : testing::corpus_files()) {
        INFO(file);
        auto ssa = symex::symex(gotoir::lower_to_goto(frontend::load_program(file, c)), c);
        CHECK(symex::find_duplicate_definitions(ssa).empty());
    }
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        VerifierConfig g;
        g.intWidth = 4;
        g.unwind = 5;
        auto prog = testing::generate_program(seed);
        auto ssa = symex::symex(gotoir::lower_to_goto(frontend::load_source(prog.source, "gen.mqt", g)), g);
        INFO(prog.source);
        CHECK(symex::find_duplicate_definitions(ssa).empty());
    }
}

TEST_CASE("claim guards hold exactly on concretely reached paths")
{
    VerifierConfig g;
    g.intWidth = 4;
    g.unwind = 5;
    std::size_t checkedClaims = 0;
    for (std::uint64_t seed = 0; seed < 150; ++seed) {
        auto prog = testing::generate_program(seed);
        INFO(prog.source);
        auto p = gotoir::lower_to_goto(frontend::load_source(prog.source, "gen.mqt", g));
        auto ssa = symex::symex(p, g);
        const auto &tm = *ssa.terms;
        for (const auto &inputs : testing::all_inputs(prog.nondetCount, 4)) {
            auto run = symex::interpret(p, inputs);
            if (run.verdict == symex::Verdict::AssumeBlocked)
                continue;
            REQUIRE(run.verdict != symex::Verdict::StepLimit);

            // Evaluate the SSA system under the same inputs.
            std::unordered_map<smt::TermRef, std::uint64_t> values;
            REQUIRE(ssa.inputs.size() == prog.nondetCount);
            for (std::size_t i = 0; i < ssa.inputs.size(); ++i)
                values[ssa.inputs[i].term] = smt::bv_from_signed(inputs[i], 4);
            for (const auto &eq : ssa.equations)
                values[eq.lhsTerm] = tm.evaluate(eq.rhs, values);

            std::set<std::pair<std::string, std::size_t>> visited(run.visited.begin(), run.visited.end());
            const symex::SsaClaim *firstViolated = nullptr;
            for (const auto &cl : ssa.claims) {
                if (cl.property == PropertyClass::Unwinding)
                    continue;
                bool guard = tm.evaluate(cl.guard, values) != 0;
                bool holds = tm.evaluate(cl.condition, values) != 0;
                if (guard && !holds && !firstViolated)
                    firstViolated = &cl;
                if (guard && !firstViolated) {
                    CHECK(visited.count({cl.function, cl.pc}) == 1);
                    ++checkedClaims;
                }
            }
            if (run.verdict == symex::Verdict::AssertionViolated) {
                REQUIRE(firstViolated != nullptr);
                CHECK(firstViolated->message == run.message);
                CHECK(firstViolated->loc.line == run.loc.line);
            } else {
                CHECK(firstViolated == nullptr);
            }
        }
    }
    CHECK(checkedClaims > 1000);
}

TEST_CASE("AST evaluator and GOTO interpreter agree on generated programs")
{
    VerifierConfig g;
    g.intWidth = 4;
    std::map<testing::AstOutcome::Kind, int> seen;
    for (std::uint64_t seed = 1000; seed < 1300; ++seed) {
        auto prog = testing::generate_program(seed);
        INFO(prog.source);
        auto ast = frontend::load_source(prog.source, "gen.mqt", g);
        auto p = gotoir::lower_to_goto(ast);
        for (const auto &inputs : testing::all_inputs(prog.nondetCount, 4)) {
            auto a = testing::evaluate_ast(ast, inputs);
            auto b = symex::interpret(p, inputs);
            ++seen[a.kind];
            switch (a.kind) {
            case testing::AstOutcome::Kind::Completed:
                CHECK(b.verdict == symex::Verdict::Completed);
                break;
            case testing::AstOutcome::Kind::Blocked:
                CHECK(b.verdict == symex::Verdict::AssumeBlocked);
                break;
            case testing::AstOutcome::Kind::Violated:
                REQUIRE(b.verdict == symex::Verdict::AssertionViolated);
                CHECK(b.message == a.message);
                CHECK(b.loc.line == a.loc.line);
                break;
            case testing::AstOutcome::Kind::StepLimit:
                FAIL("generated programs terminate");
            }
        }
    }
    CHECK(seen[testing::AstOutcome::Kind::Completed] > 0);
    CHECK(seen[testing::AstOutcome::Kind::Violated] > 0);
    CHECK(seen[testing::AstOutcome::Kind::Blocked] > 0);
}
