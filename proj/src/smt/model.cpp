#include "miniqt/smt/backend.hpp"

namespace miniqt::smt {

std::vector<std::int64_t> Counterexample::input_sequence() const
{
    std::vector<std::int64_t> seq;
    seq.reserve(inputValues.size());
    for (const auto &[name, value] : inputValues)
        seq.push_back(value);
    return seq;
}

namespace {

std::int64_t signed_value(const TermManager &tm, TermRef t, std::uint64_t raw)
{
    Sort s = tm.sort(t);
    return s.is_bool() ? static_cast<std::int64_t>(raw) : bv_to_signed(raw, s.width);
}

std::string render(const TermManager &tm, TermRef t, std::uint64_t raw)
{
    if (tm.sort(t).is_bool())
        return raw ? "true" : "false";
    return std::to_string(signed_value(tm, t, raw));
}

} // namespace

Counterexample eval_model(const SolveResult &result, const symex::SsaSystem &ssa, const Cnf &cnf)
{
    if (result.status != SolveStatus::Sat)
        throw Error("ModelError", "eval_model requires a satisfiable result");
    const TermManager &tm = *ssa.terms;

    std::unordered_map<TermRef, std::uint64_t> values;
    for (const auto &[term, bits] : cnf.varMap) {
        std::uint64_t v = 0;
        for (std::size_t i = 0; i < bits.size(); ++i)
            if (result.value(bits[i]))
                v |= std::uint64_t{1} << i;
        values[term] = v;
    }
    // Variables that simplification removed from the formula take the value
    // their defining equation gives them; inputs default to 0.
    for (const auto &eq : ssa.equations)
        if (!values.count(eq.lhsTerm))
            values[eq.lhsTerm] = tm.evaluate(eq.rhs, values);

    const symex::SsaClaim *violated = nullptr;
    for (const auto &c : ssa.claims) {
        if (tm.evaluate(c.guard, values) && !tm.evaluate(c.condition, values)) {
            violated = &c;
            break;
        }
    }
    if (!violated)
        throw NoViolatedClaim();

    Counterexample cex;
    cex.violated = {violated->message, violated->loc, violated->property};

    std::size_t call = 0;
    auto flush_calls = [&](std::size_t upto) {
        for (; call < ssa.calls.size() && ssa.calls[call].position <= upto; ++call) {
            const auto &m = ssa.calls[call];
            if (!tm.evaluate(m.guard, values))
                continue;
            TraceStep s;
            s.kind = TraceStep::Kind::Call;
            s.loc = m.loc;
            s.name = m.callee;
            cex.steps.push_back(std::move(s));
        }
    };
    for (std::size_t i = 0; i <= violated->position && i <= ssa.equations.size(); ++i) {
        flush_calls(i);
        if (i == violated->position || i == ssa.equations.size())
            break;
        const auto &eq = ssa.equations[i];
        if (eq.hidden || !tm.evaluate(eq.guard, values) || !tm.evaluate(eq.visibleWhen, values))
            continue;
        std::uint64_t raw = tm.evaluate(eq.lhsTerm, values);
        TraceStep s;
        s.loc = eq.loc;
        s.name = eq.lhs.baseName;
        s.value = render(tm, eq.lhsTerm, raw);
        s.raw = signed_value(tm, eq.lhsTerm, raw);
        cex.steps.push_back(std::move(s));
    }

    for (const auto &in : ssa.inputs) {
        if (in.position > violated->position || !tm.evaluate(in.guard, values))
            continue;
        cex.inputValues.emplace_back(in.var.full_name(),
                                     signed_value(tm, in.term, tm.evaluate(in.term, values)));
    }
    return cex;
}

} // namespace miniqt::smt
