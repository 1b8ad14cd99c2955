#include "miniqt/symex/interpreter.hpp"

#include "miniqt/symex/symex.hpp"

#include <map>
#include <memory>

namespace miniqt::symex {

using gotoir::GotoExpr;
using gotoir::GotoExprKind;
using gotoir::GotoFunction;
using gotoir::GotoInstruction;
using gotoir::GotoProgram;
using gotoir::InstrKind;
using gotoir::LoopRole;

std::string to_string(Verdict v)
{
    switch (v) {
    case Verdict::Completed:
        return "completed";
    case Verdict::AssertionViolated:
        return "assertion-violated";
    case Verdict::AssumeBlocked:
        return "assume-blocked";
    case Verdict::StepLimit:
        return "step-limit";
    }
    return "?";
}

namespace {

struct Object {
    std::map<std::string, std::int64_t> scalars;
    std::map<std::string, std::vector<std::int64_t>> arrays;
};

struct Slot {
    std::int64_t scalar = 0;
    std::shared_ptr<Object> object;
};

struct Frame {
    const GotoFunction *fn = nullptr;
    std::map<std::string, Slot> vars;
    Object *self = nullptr;
    std::map<int, unsigned> iterations;
};

struct Halt {
    Verdict verdict;
    std::string message;
    SourceLocation loc;
    PropertyClass property;
};

class Machine {
  public:
    Machine(const GotoProgram &p, const std::vector<std::int64_t> &inputs,
            const InterpreterOptions &options)
        : prog_(p), inputs_(inputs), opt_(options), width_(p.intWidth)
    {
    }

    Execution run()
    {
        Execution ex;
        try {
            const auto &entry = prog_.functions.at(prog_.entry);
            Frame f;
            f.fn = &entry;
            depth_[entry.name] = 1;
            execute(f);
            ex.verdict = Verdict::Completed;
        } catch (const Halt &h) {
            ex.verdict = h.verdict;
            ex.message = h.message;
            ex.loc = h.loc;
            ex.property = h.property;
        }
        ex.inputsConsumed = next_;
        ex.steps = steps_;
        ex.visited = std::move(visited_);
        return ex;
    }

  private:
    std::int64_t wrap(std::uint64_t v) const
    {
        std::uint64_t mask = (std::uint64_t{1} << width_) - 1;
        v &= mask;
        if (v >> (width_ - 1))
            v |= ~mask;
        return static_cast<std::int64_t>(v);
    }

    std::shared_ptr<Object> make_object(const std::string &cls)
    {
        auto obj = std::make_shared<Object>();
        for (const auto &[name, t] : prog_.classes.at(cls).fields) {
            if (t.is_array())
                obj->arrays[name].assign(t.capacity, 0);
            else
                obj->scalars[name] = 0;
        }
        return obj;
    }

    Object &object(Frame &f, const GotoExpr &e)
    {
        if (e.kind == GotoExprKind::Symbol) {
            if (e.name == "this")
                return *f.self;
            return *f.vars.at(e.name).object;
        }
        throw Error("InterpreterError", "unsupported object expression");
    }

    std::vector<std::int64_t> &array(Frame &f, const GotoExpr &e)
    {
        return object(f, e.ops[0]).arrays.at(e.name);
    }

    std::int64_t eval(Frame &f, const GotoExpr &e)
    {
        switch (e.kind) {
        case GotoExprKind::Const:
            return e.type.is_bool() ? (e.value != 0) : wrap(static_cast<std::uint64_t>(e.value));
        case GotoExprKind::Symbol:
            return f.vars[e.name].scalar;
        case GotoExprKind::Member:
            return object(f, e.ops[0]).scalars.at(e.name);
        case GotoExprKind::Index: {
            auto &arr = array(f, e.ops[0]);
            std::int64_t i = eval(f, e.ops[1]);
            if (i < 0 || i >= static_cast<std::int64_t>(arr.size()))
                return 0;
            return arr[static_cast<std::size_t>(i)];
        }
        case GotoExprKind::Unary: {
            std::int64_t a = eval(f, e.ops[0]);
            if (e.name == "!")
                return !a;
            return wrap(0 - static_cast<std::uint64_t>(a));
        }
        case GotoExprKind::Binary:
            return binary(e.name, eval(f, e.ops[0]), eval(f, e.ops[1]));
        case GotoExprKind::Nondet: {
            if (next_ >= inputs_.size())
                throw NondetUnderflow();
            return wrap(static_cast<std::uint64_t>(inputs_[next_++]));
        }
        }
        return 0;
    }

    std::int64_t binary(const std::string &op, std::int64_t a, std::int64_t b) const
    {
        auto ua = static_cast<std::uint64_t>(a);
        auto ub = static_cast<std::uint64_t>(b);
        if (op == "&&")
            return a && b;
        if (op == "||")
            return a || b;
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
        if (op == "+")
            return wrap(ua + ub);
        if (op == "-")
            return wrap(ua - ub);
        if (op == "*")
            return wrap(ua * ub);
        if (op == "/") {
            if (b == 0)
                return a < 0 ? 1 : -1;
            return wrap(static_cast<std::uint64_t>(a / b));
        }
        if (op == "%") {
            if (b == 0)
                return a;
            return wrap(static_cast<std::uint64_t>(a % b));
        }
        throw Error("InterpreterError", "unknown operator " + op);
    }

    void store(Frame &f, const GotoExpr &lhs, std::int64_t v)
    {
        switch (lhs.kind) {
        case GotoExprKind::Symbol:
            f.vars[lhs.name].scalar = v;
            return;
        case GotoExprKind::Member:
            object(f, lhs.ops[0]).scalars.at(lhs.name) = v;
            return;
        case GotoExprKind::Index: {
            auto &arr = array(f, lhs.ops[0]);
            std::int64_t i = eval(f, lhs.ops[1]);
            if (i >= 0 && i < static_cast<std::int64_t>(arr.size()))
                arr[static_cast<std::size_t>(i)] = v;
            return;
        }
        default:
            throw Error("InterpreterError", "unsupported assignment target");
        }
    }

    [[noreturn]] void halt(Verdict v, std::string msg, const SourceLocation &loc,
                           PropertyClass pc = PropertyClass::UserAssertion)
    {
        throw Halt{v, std::move(msg), loc, pc};
    }

    void unwinding_stop(const std::string &msg, const SourceLocation &loc)
    {
        if (opt_.unwindingAssertions)
            halt(Verdict::AssertionViolated, msg, loc, PropertyClass::Unwinding);
        halt(Verdict::AssumeBlocked, "", loc);
    }

    std::int64_t execute(Frame &f)
    {
        const auto &body = f.fn->body;
        std::map<std::size_t, int> loopAtHead;
        for (const auto &in : body)
            if (in.loopRole == LoopRole::BackEdge)
                loopAtHead[in.target] = in.loopId;

        std::int64_t result = 0;
        std::size_t pc = 0;
        bool viaBackEdge = false;
        for (;;) {
            if (++steps_ > opt_.stepLimit)
                halt(Verdict::StepLimit, "", body[pc].loc);
            if (auto h = loopAtHead.find(pc); h != loopAtHead.end() && !viaBackEdge)
                f.iterations[h->second] = 0;
            viaBackEdge = false;
            visited_.emplace_back(f.fn->name, pc);
            const GotoInstruction &in = body[pc];
            switch (in.kind) {
            case InstrKind::Skip:
                break;
            case InstrKind::EndFunction:
                return result;
            case InstrKind::Decl:
                if (in.type.is_class())
                    f.vars[in.var].object = make_object(in.type.className);
                else
                    f.vars[in.var].scalar = 0;
                break;
            case InstrKind::Assign:
                store(f, *in.lhs, eval(f, *in.rhs));
                break;
            case InstrKind::Assume:
                if (!eval(f, in.cond))
                    halt(Verdict::AssumeBlocked, "", in.loc);
                break;
            case InstrKind::Assert:
                if (!eval(f, in.cond))
                    halt(Verdict::AssertionViolated, in.message, in.loc, in.property);
                break;
            case InstrKind::Return:
                if (in.rhs)
                    result = eval(f, *in.rhs);
                return result;
            case InstrKind::Call:
                call(f, in);
                break;
            case InstrKind::Goto: {
                bool taken = eval(f, in.cond) != 0;
                if (in.loopRole == LoopRole::ExitTest && opt_.unwind && !taken &&
                    f.iterations[in.loopId] >= *opt_.unwind)
                    unwinding_stop(kUnwindingMessage, in.loc);
                if (taken) {
                    if (in.loopRole == LoopRole::BackEdge) {
                        ++f.iterations[in.loopId];
                        viaBackEdge = true;
                    }
                    pc = in.target;
                    continue;
                }
                break;
            }
            }
            ++pc;
        }
    }

    void call(Frame &f, const GotoInstruction &in)
    {
        const GotoFunction &callee = prog_.functions.at(in.callee);
        unsigned &depth = depth_[callee.name];
        if (opt_.unwind && depth + 1 > *opt_.unwind + 1)
            unwinding_stop(kRecursionMessage, in.loc);
        Frame sub;
        sub.fn = &callee;
        for (std::size_t i = 0; i < callee.params.size(); ++i) {
            const auto &param = callee.params[i];
            const GotoExpr &arg = in.args.at(i);
            if (param.name == "this")
                sub.self = &object(f, arg);
            else if (param.type.is_scalar())
                sub.vars[param.name].scalar = eval(f, arg);
        }
        ++depth;
        std::int64_t r = execute(sub);
        --depth_[callee.name];
        if (in.lhs && callee.returnType.is_scalar())
            store(f, *in.lhs, r);
    }

    const GotoProgram &prog_;
    const std::vector<std::int64_t> &inputs_;
    const InterpreterOptions &opt_;
    unsigned width_;
    std::size_t next_ = 0;
    std::size_t steps_ = 0;
    std::map<std::string, unsigned> depth_;
    std::vector<std::pair<std::string, std::size_t>> visited_;
};

} // namespace

Execution interpret(const GotoProgram &p, const std::vector<std::int64_t> &inputs,
                    const InterpreterOptions &options)
{
    return Machine(p, inputs, options).run();
}

} // namespace miniqt::symex
