#include "miniqt/symex/symex.hpp"

#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

namespace miniqt::symex {

using gotoir::GotoExpr;
using gotoir::GotoExprKind;
using gotoir::GotoFunction;
using gotoir::GotoInstruction;
using gotoir::GotoProgram;
using gotoir::InstrKind;
using gotoir::LoopRole;
using smt::Sort;

namespace {

struct State {
    std::vector<TermRef> guard; // conjuncts
    std::map<std::string, TermRef> values;
    bool dead = false;
};

struct Frame {
    const GotoFunction *fn = nullptr;
    std::string prefix;
    std::string thisPath;
    std::map<int, unsigned> iterations;
    std::set<int> finalPass;
};

bool is_hidden_name(const std::string &leaf) { return leaf.find('$') != std::string::npos; }

class Executor {
  public:
    Executor(const GotoProgram &p, const VerifierConfig &config, ResourceGuard *guard)
        : prog_(p), config_(config), resources_(guard)
    {
        out_.terms = std::make_shared<smt::TermManager>();
        out_.intWidth = p.intWidth;
        tm_ = out_.terms.get();
    }

    SsaSystem run()
    {
        auto it = prog_.functions.find(prog_.entry);
        if (it == prog_.functions.end())
            throw Error("SymexError", "entry function '" + prog_.entry + "' not found");
        Frame frame;
        frame.fn = &it->second;
        frame.prefix = it->second.name;
        active_.push_back(it->second.name);
        execute(frame, State{});
        return std::move(out_);
    }

  private:
    // ---- helpers -----------------------------------------------------------

    Sort sort_of(const SemType &t) const
    {
        return t.is_bool() || (t.is_array() && t.elem == SemType::Kind::Bool)
                   ? Sort::boolean()
                   : Sort::bv(prog_.intWidth);
    }

    TermRef zero(const SemType &t)
    {
        Sort s = sort_of(t);
        return s.is_bool() ? tm_->mk_false() : tm_->mk_bv(s.width, 0);
    }

    TermRef guard_term(const State &st) { return tm_->mk_and(st.guard); }

    static void add_conjunct(State &st, TermRef c, smt::TermManager &tm)
    {
        if (tm.is_true(c))
            return;
        if (tm.is_false(c)) {
            st.dead = true;
            return;
        }
        st.guard.push_back(c);
    }

    SsaVariable fresh(const std::string &leaf) { return {leaf, ++versions_[leaf]}; }

    TermRef define(State &st, const std::string &leaf, Sort sort, TermRef rhs,
                   const SourceLocation &loc, EquationKind kind, bool hidden,
                   TermRef visibleWhen, TermRef guard)
    {
        SsaEquation eq;
        eq.guard = guard;
        eq.lhs = fresh(leaf);
        eq.lhsTerm = tm_->mk_var(eq.lhs.full_name(), sort);
        eq.rhs = rhs;
        eq.loc = loc;
        eq.kind = kind;
        eq.hidden = hidden || is_hidden_name(leaf);
        eq.visibleWhen = visibleWhen;
        TermRef value = tm_->is_const(rhs) ? rhs : eq.lhsTerm;
        out_.equations.push_back(std::move(eq));
        st.values[leaf] = value;
        return value;
    }

    void assign_leaf(State &st, const std::string &leaf, TermRef rhs, const SourceLocation &loc,
                     EquationKind kind, bool hidden = false)
    {
        define(st, leaf, tm_->sort(rhs), rhs, loc, kind, hidden, tm_->mk_true(), guard_term(st));
    }

    TermRef read_leaf(const State &st, const std::string &leaf, const SemType &t)
    {
        auto it = st.values.find(leaf);
        return it == st.values.end() ? zero(t) : it->second;
    }

    static std::string element_leaf(const std::string &array, std::int64_t i)
    {
        return array + "[" + std::to_string(i) + "]";
    }

    std::string local(const Frame &fr, const std::string &name) const
    {
        return fr.prefix + "::" + name;
    }

    std::string object_path(const Frame &fr, const GotoExpr &e) const
    {
        if (e.kind == GotoExprKind::Symbol)
            return e.name == "this" ? fr.thisPath : local(fr, e.name);
        throw Error("SymexError", "unsupported object expression " + gotoir::to_string(e));
    }

    std::string array_path(const Frame &fr, const GotoExpr &arr) const
    {
        if (arr.kind == GotoExprKind::Member)
            return object_path(fr, arr.ops[0]) + "." + arr.name;
        throw Error("SymexError", "unsupported array expression " + gotoir::to_string(arr));
    }

    // ---- expressions -------------------------------------------------------

    TermRef eval(const Frame &fr, State &st, const GotoExpr &e, const SourceLocation &loc)
    {
        switch (e.kind) {
        case GotoExprKind::Const:
            if (e.type.is_bool())
                return tm_->mk_bool(e.value != 0);
            return tm_->mk_bv(prog_.intWidth, e.value);
        case GotoExprKind::Symbol:
            return read_leaf(st, local(fr, e.name), e.type);
        case GotoExprKind::Member:
            return read_leaf(st, object_path(fr, e.ops[0]) + "." + e.name, e.type);
        case GotoExprKind::Index: {
            std::string arr = array_path(fr, e.ops[0]);
            unsigned cap = e.ops[0].type.capacity;
            TermRef idx = eval(fr, st, e.ops[1], loc);
            if (tm_->is_const(idx)) {
                std::int64_t i = tm_->const_value(idx);
                if (i < 0 || i >= static_cast<std::int64_t>(cap))
                    return zero(e.type);
                return read_leaf(st, element_leaf(arr, i), e.type);
            }
            TermRef result = zero(e.type);
            for (unsigned j = cap; j-- > 0;) {
                TermRef hit = tm_->mk_eq(idx, tm_->mk_bv(prog_.intWidth, j));
                result = tm_->mk_ite(hit, read_leaf(st, element_leaf(arr, j), e.type), result);
            }
            return result;
        }
        case GotoExprKind::Unary: {
            TermRef a = eval(fr, st, e.ops[0], loc);
            return e.name == "!" ? tm_->mk_not(a) : tm_->mk_neg(a);
        }
        case GotoExprKind::Binary: {
            TermRef a = eval(fr, st, e.ops[0], loc);
            TermRef b = eval(fr, st, e.ops[1], loc);
            const std::string &op = e.name;
            if (op == "&&")
                return tm_->mk_and(a, b);
            if (op == "||")
                return tm_->mk_or(a, b);
            if (op == "==")
                return tm_->mk_eq(a, b);
            if (op == "!=")
                return tm_->mk_not(tm_->mk_eq(a, b));
            if (op == "<")
                return tm_->mk_slt(a, b);
            if (op == "<=")
                return tm_->mk_sle(a, b);
            if (op == ">")
                return tm_->mk_slt(b, a);
            if (op == ">=")
                return tm_->mk_sle(b, a);
            if (op == "+")
                return tm_->mk_add(a, b);
            if (op == "-")
                return tm_->mk_sub(a, b);
            if (op == "*")
                return tm_->mk_mul(a, b);
            if (op == "/")
                return tm_->mk_sdiv(a, b);
            if (op == "%")
                return tm_->mk_srem(a, b);
            throw Error("SymexError", "unknown operator " + op);
        }
        case GotoExprKind::Nondet: {
            SsaInput in;
            in.var = fresh("nondet_int");
            in.term = tm_->mk_var(in.var.full_name(), sort_of(e.type));
            in.guard = guard_term(st);
            in.loc = loc;
            in.position = out_.equations.size();
            out_.inputs.push_back(in);
            return in.term;
        }
        }
        throw Error("SymexError", "unsupported expression");
    }

    void assign(Frame &fr, State &st, const GotoExpr &lhs, TermRef rhs, const SourceLocation &loc)
    {
        switch (lhs.kind) {
        case GotoExprKind::Symbol:
            assign_leaf(st, local(fr, lhs.name), rhs, loc, EquationKind::Assignment);
            return;
        case GotoExprKind::Member:
            assign_leaf(st, object_path(fr, lhs.ops[0]) + "." + lhs.name, rhs, loc,
                        EquationKind::Assignment);
            return;
        case GotoExprKind::Index: {
            std::string arr = array_path(fr, lhs.ops[0]);
            unsigned cap = lhs.ops[0].type.capacity;
            TermRef idx = eval(fr, st, lhs.ops[1], loc);
            if (tm_->is_const(idx)) {
                std::int64_t i = tm_->const_value(idx);
                if (i >= 0 && i < static_cast<std::int64_t>(cap))
                    assign_leaf(st, element_leaf(arr, i), rhs, loc, EquationKind::Assignment);
                return;
            }
            TermRef g = guard_term(st);
            for (unsigned j = 0; j < cap; ++j) {
                std::string leaf = element_leaf(arr, j);
                TermRef hit = tm_->mk_eq(idx, tm_->mk_bv(prog_.intWidth, j));
                TermRef old = read_leaf(st, leaf, lhs.type);
                define(st, leaf, tm_->sort(rhs), tm_->mk_ite(hit, rhs, old), loc,
                       EquationKind::Assignment, false, hit, g);
            }
            return;
        }
        default:
            throw Error("SymexError", "unsupported assignment target " + gotoir::to_string(lhs));
        }
    }

    void declare(Frame &fr, State &st, const std::string &leaf, const SemType &t,
                 const SourceLocation &loc)
    {
        if (t.is_scalar()) {
            assign_leaf(st, leaf, zero(t), loc, EquationKind::Declaration, true);
            return;
        }
        if (!t.is_class())
            return;
        const auto &layout = prog_.classes.at(t.className);
        for (const auto &[field, ft] : layout.fields) {
            std::string path = leaf + "." + field;
            if (ft.is_array()) {
                for (unsigned j = 0; j < ft.capacity; ++j)
                    assign_leaf(st, element_leaf(path, j), zero(ft.element()), loc,
                                EquationKind::Declaration, true);
            } else {
                declare(fr, st, path, ft, loc);
            }
        }
    }

    void claim(const Frame &fr, std::size_t pc, State &st, TermRef cond, const std::string &msg,
               PropertyClass property, const SourceLocation &loc)
    {
        SsaClaim c;
        c.guard = guard_term(st);
        c.condition = cond;
        c.message = msg;
        c.property = property;
        c.loc = loc;
        c.position = out_.equations.size();
        c.function = fr.fn->name;
        c.pc = pc;
        out_.claims.push_back(std::move(c));
    }

    // ---- control flow ------------------------------------------------------

    State merge(State a, State b)
    {
        if (a.dead)
            return b;
        if (b.dead)
            return a;
        std::size_t common = 0;
        while (common < a.guard.size() && common < b.guard.size() &&
               a.guard[common] == b.guard[common])
            ++common;
        std::vector<TermRef> sa(a.guard.begin() + common, a.guard.end());
        std::vector<TermRef> sb(b.guard.begin() + common, b.guard.end());
        TermRef ga = tm_->mk_and(sa);
        TermRef gb = tm_->mk_and(sb);
        // Selects a's values; paths reaching a join point are disjoint.
        TermRef pickA = !sa.empty() ? ga : !sb.empty() ? tm_->mk_not(gb) : tm_->mk_true();

        State m;
        m.guard.assign(a.guard.begin(), a.guard.begin() + common);
        TermRef disj = tm_->mk_or(ga, gb);
        if (!tm_->is_true(disj)) {
            const auto &n = tm_->node(disj);
            if (n.op == smt::Op::Or) {
                SsaEquation eq;
                eq.guard = tm_->mk_true();
                eq.lhs = fresh("$guard");
                eq.lhsTerm = tm_->mk_var(eq.lhs.full_name(), Sort::boolean());
                eq.rhs = disj;
                eq.kind = EquationKind::GuardDef;
                eq.hidden = true;
                eq.visibleWhen = tm_->mk_true();
                disj = eq.lhsTerm;
                out_.equations.push_back(std::move(eq));
            }
            m.guard.push_back(disj);
        }

        auto ia = a.values.begin();
        auto ib = b.values.begin();
        while (ia != a.values.end() || ib != b.values.end()) {
            if (ib == b.values.end() || (ia != a.values.end() && ia->first < ib->first)) {
                m.values.insert(*ia++);
            } else if (ia == a.values.end() || ib->first < ia->first) {
                m.values.insert(*ib++);
            } else {
                TermRef va = ia->second, vb = ib->second;
                if (va == vb) {
                    m.values.emplace(ia->first, va);
                } else {
                    TermRef phi = tm_->mk_ite(pickA, va, vb);
                    if (tm_->is_const(phi)) {
                        m.values.emplace(ia->first, phi);
                    } else {
                        SsaEquation eq;
                        eq.guard = tm_->mk_true();
                        eq.lhs = fresh(ia->first);
                        eq.lhsTerm = tm_->mk_var(eq.lhs.full_name(), tm_->sort(va));
                        eq.rhs = phi;
                        eq.kind = EquationKind::Phi;
                        eq.hidden = true;
                        eq.visibleWhen = tm_->mk_true();
                        m.values.emplace(ia->first, eq.lhsTerm);
                        out_.equations.push_back(std::move(eq));
                    }
                }
                ++ia;
                ++ib;
            }
        }
        return m;
    }

    static void park(std::map<std::size_t, State> &pending, std::size_t target, State st,
                     Executor &ex)
    {
        auto it = pending.find(target);
        if (it == pending.end())
            pending.emplace(target, std::move(st));
        else
            it->second = ex.merge(std::move(it->second), std::move(st));
    }

    State execute(Frame &fr, State st)
    {
        const auto &body = fr.fn->body;
        std::map<std::size_t, int> loopAtHead;
        for (const auto &in : body)
            if (in.loopRole == LoopRole::BackEdge)
                loopAtHead[in.target] = in.loopId;

        std::map<std::size_t, State> pending;
        std::size_t endIndex = body.size() - 1;
        std::size_t pc = 0;
        bool viaBackEdge = false;

        for (;;) {
            if (resources_)
                resources_->poll();
            if (auto it = pending.find(pc); it != pending.end()) {
                st = merge(std::move(st), std::move(it->second));
                pending.erase(it);
            }
            if (st.dead) {
                if (pending.empty())
                    return st;
                auto first = pending.begin();
                pc = first->first;
                st = std::move(first->second);
                pending.erase(first);
                viaBackEdge = false;
                continue;
            }
            if (auto h = loopAtHead.find(pc); h != loopAtHead.end() && !viaBackEdge) {
                fr.iterations[h->second] = 0;
                if (config_.unwind == 0)
                    fr.finalPass.insert(h->second);
                else
                    fr.finalPass.erase(h->second);
            }
            viaBackEdge = false;

            const GotoInstruction &in = body[pc];
            switch (in.kind) {
            case InstrKind::Skip:
                break;
            case InstrKind::EndFunction:
                return st;
            case InstrKind::Decl:
                declare(fr, st, local(fr, in.var), in.type, in.loc);
                break;
            case InstrKind::Assign: {
                TermRef rhs = eval(fr, st, *in.rhs, in.loc);
                assign(fr, st, *in.lhs, rhs, in.loc);
                break;
            }
            case InstrKind::Assume:
                add_conjunct(st, eval(fr, st, in.cond, in.loc), *tm_);
                break;
            case InstrKind::Assert: {
                TermRef c = eval(fr, st, in.cond, in.loc);
                claim(fr, pc, st, c, in.message, in.property, in.loc);
                break;
            }
            case InstrKind::Return:
                if (in.rhs) {
                    TermRef v = eval(fr, st, *in.rhs, in.loc);
                    assign_leaf(st, local(fr, "$return"), v, in.loc, EquationKind::ReturnValue);
                }
                park(pending, endIndex, std::move(st), *this);
                st = State{};
                st.dead = true;
                break;
            case InstrKind::Call:
                call(fr, st, in);
                break;
            case InstrKind::Goto:
                if (in.target <= pc) {
                    if (in.loopRole != LoopRole::BackEdge || !in.unconditional())
                        throw Error("SymexError", "unstructured backward jump in " + fr.fn->name);
                    unsigned &count = fr.iterations[in.loopId];
                    if (++count >= config_.unwind)
                        fr.finalPass.insert(in.loopId);
                    pc = in.target;
                    viaBackEdge = true;
                    continue;
                }
                jump(fr, pc, st, in, pending);
                break;
            }
            ++pc;
        }
    }

    void jump(Frame &fr, std::size_t pc, State &st, const GotoInstruction &in,
              std::map<std::size_t, State> &pending)
    {
        TermRef g = eval(fr, st, in.cond, in.loc);
        bool finalExit = in.loopRole == LoopRole::ExitTest && fr.finalPass.count(in.loopId);
        if (finalExit) {
            if (config_.unwindingAssertions)
                claim(fr, pc, st, g, kUnwindingMessage, PropertyClass::Unwinding, in.loc);
            add_conjunct(st, g, *tm_);
            fr.finalPass.erase(in.loopId);
            if (!st.dead)
                park(pending, in.target, std::move(st), *this);
            st = State{};
            st.dead = true;
            return;
        }
        if (tm_->is_false(g))
            return;
        State taken = st;
        add_conjunct(taken, g, *tm_);
        park(pending, in.target, std::move(taken), *this);
        add_conjunct(st, tm_->mk_not(g), *tm_);
    }

    void call(Frame &fr, State &st, const GotoInstruction &in)
    {
        auto it = prog_.functions.find(in.callee);
        if (it == prog_.functions.end())
            throw Error("SymexError", "call to unknown function '" + in.callee + "'");
        const GotoFunction &callee = it->second;

        std::size_t depth = 1;
        for (const auto &name : active_)
            depth += name == callee.name;
        if (depth > config_.unwind + 1) {
            if (config_.unwindingAssertions)
                claim(fr, 0, st, tm_->mk_false(), kRecursionMessage, PropertyClass::Unwinding,
                      in.loc);
            st.dead = true;
            return;
        }

        Frame sub;
        sub.fn = &callee;
        sub.prefix = depth == 1 ? callee.name : callee.name + "@" + std::to_string(depth);

        SsaCall marker;
        marker.guard = guard_term(st);
        marker.callee = callee.name;
        marker.loc = in.loc;
        marker.position = out_.equations.size();
        out_.calls.push_back(marker);

        std::size_t argIndex = 0;
        for (const auto &param : callee.params) {
            const GotoExpr &arg = in.args.at(argIndex++);
            if (param.name == "this") {
                sub.thisPath = object_path(fr, arg);
                continue;
            }
            if (!param.type.is_scalar())
                continue;
            TermRef v = eval(fr, st, arg, in.loc);
            assign_leaf(st, local(sub, param.name), v, in.loc, EquationKind::Parameter);
        }
        std::string retLeaf = local(sub, "$return");
        if (callee.returnType.is_scalar())
            st.values[retLeaf] = zero(callee.returnType);

        active_.push_back(callee.name);
        State after = execute(sub, std::move(st));
        active_.pop_back();

        TermRef ret = callee.returnType.is_scalar() ? read_leaf(after, retLeaf, callee.returnType)
                                                    : TermRef{};
        std::string scope = sub.prefix + "::";
        for (auto v = after.values.lower_bound(scope);
             v != after.values.end() && v->first.compare(0, scope.size(), scope) == 0;)
            v = after.values.erase(v);
        st = std::move(after);
        if (st.dead)
            return;
        if (in.lhs && callee.returnType.is_scalar())
            assign(fr, st, *in.lhs, ret, in.loc);
    }

    const GotoProgram &prog_;
    const VerifierConfig &config_;
    ResourceGuard *resources_;
    SsaSystem out_;
    smt::TermManager *tm_;
    std::unordered_map<std::string, unsigned> versions_;
    std::vector<std::string> active_;
};

} // namespace

SsaSystem symex(const GotoProgram &p, const VerifierConfig &config, ResourceGuard *guard)
{
    return Executor(p, config, guard).run();
}

std::string format_ssa(const SsaSystem &ssa)
{
    const auto &tm = *ssa.terms;
    std::ostringstream os;
    std::size_t claim = 0;
    auto flush_claims = [&](std::size_t upto) {
        for (; claim < ssa.claims.size() && ssa.claims[claim].position <= upto; ++claim) {
            const auto &c = ssa.claims[claim];
            os << tm.to_string(c.guard) << " ⊢ claim " << tm.to_string(c.condition) << "  // "
               << to_string(c.property) << ": " << c.message << " (" << to_string(c.loc)
               << ")\n";
        }
    };
    for (std::size_t i = 0; i < ssa.equations.size(); ++i) {
        flush_claims(i);
        const auto &eq = ssa.equations[i];
        os << tm.to_string(eq.guard) << " ⊢ " << eq.lhs.full_name() << " := "
           << tm.to_string(eq.rhs) << "\n";
    }
    flush_claims(ssa.equations.size());
    return os.str();
}

std::vector<std::string> find_duplicate_definitions(const SsaSystem &ssa)
{
    std::set<std::pair<std::string, unsigned>> seen;
    std::vector<std::string> dups;
    for (const auto &eq : ssa.equations)
        if (!seen.emplace(eq.lhs.baseName, eq.lhs.version).second)
            dups.push_back(eq.lhs.full_name() + " defined more than once");
    for (const auto &in : ssa.inputs)
        if (!seen.emplace(in.var.baseName, in.var.version).second)
            dups.push_back(in.var.full_name() + " defined more than once");
    return dups;
}

} // namespace miniqt::symex
