#include "miniqt/smt/backend.hpp"

#include <sstream>
#include <unordered_set>

namespace miniqt::smt {

namespace {

std::string sort_name(Sort s)
{
    return s.is_bool() ? "Bool" : "(_ BitVec " + std::to_string(s.width) + ")";
}

std::string quoted(const std::string &name)
{
    std::string out = "|";
    for (char c : name)
        out += (c == '|' || c == '\\') ? '_' : c;
    return out + "|";
}

const char *smt_op(Op op)
{
    switch (op) {
    case Op::Not:
        return "not";
    case Op::And:
        return "and";
    case Op::Or:
        return "or";
    case Op::Implies:
        return "=>";
    case Op::Eq:
        return "=";
    case Op::Ite:
        return "ite";
    case Op::BvAdd:
        return "bvadd";
    case Op::BvSub:
        return "bvsub";
    case Op::BvMul:
        return "bvmul";
    case Op::BvNeg:
        return "bvneg";
    case Op::BvSDiv:
        return "bvsdiv";
    case Op::BvSRem:
        return "bvsrem";
    case Op::BvSlt:
        return "bvslt";
    case Op::BvSle:
        return "bvsle";
    default:
        return "?";
    }
}

} // namespace

std::string emit_smtlib(const TermManager &tm, TermRef root)
{
    if (!tm.sort(root).is_bool())
        throw SortError("emit_smtlib expects a Boolean term");

    std::ostringstream decls;
    std::ostringstream defs;
    std::unordered_set<TermRef> done;

    auto atom = [&](TermRef t) -> std::string {
        const TermNode &n = tm.node(t);
        switch (n.op) {
        case Op::BoolConst:
            return n.value ? "true" : "false";
        case Op::BvConst:
            return "(_ bv" + std::to_string(n.value) + " " + std::to_string(n.sort.width) + ")";
        case Op::Var:
            return quoted(n.name);
        default:
            return "$t" + std::to_string(t);
        }
    };

    // Shared subterms become define-fun entries in dependency order.
    std::vector<std::pair<TermRef, bool>> stack{{root, false}};
    while (!stack.empty()) {
        auto [t, expanded] = stack.back();
        stack.pop_back();
        if (done.count(t))
            continue;
        const TermNode &n = tm.node(t);
        if (!expanded) {
            stack.emplace_back(t, true);
            for (TermRef k : n.kids)
                if (!done.count(k))
                    stack.emplace_back(k, false);
            continue;
        }
        done.insert(t);
        if (n.op == Op::Var) {
            decls << "(declare-const " << quoted(n.name) << " " << sort_name(n.sort) << ")\n";
            continue;
        }
        if (n.op == Op::BoolConst || n.op == Op::BvConst)
            continue;
        defs << "(define-fun " << atom(t) << " () " << sort_name(n.sort) << " (" << smt_op(n.op);
        for (TermRef k : n.kids)
            defs << " " << atom(k);
        defs << "))\n";
    }

    std::ostringstream out;
    out << "(set-logic QF_BV)\n" << decls.str() << defs.str() << "(assert " << atom(root)
        << ")\n(check-sat)\n(get-model)\n";
    return out.str();
}

} // namespace miniqt::smt
