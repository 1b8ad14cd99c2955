#include "miniqt/smt/backend.hpp"

namespace miniqt::smt {

TermRef encode(const symex::SsaSystem &ssa)
{
    TermManager &tm = *ssa.terms;
    std::vector<TermRef> constraints;
    constraints.reserve(ssa.equations.size());
    for (const auto &eq : ssa.equations) {
        if (tm.sort(eq.lhsTerm) != tm.sort(eq.rhs))
            throw SortError("ill-sorted equation for " + eq.lhs.full_name());
        constraints.push_back(tm.mk_implies(eq.guard, tm.mk_eq(eq.lhsTerm, eq.rhs)));
    }
    std::vector<TermRef> properties;
    properties.reserve(ssa.claims.size());
    for (const auto &c : ssa.claims) {
        if (!tm.sort(c.guard).is_bool() || !tm.sort(c.condition).is_bool())
            throw SortError("non-Boolean claim: " + c.message);
        properties.push_back(tm.mk_implies(c.guard, c.condition));
    }
    TermRef C = tm.mk_and(std::move(constraints));
    TermRef P = tm.mk_and(std::move(properties));
    return tm.mk_and(C, tm.mk_not(P));
}

} // namespace miniqt::smt
