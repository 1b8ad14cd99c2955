#include "miniqt/smt/backend.hpp"

#include <algorithm>
#include <cstdlib>

namespace miniqt::smt {

namespace {

// Internal literal encoding: 2*var for positive, 2*var+1 for negative.
using Lit = std::uint32_t;

Lit to_lit(int dimacs)
{
    return dimacs > 0 ? static_cast<Lit>(2 * dimacs) : static_cast<Lit>(2 * -dimacs + 1);
}
inline std::uint32_t var_of(Lit l) { return l >> 1; }
inline Lit negate(Lit l) { return l ^ 1; }

constexpr std::int8_t kUnassigned = -1;

class Solver {
  public:
    Solver(const Cnf &cnf, const SolverOptions &options, ResourceGuard *guard)
        : n_(static_cast<std::uint32_t>(cnf.numVars)), opt_(options), guard_(guard)
    {
        value_.assign(n_ + 1, kUnassigned);
        level_.assign(n_ + 1, 0);
        reason_.assign(n_ + 1, -1);
        seen_.assign(n_ + 1, 0);
        activity_.assign(n_ + 1, 0.0);
        phase_.assign(n_ + 1, 0);
        watches_.assign(2 * (n_ + 1), {});
        heapIndex_.assign(n_ + 1, -1);
        if (opt_.order == DecisionOrder::Activity)
            for (std::uint32_t v = 1; v <= n_; ++v)
                heap_insert(v);
        for (const auto &c : cnf.clauses)
            if (!add_input_clause(c))
                trivially_unsat_ = true;
    }

    SolveResult solve()
    {
        SolveResult result;
        if (trivially_unsat_ || propagate() >= 0) {
            result.status = SolveStatus::Unsat;
            result.stats = stats_;
            return result;
        }
        std::uint64_t conflictsSinceRestart = 0;
        std::uint64_t restartLimit = 100;
        for (;;) {
            if (guard_)
                guard_->poll();
            int conflict = propagate();
            if (conflict >= 0) {
                ++stats_.conflicts;
                ++conflictsSinceRestart;
                if (decision_level() == 0) {
                    result.status = SolveStatus::Unsat;
                    break;
                }
                std::vector<Lit> learnt;
                int backLevel = analyze(conflict, learnt);
                backtrack(backLevel);
                if (learnt.size() == 1) {
                    assign(learnt[0], -1);
                } else {
                    int ci = add_clause(std::move(learnt), true);
                    assign(clauses_[static_cast<std::size_t>(ci)].lits[0], ci);
                }
                ++stats_.learned;
                decay_activity();
                continue;
            }
            if (opt_.restarts && conflictsSinceRestart >= restartLimit) {
                backtrack(0);
                conflictsSinceRestart = 0;
                restartLimit += restartLimit / 2;
                continue;
            }
            std::uint32_t v = pick_branch_variable();
            if (v == 0) {
                result.status = SolveStatus::Sat;
                result.model.assign(n_ + 1, false);
                for (std::uint32_t i = 1; i <= n_; ++i)
                    result.model[i] = value_[i] == 1;
                break;
            }
            ++stats_.decisions;
            trailLim_.push_back(trail_.size());
            bool positive = opt_.order == DecisionOrder::Activity && phase_[v];
            assign(positive ? 2 * v : 2 * v + 1, -1);
        }
        result.stats = stats_;
        return result;
    }

  private:
    struct Clause {
        std::vector<Lit> lits;
        bool learnt = false;
    };

    int decision_level() const { return static_cast<int>(trailLim_.size()); }

    // -1 false, 0 unassigned, 1 true
    int lit_value(Lit l) const
    {
        std::int8_t v = value_[var_of(l)];
        if (v == kUnassigned)
            return 0;
        bool isTrue = (v == 1) != static_cast<bool>(l & 1);
        return isTrue ? 1 : -1;
    }

    void assign(Lit l, int reason)
    {
        std::uint32_t v = var_of(l);
        value_[v] = (l & 1) ? 0 : 1;
        level_[v] = decision_level();
        reason_[v] = reason;
        trail_.push_back(l);
    }

    bool add_input_clause(const std::vector<int> &dimacs)
    {
        std::vector<Lit> lits;
        for (int d : dimacs)
            lits.push_back(to_lit(d));
        std::sort(lits.begin(), lits.end());
        lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
        for (std::size_t i = 1; i < lits.size(); ++i)
            if (lits[i] == negate(lits[i - 1]))
                return true; // tautology
        if (lits.empty())
            return false;
        if (lits.size() == 1) {
            int cur = lit_value(lits[0]);
            if (cur == -1)
                return false;
            if (cur == 0)
                assign(lits[0], -1);
            return true;
        }
        add_clause(std::move(lits), false);
        return true;
    }

    int add_clause(std::vector<Lit> lits, bool learnt)
    {
        int index = static_cast<int>(clauses_.size());
        watches_[negate(lits[0])].push_back(index);
        watches_[negate(lits[1])].push_back(index);
        clauses_.push_back({std::move(lits), learnt});
        return index;
    }

    // Returns the index of a conflicting clause, or -1.
    int propagate()
    {
        while (qhead_ < trail_.size()) {
            Lit p = trail_[qhead_++];
            ++stats_.propagations;
            // Clauses watching ¬p: p just became true, so ¬p is false.
            auto &ws = watches_[p];
            std::size_t keep = 0;
            for (std::size_t i = 0; i < ws.size(); ++i) {
                int ci = ws[i];
                auto &lits = clauses_[static_cast<std::size_t>(ci)].lits;
                Lit falseLit = negate(p);
                if (lits[0] == falseLit)
                    std::swap(lits[0], lits[1]);
                if (lit_value(lits[0]) == 1) {
                    ws[keep++] = ci;
                    continue;
                }
                bool moved = false;
                for (std::size_t k = 2; k < lits.size(); ++k) {
                    if (lit_value(lits[k]) != -1) {
                        std::swap(lits[1], lits[k]);
                        watches_[negate(lits[1])].push_back(ci);
                        moved = true;
                        break;
                    }
                }
                if (moved)
                    continue;
                ws[keep++] = ci;
                if (lit_value(lits[0]) == -1) {
                    for (std::size_t r = i + 1; r < ws.size(); ++r)
                        ws[keep++] = ws[r];
                    ws.resize(keep);
                    qhead_ = trail_.size();
                    return ci;
                }
                assign(lits[0], ci);
            }
            ws.resize(keep);
        }
        return -1;
    }

    void bump(std::uint32_t v)
    {
        activity_[v] += increment_;
        if (activity_[v] > 1e100) {
            for (auto &a : activity_)
                a *= 1e-100;
            increment_ *= 1e-100;
        }
        if (heapIndex_[v] >= 0)
            sift_up(static_cast<std::size_t>(heapIndex_[v]));
    }

    // Binary max-heap of variables ordered by activity (ties: lower index).
    bool before(std::uint32_t a, std::uint32_t b) const
    {
        return activity_[a] > activity_[b] || (activity_[a] == activity_[b] && a < b);
    }

    void heap_swap(std::size_t i, std::size_t j)
    {
        std::swap(heap_[i], heap_[j]);
        heapIndex_[heap_[i]] = static_cast<int>(i);
        heapIndex_[heap_[j]] = static_cast<int>(j);
    }

    void sift_up(std::size_t i)
    {
        while (i > 0) {
            std::size_t parent = (i - 1) / 2;
            if (!before(heap_[i], heap_[parent]))
                break;
            heap_swap(i, parent);
            i = parent;
        }
    }

    void sift_down(std::size_t i)
    {
        for (;;) {
            std::size_t best = i, l = 2 * i + 1, r = l + 1;
            if (l < heap_.size() && before(heap_[l], heap_[best]))
                best = l;
            if (r < heap_.size() && before(heap_[r], heap_[best]))
                best = r;
            if (best == i)
                return;
            heap_swap(i, best);
            i = best;
        }
    }

    void heap_insert(std::uint32_t v)
    {
        if (heapIndex_[v] >= 0)
            return;
        heapIndex_[v] = static_cast<int>(heap_.size());
        heap_.push_back(v);
        sift_up(heap_.size() - 1);
    }

    std::uint32_t heap_pop()
    {
        std::uint32_t top = heap_[0];
        heap_swap(0, heap_.size() - 1);
        heap_.pop_back();
        heapIndex_[top] = -1;
        if (!heap_.empty())
            sift_down(0);
        return top;
    }

    void decay_activity() { increment_ /= 0.95; }

    // First-UIP learning. Returns the backjump level; learnt[0] is the
    // asserting literal and learnt[1] (if any) has the highest remaining level.
    int analyze(int conflict, std::vector<Lit> &learnt)
    {
        learnt.assign(1, 0);
        int pathCount = 0;
        Lit p = 0;
        bool first = true;
        std::size_t index = trail_.size();
        int ci = conflict;
        do {
            const auto &lits = clauses_[static_cast<std::size_t>(ci)].lits;
            for (std::size_t j = first ? 0 : 1; j < lits.size(); ++j) {
                Lit q = lits[j];
                std::uint32_t v = var_of(q);
                if (seen_[v] || level_[v] == 0)
                    continue;
                seen_[v] = 1;
                bump(v);
                if (level_[v] >= decision_level())
                    ++pathCount;
                else
                    learnt.push_back(q);
            }
            first = false;
            do {
                p = trail_[--index];
            } while (!seen_[var_of(p)]);
            ci = reason_[var_of(p)];
            seen_[var_of(p)] = 0;
            --pathCount;
        } while (pathCount > 0);
        learnt[0] = negate(p);

        minimize(learnt);

        int back = 0;
        if (learnt.size() > 1) {
            std::size_t maxI = 1;
            for (std::size_t i = 2; i < learnt.size(); ++i)
                if (level_[var_of(learnt[i])] > level_[var_of(learnt[maxI])])
                    maxI = i;
            std::swap(learnt[1], learnt[maxI]);
            back = level_[var_of(learnt[1])];
        }
        for (Lit l : learnt)
            seen_[var_of(l)] = 0;
        return back;
    }

    // Drops literals whose reason clause is entirely covered by the learnt clause.
    void minimize(std::vector<Lit> &learnt)
    {
        std::size_t keep = 1;
        for (std::size_t i = 1; i < learnt.size(); ++i) {
            std::uint32_t v = var_of(learnt[i]);
            int r = reason_[v];
            bool redundant = r >= 0;
            if (redundant) {
                const auto &lits = clauses_[static_cast<std::size_t>(r)].lits;
                for (std::size_t k = 1; k < lits.size(); ++k) {
                    std::uint32_t u = var_of(lits[k]);
                    if (!seen_[u] && level_[u] > 0) {
                        redundant = false;
                        break;
                    }
                }
            }
            if (redundant)
                seen_[v] = 0;
            else
                learnt[keep++] = learnt[i];
        }
        learnt.resize(keep);
    }

    void backtrack(int level)
    {
        if (decision_level() <= level)
            return;
        std::size_t stop = trailLim_[static_cast<std::size_t>(level)];
        for (std::size_t i = trail_.size(); i-- > stop;) {
            std::uint32_t v = var_of(trail_[i]);
            phase_[v] = value_[v] == 1;
            value_[v] = kUnassigned;
            reason_[v] = -1;
            nextIndex_ = std::min(nextIndex_, v);
            if (opt_.order == DecisionOrder::Activity)
                heap_insert(v);
        }
        trail_.resize(stop);
        trailLim_.resize(static_cast<std::size_t>(level));
        qhead_ = trail_.size();
    }

    std::uint32_t pick_branch_variable()
    {
        if (opt_.order == DecisionOrder::VariableIndex) {
            while (nextIndex_ <= n_ && value_[nextIndex_] != kUnassigned)
                ++nextIndex_;
            return nextIndex_ <= n_ ? nextIndex_ : 0;
        }
        while (!heap_.empty()) {
            std::uint32_t v = heap_pop();
            if (value_[v] == kUnassigned)
                return v;
        }
        return 0;
    }

    std::uint32_t n_;
    SolverOptions opt_;
    ResourceGuard *guard_;
    bool trivially_unsat_ = false;
    std::vector<Clause> clauses_;
    std::vector<std::vector<int>> watches_;
    std::vector<std::int8_t> value_;
    std::vector<int> level_;
    std::vector<int> reason_;
    std::vector<std::uint8_t> seen_;
    std::vector<double> activity_;
    std::vector<std::uint8_t> phase_;
    std::vector<std::uint32_t> heap_;
    std::vector<int> heapIndex_;
    double increment_ = 1.0;
    std::vector<Lit> trail_;
    std::vector<std::size_t> trailLim_;
    std::size_t qhead_ = 0;
    std::uint32_t nextIndex_ = 1;
    SolverStatistics stats_;
};

} // namespace

SolveResult sat_solve(const Cnf &cnf, const SolverOptions &options, ResourceGuard *guard)
{
    return Solver(cnf, options, guard).solve();
}

} // namespace miniqt::smt
