#include "miniqt/smt/backend.hpp"

#include <map>
#include <tuple>

namespace miniqt::smt {

namespace {

using Bits = std::vector<int>;

class Blaster {
  public:
    Blaster(const TermManager &tm, Cnf &cnf, ResourceGuard *guard)
        : tm_(tm), cnf_(cnf), guard_(guard)
    {
        T_ = new_var();
        cnf_.trueVar = T_;
        clause({T_});
    }

    int literal(TermRef root) { return blast(root).at(0); }

    void clause(std::vector<int> lits) { cnf_.clauses.push_back(std::move(lits)); }

  private:
    int new_var() { return ++cnf_.numVars; }
    int F() const { return -T_; }
    bool is_const(int l) const { return l == T_ || l == -T_; }

    // ---- gates -------------------------------------------------------------

    int and2(int a, int b)
    {
        if (a == F() || b == F() || a == -b)
            return F();
        if (a == T_)
            return b;
        if (b == T_ || a == b)
            return a;
        if (a > b)
            std::swap(a, b);
        auto key = std::make_tuple('&', a, b);
        if (auto it = gates_.find(key); it != gates_.end())
            return it->second;
        int o = new_var();
        clause({-o, a});
        clause({-o, b});
        clause({o, -a, -b});
        gates_.emplace(key, o);
        return o;
    }

    int or2(int a, int b) { return -and2(-a, -b); }

    int xor2(int a, int b)
    {
        if (a == F())
            return b;
        if (b == F())
            return a;
        if (a == T_)
            return -b;
        if (b == T_)
            return -a;
        if (a == b)
            return F();
        if (a == -b)
            return T_;
        // Normalize polarity so x^y, ~x^y, ... share one gate.
        bool flip = false;
        if (a < 0) {
            a = -a;
            flip = !flip;
        }
        if (b < 0) {
            b = -b;
            flip = !flip;
        }
        if (a > b)
            std::swap(a, b);
        auto key = std::make_tuple('^', a, b);
        int o;
        if (auto it = gates_.find(key); it != gates_.end()) {
            o = it->second;
        } else {
            o = new_var();
            clause({-o, a, b});
            clause({-o, -a, -b});
            clause({o, -a, b});
            clause({o, a, -b});
            gates_.emplace(key, o);
        }
        return flip ? -o : o;
    }

    int mux(int c, int t, int e)
    {
        if (c == T_ || t == e)
            return t;
        if (c == F())
            return e;
        if (t == T_ && e == F())
            return c;
        if (t == F() && e == T_)
            return -c;
        int o = new_var();
        clause({-c, -t, o});
        clause({-c, t, -o});
        clause({c, -e, o});
        clause({c, e, -o});
        clause({-t, -e, o});
        clause({t, e, -o});
        return o;
    }

    int and_n(const std::vector<int> &lits)
    {
        std::vector<int> kept;
        for (int l : lits) {
            if (l == F())
                return F();
            if (l != T_)
                kept.push_back(l);
        }
        if (kept.empty())
            return T_;
        if (kept.size() == 1)
            return kept[0];
        if (kept.size() == 2)
            return and2(kept[0], kept[1]);
        int o = new_var();
        std::vector<int> big{o};
        for (int l : kept) {
            clause({-o, l});
            big.push_back(-l);
        }
        clause(std::move(big));
        return o;
    }

    int or_n(const std::vector<int> &lits)
    {
        std::vector<int> neg;
        neg.reserve(lits.size());
        for (int l : lits)
            neg.push_back(-l);
        return -and_n(neg);
    }

    // Majority of three, used as the carry of a full adder.
    int majority(int a, int b, int c) { return or2(and2(a, b), or2(and2(a, c), and2(b, c))); }

    // ---- word-level circuits ----------------------------------------------

    Bits constant(std::uint64_t v, unsigned w) const
    {
        Bits r(w);
        for (unsigned i = 0; i < w; ++i)
            r[i] = (v >> i) & 1 ? T_ : F();
        return r;
    }

    Bits add(const Bits &a, const Bits &b, int carryIn, int *carryOut = nullptr)
    {
        Bits r(a.size());
        int c = carryIn;
        for (std::size_t i = 0; i < a.size(); ++i) {
            r[i] = xor2(xor2(a[i], b[i]), c);
            c = majority(a[i], b[i], c);
        }
        if (carryOut)
            *carryOut = c;
        return r;
    }

    static Bits invert(const Bits &a)
    {
        Bits r(a.size());
        for (std::size_t i = 0; i < a.size(); ++i)
            r[i] = -a[i];
        return r;
    }

    Bits sub(const Bits &a, const Bits &b, int *noBorrow = nullptr)
    {
        return add(a, invert(b), T_, noBorrow);
    }

    Bits neg(const Bits &a) { return add(constant(0, a.size()), invert(a), T_); }

    Bits mux_bits(int c, const Bits &t, const Bits &e)
    {
        Bits r(t.size());
        for (std::size_t i = 0; i < t.size(); ++i)
            r[i] = mux(c, t[i], e[i]);
        return r;
    }

    Bits mul(const Bits &a, const Bits &b)
    {
        std::size_t w = a.size();
        Bits acc = constant(0, w);
        for (std::size_t i = 0; i < w; ++i) {
            if (b[i] == F())
                continue;
            Bits partial(w, F());
            for (std::size_t j = 0; i + j < w; ++j)
                partial[i + j] = and2(a[j], b[i]);
            acc = add(acc, partial, F());
        }
        return acc;
    }

    // Unsigned restoring division; x/0 = all ones, x%0 = x.
    void udivrem(const Bits &a, const Bits &b, Bits &q, Bits &r)
    {
        std::size_t w = a.size();
        Bits rem(w + 1, F());
        Bits divisor = b;
        divisor.push_back(F());
        q.assign(w, F());
        for (std::size_t k = w; k-- > 0;) {
            for (std::size_t i = w; i > 0; --i)
                rem[i] = rem[i - 1];
            rem[0] = a[k];
            int geq = F();
            Bits diff = sub(rem, divisor, &geq);
            q[k] = geq;
            rem = mux_bits(geq, diff, rem);
        }
        r.assign(rem.begin(), rem.begin() + static_cast<std::ptrdiff_t>(w));
    }

    void sdivrem(const Bits &a, const Bits &b, Bits *quot, Bits *rem)
    {
        int sa = a.back(), sb = b.back();
        Bits absA = mux_bits(sa, neg(a), a);
        Bits absB = mux_bits(sb, neg(b), b);
        Bits q, r;
        udivrem(absA, absB, q, r);
        if (quot)
            *quot = mux_bits(xor2(sa, sb), neg(q), q);
        if (rem)
            *rem = mux_bits(sa, neg(r), r);
    }

    int ult(const Bits &a, const Bits &b)
    {
        int noBorrow = F();
        sub(a, b, &noBorrow);
        return -noBorrow;
    }

    int slt(Bits a, Bits b)
    {
        a.back() = -a.back();
        b.back() = -b.back();
        return ult(a, b);
    }

    int equal(const Bits &a, const Bits &b)
    {
        std::vector<int> same;
        for (std::size_t i = 0; i < a.size(); ++i)
            same.push_back(-xor2(a[i], b[i]));
        return and_n(same);
    }

    // ---- terms -------------------------------------------------------------

    const Bits &blast(TermRef t)
    {
        if (auto it = cache_.find(t); it != cache_.end())
            return it->second;
        // Iterative post-order so deep terms do not overflow the stack.
        std::vector<std::pair<TermRef, bool>> stack{{t, false}};
        while (!stack.empty()) {
            auto [cur, expanded] = stack.back();
            stack.pop_back();
            if (cache_.count(cur))
                continue;
            if (!expanded) {
                stack.emplace_back(cur, true);
                for (TermRef k : tm_.node(cur).kids)
                    if (!cache_.count(k))
                        stack.emplace_back(k, false);
                continue;
            }
            if (guard_)
                guard_->poll();
            cache_.emplace(cur, build(cur));
        }
        return cache_.at(t);
    }

    Bits build(TermRef t)
    {
        const TermNode &n = tm_.node(t);
        auto kid = [&](std::size_t i) -> const Bits & { return cache_.at(n.kids[i]); };
        auto lit = [&](std::size_t i) { return cache_.at(n.kids[i]).at(0); };
        switch (n.op) {
        case Op::BoolConst:
            return {n.value ? T_ : F()};
        case Op::BvConst:
            return constant(n.value, n.sort.width);
        case Op::Var: {
            Bits bits(n.sort.is_bool() ? 1 : n.sort.width);
            for (auto &b : bits)
                b = new_var();
            cnf_.varMap.emplace(t, bits);
            return bits;
        }
        case Op::Not:
            return {-lit(0)};
        case Op::And:
        case Op::Or: {
            std::vector<int> lits;
            for (std::size_t i = 0; i < n.kids.size(); ++i)
                lits.push_back(lit(i));
            return {n.op == Op::And ? and_n(lits) : or_n(lits)};
        }
        case Op::Implies:
            return {or2(-lit(0), lit(1))};
        case Op::Eq:
            return {equal(kid(0), kid(1))};
        case Op::Ite:
            return mux_bits(lit(0), kid(1), kid(2));
        case Op::BvAdd:
            return add(kid(0), kid(1), F());
        case Op::BvSub:
            return sub(kid(0), kid(1));
        case Op::BvMul:
            return mul(kid(0), kid(1));
        case Op::BvNeg:
            return neg(kid(0));
        case Op::BvSDiv: {
            Bits q;
            sdivrem(kid(0), kid(1), &q, nullptr);
            return q;
        }
        case Op::BvSRem: {
            Bits r;
            sdivrem(kid(0), kid(1), nullptr, &r);
            return r;
        }
        case Op::BvSlt:
            return {slt(kid(0), kid(1))};
        case Op::BvSle:
            return {-slt(kid(1), kid(0))};
        }
        throw SortError("unknown operator in bitblast");
    }

    const TermManager &tm_;
    Cnf &cnf_;
    ResourceGuard *guard_;
    int T_ = 0;
    std::unordered_map<TermRef, Bits> cache_;
    std::map<std::tuple<char, int, int>, int> gates_;
};

} // namespace

Cnf bitblast(const TermManager &tm, TermRef root, ResourceGuard *guard)
{
    if (!tm.sort(root).is_bool())
        throw SortError("bitblast expects a Boolean term");
    Cnf cnf;
    Blaster b(tm, cnf, guard);
    int top = b.literal(root);
    b.clause({top});
    return cnf;
}

bool satisfies(const Cnf &cnf, const std::vector<bool> &model)
{
    for (const auto &c : cnf.clauses) {
        bool ok = false;
        for (int l : c) {
            auto v = static_cast<std::size_t>(l < 0 ? -l : l);
            if (v < model.size() && model[v] == (l > 0)) {
                ok = true;
                break;
            }
        }
        if (!ok)
            return false;
    }
    return true;
}

} // namespace miniqt::smt
