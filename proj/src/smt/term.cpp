#include "miniqt/smt/term.hpp"

#include <algorithm>
#include <stdexcept>

namespace miniqt::smt {

std::uint64_t bv_mask(unsigned width)
{
    return width >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << width) - 1;
}

std::int64_t bv_to_signed(std::uint64_t v, unsigned width)
{
    v &= bv_mask(width);
    if (width < 64 && (v >> (width - 1)) & 1)
        return static_cast<std::int64_t>(v | ~bv_mask(width));
    return static_cast<std::int64_t>(v);
}

std::uint64_t bv_from_signed(std::int64_t v, unsigned width)
{
    return static_cast<std::uint64_t>(v) & bv_mask(width);
}

namespace {

std::uint64_t udiv(std::uint64_t a, std::uint64_t b, unsigned width)
{
    return b == 0 ? bv_mask(width) : a / b;
}

std::uint64_t urem(std::uint64_t a, std::uint64_t b) { return b == 0 ? a : a % b; }

std::uint64_t neg(std::uint64_t a, unsigned width) { return (~a + 1) & bv_mask(width); }

bool msb(std::uint64_t a, unsigned width) { return (a >> (width - 1)) & 1; }

} // namespace

std::uint64_t bv_sdiv(std::uint64_t a, std::uint64_t b, unsigned width)
{
    bool na = msb(a, width), nb = msb(b, width);
    std::uint64_t ua = na ? neg(a, width) : a;
    std::uint64_t ub = nb ? neg(b, width) : b;
    std::uint64_t q = udiv(ua, ub, width);
    return (na != nb) ? neg(q, width) : q;
}

std::uint64_t bv_srem(std::uint64_t a, std::uint64_t b, unsigned width)
{
    bool na = msb(a, width), nb = msb(b, width);
    std::uint64_t ua = na ? neg(a, width) : a;
    std::uint64_t ub = nb ? neg(b, width) : b;
    std::uint64_t r = urem(ua, ub);
    return na ? neg(r, width) : r;
}

std::string to_string(Op op)
{
    switch (op) {
    case Op::BoolConst:
        return "bool";
    case Op::BvConst:
        return "bv";
    case Op::Var:
        return "var";
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
    }
    return "?";
}

std::size_t TermManager::KeyHash::operator()(const TermNode &n) const
{
    std::size_t h = static_cast<std::size_t>(n.op) * 0x9e3779b97f4a7c15ULL;
    auto mix = [&h](std::size_t v) { h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2); };
    mix(n.sort.width);
    mix(std::hash<std::uint64_t>{}(n.value));
    mix(std::hash<std::string>{}(n.name));
    for (auto k : n.kids)
        mix(k);
    return h;
}

bool TermManager::KeyEq::operator()(const TermNode &a, const TermNode &b) const
{
    return a.op == b.op && a.sort == b.sort && a.value == b.value && a.name == b.name &&
           a.kids == b.kids;
}

TermManager::TermManager()
{
    false_ = intern({Op::BoolConst, Sort::boolean(), 0, {}, {}});
    true_ = intern({Op::BoolConst, Sort::boolean(), 1, {}, {}});
}

TermRef TermManager::intern(TermNode node)
{
    if (auto it = table_.find(node); it != table_.end())
        return it->second;
    auto id = static_cast<TermRef>(nodes_.size());
    nodes_.push_back(node);
    table_.emplace(std::move(node), id);
    return id;
}

TermRef TermManager::mk_raw(Op op, Sort sort, std::vector<TermRef> kids)
{
    return intern({op, sort, 0, {}, std::move(kids)});
}

void TermManager::require_bool(TermRef t, const char *what) const
{
    if (!sort(t).is_bool())
        throw SortError(std::string(what) + ": expected Bool operand");
}

void TermManager::require_same_bv(TermRef a, TermRef b, const char *what) const
{
    if (sort(a).is_bool() || !(sort(a) == sort(b)))
        throw SortError(std::string(what) + ": operands must be bit-vectors of equal width");
}

bool TermManager::is_const(TermRef t) const
{
    Op op = node(t).op;
    return op == Op::BoolConst || op == Op::BvConst;
}

std::int64_t TermManager::const_value(TermRef t) const
{
    const auto &n = node(t);
    if (n.op == Op::BoolConst)
        return static_cast<std::int64_t>(n.value);
    return bv_to_signed(n.value, n.sort.width);
}

TermRef TermManager::mk_bool(bool v) { return v ? true_ : false_; }

TermRef TermManager::mk_bv(unsigned width, std::int64_t value)
{
    if (width == 0 || width > 64)
        throw SortError("bit-vector width out of range");
    return intern({Op::BvConst, Sort::bv(width), bv_from_signed(value, width), {}, {}});
}

TermRef TermManager::mk_var(const std::string &name, Sort sort)
{
    return intern({Op::Var, sort, 0, name, {}});
}

TermRef TermManager::mk_not(TermRef a)
{
    require_bool(a, "not");
    if (is_const(a))
        return mk_bool(node(a).value == 0);
    if (node(a).op == Op::Not)
        return node(a).kids[0];
    return mk_raw(Op::Not, Sort::boolean(), {a});
}

TermRef TermManager::mk_and(TermRef a, TermRef b) { return mk_and(std::vector<TermRef>{a, b}); }

TermRef TermManager::mk_and(std::vector<TermRef> kids)
{
    std::vector<TermRef> flat;
    for (TermRef k : kids) {
        require_bool(k, "and");
        if (is_false(k))
            return false_;
        if (is_true(k))
            continue;
        if (node(k).op == Op::And)
            flat.insert(flat.end(), node(k).kids.begin(), node(k).kids.end());
        else
            flat.push_back(k);
    }
    std::sort(flat.begin(), flat.end());
    flat.erase(std::unique(flat.begin(), flat.end()), flat.end());
    for (TermRef k : flat)
        if (node(k).op == Op::Not && std::binary_search(flat.begin(), flat.end(), node(k).kids[0]))
            return false_;
    if (flat.empty())
        return true_;
    if (flat.size() == 1)
        return flat[0];
    return mk_raw(Op::And, Sort::boolean(), std::move(flat));
}

TermRef TermManager::mk_or(TermRef a, TermRef b) { return mk_or(std::vector<TermRef>{a, b}); }

TermRef TermManager::mk_or(std::vector<TermRef> kids)
{
    std::vector<TermRef> flat;
    for (TermRef k : kids) {
        require_bool(k, "or");
        if (is_true(k))
            return true_;
        if (is_false(k))
            continue;
        if (node(k).op == Op::Or)
            flat.insert(flat.end(), node(k).kids.begin(), node(k).kids.end());
        else
            flat.push_back(k);
    }
    std::sort(flat.begin(), flat.end());
    flat.erase(std::unique(flat.begin(), flat.end()), flat.end());
    for (TermRef k : flat)
        if (node(k).op == Op::Not && std::binary_search(flat.begin(), flat.end(), node(k).kids[0]))
            return true_;
    if (flat.empty())
        return false_;
    if (flat.size() == 1)
        return flat[0];
    return mk_raw(Op::Or, Sort::boolean(), std::move(flat));
}

TermRef TermManager::mk_implies(TermRef a, TermRef b)
{
    require_bool(a, "=>");
    require_bool(b, "=>");
    if (is_false(a) || is_true(b) || a == b)
        return true_;
    if (is_true(a))
        return b;
    if (is_false(b))
        return mk_not(a);
    return mk_raw(Op::Implies, Sort::boolean(), {a, b});
}

TermRef TermManager::mk_eq(TermRef a, TermRef b)
{
    if (!(sort(a) == sort(b)))
        throw SortError("=: operands must have the same sort");
    if (a == b)
        return true_;
    if (is_const(a) && is_const(b))
        return mk_bool(node(a).value == node(b).value);
    if (sort(a).is_bool()) {
        if (is_const(a))
            std::swap(a, b);
        if (is_true(b))
            return a;
        if (is_false(b))
            return mk_not(a);
    }
    if (a > b)
        std::swap(a, b);
    return mk_raw(Op::Eq, Sort::boolean(), {a, b});
}

TermRef TermManager::mk_ite(TermRef c, TermRef a, TermRef b)
{
    require_bool(c, "ite");
    if (!(sort(a) == sort(b)))
        throw SortError("ite: branches must have the same sort");
    if (is_true(c) || a == b)
        return a;
    if (is_false(c))
        return b;
    if (sort(a).is_bool()) {
        if (is_true(a) && is_false(b))
            return c;
        if (is_false(a) && is_true(b))
            return mk_not(c);
        if (is_true(a))
            return mk_or(c, b);
        if (is_false(b))
            return mk_and(c, a);
    }
    if (node(c).op == Op::Not)
        return mk_ite(node(c).kids[0], b, a);
    return mk_raw(Op::Ite, sort(a), {c, a, b});
}

TermRef TermManager::mk_add(TermRef a, TermRef b)
{
    require_same_bv(a, b, "bvadd");
    unsigned w = sort(a).width;
    if (is_const(a) && is_const(b))
        return intern({Op::BvConst, sort(a), (node(a).value + node(b).value) & bv_mask(w), {}, {}});
    if (is_const(a))
        std::swap(a, b);
    if (is_const(b) && node(b).value == 0)
        return a;
    return mk_raw(Op::BvAdd, sort(a), {a, b});
}

TermRef TermManager::mk_sub(TermRef a, TermRef b)
{
    require_same_bv(a, b, "bvsub");
    unsigned w = sort(a).width;
    if (is_const(a) && is_const(b))
        return intern({Op::BvConst, sort(a), (node(a).value - node(b).value) & bv_mask(w), {}, {}});
    if (is_const(b) && node(b).value == 0)
        return a;
    if (a == b)
        return mk_bv(w, 0);
    return mk_raw(Op::BvSub, sort(a), {a, b});
}

TermRef TermManager::mk_mul(TermRef a, TermRef b)
{
    require_same_bv(a, b, "bvmul");
    unsigned w = sort(a).width;
    if (is_const(a) && is_const(b))
        return intern({Op::BvConst, sort(a), (node(a).value * node(b).value) & bv_mask(w), {}, {}});
    if (is_const(a))
        std::swap(a, b);
    if (is_const(b)) {
        if (node(b).value == 0)
            return b;
        if (node(b).value == 1)
            return a;
    }
    return mk_raw(Op::BvMul, sort(a), {a, b});
}

TermRef TermManager::mk_neg(TermRef a)
{
    if (sort(a).is_bool())
        throw SortError("bvneg: expected bit-vector operand");
    unsigned w = sort(a).width;
    if (is_const(a))
        return intern({Op::BvConst, sort(a), neg(node(a).value, w), {}, {}});
    if (node(a).op == Op::BvNeg)
        return node(a).kids[0];
    return mk_raw(Op::BvNeg, sort(a), {a});
}

TermRef TermManager::mk_sdiv(TermRef a, TermRef b)
{
    require_same_bv(a, b, "bvsdiv");
    unsigned w = sort(a).width;
    if (is_const(a) && is_const(b))
        return intern({Op::BvConst, sort(a), bv_sdiv(node(a).value, node(b).value, w), {}, {}});
    if (is_const(b) && node(b).value == 1)
        return a;
    return mk_raw(Op::BvSDiv, sort(a), {a, b});
}

TermRef TermManager::mk_srem(TermRef a, TermRef b)
{
    require_same_bv(a, b, "bvsrem");
    unsigned w = sort(a).width;
    if (is_const(a) && is_const(b))
        return intern({Op::BvConst, sort(a), bv_srem(node(a).value, node(b).value, w), {}, {}});
    return mk_raw(Op::BvSRem, sort(a), {a, b});
}

TermRef TermManager::mk_slt(TermRef a, TermRef b)
{
    require_same_bv(a, b, "bvslt");
    if (is_const(a) && is_const(b))
        return mk_bool(const_value(a) < const_value(b));
    if (a == b)
        return false_;
    return mk_raw(Op::BvSlt, Sort::boolean(), {a, b});
}

TermRef TermManager::mk_sle(TermRef a, TermRef b)
{
    require_same_bv(a, b, "bvsle");
    if (is_const(a) && is_const(b))
        return mk_bool(const_value(a) <= const_value(b));
    if (a == b)
        return true_;
    return mk_raw(Op::BvSle, Sort::boolean(), {a, b});
}

std::uint64_t TermManager::evaluate(TermRef root,
                                    const std::unordered_map<TermRef, std::uint64_t> &vars) const
{
    std::unordered_map<TermRef, std::uint64_t> memo;
    std::function<std::uint64_t(TermRef)> go = [&](TermRef t) -> std::uint64_t {
        if (auto it = memo.find(t); it != memo.end())
            return it->second;
        const TermNode &n = node(t);
        unsigned w = n.sort.width;
        auto kid = [&](std::size_t i) { return go(n.kids[i]); };
        std::uint64_t r = 0;
        switch (n.op) {
        case Op::BoolConst:
        case Op::BvConst:
            r = n.value;
            break;
        case Op::Var: {
            auto it = vars.find(t);
            r = it == vars.end() ? 0 : it->second & (w ? bv_mask(w) : 1);
            break;
        }
        case Op::Not:
            r = kid(0) ? 0 : 1;
            break;
        case Op::And:
            r = 1;
            for (std::size_t i = 0; i < n.kids.size() && r; ++i)
                r = kid(i) ? 1 : 0;
            break;
        case Op::Or:
            r = 0;
            for (std::size_t i = 0; i < n.kids.size() && !r; ++i)
                r = kid(i) ? 1 : 0;
            break;
        case Op::Implies:
            r = (!kid(0) || kid(1)) ? 1 : 0;
            break;
        case Op::Eq:
            r = kid(0) == kid(1) ? 1 : 0;
            break;
        case Op::Ite:
            r = kid(0) ? kid(1) : kid(2);
            break;
        case Op::BvAdd:
            r = (kid(0) + kid(1)) & bv_mask(w);
            break;
        case Op::BvSub:
            r = (kid(0) - kid(1)) & bv_mask(w);
            break;
        case Op::BvMul:
            r = (kid(0) * kid(1)) & bv_mask(w);
            break;
        case Op::BvNeg:
            r = neg(kid(0), w);
            break;
        case Op::BvSDiv:
            r = bv_sdiv(kid(0), kid(1), w);
            break;
        case Op::BvSRem:
            r = bv_srem(kid(0), kid(1), w);
            break;
        case Op::BvSlt: {
            unsigned kw = sort(n.kids[0]).width;
            r = bv_to_signed(kid(0), kw) < bv_to_signed(kid(1), kw) ? 1 : 0;
            break;
        }
        case Op::BvSle: {
            unsigned kw = sort(n.kids[0]).width;
            r = bv_to_signed(kid(0), kw) <= bv_to_signed(kid(1), kw) ? 1 : 0;
            break;
        }
        }
        memo.emplace(t, r);
        return r;
    };
    return go(root);
}

std::string TermManager::to_string(TermRef t) const
{
    const TermNode &n = node(t);
    switch (n.op) {
    case Op::BoolConst:
        return n.value ? "true" : "false";
    case Op::BvConst:
        return std::to_string(bv_to_signed(n.value, n.sort.width));
    case Op::Var:
        return n.name;
    case Op::Not:
        return "!" + to_string(n.kids[0]);
    case Op::BvNeg:
        return "-" + to_string(n.kids[0]);
    case Op::Ite:
        return "ite(" + to_string(n.kids[0]) + ", " + to_string(n.kids[1]) + ", " +
               to_string(n.kids[2]) + ")";
    default:
        break;
    }
    static const std::unordered_map<int, const char *> kInfix = {
        {static_cast<int>(Op::And), " && "},   {static_cast<int>(Op::Or), " || "},
        {static_cast<int>(Op::Implies), " => "}, {static_cast<int>(Op::Eq), " == "},
        {static_cast<int>(Op::BvAdd), " + "},  {static_cast<int>(Op::BvSub), " - "},
        {static_cast<int>(Op::BvMul), " * "},  {static_cast<int>(Op::BvSDiv), " / "},
        {static_cast<int>(Op::BvSRem), " % "}, {static_cast<int>(Op::BvSlt), " < "},
        {static_cast<int>(Op::BvSle), " <= "}};
    std::string sep = kInfix.at(static_cast<int>(n.op));
    std::string out = "(";
    for (std::size_t i = 0; i < n.kids.size(); ++i)
        out += (i ? sep : "") + to_string(n.kids[i]);
    return out + ")";
}

} // namespace miniqt::smt
