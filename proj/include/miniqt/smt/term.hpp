#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace miniqt::smt {

/// Term sort: width 0 is Bool, otherwise a bit-vector of that width.
struct Sort {
    unsigned width = 0;

    static Sort boolean() { return {0}; }
    static Sort bv(unsigned w) { return {w}; }
    bool is_bool() const { return width == 0; }
    bool operator==(const Sort &) const = default;
};

enum class Op {
    BoolConst,
    BvConst,
    Var,
    Not,
    And,
    Or,
    Implies,
    Eq,
    Ite,
    BvAdd,
    BvSub,
    BvMul,
    BvNeg,
    BvSDiv, // SMT-LIB bvsdiv: truncating, x/0 = (x < 0 ? 1 : -1)
    BvSRem, // SMT-LIB bvsrem: sign of the dividend, x%0 = x
    BvSlt,
    BvSle,
};

std::string to_string(Op op);

using TermRef = std::uint32_t;

struct TermNode {
    Op op;
    Sort sort;
    std::uint64_t value = 0; // constants, masked to the sort width
    std::string name;        // Var
    std::vector<TermRef> kids;
};

class SortError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Owns a hash-consed term DAG. Constructors fold constants and apply a few
/// local simplifications, so structurally equal terms share one TermRef.
class TermManager {
  public:
    TermManager();

    TermRef mk_bool(bool v);
    TermRef mk_true() { return true_; }
    TermRef mk_false() { return false_; }
    TermRef mk_bv(unsigned width, std::int64_t value);
    TermRef mk_var(const std::string &name, Sort sort);

    TermRef mk_not(TermRef a);
    TermRef mk_and(TermRef a, TermRef b);
    TermRef mk_and(std::vector<TermRef> kids);
    TermRef mk_or(TermRef a, TermRef b);
    TermRef mk_or(std::vector<TermRef> kids);
    TermRef mk_implies(TermRef a, TermRef b);
    TermRef mk_eq(TermRef a, TermRef b);
    TermRef mk_ite(TermRef c, TermRef a, TermRef b);

    TermRef mk_add(TermRef a, TermRef b);
    TermRef mk_sub(TermRef a, TermRef b);
    TermRef mk_mul(TermRef a, TermRef b);
    TermRef mk_neg(TermRef a);
    TermRef mk_sdiv(TermRef a, TermRef b);
    TermRef mk_srem(TermRef a, TermRef b);
    TermRef mk_slt(TermRef a, TermRef b);
    TermRef mk_sle(TermRef a, TermRef b);

    const TermNode &node(TermRef t) const { return nodes_.at(t); }
    Sort sort(TermRef t) const { return nodes_.at(t).sort; }
    std::size_t size() const { return nodes_.size(); }

    bool is_const(TermRef t) const;
    bool is_true(TermRef t) const { return t == true_; }
    bool is_false(TermRef t) const { return t == false_; }
    /// Signed value of a bit-vector constant, or 0/1 for Bool constants.
    std::int64_t const_value(TermRef t) const;

    /// Evaluates `t` given values for its Var leaves (unsigned, masked).
    /// Missing variables evaluate to 0.
    std::uint64_t evaluate(TermRef t, const std::unordered_map<TermRef, std::uint64_t> &vars) const;

    /// Pretty-prints a term (infix; used by --show-ssa and diagnostics).
    std::string to_string(TermRef t) const;

  private:
    TermRef intern(TermNode node);
    TermRef mk_raw(Op op, Sort sort, std::vector<TermRef> kids);
    void require_bool(TermRef t, const char *what) const;
    void require_same_bv(TermRef a, TermRef b, const char *what) const;

    struct KeyHash {
        std::size_t operator()(const TermNode &n) const;
    };
    struct KeyEq {
        bool operator()(const TermNode &a, const TermNode &b) const;
    };

    std::vector<TermNode> nodes_;
    std::unordered_map<TermNode, TermRef, KeyHash, KeyEq> table_;
    TermRef true_ = 0;
    TermRef false_ = 0;
};

// Fixed-width two's complement helpers shared by folding and evaluation.
std::uint64_t bv_mask(unsigned width);
std::int64_t bv_to_signed(std::uint64_t v, unsigned width);
std::uint64_t bv_from_signed(std::int64_t v, unsigned width);
std::uint64_t bv_sdiv(std::uint64_t a, std::uint64_t b, unsigned width);
std::uint64_t bv_srem(std::uint64_t a, std::uint64_t b, unsigned width);

} // namespace miniqt::smt
