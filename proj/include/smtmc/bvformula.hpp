#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "smtmc/error.hpp"

namespace smtmc {

// Fixed-width words are kept as uint64_t values, canonically masked to their
// width. Widths from 1 to 64 bits are supported.
constexpr uint32_t kMaxWidth = 64;

inline uint64_t mask64(uint32_t width) {
    return width >= 64 ? ~uint64_t{0} : (uint64_t{1} << width) - 1;
}

struct Variable {
    std::string name;
    uint32_t width = 0;

    bool operator==(const Variable& o) const { return name == o.name && width == o.width; }
};

enum class TermKind {
    Constant,
    Var,
    BvAdd,
    BvMul,
    BvURem,
    BvAnd,
    BvOr,
    BvXor,
    BvNot,
    Concat,
    Extract,
    ZeroExtend,
    Ite,
};

enum class BoolKind {
    True,
    False,
    Eq,
    Ult,
    Ule,
    Ugt,
    Uge,
    And,
    Or,
    Not,
    Ite,
};

struct TermNode;
struct BoolNode;
using Term = std::shared_ptr<const TermNode>;
using Bool = std::shared_ptr<const BoolNode>;

struct TermNode {
    TermKind kind;
    uint32_t width;
    uint64_t value = 0;      // Constant
    std::string name;        // Var
    uint32_t lo = 0, hi = 0; // Extract bit range; ZeroExtend keeps extra bits in hi
    Term a, b;
    Bool cond;               // Ite
};

struct BoolNode {
    BoolKind kind;
    Term ta, tb;             // atom operands
    std::vector<Bool> args;  // And/Or: 2+, Not: 1, Ite: 3
};

// --- term builders ---------------------------------------------------------

inline void check_width(uint32_t width) {
    if (width < 1 || width > kMaxWidth)
        throw Error("unsupported bit-vector width " + std::to_string(width));
}

inline Term mk_const(uint64_t value, uint32_t width) {
    check_width(width);
    if (value > mask64(width))
        throw Error("constant " + std::to_string(value) + " does not fit width " +
                    std::to_string(width));
    auto n = std::make_shared<TermNode>();
    n->kind = TermKind::Constant;
    n->width = width;
    n->value = value;
    return n;
}

inline Term mk_var(const std::string& name, uint32_t width) {
    check_width(width);
    auto n = std::make_shared<TermNode>();
    n->kind = TermKind::Var;
    n->width = width;
    n->name = name;
    return n;
}

inline Term mk_var(const Variable& v) { return mk_var(v.name, v.width); }

inline Term mk_binary(TermKind kind, Term a, Term b) {
    if (a->width != b->width)
        throw Error("width mismatch: " + std::to_string(a->width) + " vs " +
                    std::to_string(b->width));
    auto n = std::make_shared<TermNode>();
    n->kind = kind;
    n->width = a->width;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}

inline Term mk_bvadd(Term a, Term b) { return mk_binary(TermKind::BvAdd, std::move(a), std::move(b)); }
inline Term mk_bvmul(Term a, Term b) { return mk_binary(TermKind::BvMul, std::move(a), std::move(b)); }
inline Term mk_bvurem(Term a, Term b) { return mk_binary(TermKind::BvURem, std::move(a), std::move(b)); }
inline Term mk_bvand(Term a, Term b) { return mk_binary(TermKind::BvAnd, std::move(a), std::move(b)); }
inline Term mk_bvor(Term a, Term b) { return mk_binary(TermKind::BvOr, std::move(a), std::move(b)); }
inline Term mk_bvxor(Term a, Term b) { return mk_binary(TermKind::BvXor, std::move(a), std::move(b)); }

inline Term mk_bvnot(Term a) {
    auto n = std::make_shared<TermNode>();
    n->kind = TermKind::BvNot;
    n->width = a->width;
    n->a = std::move(a);
    return n;
}

inline Term mk_concat(Term high, Term low) {
    if (high->width + low->width > kMaxWidth)
        throw Error("concat result width exceeds " + std::to_string(kMaxWidth));
    auto n = std::make_shared<TermNode>();
    n->kind = TermKind::Concat;
    n->width = high->width + low->width;
    n->a = std::move(high);
    n->b = std::move(low);
    return n;
}

// Slice of the bits lo..hi inclusive, bit 0 being the rightmost.
inline Term mk_extract(Term t, uint32_t lo, uint32_t hi) {
    if (!(lo <= hi && hi < t->width))
        throw Error("extract [" + std::to_string(hi) + ":" + std::to_string(lo) +
                    "] out of range for width " + std::to_string(t->width));
    auto n = std::make_shared<TermNode>();
    n->kind = TermKind::Extract;
    n->width = hi - lo + 1;
    n->lo = lo;
    n->hi = hi;
    n->a = std::move(t);
    return n;
}

inline Term mk_zero_extend(Term t, uint32_t extra) {
    if (t->width + extra > kMaxWidth)
        throw Error("zero_extend result width exceeds " + std::to_string(kMaxWidth));
    auto n = std::make_shared<TermNode>();
    n->kind = TermKind::ZeroExtend;
    n->width = t->width + extra;
    n->hi = extra;
    n->a = std::move(t);
    return n;
}

inline Term mk_term_ite(Bool cond, Term then_t, Term else_t) {
    if (then_t->width != else_t->width) throw Error("ite branch widths differ");
    auto n = std::make_shared<TermNode>();
    n->kind = TermKind::Ite;
    n->width = then_t->width;
    n->cond = std::move(cond);
    n->a = std::move(then_t);
    n->b = std::move(else_t);
    return n;
}

// --- boolean builders ------------------------------------------------------

inline Bool mk_bool(BoolKind kind) {
    auto n = std::make_shared<BoolNode>();
    n->kind = kind;
    return n;
}

inline Bool mk_true() { return mk_bool(BoolKind::True); }
inline Bool mk_false() { return mk_bool(BoolKind::False); }

inline Bool mk_atom(BoolKind kind, Term a, Term b) {
    if (a->width != b->width)
        throw Error("width mismatch in atom: " + std::to_string(a->width) + " vs " +
                    std::to_string(b->width));
    auto n = std::make_shared<BoolNode>();
    n->kind = kind;
    n->ta = std::move(a);
    n->tb = std::move(b);
    return n;
}

inline Bool mk_eq(Term a, Term b) { return mk_atom(BoolKind::Eq, std::move(a), std::move(b)); }
inline Bool mk_ult(Term a, Term b) { return mk_atom(BoolKind::Ult, std::move(a), std::move(b)); }
inline Bool mk_ule(Term a, Term b) { return mk_atom(BoolKind::Ule, std::move(a), std::move(b)); }
inline Bool mk_ugt(Term a, Term b) { return mk_atom(BoolKind::Ugt, std::move(a), std::move(b)); }
inline Bool mk_uge(Term a, Term b) { return mk_atom(BoolKind::Uge, std::move(a), std::move(b)); }

inline Bool mk_not(Bool a) {
    auto n = std::make_shared<BoolNode>();
    n->kind = BoolKind::Not;
    n->args.push_back(std::move(a));
    return n;
}

// N-ary conjunction; flattens the degenerate arities away so that every And
// node has at least two children.
inline Bool mk_and(std::vector<Bool> args) {
    if (args.empty()) return mk_true();
    if (args.size() == 1) return args[0];
    auto n = std::make_shared<BoolNode>();
    n->kind = BoolKind::And;
    n->args = std::move(args);
    return n;
}

inline Bool mk_or(std::vector<Bool> args) {
    if (args.empty()) return mk_false();
    if (args.size() == 1) return args[0];
    auto n = std::make_shared<BoolNode>();
    n->kind = BoolKind::Or;
    n->args = std::move(args);
    return n;
}

inline Bool mk_bool_ite(Bool cond, Bool then_b, Bool else_b) {
    auto n = std::make_shared<BoolNode>();
    n->kind = BoolKind::Ite;
    n->args = {std::move(cond), std::move(then_b), std::move(else_b)};
    return n;
}

// --- formula ----------------------------------------------------------------

struct Formula {
    std::vector<Variable> support;  // declaration order
    Bool body;                      // conjunction semantics; mk_true() if empty input

    const Variable* find_var(const std::string& name) const {
        for (const Variable& v : support)
            if (v.name == name) return &v;
        return nullptr;
    }
};

// Total map from support variables to word constants.
struct Assignment {
    std::map<std::string, uint64_t> values;

    uint64_t at(const std::string& name) const {
        auto it = values.find(name);
        if (it == values.end()) throw Error("assignment is missing variable " + name);
        return it->second;
    }

    bool operator==(const Assignment& o) const { return values == o.values; }
    bool operator<(const Assignment& o) const { return values < o.values; }
};

// --- structural equality -----------------------------------------------------

inline bool term_equal(const Term& a, const Term& b);

inline bool bool_equal(const Bool& a, const Bool& b) {
    if (a == b) return true;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case BoolKind::True:
        case BoolKind::False:
            return true;
        case BoolKind::Eq:
        case BoolKind::Ult:
        case BoolKind::Ule:
        case BoolKind::Ugt:
        case BoolKind::Uge:
            return term_equal(a->ta, b->ta) && term_equal(a->tb, b->tb);
        case BoolKind::And:
        case BoolKind::Or:
        case BoolKind::Not:
        case BoolKind::Ite: {
            if (a->args.size() != b->args.size()) return false;
            for (size_t i = 0; i < a->args.size(); ++i)
                if (!bool_equal(a->args[i], b->args[i])) return false;
            return true;
        }
    }
    return false;
}

inline bool term_equal(const Term& a, const Term& b) {
    if (a == b) return true;
    if (a->kind != b->kind || a->width != b->width) return false;
    switch (a->kind) {
        case TermKind::Constant:
            return a->value == b->value;
        case TermKind::Var:
            return a->name == b->name;
        case TermKind::BvNot:
            return term_equal(a->a, b->a);
        case TermKind::Extract:
            return a->lo == b->lo && a->hi == b->hi && term_equal(a->a, b->a);
        case TermKind::ZeroExtend:
            return a->hi == b->hi && term_equal(a->a, b->a);
        case TermKind::Ite:
            return bool_equal(a->cond, b->cond) && term_equal(a->a, b->a) &&
                   term_equal(a->b, b->b);
        default:
            return term_equal(a->a, b->a) && term_equal(a->b, b->b);
    }
}

inline bool formula_equal(const Formula& a, const Formula& b) {
    if (a.support.size() != b.support.size()) return false;
    for (size_t i = 0; i < a.support.size(); ++i)
        if (!(a.support[i] == b.support[i])) return false;
    return bool_equal(a.body, b.body);
}

// --- reference evaluator -----------------------------------------------------

inline uint64_t eval_term(const Term& t, const Assignment& a);

inline bool eval_bool(const Bool& e, const Assignment& a) {
    switch (e->kind) {
        case BoolKind::True:
            return true;
        case BoolKind::False:
            return false;
        case BoolKind::Eq:
            return eval_term(e->ta, a) == eval_term(e->tb, a);
        case BoolKind::Ult:
            return eval_term(e->ta, a) < eval_term(e->tb, a);
        case BoolKind::Ule:
            return eval_term(e->ta, a) <= eval_term(e->tb, a);
        case BoolKind::Ugt:
            return eval_term(e->ta, a) > eval_term(e->tb, a);
        case BoolKind::Uge:
            return eval_term(e->ta, a) >= eval_term(e->tb, a);
        case BoolKind::And:
            for (const Bool& c : e->args)
                if (!eval_bool(c, a)) return false;
            return true;
        case BoolKind::Or:
            for (const Bool& c : e->args)
                if (eval_bool(c, a)) return true;
            return false;
        case BoolKind::Not:
            return !eval_bool(e->args[0], a);
        case BoolKind::Ite:
            return eval_bool(e->args[0], a) ? eval_bool(e->args[1], a) : eval_bool(e->args[2], a);
    }
    throw Error("corrupt boolean node");
}

inline uint64_t eval_term(const Term& t, const Assignment& a) {
    switch (t->kind) {
        case TermKind::Constant:
            return t->value;
        case TermKind::Var: {
            uint64_t v = a.at(t->name);
            if (v > mask64(t->width))
                throw Error("value for " + t->name + " exceeds width " + std::to_string(t->width));
            return v;
        }
        case TermKind::BvAdd:
            return (eval_term(t->a, a) + eval_term(t->b, a)) & mask64(t->width);
        case TermKind::BvMul:
            return (eval_term(t->a, a) * eval_term(t->b, a)) & mask64(t->width);
        case TermKind::BvURem: {
            uint64_t x = eval_term(t->a, a), y = eval_term(t->b, a);
            return y == 0 ? x : x % y;  // SMT-LIB total semantics
        }
        case TermKind::BvAnd:
            return eval_term(t->a, a) & eval_term(t->b, a);
        case TermKind::BvOr:
            return eval_term(t->a, a) | eval_term(t->b, a);
        case TermKind::BvXor:
            return eval_term(t->a, a) ^ eval_term(t->b, a);
        case TermKind::BvNot:
            return ~eval_term(t->a, a) & mask64(t->width);
        case TermKind::Concat:
            return (eval_term(t->a, a) << t->b->width) | eval_term(t->b, a);
        case TermKind::Extract:
            return (eval_term(t->a, a) >> t->lo) & mask64(t->width);
        case TermKind::ZeroExtend:
            return eval_term(t->a, a);
        case TermKind::Ite:
            return eval_bool(t->cond, a) ? eval_term(t->a, a) : eval_term(t->b, a);
    }
    throw Error("corrupt term node");
}

// Whether `a` is a model of `f` under unsigned fixed-width semantics.
inline bool evaluate(const Formula& f, const Assignment& a) {
    for (const Variable& v : f.support) {
        uint64_t val = a.at(v.name);
        if (val > mask64(v.width))
            throw Error("value for " + v.name + " exceeds width " + std::to_string(v.width));
    }
    return eval_bool(f.body, a);
}

}  // namespace smtmc
