#pragma once

#include <string>
#include <vector>

#include "smtmc/bvformula.hpp"

namespace smtmc {

namespace detail {

inline Term widen_term(const Term& t, const Formula& f, uint32_t k);

inline Bool widen_bool(const Bool& e, const Formula& f, uint32_t k) {
    switch (e->kind) {
        case BoolKind::True:
        case BoolKind::False:
            return e;
        case BoolKind::Eq:
        case BoolKind::Ult:
        case BoolKind::Ule:
        case BoolKind::Ugt:
        case BoolKind::Uge:
            return mk_atom(e->kind, widen_term(e->ta, f, k), widen_term(e->tb, f, k));
        default: {
            std::vector<Bool> args;
            args.reserve(e->args.size());
            for (const Bool& c : e->args) args.push_back(widen_bool(c, f, k));
            if (e->kind == BoolKind::Not) return mk_not(std::move(args[0]));
            if (e->kind == BoolKind::And) return mk_and(std::move(args));
            if (e->kind == BoolKind::Or) return mk_or(std::move(args));
            return mk_bool_ite(std::move(args[0]), std::move(args[1]), std::move(args[2]));
        }
    }
}

inline Term widen_term(const Term& t, const Formula& f, uint32_t k) {
    switch (t->kind) {
        case TermKind::Constant:
            return t;
        case TermKind::Var: {
            const Variable* v = f.find_var(t->name);
            if (v && v->width < k) return mk_extract(mk_var(t->name, k), 0, v->width - 1);
            return t;
        }
        case TermKind::BvNot:
            return mk_bvnot(widen_term(t->a, f, k));
        case TermKind::Extract:
            return mk_extract(widen_term(t->a, f, k), t->lo, t->hi);
        case TermKind::ZeroExtend:
            return mk_zero_extend(widen_term(t->a, f, k), t->hi);
        case TermKind::Ite:
            return mk_term_ite(widen_bool(t->cond, f, k), widen_term(t->a, f, k),
                               widen_term(t->b, f, k));
        case TermKind::Concat:
            return mk_concat(widen_term(t->a, f, k), widen_term(t->b, f, k));
        default:
            return mk_binary(t->kind, widen_term(t->a, f, k), widen_term(t->b, f, k));
    }
}

}  // namespace detail

// Rewrites f so every support variable has the maximum width k: a variable of
// width m < k becomes a width-k variable whose occurrences turn into
// extract(x, 0, m-1), and the conjunct extract(x, m, k-1) = 0 pins the unused
// high bits so the model count is preserved.
inline Formula normalize_widths(const Formula& f) {
    if (f.support.empty()) return f;
    uint32_t k = 0;
    for (const Variable& v : f.support) k = std::max(k, v.width);
    bool uniform = true;
    for (const Variable& v : f.support)
        if (v.width != k) uniform = false;
    if (uniform) return f;

    Formula out;
    for (const Variable& v : f.support) out.support.push_back(Variable{v.name, k});

    std::vector<Bool> conjuncts;
    if (f.body->kind == BoolKind::And) {
        for (const Bool& c : f.body->args) conjuncts.push_back(detail::widen_bool(c, f, k));
    } else {
        conjuncts.push_back(detail::widen_bool(f.body, f, k));
    }
    for (const Variable& v : f.support) {
        if (v.width < k) {
            Term high = mk_extract(mk_var(v.name, k), v.width, k - 1);
            conjuncts.push_back(mk_eq(std::move(high), mk_const(0, k - v.width)));
        }
    }
    out.body = mk_and(std::move(conjuncts));
    return out;
}

}  // namespace smtmc
