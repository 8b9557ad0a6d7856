#pragma once

#include <string>

#include "smtmc/bvformula.hpp"

namespace smtmc {

// Canonical constant syntax: #b, zero-padded to the width.
inline std::string print_const(uint64_t value, uint32_t width) {
    std::string s = "#b";
    for (uint32_t i = width; i-- > 0;) s += char('0' + ((value >> i) & 1));
    return s;
}

inline void print_term(const Term& t, std::string& out);

inline void print_bool(const Bool& e, std::string& out) {
    switch (e->kind) {
        case BoolKind::True:
            out += "true";
            return;
        case BoolKind::False:
            out += "false";
            return;
        case BoolKind::Eq:
        case BoolKind::Ult:
        case BoolKind::Ule:
        case BoolKind::Ugt:
        case BoolKind::Uge: {
            const char* op = e->kind == BoolKind::Eq    ? "="
                             : e->kind == BoolKind::Ult ? "bvult"
                             : e->kind == BoolKind::Ule ? "bvule"
                             : e->kind == BoolKind::Ugt ? "bvugt"
                                                        : "bvuge";
            out += "(";
            out += op;
            out += " ";
            print_term(e->ta, out);
            out += " ";
            print_term(e->tb, out);
            out += ")";
            return;
        }
        case BoolKind::And:
        case BoolKind::Or:
        case BoolKind::Not:
        case BoolKind::Ite: {
            const char* op = e->kind == BoolKind::And  ? "and"
                             : e->kind == BoolKind::Or ? "or"
                             : e->kind == BoolKind::Not ? "not"
                                                        : "ite";
            out += "(";
            out += op;
            for (const Bool& c : e->args) {
                out += " ";
                print_bool(c, out);
            }
            out += ")";
            return;
        }
    }
}

inline void print_term(const Term& t, std::string& out) {
    switch (t->kind) {
        case TermKind::Constant:
            out += print_const(t->value, t->width);
            return;
        case TermKind::Var:
            out += t->name;
            return;
        case TermKind::Extract:
            out += "((_ extract " + std::to_string(t->hi) + " " + std::to_string(t->lo) + ") ";
            print_term(t->a, out);
            out += ")";
            return;
        case TermKind::ZeroExtend:
            out += "((_ zero_extend " + std::to_string(t->hi) + ") ";
            print_term(t->a, out);
            out += ")";
            return;
        case TermKind::BvNot:
            out += "(bvnot ";
            print_term(t->a, out);
            out += ")";
            return;
        case TermKind::Ite:
            out += "(ite ";
            print_bool(t->cond, out);
            out += " ";
            print_term(t->a, out);
            out += " ";
            print_term(t->b, out);
            out += ")";
            return;
        default: {
            const char* op = t->kind == TermKind::BvAdd    ? "bvadd"
                             : t->kind == TermKind::BvMul  ? "bvmul"
                             : t->kind == TermKind::BvURem ? "bvurem"
                             : t->kind == TermKind::BvAnd  ? "bvand"
                             : t->kind == TermKind::BvOr   ? "bvor"
                             : t->kind == TermKind::BvXor  ? "bvxor"
                                                           : "concat";
            out += "(";
            out += op;
            out += " ";
            print_term(t->a, out);
            out += " ";
            print_term(t->b, out);
            out += ")";
            return;
        }
    }
}

// Emits declarations in support order plus one assert per top-level conjunct.
// parse_smt2(print_smt2(f)) is structurally equal to f.
inline std::string print_smt2(const Formula& f) {
    std::string out = "(set-logic QF_BV)\n";
    for (const Variable& v : f.support)
        out += "(declare-fun " + v.name + " () (_ BitVec " + std::to_string(v.width) + "))\n";
    if (f.body->kind == BoolKind::And) {
        for (const Bool& c : f.body->args) {
            out += "(assert ";
            print_bool(c, out);
            out += ")\n";
        }
    } else {
        out += "(assert ";
        print_bool(f.body, out);
        out += ")\n";
    }
    return out;
}

}  // namespace smtmc
