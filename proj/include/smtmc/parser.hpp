#pragma once

#include <cctype>
#include <charconv>
#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "smtmc/bvformula.hpp"
#include "smtmc/error.hpp"

namespace smtmc {

// S-expression with source position, the unit the reader produces.
struct SExpr {
    bool is_list = false;
    std::string atom;
    std::vector<SExpr> items;
    int line = 1;
    int col = 1;

    const std::string& head() const {
        static const std::string empty;
        if (!is_list || items.empty() || items[0].is_list) return empty;
        return items[0].atom;
    }
};

namespace detail {

struct Token {
    enum Kind { LParen, RParen, Atom, End } kind = End;
    std::string text;
    int line = 1;
    int col = 1;
};

inline bool is_symbol_char(char c) {
    if (std::isalnum((unsigned char)c)) return true;
    return std::string_view("~!@$%^&*_+=<>.?/-#:|'").find(c) != std::string_view::npos;
}

class Tokenizer {
public:
    explicit Tokenizer(std::string_view text) : text_(text) {}

    Token next() {
        skip_blank();
        Token t;
        t.line = line_;
        t.col = col_;
        if (pos_ >= text_.size()) {
            t.kind = Token::End;
            return t;
        }
        char c = text_[pos_];
        if (c == '(') {
            advance();
            t.kind = Token::LParen;
            return t;
        }
        if (c == ')') {
            advance();
            t.kind = Token::RParen;
            return t;
        }
        if (!is_symbol_char(c)) throw ParseError(std::string("unexpected character '") + c + "'", line_, col_);
        size_t start = pos_;
        while (pos_ < text_.size() && is_symbol_char(text_[pos_])) advance();
        t.kind = Token::Atom;
        t.text = std::string(text_.substr(start, pos_ - start));
        return t;
    }

private:
    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void skip_blank() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == ';') {
                while (pos_ < text_.size() && text_[pos_] != '\n') advance();
            } else if (std::isspace((unsigned char)c)) {
                advance();
            } else {
                break;
            }
        }
    }

    std::string_view text_;
    size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

}  // namespace detail

// Reads every top-level s-expression in the input.
inline std::vector<SExpr> read_sexprs(std::string_view text) {
    detail::Tokenizer tok(text);
    std::vector<SExpr> roots;
    std::vector<SExpr*> stack;
    for (;;) {
        detail::Token t = tok.next();
        if (t.kind == detail::Token::End) {
            if (!stack.empty()) throw ParseError("unbalanced '('", t.line, t.col);
            return roots;
        }
        if (t.kind == detail::Token::LParen) {
            SExpr e;
            e.is_list = true;
            e.line = t.line;
            e.col = t.col;
            if (stack.empty()) {
                roots.push_back(std::move(e));
                stack.push_back(&roots.back());
            } else {
                stack.back()->items.push_back(std::move(e));
                stack.push_back(&stack.back()->items.back());
            }
        } else if (t.kind == detail::Token::RParen) {
            if (stack.empty()) throw ParseError("unbalanced ')'", t.line, t.col);
            stack.pop_back();
        } else {
            SExpr e;
            e.atom = std::move(t.text);
            e.line = t.line;
            e.col = t.col;
            if (stack.empty())
                roots.push_back(std::move(e));
            else
                stack.back()->items.push_back(std::move(e));
        }
    }
}

// Pulls one balanced s-expression off a stream, for the incremental solver
// protocol. Returns std::nullopt on end of stream.
inline std::optional<std::string> read_one_sexpr(std::istream& in) {
    std::string out;
    int depth = 0;
    char c;
    while (in.get(c)) {
        if (out.empty() && depth == 0) {
            if (std::isspace((unsigned char)c)) continue;
            if (c == ';') {
                while (in.get(c) && c != '\n') {
                }
                continue;
            }
        }
        if (c == ';') {
            while (in.get(c) && c != '\n') {
            }
            out += ' ';
            continue;
        }
        out += c;
        if (c == '(') ++depth;
        if (c == ')') {
            --depth;
            if (depth <= 0) return out;
        }
        if (depth == 0 && std::isspace((unsigned char)c)) return out;  // bare atom
    }
    if (!out.empty()) return out;
    return std::nullopt;
}

namespace detail {

inline uint64_t parse_u64(const SExpr& e, const std::string& text) {
    uint64_t v = 0;
    auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || p != text.data() + text.size())
        throw ParseError("invalid numeral '" + text + "'", e.line, e.col);
    return v;
}

inline bool is_numeral(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit((unsigned char)c)) return false;
    return true;
}

// Parser state: declared variables, in declaration order.
struct ParseEnv {
    std::vector<Variable> support;

    const Variable* find(const std::string& name) const {
        for (const Variable& v : support)
            if (v.name == name) return &v;
        return nullptr;
    }
};

inline Term parse_term(const SExpr& e, const ParseEnv& env);
inline Bool parse_bool(const SExpr& e, const ParseEnv& env);

inline Term parse_bv_literal(const SExpr& e) {
    const std::string& s = e.atom;
    if (s.size() > 2 && s[0] == '#' && s[1] == 'b') {
        uint32_t width = (uint32_t)s.size() - 2;
        if (width > kMaxWidth) throw ParseError("binary constant wider than 64 bits", e.line, e.col);
        uint64_t v = 0;
        for (size_t i = 2; i < s.size(); ++i) {
            if (s[i] != '0' && s[i] != '1')
                throw ParseError("invalid binary constant '" + s + "'", e.line, e.col);
            v = (v << 1) | uint64_t(s[i] - '0');
        }
        return mk_const(v, width);
    }
    if (s.size() > 2 && s[0] == '#' && s[1] == 'x') {
        uint32_t width = 4 * ((uint32_t)s.size() - 2);
        if (width > kMaxWidth) throw ParseError("hex constant wider than 64 bits", e.line, e.col);
        uint64_t v = 0;
        for (size_t i = 2; i < s.size(); ++i) {
            char c = (char)std::tolower((unsigned char)s[i]);
            int d = (c >= '0' && c <= '9') ? c - '0' : (c >= 'a' && c <= 'f') ? c - 'a' + 10 : -1;
            if (d < 0) throw ParseError("invalid hex constant '" + s + "'", e.line, e.col);
            v = (v << 4) | uint64_t(d);
        }
        return mk_const(v, width);
    }
    throw ParseError("expected bit-vector constant, got '" + s + "'", e.line, e.col);
}

inline void expect_arity(const SExpr& e, size_t n, const std::string& op) {
    if (e.items.size() != n + 1)
        throw ParseError("operator " + op + " expects " + std::to_string(n) + " argument(s)",
                         e.line, e.col);
}

// Indexed identifier (_ name idx...). Returns false if e is not one.
inline bool match_indexed(const SExpr& e, std::string* name, std::vector<uint64_t>* idx) {
    if (!e.is_list || e.items.size() < 3 || e.items[0].is_list || e.items[0].atom != "_")
        return false;
    if (e.items[1].is_list) return false;
    *name = e.items[1].atom;
    idx->clear();
    for (size_t i = 2; i < e.items.size(); ++i) {
        if (e.items[i].is_list || !is_numeral(e.items[i].atom)) return false;
        idx->push_back(parse_u64(e.items[i], e.items[i].atom));
    }
    return true;
}

inline Term parse_term(const SExpr& e, const ParseEnv& env) {
    if (!e.is_list) {
        const std::string& s = e.atom;
        if (s == "true" || s == "false")
            throw ParseError("boolean constant in bit-vector position", e.line, e.col);
        if (s.size() > 1 && s[0] == '#') return parse_bv_literal(e);
        if (is_numeral(s))
            throw ParseError("bare numeral; use #b, #x or (_ bvN k) for constants", e.line, e.col);
        const Variable* v = env.find(s);
        if (!v) throw ParseError("undeclared identifier '" + s + "'", e.line, e.col);
        return mk_var(*v);
    }

    if (e.items.empty()) throw ParseError("empty expression", e.line, e.col);

    // (_ bvN k)
    std::string iname;
    std::vector<uint64_t> idx;
    if (match_indexed(e, &iname, &idx)) {
        if (iname.size() > 2 && iname.substr(0, 2) == "bv" && idx.size() == 1) {
            uint64_t value = parse_u64(e.items[1], iname.substr(2));
            uint64_t width = idx[0];
            if (width < 1 || width > kMaxWidth)
                throw ParseError("unsupported bit-vector width " + std::to_string(width), e.line,
                                 e.col);
            if (width < 64 && value > mask64((uint32_t)width))
                throw ParseError("constant does not fit width " + std::to_string(width), e.line,
                                 e.col);
            return mk_const(value, (uint32_t)width);
        }
        throw ParseError("unsupported indexed identifier '" + iname + "'", e.line, e.col);
    }

    // ((_ extract hi lo) t) and ((_ zero_extend n) t)
    if (e.items[0].is_list) {
        if (match_indexed(e.items[0], &iname, &idx)) {
            if (iname == "extract" && idx.size() == 2) {
                if (e.items.size() != 2)
                    throw ParseError("extract expects 1 argument", e.line, e.col);
                Term t = parse_term(e.items[1], env);
                uint64_t hi = idx[0], lo = idx[1];
                if (!(lo <= hi && hi < t->width))
                    throw ParseError("extract indices out of range", e.line, e.col);
                return mk_extract(std::move(t), (uint32_t)lo, (uint32_t)hi);
            }
            if (iname == "zero_extend" && idx.size() == 1) {
                if (e.items.size() != 2)
                    throw ParseError("zero_extend expects 1 argument", e.line, e.col);
                Term t = parse_term(e.items[1], env);
                if (t->width + idx[0] > kMaxWidth)
                    throw ParseError("zero_extend result exceeds 64 bits", e.line, e.col);
                return mk_zero_extend(std::move(t), (uint32_t)idx[0]);
            }
            throw ParseError("unsupported operator '" + iname + "'", e.items[0].line,
                             e.items[0].col);
        }
        throw ParseError("malformed operator position", e.items[0].line, e.items[0].col);
    }

    const std::string& op = e.items[0].atom;
    auto fold_left = [&](Term (*mk)(Term, Term)) {
        if (e.items.size() < 3)
            throw ParseError("operator " + op + " expects at least 2 arguments", e.line, e.col);
        Term acc = parse_term(e.items[1], env);
        for (size_t i = 2; i < e.items.size(); ++i) acc = mk(acc, parse_term(e.items[i], env));
        return acc;
    };

    try {
        if (op == "bvadd") return fold_left(mk_bvadd);
        if (op == "bvmul") return fold_left(mk_bvmul);
        if (op == "bvand") return fold_left(mk_bvand);
        if (op == "bvor") return fold_left(mk_bvor);
        if (op == "bvxor") return fold_left(mk_bvxor);
        if (op == "concat") return fold_left(mk_concat);
        if (op == "bvurem") {
            expect_arity(e, 2, op);
            return mk_bvurem(parse_term(e.items[1], env), parse_term(e.items[2], env));
        }
        if (op == "bvnot") {
            expect_arity(e, 1, op);
            return mk_bvnot(parse_term(e.items[1], env));
        }
        if (op == "ite") {
            expect_arity(e, 3, op);
            Bool c = parse_bool(e.items[1], env);
            return mk_term_ite(std::move(c), parse_term(e.items[2], env),
                               parse_term(e.items[3], env));
        }
    } catch (const ParseError&) {
        throw;
    } catch (const Error& err) {
        throw ParseError(err.what(), e.line, e.col);
    }
    throw ParseError("unsupported operator '" + op + "'", e.items[0].line, e.items[0].col);
}

inline Bool parse_bool(const SExpr& e, const ParseEnv& env) {
    if (!e.is_list) {
        if (e.atom == "true") return mk_true();
        if (e.atom == "false") return mk_false();
        throw ParseError("expected boolean expression, got '" + e.atom + "'", e.line, e.col);
    }
    if (e.items.empty() || e.items[0].is_list)
        throw ParseError("expected boolean expression", e.line, e.col);

    const std::string& op = e.items[0].atom;
    auto atom2 = [&](Bool (*mk)(Term, Term)) {
        expect_arity(e, 2, op);
        return mk(parse_term(e.items[1], env), parse_term(e.items[2], env));
    };
    auto nary = [&](Bool (*mk)(std::vector<Bool>)) {
        if (e.items.size() < 3)
            throw ParseError("operator " + op + " expects at least 2 arguments", e.line, e.col);
        std::vector<Bool> args;
        for (size_t i = 1; i < e.items.size(); ++i) args.push_back(parse_bool(e.items[i], env));
        return mk(std::move(args));
    };

    try {
        if (op == "=") return atom2(mk_eq);
        if (op == "bvult") return atom2(mk_ult);
        if (op == "bvule") return atom2(mk_ule);
        if (op == "bvugt") return atom2(mk_ugt);
        if (op == "bvuge") return atom2(mk_uge);
        if (op == "and") return nary(mk_and);
        if (op == "or") return nary(mk_or);
        if (op == "not") {
            expect_arity(e, 1, op);
            return mk_not(parse_bool(e.items[1], env));
        }
        if (op == "ite") {
            expect_arity(e, 3, op);
            return mk_bool_ite(parse_bool(e.items[1], env), parse_bool(e.items[2], env),
                               parse_bool(e.items[3], env));
        }
    } catch (const ParseError&) {
        throw;
    } catch (const Error& err) {
        throw ParseError(err.what(), e.line, e.col);
    }
    throw ParseError("unsupported operator '" + op + "'", e.items[0].line, e.items[0].col);
}

inline Variable parse_declare_fun(const SExpr& e) {
    // (declare-fun name () (_ BitVec k))
    if (e.items.size() != 4 || e.items[1].is_list || !e.items[2].is_list ||
        !e.items[2].items.empty())
        throw ParseError("malformed declare-fun (only zero-arity bit-vector symbols supported)",
                         e.line, e.col);
    const SExpr& sort = e.items[3];
    std::string sname;
    std::vector<uint64_t> idx;
    if (!match_indexed(sort, &sname, &idx) || sname != "BitVec" || idx.size() != 1)
        throw ParseError("unsupported sort (only (_ BitVec k))", sort.line, sort.col);
    if (idx[0] < 1 || idx[0] > kMaxWidth)
        throw ParseError("unsupported bit-vector width " + std::to_string(idx[0]), sort.line,
                         sort.col);
    return Variable{e.items[1].atom, (uint32_t)idx[0]};
}

}  // namespace detail

// Parses the supported SMT-LIB2 QF_BV subset into a Formula. Multiple asserts
// conjoin in order.
inline Formula parse_smt2(std::string_view text) {
    detail::ParseEnv env;
    std::vector<Bool> conjuncts;
    for (const SExpr& cmd : read_sexprs(text)) {
        if (!cmd.is_list || cmd.items.empty() || cmd.items[0].is_list)
            throw ParseError("expected a command", cmd.line, cmd.col);
        const std::string& head = cmd.items[0].atom;
        if (head == "set-logic") {
            if (cmd.items.size() != 2 || cmd.items[1].is_list || cmd.items[1].atom != "QF_BV")
                throw ParseError("unsupported logic (only QF_BV)", cmd.line, cmd.col);
        } else if (head == "set-info" || head == "set-option" || head == "check-sat" ||
                   head == "exit" || head == "get-model") {
            // tolerated and ignored on input
        } else if (head == "declare-fun") {
            Variable v = detail::parse_declare_fun(cmd);
            if (env.find(v.name))
                throw ParseError("duplicate declaration of '" + v.name + "'", cmd.line, cmd.col);
            env.support.push_back(std::move(v));
        } else if (head == "assert") {
            if (cmd.items.size() != 2)
                throw ParseError("assert expects exactly 1 argument", cmd.line, cmd.col);
            conjuncts.push_back(detail::parse_bool(cmd.items[1], env));
        } else {
            throw ParseError("unsupported command '" + head + "'", cmd.line, cmd.col);
        }
    }
    Formula f;
    f.support = std::move(env.support);
    f.body = mk_and(std::move(conjuncts));
    return f;
}

}  // namespace smtmc
