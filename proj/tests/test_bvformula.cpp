#include "doctest.h"

#include <array>
#include <random>

#include "smtmc/bvformula.hpp"
#include "smtmc/compile.hpp"
#include "smtmc/corpus.hpp"
#include "smtmc/normalize.hpp"
#include "smtmc/parser.hpp"
#include "smtmc/printer.hpp"
#include "smtmc/validate.hpp"

using namespace smtmc;

namespace {

Assignment assign(std::initializer_list<std::pair<const char*, uint64_t>> vals) {
    Assignment a;
    for (const auto& [name, v] : vals) a.values[name] = v;
    return a;
}

// Random well-typed term/formula generator for property tests.
struct AstGen {
    std::mt19937_64 rng;
    std::vector<Variable> support;

    explicit AstGen(uint64_t seed) : rng(seed) {}

    uint64_t pick(uint64_t bound) { return rng() % bound; }

    Term term(uint32_t width, int depth) {
        if (depth <= 0 || pick(4) == 0) {
            std::vector<const Variable*> fits;
            for (const Variable& v : support)
                if (v.width == width) fits.push_back(&v);
            if (!fits.empty() && pick(2) == 0) return mk_var(*fits[pick(fits.size())]);
            return mk_const(rng() & mask64(width), width);
        }
        switch (pick(9)) {
            case 0: return mk_bvadd(term(width, depth - 1), term(width, depth - 1));
            case 1: return mk_bvmul(term(width, depth - 1), term(width, depth - 1));
            case 2: return mk_bvurem(term(width, depth - 1), term(width, depth - 1));
            case 3: return mk_bvand(term(width, depth - 1), term(width, depth - 1));
            case 4: return mk_bvor(term(width, depth - 1), term(width, depth - 1));
            case 5: return mk_bvnot(term(width, depth - 1));
            case 6: {
                if (width >= 2) {
                    uint32_t low = 1 + (uint32_t)pick(width - 1);
                    return mk_concat(term(width - low, depth - 1), term(low, depth - 1));
                }
                return mk_bvxor(term(width, depth - 1), term(width, depth - 1));
            }
            case 7: {
                uint32_t wider = width + (uint32_t)pick(4);
                if (wider > width && wider <= 16) {
                    uint32_t lo = (uint32_t)pick(wider - width + 1);
                    return mk_extract(term(wider, depth - 1), lo, lo + width - 1);
                }
                return mk_term_ite(boolean(depth - 1), term(width, depth - 1),
                                   term(width, depth - 1));
            }
            default:
                return zext_to(width, depth - 1);
        }
    }

    Term zext_to(uint32_t width, int depth) {
        uint32_t inner = 1 + (uint32_t)pick(width);
        if (inner > width) inner = width;
        if (inner == width) return term(width, depth);
        return mk_zero_extend(term(inner, depth), width - inner);
    }

    Bool boolean(int depth) {
        if (depth <= 0 || pick(4) == 0) {
            switch (pick(4)) {
                case 0: return mk_true();
                case 1: return mk_false();
                default: {
                    uint32_t w = 1 + (uint32_t)pick(8);
                    return mk_ult(term(w, 0), term(w, 0));
                }
            }
        }
        switch (pick(6)) {
            case 0: {
                uint32_t w = 1 + (uint32_t)pick(8);
                BoolKind k = std::array{BoolKind::Eq, BoolKind::Ult, BoolKind::Ule, BoolKind::Ugt,
                                        BoolKind::Uge}[pick(5)];
                return mk_atom(k, term(w, depth - 1), term(w, depth - 1));
            }
            case 1: {
                std::vector<Bool> args;
                size_t n = 2 + pick(3);
                for (size_t i = 0; i < n; ++i) args.push_back(boolean(depth - 1));
                return mk_and(std::move(args));
            }
            case 2: {
                std::vector<Bool> args;
                size_t n = 2 + pick(3);
                for (size_t i = 0; i < n; ++i) args.push_back(boolean(depth - 1));
                return mk_or(std::move(args));
            }
            case 3: return mk_not(boolean(depth - 1));
            case 4: return mk_bool_ite(boolean(depth - 1), boolean(depth - 1), boolean(depth - 1));
            default: {
                uint32_t w = 1 + (uint32_t)pick(8);
                return mk_eq(term(w, depth - 1), term(w, depth - 1));
            }
        }
    }

    Formula formula() {
        support.clear();
        size_t n = 1 + pick(3);
        for (size_t i = 0; i < n; ++i)
            support.push_back(Variable{"v" + std::to_string(i), 1 + (uint32_t)pick(8)});
        Formula f;
        f.support = support;
        f.body = boolean(3);
        return f;
    }
};

}  // namespace

TEST_CASE("parse a simple comparison") {
    Formula f = parse_smt2("(declare-fun x () (_ BitVec 4)) (assert (bvult x #x5))");
    REQUIRE(f.support.size() == 1);
    CHECK(f.support[0].name == "x");
    CHECK(f.support[0].width == 4);
    CHECK(f.body->kind == BoolKind::Ult);
    CHECK(evaluate(f, assign({{"x", 3}})));
    CHECK_FALSE(evaluate(f, assign({{"x", 5}})));
}

TEST_CASE("parse extract atom") {
    Formula f = parse_smt2(
        "(declare-fun y () (_ BitVec 8)) (assert (= ((_ extract 3 0) y) #x0))");
    CHECK(f.body->kind == BoolKind::Eq);
    CHECK(f.body->ta->kind == TermKind::Extract);
    CHECK(f.body->ta->lo == 0);
    CHECK(f.body->ta->hi == 3);
    CHECK(f.body->ta->width == 4);
    CHECK(evaluate(f, assign({{"y", 0xA0}})));
    CHECK_FALSE(evaluate(f, assign({{"y", 0x97}})));
}

TEST_CASE("unsupported operator is rejected by name and position") {
    try {
        parse_smt2("(declare-fun x () (_ BitVec 4))\n(declare-fun y () (_ BitVec 4))\n"
                   "(assert (= (bvsdiv x y) x))");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        std::string msg = e.what();
        CHECK(msg.find("bvsdiv") != std::string::npos);
        CHECK(e.line == 3);
        CHECK(e.col > 1);
    }
}

TEST_CASE("parser diagnostics") {
    CHECK_THROWS_AS(parse_smt2("(assert (bvult x #b1))"), ParseError);  // undeclared
    CHECK_THROWS_AS(parse_smt2("(declare-fun x () (_ BitVec 4))"
                               "(declare-fun x () (_ BitVec 4))"),
                    ParseError);  // duplicate
    CHECK_THROWS_AS(parse_smt2("(declare-fun x () (_ BitVec 4))"
                               "(declare-fun y () (_ BitVec 5))"
                               "(assert (bvult x y))"),
                    ParseError);  // width mismatch
    CHECK_THROWS_AS(parse_smt2("(declare-fun x () (_ BitVec 4)) (assert (bvult x 5))"),
                    ParseError);  // bare numeral
    CHECK_THROWS_AS(parse_smt2("(declare-fun x () (_ BitVec 0)) (assert true)"), ParseError);
    CHECK_THROWS_AS(parse_smt2("(declare-fun x () (_ BitVec 4)) (assert (= x #b11111))"),
                    ParseError);  // constant width mismatch
    CHECK_THROWS_AS(parse_smt2("(assert (= (_ bv16 4) (_ bv0 4)))"), ParseError);  // doesn't fit
    CHECK_THROWS_AS(parse_smt2("(assert true"), ParseError);   // unbalanced
    CHECK_THROWS_AS(parse_smt2("(set-logic QF_LIA)"), ParseError);
    CHECK_THROWS_AS(parse_smt2("(declare-fun x () (_ BitVec 4)) (maximize x)"), ParseError);
}

TEST_CASE("tolerated commands are ignored") {
    Formula f = parse_smt2("(set-logic QF_BV) (set-info :status sat)\n"
                           "(declare-fun x () (_ BitVec 4)) (assert true) (check-sat) (exit)");
    CHECK(f.support.size() == 1);
    CHECK(f.body->kind == BoolKind::True);
}

TEST_CASE("constant notations agree") {
    Formula a = parse_smt2("(declare-fun x () (_ BitVec 8)) (assert (= x #x5a))");
    Formula b = parse_smt2("(declare-fun x () (_ BitVec 8)) (assert (= x #b01011010))");
    Formula c = parse_smt2("(declare-fun x () (_ BitVec 8)) (assert (= x (_ bv90 8)))");
    CHECK(formula_equal(a, b));
    CHECK(formula_equal(b, c));
}

TEST_CASE("evaluator semantics") {
    // wrap-around addition: 3 + 1 = 0 at width 2
    Formula f = parse_smt2("(declare-fun x () (_ BitVec 2)) (declare-fun y () (_ BitVec 2))"
                           "(assert (= (bvadd x y) #b00))");
    CHECK(evaluate(f, assign({{"x", 3}, {"y", 1}})));
    CHECK_FALSE(evaluate(f, assign({{"x", 3}, {"y", 2}})));

    // high nibble of 0x97 is 9
    Formula g = parse_smt2("(declare-fun y () (_ BitVec 8))"
                           "(assert (= ((_ extract 7 4) y) #b1001))");
    CHECK(evaluate(g, assign({{"y", 0x97}})));

    // missing variable and over-width value
    Formula h = parse_smt2("(declare-fun x () (_ BitVec 4)) (assert (bvult x #x5))");
    CHECK_THROWS_AS(evaluate(h, assign({})), Error);
    CHECK_THROWS_AS(evaluate(h, assign({{"x", 16}})), Error);
}

TEST_CASE("evaluator covers every operator") {
    Formula f = parse_smt2(
        "(declare-fun a () (_ BitVec 4)) (declare-fun b () (_ BitVec 4))"
        "(assert (bvule (bvurem a b) (bvor (bvmul a b) (bvadd a b))))"
        "(assert (bvugt (concat a b) #x10))"
        "(assert (bvuge ((_ zero_extend 4) (bvxor a b)) #x07))"
        "(assert (bvult (bvnot (bvand a b)) #xf))"
        "(assert (or (bvult a b) (not (bvult b a)) false))"
        "(assert (= (ite (bvult a b) a b) a))");
    // spot checks: a=6,b=3 fails the zero_extend conjunct (6 xor 3 = 5 < 7)
    CHECK_FALSE(evaluate(f, assign({{"a", 6}, {"b", 3}})));
    // a=11,b=13: 11%13=11 <= (15|8)=15; 0xbd>0x10; 11^13=6 < 7 -> false
    CHECK_FALSE(evaluate(f, assign({{"a", 11}, {"b", 13}})));
    // both evaluation routes agree everywhere, and the formula is satisfiable
    CompiledFormula compiled(f);
    uint64_t sat = 0;
    for (uint64_t a = 0; a < 16; ++a) {
        for (uint64_t b = 0; b < 16; ++b) {
            uint64_t values[2] = {a, b};
            bool ref = evaluate(f, assign({{"a", a}, {"b", b}}));
            REQUIRE(compiled.eval(values) == ref);
            sat += ref;
        }
    }
    CHECK(sat > 0);
}

TEST_CASE("printer emits canonical subset text") {
    Formula f = parse_smt2("(declare-fun x () (_ BitVec 4)) (assert (bvult x #x5))");
    std::string text = print_smt2(f);
    CHECK(text.find("(declare-fun x () (_ BitVec 4))") != std::string::npos);
    CHECK(text.find("(bvult x #b0101)") != std::string::npos);

    Formula t = parse_smt2("(declare-fun x () (_ BitVec 4)) (assert true)");
    CHECK(print_smt2(t).find("(assert true)") != std::string::npos);
}

TEST_CASE("one assert per conjunct") {
    Formula f = parse_smt2("(declare-fun x () (_ BitVec 4))"
                           "(assert (bvult x #x9)) (assert (bvugt x #x2))");
    std::string text = print_smt2(f);
    size_t first = text.find("(assert ");
    size_t second = text.find("(assert ", first + 1);
    CHECK(second != std::string::npos);
}

TEST_CASE("round-trip is structural identity on the corpus") {
    for (const CorpusEntry& entry : desk_corpus()) {
        Formula back = parse_smt2(print_smt2(entry.formula));
        CAPTURE(entry.id);
        CHECK(formula_equal(entry.formula, back));
    }
}

TEST_CASE("round-trip on random formulas") {
    AstGen gen(2024);
    for (int trial = 0; trial < 300; ++trial) {
        Formula f = gen.formula();
        Formula back = parse_smt2(print_smt2(f));
        REQUIRE(formula_equal(f, back));
    }
}

TEST_CASE("type soundness of random terms") {
    AstGen gen(55);
    gen.support = {Variable{"v0", 5}, Variable{"v1", 8}};
    for (int trial = 0; trial < 500; ++trial) {
        uint32_t w = 1 + (uint32_t)gen.pick(12);
        Term t = gen.term(w, 3);
        REQUIRE(t->width == w);
    }
    // width rules on the builders themselves
    CHECK(mk_concat(mk_const(1, 3), mk_const(0, 5))->width == 8);
    CHECK(mk_extract(mk_const(0xAA, 8), 2, 6)->width == 5);
    CHECK(mk_zero_extend(mk_const(1, 3), 4)->width == 7);
    CHECK_THROWS_AS(mk_extract(mk_const(0, 4), 2, 4), Error);
    CHECK_THROWS_AS(mk_bvadd(mk_const(0, 4), mk_const(0, 5)), Error);
    CHECK_THROWS_AS(mk_const(16, 4), Error);
}

TEST_CASE("compiled evaluator agrees with the reference evaluator") {
    AstGen gen(77);
    for (int trial = 0; trial < 200; ++trial) {
        Formula f = gen.formula();
        CompiledFormula compiled(f);
        std::vector<uint64_t> values(f.support.size());
        for (int sample = 0; sample < 50; ++sample) {
            Assignment a;
            for (size_t i = 0; i < f.support.size(); ++i) {
                values[i] = gen.rng() & mask64(f.support[i].width);
                a.values[f.support[i].name] = values[i];
            }
            REQUIRE(compiled.eval(values.data()) == evaluate(f, a));
        }
    }
}

TEST_CASE("normalize_widths is the identity on uniform widths") {
    Formula f = parse_smt2("(declare-fun x () (_ BitVec 4)) (declare-fun y () (_ BitVec 4))"
                           "(assert (bvult x y))");
    Formula n = normalize_widths(f);
    CHECK(formula_equal(f, n));
}

TEST_CASE("normalize_widths pins fresh high bits and preserves counts") {
    Formula f = parse_smt2("(declare-fun x () (_ BitVec 2)) (declare-fun y () (_ BitVec 4))"
                           "(assert (bvult x #b10))");
    Formula n = normalize_widths(f);
    REQUIRE(n.support.size() == 2);
    CHECK(n.support[0].width == 4);
    CHECK(n.support[1].width == 4);
    CHECK(exact_count(f) == 32);  // 2 choices for x, 16 for y
    CHECK(exact_count(n) == 32);
}

TEST_CASE("normalize_widths preserves counts across the corpus") {
    for (const CorpusEntry& entry : desk_corpus()) {
        Formula n = normalize_widths(entry.formula);
        CAPTURE(entry.id);
        CHECK(n.support.size() == entry.formula.support.size());
        CHECK(exact_count(n) == exact_count(entry.formula));
    }
}

TEST_CASE("normalize_widths on random mixed-width formulas") {
    AstGen gen(4242);
    int done = 0;
    while (done < 60) {
        Formula f = gen.formula();
        uint32_t bits = 0;
        for (const Variable& v : f.support) bits += v.width;
        uint32_t maxw = 0;
        for (const Variable& v : f.support) maxw = std::max(maxw, v.width);
        uint32_t nbits = (uint32_t)f.support.size() * maxw;
        if (bits > 16 || nbits > 16) continue;
        ++done;
        Formula n = normalize_widths(f);
        REQUIRE(exact_count(f) == exact_count(n));
        REQUIRE(n.support.size() == f.support.size());
    }
}
