#pragma once

#include <cstdint>
#include <vector>

#include "smtmc/bvformula.hpp"

namespace smtmc {

// Flat postfix compilation of a Formula for fast repeated evaluation during
// enumeration. Variables are resolved to support indices once; booleans run
// on the same stack as 0/1 words. Top-level conjuncts are separate programs
// so a false conjunct stops the evaluation early.
class CompiledFormula {
public:
    explicit CompiledFormula(const Formula& f) {
        for (const Variable& v : f.support) widths_.push_back(v.width);
        if (f.body->kind == BoolKind::And) {
            for (const Bool& c : f.body->args) programs_.push_back(compile_program(c, f));
        } else {
            programs_.push_back(compile_program(f.body, f));
        }
        stack_.resize(max_depth_ + 1);
    }

    size_t num_vars() const { return widths_.size(); }
    const std::vector<uint32_t>& var_widths() const { return widths_; }

    // values[i] is the (already masked) word for support variable i.
    bool eval(const uint64_t* values) {
        for (const Program& p : programs_)
            if (run(p, values) == 0) return false;
        return true;
    }

private:
    enum class Op : uint8_t {
        Const,
        Var,
        Add,
        Mul,
        URem,
        BAnd,
        BOr,
        BXor,
        BNot,
        Concat,
        Extract,
        Eq,
        Ult,
        Ule,
        Ugt,
        Uge,
        LNot,
        LAnd,
        LOr,
        Sel,
    };

    struct Instr {
        Op op;
        uint32_t arg = 0;
        uint64_t imm = 0;
    };

    using Program = std::vector<Instr>;

    uint32_t var_index(const Formula& f, const std::string& name) const {
        for (size_t i = 0; i < f.support.size(); ++i)
            if (f.support[i].name == name) return (uint32_t)i;
        throw Error("formula body references undeclared variable " + name);
    }

    void emit_term(const Term& t, const Formula& f, Program& prog, size_t& depth) {
        switch (t->kind) {
            case TermKind::Constant:
                prog.push_back({Op::Const, 0, t->value});
                bump(depth, 1);
                return;
            case TermKind::Var:
                prog.push_back({Op::Var, var_index(f, t->name), 0});
                bump(depth, 1);
                return;
            case TermKind::BvAdd:
            case TermKind::BvMul: {
                emit_term(t->a, f, prog, depth);
                emit_term(t->b, f, prog, depth);
                prog.push_back({t->kind == TermKind::BvAdd ? Op::Add : Op::Mul, 0,
                                mask64(t->width)});
                --depth;
                return;
            }
            case TermKind::BvURem:
            case TermKind::BvAnd:
            case TermKind::BvOr:
            case TermKind::BvXor: {
                emit_term(t->a, f, prog, depth);
                emit_term(t->b, f, prog, depth);
                Op op = t->kind == TermKind::BvURem ? Op::URem
                        : t->kind == TermKind::BvAnd ? Op::BAnd
                        : t->kind == TermKind::BvOr  ? Op::BOr
                                                     : Op::BXor;
                prog.push_back({op, 0, 0});
                --depth;
                return;
            }
            case TermKind::BvNot:
                emit_term(t->a, f, prog, depth);
                prog.push_back({Op::BNot, 0, mask64(t->width)});
                return;
            case TermKind::Concat:
                emit_term(t->a, f, prog, depth);
                emit_term(t->b, f, prog, depth);
                prog.push_back({Op::Concat, t->b->width, 0});
                --depth;
                return;
            case TermKind::Extract:
                emit_term(t->a, f, prog, depth);
                prog.push_back({Op::Extract, t->lo, mask64(t->width)});
                return;
            case TermKind::ZeroExtend:
                emit_term(t->a, f, prog, depth);  // values stay canonical
                return;
            case TermKind::Ite:
                emit_bool(t->cond, f, prog, depth);
                emit_term(t->a, f, prog, depth);
                emit_term(t->b, f, prog, depth);
                prog.push_back({Op::Sel, 0, 0});
                depth -= 2;
                return;
        }
    }

    void emit_bool(const Bool& e, const Formula& f, Program& prog, size_t& depth) {
        switch (e->kind) {
            case BoolKind::True:
            case BoolKind::False:
                prog.push_back({Op::Const, 0, e->kind == BoolKind::True ? uint64_t{1} : 0});
                bump(depth, 1);
                return;
            case BoolKind::Eq:
            case BoolKind::Ult:
            case BoolKind::Ule:
            case BoolKind::Ugt:
            case BoolKind::Uge: {
                emit_term(e->ta, f, prog, depth);
                emit_term(e->tb, f, prog, depth);
                Op op = e->kind == BoolKind::Eq    ? Op::Eq
                        : e->kind == BoolKind::Ult ? Op::Ult
                        : e->kind == BoolKind::Ule ? Op::Ule
                        : e->kind == BoolKind::Ugt ? Op::Ugt
                                                   : Op::Uge;
                prog.push_back({op, 0, 0});
                --depth;
                return;
            }
            case BoolKind::And:
            case BoolKind::Or: {
                for (const Bool& c : e->args) emit_bool(c, f, prog, depth);
                prog.push_back({e->kind == BoolKind::And ? Op::LAnd : Op::LOr,
                                (uint32_t)e->args.size(), 0});
                depth -= e->args.size() - 1;
                return;
            }
            case BoolKind::Not:
                emit_bool(e->args[0], f, prog, depth);
                prog.push_back({Op::LNot, 0, 0});
                return;
            case BoolKind::Ite:
                emit_bool(e->args[0], f, prog, depth);
                emit_bool(e->args[1], f, prog, depth);
                emit_bool(e->args[2], f, prog, depth);
                prog.push_back({Op::Sel, 0, 0});
                depth -= 2;
                return;
        }
    }

    void bump(size_t& depth, size_t n) {
        depth += n;
        if (depth > max_depth_) max_depth_ = depth;
    }

    Program compile_program(const Bool& e, const Formula& f) {
        Program prog;
        size_t depth = 0;
        emit_bool(e, f, prog, depth);
        return prog;
    }

    uint64_t run(const Program& prog, const uint64_t* values) {
        uint64_t* sp = stack_.data();
        for (const Instr& ins : prog) {
            switch (ins.op) {
                case Op::Const:
                    *sp++ = ins.imm;
                    break;
                case Op::Var:
                    *sp++ = values[ins.arg];
                    break;
                case Op::Add:
                    sp[-2] = (sp[-2] + sp[-1]) & ins.imm;
                    --sp;
                    break;
                case Op::Mul:
                    sp[-2] = (sp[-2] * sp[-1]) & ins.imm;
                    --sp;
                    break;
                case Op::URem:
                    sp[-2] = sp[-1] == 0 ? sp[-2] : sp[-2] % sp[-1];
                    --sp;
                    break;
                case Op::BAnd:
                    sp[-2] &= sp[-1];
                    --sp;
                    break;
                case Op::BOr:
                    sp[-2] |= sp[-1];
                    --sp;
                    break;
                case Op::BXor:
                    sp[-2] ^= sp[-1];
                    --sp;
                    break;
                case Op::BNot:
                    sp[-1] = ~sp[-1] & ins.imm;
                    break;
                case Op::Concat:
                    sp[-2] = (sp[-2] << ins.arg) | sp[-1];
                    --sp;
                    break;
                case Op::Extract:
                    sp[-1] = (sp[-1] >> ins.arg) & ins.imm;
                    break;
                case Op::Eq:
                    sp[-2] = sp[-2] == sp[-1];
                    --sp;
                    break;
                case Op::Ult:
                    sp[-2] = sp[-2] < sp[-1];
                    --sp;
                    break;
                case Op::Ule:
                    sp[-2] = sp[-2] <= sp[-1];
                    --sp;
                    break;
                case Op::Ugt:
                    sp[-2] = sp[-2] > sp[-1];
                    --sp;
                    break;
                case Op::Uge:
                    sp[-2] = sp[-2] >= sp[-1];
                    --sp;
                    break;
                case Op::LNot:
                    sp[-1] = !sp[-1];
                    break;
                case Op::LAnd: {
                    uint64_t acc = 1;
                    sp -= ins.arg;
                    for (uint32_t i = 0; i < ins.arg; ++i) acc &= sp[i] != 0;
                    *sp++ = acc;
                    break;
                }
                case Op::LOr: {
                    uint64_t acc = 0;
                    sp -= ins.arg;
                    for (uint32_t i = 0; i < ins.arg; ++i) acc |= sp[i] != 0;
                    *sp++ = acc;
                    break;
                }
                case Op::Sel:
                    sp[-3] = sp[-3] ? sp[-2] : sp[-1];
                    sp -= 2;
                    break;
            }
        }
        return sp[-1];
    }

    std::vector<uint32_t> widths_;
    std::vector<Program> programs_;
    std::vector<uint64_t> stack_;
    size_t max_depth_ = 0;
};

}  // namespace smtmc
