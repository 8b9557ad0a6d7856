#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "smtmc/bvformula.hpp"
#include "smtmc/compile.hpp"
#include "smtmc/error.hpp"
#include "smtmc/parser.hpp"
#include "smtmc/printer.hpp"
#include "smtmc/process.hpp"

namespace smtmc {

enum class BackendKind { BuiltinEnum, ExternalProcess };

struct OracleConfig {
    BackendKind backend = BackendKind::BuiltinEnum;
    std::string solver_cmd;        // whitespace-separated command for the process backend
    double budget_seconds = 60.0;  // wall-clock budget per bounded_smt call
};

// Outcome of a bounded enumeration: either all models of the formula
// (saturated == false), or limit+1 witnesses that more exist.
struct BoundedResult {
    std::vector<Assignment> models;
    bool saturated = false;
};

constexpr uint32_t kMaxEnumBits = 28;  // builtin backend scans at most 2^28 assignments

// Exhaustive scan in lexicographic order over the support (declaration order,
// first variable most significant), stopping at limit+1 hits.
inline BoundedResult enum_backend(const Formula& f, uint64_t limit,
                                  double budget_seconds = 1e18) {
    uint32_t total_bits = 0;
    for (const Variable& v : f.support) total_bits += v.width;
    if (total_bits > kMaxEnumBits)
        throw Error("enum backend: assignment space 2^" + std::to_string(total_bits) +
                    " exceeds 2^" + std::to_string(kMaxEnumBits));

    CompiledFormula compiled(f);
    size_t nvars = f.support.size();
    std::vector<uint32_t> shifts(nvars, 0);
    std::vector<uint64_t> masks(nvars, 0);
    {
        uint32_t shift = total_bits;
        for (size_t i = 0; i < nvars; ++i) {
            shift -= f.support[i].width;
            shifts[i] = shift;
            masks[i] = mask64(f.support[i].width);
        }
    }

    BoundedResult result;
    std::vector<uint64_t> values(nvars, 0);
    const uint64_t space = uint64_t{1} << total_bits;
    const auto start = std::chrono::steady_clock::now();
    for (uint64_t code = 0; code < space; ++code) {
        if ((code & 0xFFFF) == 0 && budget_seconds < 1e17) {
            double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            if (elapsed > budget_seconds) throw OracleTimeout("enum backend: budget exceeded");
        }
        for (size_t i = 0; i < nvars; ++i) values[i] = (code >> shifts[i]) & masks[i];
        if (!compiled.eval(values.data())) continue;
        Assignment a;
        for (size_t i = 0; i < nvars; ++i) a.values[f.support[i].name] = values[i];
        result.models.push_back(std::move(a));
        if (result.models.size() > limit) {
            result.saturated = true;
            return result;
        }
    }
    return result;
}

namespace detail {

inline uint64_t decode_model_value(const SExpr& e) {
    if (!e.is_list) {
        const std::string& s = e.atom;
        if (s.size() > 2 && s[0] == '#') {
            Term c = parse_bv_literal(e);
            return c->value;
        }
        throw OracleFailure("unparseable model value '" + s + "'");
    }
    // (_ bvN k)
    std::string name;
    std::vector<uint64_t> idx;
    if (match_indexed(e, &name, &idx) && name.size() > 2 && name.substr(0, 2) == "bv")
        return parse_u64(e.items[1], name.substr(2));
    throw OracleFailure("unparseable model value expression");
}

}  // namespace detail

// Blocking-constraint enumeration over a child SMT-LIB2 process: send the
// formula, then alternate (check-sat) and (get-value ...), asserting the
// negation of each model found. The child is killed when the per-call budget
// expires.
inline BoundedResult process_backend(const Formula& f, uint64_t limit, const OracleConfig& cfg) {
    if (cfg.solver_cmd.empty()) throw OracleFailure("process backend: no solver command configured");
    SolverProcess proc(cfg.solver_cmd, cfg.budget_seconds);

    proc.send("(set-option :produce-models true)\n");
    proc.send(print_smt2(f));

    std::string value_query = "(get-value (";
    for (size_t i = 0; i < f.support.size(); ++i) {
        if (i) value_query += " ";
        value_query += f.support[i].name;
    }
    value_query += "))\n";

    BoundedResult result;
    for (;;) {
        proc.send("(check-sat)\n");
        std::string verdict = proc.recv_verdict();
        if (verdict == "unsat") break;
        if (verdict != "sat")
            throw OracleFailure("process backend: solver answered '" + verdict + "'");

        Assignment model;
        if (!f.support.empty()) {
            proc.send(value_query);
            std::string reply = proc.recv_sexpr();
            std::vector<SExpr> parsed = read_sexprs(reply);
            if (parsed.size() != 1 || !parsed[0].is_list)
                throw OracleFailure("process backend: malformed get-value reply");
            for (const SExpr& pair : parsed[0].items) {
                if (!pair.is_list || pair.items.size() != 2 || pair.items[0].is_list)
                    throw OracleFailure("process backend: malformed get-value pair");
                const std::string& name = pair.items[0].atom;
                if (!f.find_var(name))
                    throw OracleFailure("process backend: model names unknown variable " + name);
                model.values[name] = detail::decode_model_value(pair.items[1]);
            }
            if (model.values.size() != f.support.size())
                throw OracleFailure("process backend: model is not total");
        }
        if (!evaluate(f, model))
            throw OracleFailure("process backend: returned model does not satisfy the formula");
        for (const Assignment& seen : result.models)
            if (seen == model) throw OracleFailure("process backend: duplicate model returned");

        result.models.push_back(model);
        if (result.models.size() > limit) {
            result.saturated = true;
            break;
        }

        // block exactly this model
        if (f.support.empty()) {
            proc.send("(assert false)\n");
        } else {
            std::vector<Bool> pins;
            for (const Variable& v : f.support)
                pins.push_back(mk_eq(mk_var(v), mk_const(model.values.at(v.name), v.width)));
            std::string block = "(assert ";
            print_bool(mk_not(mk_and(std::move(pins))), block);
            block += ")\n";
            proc.send(block);
        }
    }
    proc.finish();
    return result;
}

// BoundedSMT: up to pivot+1 distinct models of f, dispatched to the
// configured backend.
inline BoundedResult bounded_smt(const Formula& f, uint64_t pivot, const OracleConfig& cfg) {
    if (pivot < 1) throw Error("bounded_smt: pivot must be positive");
    if (cfg.backend == BackendKind::BuiltinEnum) return enum_backend(f, pivot, cfg.budget_seconds);
    return process_backend(f, pivot, cfg);
}

}  // namespace smtmc
