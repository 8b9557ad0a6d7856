#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "smtmc/bvformula.hpp"
#include "smtmc/error.hpp"
#include "smtmc/modmath.hpp"

namespace smtmc {

// Uniform draw from [0, bound) by rejection, so no modulo bias.
inline uint64_t uniform_below(std::mt19937_64& rng, uint64_t bound) {
    uint64_t min = (0 - bound) % bound;  // 2^64 mod bound
    for (;;) {
        uint64_t r = rng();
        if (r >= min) return r % bound;
    }
}

// extract(x_{var_index}, lo, hi), inclusive bit range.
struct SliceRef {
    uint32_t var_index;
    uint32_t lo;
    uint32_t hi;

    uint32_t width() const { return hi - lo + 1; }
    uint64_t value_of(uint64_t word) const { return (word >> lo) & mask64(width()); }
};

struct HashLevel {
    uint32_t slice_width;
    Prime prime;  // smallest prime >= 2^slice_width
};

// The word-level hash family over n variables of common width k is shaped
// entirely by (n, k, level_counts): level j slices every word into pieces of
// width ceil(k/2^j) and maps them linearly into Z_{p_j}; level_counts[j] says
// how many independent components are drawn at level j. The level ladder runs
// down to (and including) single-bit slices, where p = 2 and the components
// degenerate to random parity constraints.
struct HashConfig {
    uint32_t n = 0;
    uint32_t k = 0;
    std::vector<uint32_t> level_counts;  // padded to levels.size()
    std::vector<HashLevel> levels;

    uint32_t num_components() const {
        uint32_t total = 0;
        for (uint32_t c : level_counts) total += c;
        return total;
    }
};

// One linear constraint (sum coeffs[m] * slice_m + offset) mod p.
struct HashComponent {
    uint32_t level;
    Prime modulus;
    std::vector<SliceRef> slices;
    std::vector<uint64_t> coeffs;  // in Z_p
    uint64_t offset;               // in Z_p
};

struct HashFunction {
    HashConfig config;
    std::vector<HashComponent> components;  // grouped by level, level order
};

// A hash target: one value per component, in component order.
struct Cell {
    std::vector<uint64_t> target;
};

constexpr uint32_t kMaxHashWidth = 63;  // level-0 prime must fit in uint64_t

inline HashConfig make_config(uint32_t n, uint32_t k, std::span<const uint32_t> level_counts) {
    if (n < 1) throw Error("make_config: need at least one variable");
    if (k < 1 || k > kMaxHashWidth)
        throw Error("make_config: width must be in [1, " + std::to_string(kMaxHashWidth) + "]");
    HashConfig cfg;
    cfg.n = n;
    cfg.k = k;
    uint32_t w = k;
    for (;;) {
        cfg.levels.push_back(HashLevel{w, smallest_prime_geq(uint64_t{1} << w)});
        if (w == 1) break;
        w = (w + 1) / 2;  // ceil(k / 2^j)
    }
    if (level_counts.size() > cfg.levels.size())
        throw Error("make_config: more level counts than slice levels");
    cfg.level_counts.assign(level_counts.begin(), level_counts.end());
    cfg.level_counts.resize(cfg.levels.size(), 0);
    return cfg;
}

// Slices of all n words at the given level, variable-major. For width k a
// power of two, slice m covers variable floor(m/2^j), bits
// [(m mod 2^j)*(k/2^j), ...+(k/2^j)-1]. Otherwise the nominal width is
// ceil(k/2^j) and the last slice of each variable is truncated to the
// remaining bits.
inline std::vector<SliceRef> slice_layout(const HashConfig& cfg, uint32_t level) {
    if (level >= cfg.levels.size()) throw Error("slice_layout: level out of range");
    uint32_t w = cfg.levels[level].slice_width;
    uint32_t per_var = (cfg.k + w - 1) / w;
    std::vector<SliceRef> out;
    out.reserve((size_t)cfg.n * per_var);
    for (uint32_t i = 0; i < cfg.n; ++i) {
        for (uint32_t s = 0; s < per_var; ++s) {
            uint32_t lo = s * w;
            uint32_t hi = std::min(lo + w, cfg.k) - 1;
            out.push_back(SliceRef{i, lo, hi});
        }
    }
    return out;
}

// Draws every coefficient and offset independently and uniformly from Z_{p_j}.
inline HashFunction sample_hash(const HashConfig& cfg, std::mt19937_64& rng) {
    HashFunction h;
    h.config = cfg;
    for (uint32_t j = 0; j < cfg.levels.size(); ++j) {
        for (uint32_t rep = 0; rep < cfg.level_counts[j]; ++rep) {
            HashComponent comp;
            comp.level = j;
            comp.modulus = cfg.levels[j].prime;
            comp.slices = slice_layout(cfg, j);
            comp.coeffs.reserve(comp.slices.size());
            for (size_t m = 0; m < comp.slices.size(); ++m)
                comp.coeffs.push_back(uniform_below(rng, comp.modulus.value));
            comp.offset = uniform_below(rng, comp.modulus.value);
            h.components.push_back(std::move(comp));
        }
    }
    return h;
}

inline Cell sample_cell(const HashFunction& h, std::mt19937_64& rng) {
    Cell cell;
    cell.target.reserve(h.components.size());
    for (const HashComponent& comp : h.components)
        cell.target.push_back(uniform_below(rng, comp.modulus.value));
    return cell;
}

// values[i] is the word assigned to variable i of the hashed support.
inline std::vector<uint64_t> eval_hash(const HashFunction& h, std::span<const uint64_t> values) {
    if (values.size() != h.config.n) throw Error("eval_hash: wrong number of values");
    std::vector<uint64_t> out;
    out.reserve(h.components.size());
    std::vector<uint64_t> slice_vals;
    for (const HashComponent& comp : h.components) {
        slice_vals.clear();
        for (const SliceRef& s : comp.slices) slice_vals.push_back(s.value_of(values[s.var_index]));
        out.push_back(mod_linear_eval(comp.coeffs, slice_vals, comp.offset, comp.modulus));
    }
    return out;
}

inline std::vector<uint64_t> eval_hash(const HashFunction& h, std::span<const Variable> support,
                                       const Assignment& a) {
    std::vector<uint64_t> values;
    values.reserve(support.size());
    for (const Variable& v : support) values.push_back(a.at(v.name));
    return eval_hash(h, values);
}

// Accumulator width for one component: wide enough that
// num_slices * (p-1) * (2^w - 1) + (p-1) cannot overflow.
inline uint32_t accumulator_width(const HashComponent& comp) {
    return 2 * comp.modulus.width_hint + ceil_log2((uint64_t)comp.slices.size() + 1);
}

// Encodes h(X) = target as a bit-vector formula fragment over the given
// support: per component, every slice and coefficient is zero-extended to the
// accumulator width, summed, reduced with bvurem by the modulus, and equated
// to the target value. For every assignment a,
// evaluate(encode_constraint(...), a) iff eval_hash(h, a) == target.
inline Bool encode_constraint(const HashFunction& h, const Cell& cell,
                              std::span<const Variable> support) {
    if (cell.target.size() != h.components.size())
        throw Error("encode_constraint: cell does not match hash function");
    if (support.size() != h.config.n)
        throw Error("encode_constraint: support does not match hash function");
    std::vector<Bool> conjuncts;
    for (size_t r = 0; r < h.components.size(); ++r) {
        const HashComponent& comp = h.components[r];
        uint32_t cw = comp.modulus.width_hint;  // coefficients live in Z_p
        uint32_t acc_w = accumulator_width(comp);
        if (acc_w > kMaxWidth)
            throw Error("encode_constraint: accumulator width " + std::to_string(acc_w) +
                        " exceeds " + std::to_string(kMaxWidth) + " bits");
        Term sum;
        for (size_t m = 0; m < comp.slices.size(); ++m) {
            const SliceRef& s = comp.slices[m];
            const Variable& var = support[s.var_index];
            Term slice = mk_extract(mk_var(var), s.lo, s.hi);
            Term zslice = mk_zero_extend(std::move(slice), acc_w - s.width());
            Term coeff = mk_zero_extend(mk_const(comp.coeffs[m], cw), acc_w - cw);
            Term prod = mk_bvmul(std::move(coeff), std::move(zslice));
            sum = sum ? mk_bvadd(std::move(sum), std::move(prod)) : std::move(prod);
        }
        Term offset = mk_zero_extend(mk_const(comp.offset, cw), acc_w - cw);
        sum = sum ? mk_bvadd(std::move(sum), std::move(offset)) : std::move(offset);
        Term rem = mk_bvurem(std::move(sum), mk_const(comp.modulus.value, acc_w));
        conjuncts.push_back(mk_eq(std::move(rem), mk_const(cell.target[r], acc_w)));
    }
    return mk_and(std::move(conjuncts));
}

}  // namespace smtmc
