#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <mutex>
#include <random>
#include <thread>
#include <vector>

#include "smtmc/bignum.hpp"
#include "smtmc/bvformula.hpp"
#include "smtmc/error.hpp"
#include "smtmc/hashfamily.hpp"
#include "smtmc/normalize.hpp"
#include "smtmc/oracle.hpp"

namespace smtmc {

// Cell-size threshold as a function of the tolerance: 2 * ceil(e^{-3/2} * (1 + 1/eps)^2).
inline uint64_t compute_pivot(double epsilon) {
    if (!(epsilon > 0.0)) throw Error("tolerance must be positive");
    double raw = std::exp(-1.5) * (1.0 + 1.0 / epsilon) * (1.0 + 1.0 / epsilon);
    return 2 * (uint64_t)std::ceil(raw);
}

// Number of independent core invocations: ceil(35 * log2(3/delta)).
inline uint32_t compute_t(double delta) {
    if (!(delta > 0.0 && delta < 1.0)) throw Error("confidence parameter must be in (0, 1)");
    return (uint32_t)std::ceil(35.0 * std::log2(3.0 / delta));
}

struct Params {
    double epsilon = 0.8;
    double delta = 0.2;
    uint64_t pivot = 0;
    uint32_t t = 0;
    uint64_t seed = 1;

    static Params make(double epsilon, double delta, uint64_t seed) {
        Params p;
        p.epsilon = epsilon;
        p.delta = delta;
        p.pivot = compute_pivot(epsilon);
        p.t = compute_t(delta);
        p.seed = seed;
        return p;
    }
};

enum class CoreOutcome { ExactSmall, Estimate, Failed };

inline const char* to_string(CoreOutcome o) {
    switch (o) {
        case CoreOutcome::ExactSmall: return "exact";
        case CoreOutcome::Estimate: return "estimate";
        case CoreOutcome::Failed: return "failed";
    }
    return "?";
}

struct CoreIteration {
    std::vector<uint32_t> level_counts;  // after this step's update
    BigUint num_cells;
    uint64_t found = 0;  // |Y|, capped at pivot+1
    bool saturated = false;
};

struct CoreTrace {
    CoreOutcome outcome = CoreOutcome::Failed;
    BigUint estimate;                    // set unless Failed
    std::vector<uint32_t> level_counts;  // final
    BigUint num_cells;                   // final
    uint64_t leaf = 0;                   // final |Y|
    bool timed_out = false;
    std::vector<CoreIteration> iterations;
};

struct CountEstimate {
    bool ok = false;
    BigUint final_count;
    uint64_t pivot = 0;
    uint32_t t = 0;
    uint32_t successes = 0;
    bool saw_timeout = false;
    std::vector<CoreTrace> traces;
};

// Lower median: element floor((len-1)/2) of the sorted list.
inline BigUint find_median(std::vector<BigUint> values) {
    if (values.empty()) throw Error("find_median: empty list");
    std::sort(values.begin(), values.end());
    return values[(values.size() - 1) / 2];
}

namespace detail {

inline BigUint cells_product(const std::vector<HashLevel>& levels,
                             const std::vector<uint32_t>& level_counts) {
    BigUint r(1);
    for (size_t j = 0; j < levels.size(); ++j)
        for (uint32_t rep = 0; rep < level_counts[j]; ++rep) r.mul_u64(levels[j].prime.value);
    return r;
}

inline Formula conjoin(const Formula& f, Bool extra) {
    // hash constraint first: it rejects most assignments, so the enumerating
    // backend sees it before the (possibly larger) original body
    std::vector<Bool> parts;
    parts.push_back(std::move(extra));
    if (f.body->kind == BoolKind::And)
        for (const Bool& c : f.body->args) parts.push_back(c);
    else
        parts.push_back(f.body);
    return Formula{f.support, mk_and(std::move(parts))};
}

}  // namespace detail

// One core invocation: returns the exact count when the formula has at most
// pivot models, otherwise partitions the solution space with random hash
// constraints until a randomly chosen cell is small, and scales up. Fails
// (CoreOutcome::Failed) when a cell cannot be sized within the level ladder,
// when the cell count exceeds the full space, or when the oracle times out.
inline CoreTrace approx_mc_core(const Formula& f, uint64_t pivot, uint32_t k,
                                const OracleConfig& oracle, std::mt19937_64& rng) {
    for (const Variable& v : f.support)
        if (v.width != k) throw Error("approx_mc_core: formula is not width-normalized");

    CoreTrace trace;
    BoundedResult first;
    try {
        first = bounded_smt(f, pivot, oracle);
    } catch (const OracleTimeout&) {
        trace.timed_out = true;
        return trace;  // Failed
    }
    if (!first.saturated) {
        trace.outcome = CoreOutcome::ExactSmall;
        trace.leaf = first.models.size();
        trace.estimate = BigUint(first.models.size());
        trace.num_cells = BigUint(1);
        return trace;
    }

    uint32_t n = (uint32_t)f.support.size();
    HashConfig cfg = make_config(n, k, {});
    std::vector<uint32_t> counts(cfg.levels.size(), 0);
    size_t level = cfg.levels.size() >= 2 ? 1 : 0;
    counts[level] = 1;
    BigUint num_cells = detail::cells_product(cfg.levels, counts);
    const BigUint space_bound = BigUint::pow2(n * k);

    uint64_t found = pivot + 1;
    bool saturated = true;
    for (;;) {
        cfg.level_counts = counts;
        HashFunction h = sample_hash(cfg, rng);
        Cell cell = sample_cell(h, rng);
        Formula constrained = detail::conjoin(f, encode_constraint(h, cell, f.support));

        BoundedResult y;
        try {
            y = bounded_smt(constrained, pivot, oracle);
        } catch (const OracleTimeout&) {
            trace.timed_out = true;
            trace.level_counts = counts;
            trace.num_cells = num_cells;
            return trace;  // Failed
        }
        found = y.models.size();
        saturated = y.saturated;

        bool dead_end = false;
        if (saturated) {
            counts[level] += 1;  // split each cell p_level further
            num_cells = detail::cells_product(cfg.levels, counts);
        }
        if (found == 0) {
            if (cfg.levels[level].prime.value > 2 && level + 1 < cfg.levels.size()) {
                // trade one coarse component for one at the next finer level
                counts[level] -= 1;
                ++level;
                counts[level] += 1;
                num_cells = detail::cells_product(cfg.levels, counts);
            } else {
                dead_end = true;  // single-bit slices already, nothing finer
            }
        }
        trace.iterations.push_back(CoreIteration{counts, num_cells, found, saturated});
        if (dead_end) break;
        if ((found > 0 && !saturated) || num_cells > space_bound) break;
    }

    trace.level_counts = counts;
    trace.num_cells = num_cells;
    trace.leaf = found;
    if (found == 0 || saturated) return trace;  // Failed
    trace.outcome = CoreOutcome::Estimate;
    BigUint estimate = num_cells;
    estimate.mul_u64(found);
    trace.estimate = estimate;
    return trace;
}

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// RNG stream for invocation `index`, derived from the master seed so results
// do not depend on scheduling order.
inline std::mt19937_64 derive_rng(uint64_t seed, uint32_t index) {
    return std::mt19937_64(splitmix64(seed ^ splitmix64(0x5EEDull + index)));
}

// Full counter: width-normalizes, runs t independent core invocations
// (concurrently), and returns the median of the successful estimates.
inline CountEstimate approx_mc(const Formula& f, double epsilon, double delta,
                               const OracleConfig& oracle, uint64_t seed) {
    Params params = Params::make(epsilon, delta, seed);
    Formula normalized = normalize_widths(f);
    uint32_t k = 0;
    for (const Variable& v : normalized.support) k = std::max(k, v.width);

    CountEstimate result;
    result.pivot = params.pivot;
    result.t = params.t;
    result.traces.resize(params.t);

    unsigned workers = std::min<unsigned>(std::max(1u, std::thread::hardware_concurrency()),
                                          params.t);
    std::atomic<uint32_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto run = [&]() {
        for (;;) {
            uint32_t idx = next.fetch_add(1);
            if (idx >= params.t) return;
            try {
                std::mt19937_64 rng = derive_rng(seed, idx);
                result.traces[idx] = approx_mc_core(normalized, params.pivot, k, oracle, rng);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                return;
            }
        }
    };
    if (workers <= 1) {
        run();
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run);
        for (std::thread& th : pool) th.join();
    }
    if (failure) std::rethrow_exception(failure);

    std::vector<BigUint> values;
    for (const CoreTrace& tr : result.traces) {
        if (tr.outcome != CoreOutcome::Failed) values.push_back(tr.estimate);
        if (tr.timed_out) result.saw_timeout = true;
    }
    result.successes = (uint32_t)values.size();
    if (values.empty()) {
        result.ok = false;
        return result;
    }
    result.ok = true;
    result.final_count = find_median(std::move(values));
    return result;
}

}  // namespace smtmc
