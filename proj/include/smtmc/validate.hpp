#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "smtmc/bvformula.hpp"
#include "smtmc/compile.hpp"
#include "smtmc/counter.hpp"
#include "smtmc/error.hpp"
#include "smtmc/hashfamily.hpp"
#include "smtmc/oracle.hpp"

namespace smtmc {

// |R_F| by exhaustive evaluation. Guarded to assignment spaces of at most 2^28.
inline uint64_t exact_count(const Formula& f) {
    uint32_t total_bits = 0;
    for (const Variable& v : f.support) total_bits += v.width;
    if (total_bits > kMaxEnumBits)
        throw Error("exact_count: assignment space 2^" + std::to_string(total_bits) +
                    " exceeds 2^" + std::to_string(kMaxEnumBits));
    CompiledFormula compiled(f);
    size_t nvars = f.support.size();
    std::vector<uint32_t> shifts(nvars, 0);
    std::vector<uint64_t> masks(nvars, 0);
    uint32_t shift = total_bits;
    for (size_t i = 0; i < nvars; ++i) {
        shift -= f.support[i].width;
        shifts[i] = shift;
        masks[i] = mask64(f.support[i].width);
    }
    std::vector<uint64_t> values(nvars, 0);
    uint64_t count = 0;
    const uint64_t space = uint64_t{1} << total_bits;
    for (uint64_t code = 0; code < space; ++code) {
        for (size_t i = 0; i < nvars; ++i) values[i] = (code >> shifts[i]) & masks[i];
        if (compiled.eval(values.data())) ++count;
    }
    return count;
}

// Observed tolerance: estimate/exact - 1 when the estimate is high,
// exact/estimate - 1 when it is low; always >= 0.
inline double eps_obs(double exact, double estimate) {
    if (!(exact > 0.0) || !(estimate > 0.0)) throw Error("eps_obs: counts must be positive");
    return estimate >= exact ? estimate / exact - 1.0 : exact / estimate - 1.0;
}

struct CorpusEntry {
    std::string id;
    Formula formula;
};

struct QualityRecord {
    std::string id;
    uint64_t seed = 0;
    uint64_t exact = 0;
    BigUint estimate;
    bool counted = false;      // the counter produced a value
    bool eps_defined = false;  // both counts positive (or both zero)
    double eps = 0.0;
    bool within = false;       // inside [exact/(1+eps), (1+eps)*exact]
    std::string error;
};

struct FormulaSummary {
    std::string id;
    uint64_t exact = 0;
    uint32_t runs = 0;
    uint32_t counted = 0;
    uint32_t within = 0;
    BigUint median_estimate;
    bool eps_defined = false;
    double eps_of_median = 0.0;
};

struct CorpusReport {
    double epsilon = 0.8;
    double delta = 0.2;
    uint64_t master_seed = 0;
    uint32_t runs_per_formula = 0;
    std::vector<QualityRecord> records;
    std::vector<FormulaSummary> per_formula;
    double within_fraction = 0.0;        // over records that produced a count
    double geo_mean_eps_records = 0.0;   // geometric mean over per-run eps values
    double geo_mean_eps_medians = 0.0;   // geometric mean over per-formula medians
};

namespace detail {

inline bool within_tolerance(uint64_t exact, const BigUint& estimate, double epsilon) {
    if (exact == 0) return estimate.is_zero();
    long double est = (long double)estimate.to_double();
    long double lo = (long double)exact / (1.0L + (long double)epsilon);
    long double hi = (long double)exact * (1.0L + (long double)epsilon);
    return est >= lo && est <= hi;
}

// eps_obs extended to the both-zero case (a perfect match).
inline bool record_eps(uint64_t exact, const BigUint& estimate, double* eps) {
    if (exact == 0 && estimate.is_zero()) {
        *eps = 0.0;
        return true;
    }
    if (exact == 0 || estimate.is_zero()) return false;
    *eps = eps_obs((double)exact, estimate.to_double());
    return true;
}

// Geometric mean via (1+eps) factors, minus 1.
inline double geo_mean(const std::vector<double>& eps_values) {
    if (eps_values.empty()) return 0.0;
    double log_sum = 0.0;
    for (double e : eps_values) log_sum += std::log1p(e);
    return std::expm1(log_sum / (double)eps_values.size());
}

}  // namespace detail

// Runs the counter over every corpus formula with `runs` derived seeds each
// and aggregates accuracy statistics against brute-force exact counts.
// Per-record counter failures are recorded, not propagated.
inline CorpusReport run_quality_suite(const std::vector<CorpusEntry>& corpus, double epsilon,
                                      double delta, uint64_t master_seed, uint32_t runs,
                                      const OracleConfig& oracle) {
    CorpusReport report;
    report.epsilon = epsilon;
    report.delta = delta;
    report.master_seed = master_seed;
    report.runs_per_formula = runs;

    std::vector<double> record_eps_values;
    std::vector<double> median_eps_values;
    uint32_t counted_total = 0, within_total = 0;

    for (size_t fi = 0; fi < corpus.size(); ++fi) {
        const CorpusEntry& entry = corpus[fi];
        uint64_t exact = exact_count(entry.formula);

        FormulaSummary summary;
        summary.id = entry.id;
        summary.exact = exact;
        summary.runs = runs;
        std::vector<BigUint> estimates;

        for (uint32_t run = 0; run < runs; ++run) {
            QualityRecord rec;
            rec.id = entry.id;
            rec.seed = splitmix64(master_seed ^ splitmix64((fi << 20) + run));
            rec.exact = exact;
            try {
                CountEstimate est = approx_mc(entry.formula, epsilon, delta, oracle, rec.seed);
                if (est.ok) {
                    rec.counted = true;
                    rec.estimate = est.final_count;
                } else {
                    rec.error = "all core invocations failed";
                }
            } catch (const Error& e) {
                rec.error = e.what();
            }
            if (rec.counted) {
                ++counted_total;
                ++summary.counted;
                estimates.push_back(rec.estimate);
                rec.within = detail::within_tolerance(exact, rec.estimate, epsilon);
                if (rec.within) {
                    ++within_total;
                    ++summary.within;
                }
                rec.eps_defined = detail::record_eps(exact, rec.estimate, &rec.eps);
                if (rec.eps_defined) record_eps_values.push_back(rec.eps);
            }
            report.records.push_back(std::move(rec));
        }

        if (!estimates.empty()) {
            summary.median_estimate = find_median(estimates);
            summary.eps_defined =
                detail::record_eps(exact, summary.median_estimate, &summary.eps_of_median);
            if (summary.eps_defined) median_eps_values.push_back(summary.eps_of_median);
        }
        report.per_formula.push_back(std::move(summary));
    }

    report.within_fraction = counted_total == 0 ? 0.0 : (double)within_total / counted_total;
    report.geo_mean_eps_records = detail::geo_mean(record_eps_values);
    report.geo_mean_eps_medians = detail::geo_mean(median_eps_values);
    return report;
}

// --- statistical checks of the hash-family laws ------------------------------

struct HashLawReport {
    uint64_t trials = 0;
    uint64_t domain = 1;  // product of component moduli
    double expected_single = 0.0;
    double max_dev_single = 0.0;
    double bound_single = 0.0;  // 4 standard errors
    bool uniform_ok = false;

    double expected_joint = 0.0;
    double max_dev_joint = 0.0;
    double bound_joint = 0.0;
    bool pairwise_ok = false;

    double collision_rate = 0.0;
    double expected_collision = 0.0;
    double bound_collision = 0.0;
    bool collision_ok = false;
};

namespace detail {

inline uint64_t cell_index(const std::vector<uint64_t>& value, const HashFunction& h) {
    uint64_t idx = 0;
    for (size_t r = 0; r < value.size(); ++r)
        idx = idx * h.components[r].modulus.value + value[r];
    return idx;
}

}  // namespace detail

// Empirically checks uniformity of h(X), pairwise independence of
// (h(X1), h(X2)) and the collision rate for a fixed config against their
// exact laws, at 4 standard errors per bin.
inline HashLawReport hash_law_suite(const HashConfig& cfg, uint64_t trials,
                                    std::span<const uint64_t> x_single,
                                    std::span<const uint64_t> x_pair_1,
                                    std::span<const uint64_t> x_pair_2, uint64_t seed) {
    HashLawReport report;
    report.trials = trials;

    BigUint domain_big(1);
    for (size_t j = 0; j < cfg.levels.size(); ++j)
        for (uint32_t rep = 0; rep < cfg.level_counts[j]; ++rep)
            domain_big.mul_u64(cfg.levels[j].prime.value);
    if (!domain_big.fits_u64() || domain_big.to_u64() > 1000)
        throw Error("hash_law_suite: domain too large for the statistical check");
    report.domain = domain_big.to_u64();
    uint64_t d = report.domain;

    std::vector<uint64_t> single_hits(d, 0);
    std::vector<uint64_t> joint_hits(d * d, 0);
    uint64_t collisions = 0;

    std::mt19937_64 rng(splitmix64(seed));
    for (uint64_t trial = 0; trial < trials; ++trial) {
        HashFunction h = sample_hash(cfg, rng);
        uint64_t v1 = detail::cell_index(eval_hash(h, x_single), h);
        ++single_hits[v1];
        uint64_t p1 = detail::cell_index(eval_hash(h, x_pair_1), h);
        uint64_t p2 = detail::cell_index(eval_hash(h, x_pair_2), h);
        ++joint_hits[p1 * d + p2];
        if (p1 == p2) ++collisions;
    }

    report.expected_single = 1.0 / (double)d;
    report.bound_single =
        4.0 * std::sqrt(report.expected_single * (1.0 - report.expected_single) / (double)trials);
    for (uint64_t i = 0; i < d; ++i) {
        double dev = std::abs((double)single_hits[i] / (double)trials - report.expected_single);
        report.max_dev_single = std::max(report.max_dev_single, dev);
    }
    report.uniform_ok = report.max_dev_single <= report.bound_single;

    report.expected_joint = 1.0 / ((double)d * (double)d);
    report.bound_joint =
        4.0 * std::sqrt(report.expected_joint * (1.0 - report.expected_joint) / (double)trials);
    for (uint64_t i = 0; i < d * d; ++i) {
        double dev = std::abs((double)joint_hits[i] / (double)trials - report.expected_joint);
        report.max_dev_joint = std::max(report.max_dev_joint, dev);
    }
    report.pairwise_ok = report.max_dev_joint <= report.bound_joint;

    report.collision_rate = (double)collisions / (double)trials;
    report.expected_collision = 1.0 / (double)d;
    report.bound_collision = 4.0 * std::sqrt(report.expected_collision *
                                             (1.0 - report.expected_collision) / (double)trials);
    report.collision_ok =
        std::abs(report.collision_rate - report.expected_collision) <= report.bound_collision;
    return report;
}

}  // namespace smtmc
