#include "doctest.h"

#include <random>

#include "smtmc/corpus.hpp"
#include "smtmc/oracle.hpp"
#include "smtmc/parser.hpp"
#include "smtmc/validate.hpp"

using namespace smtmc;

TEST_CASE("exact_count anchors") {
    CHECK(exact_count(parse_smt2("(declare-fun x () (_ BitVec 4)) (assert (bvult x #x5))")) == 5);
    CHECK(exact_count(parse_smt2("(declare-fun x () (_ BitVec 4)) (declare-fun y () (_ BitVec 4))"
                                 "(assert true)")) == 256);

    // x + y = 1 at width 2, verified by independent nested enumeration
    Formula f = parse_smt2("(declare-fun x () (_ BitVec 2)) (declare-fun y () (_ BitVec 2))"
                           "(assert (= (bvadd x y) #b01))");
    uint64_t reference = 0;
    for (uint64_t x = 0; x < 4; ++x) {
        for (uint64_t y = 0; y < 4; ++y) {
            Assignment a;
            a.values["x"] = x;
            a.values["y"] = y;
            if (evaluate(f, a)) ++reference;
        }
    }
    CHECK(reference == 4);
    CHECK(exact_count(f) == reference);
}

TEST_CASE("exact_count guard") {
    Formula f = parse_smt2("(declare-fun a () (_ BitVec 30)) (assert true)");
    CHECK_THROWS_AS(exact_count(f), Error);
}

TEST_CASE("exact_count agrees with the enum backend at full limit") {
    for (const CorpusEntry& entry : desk_corpus()) {
        uint32_t bits = 0;
        for (const Variable& v : entry.formula.support) bits += v.width;
        BoundedResult r = enum_backend(entry.formula, uint64_t{1} << bits);
        CAPTURE(entry.id);
        CHECK_FALSE(r.saturated);
        CHECK(exact_count(entry.formula) == r.models.size());
    }
}

TEST_CASE("eps_obs anchors from the quality table") {
    CHECK(eps_obs(256, 256) == 0.0);
    CHECK(eps_obs(256, 245) == doctest::Approx(0.0449).epsilon(0.01));
    CHECK(std::abs(eps_obs(256, 245) - (256.0 / 245.0 - 1.0)) < 1e-12);
    CHECK(eps_obs(64, 65) == doctest::Approx(0.015625));
    CHECK(std::abs(eps_obs(64, 65) - 0.0156) < 1e-4);
    CHECK(std::abs(eps_obs(256, 245) - 0.0449) < 1e-4);
}

TEST_CASE("eps_obs symmetry and errors") {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 200; ++trial) {
        double a = 1.0 + (double)(rng() % 100000);
        double b = 1.0 + (double)(rng() % 100000);
        CHECK(eps_obs(a, b) == doctest::Approx(eps_obs(b, a)));
        CHECK(eps_obs(a, b) >= 0.0);
    }
    CHECK_THROWS_AS(eps_obs(0, 5), Error);
    CHECK_THROWS_AS(eps_obs(5, 0), Error);
}

TEST_CASE("quality suite on exact-path formulas is perfect") {
    std::vector<CorpusEntry> corpus;
    for (const CorpusEntry& entry : desk_corpus())
        if (exact_count(entry.formula) <= 4) corpus.push_back(entry);
    REQUIRE(corpus.size() >= 4);
    CorpusReport report = run_quality_suite(corpus, 0.8, 0.2, 42, 3, OracleConfig{});
    CHECK(report.within_fraction == 1.0);
    CHECK(report.geo_mean_eps_records == 0.0);
    CHECK(report.geo_mean_eps_medians == 0.0);
    for (const QualityRecord& r : report.records) {
        CHECK(r.counted);
        CHECK(r.within);
        CHECK(r.eps == 0.0);
    }
}

TEST_CASE("quality suite is deterministic in the master seed") {
    std::vector<CorpusEntry> corpus;
    for (const CorpusEntry& entry : desk_corpus()) {
        if (entry.id == "cube_w4" || entry.id == "add_wrap_w4" || entry.id == "half_w6")
            corpus.push_back(entry);
    }
    REQUIRE(corpus.size() == 3);
    CorpusReport a = run_quality_suite(corpus, 0.8, 0.2, 777, 2, OracleConfig{});
    CorpusReport b = run_quality_suite(corpus, 0.8, 0.2, 777, 2, OracleConfig{});
    REQUIRE(a.records.size() == b.records.size());
    for (size_t i = 0; i < a.records.size(); ++i) {
        CHECK(a.records[i].seed == b.records[i].seed);
        CHECK(a.records[i].estimate == b.records[i].estimate);
        CHECK(a.records[i].within == b.records[i].within);
    }
    CHECK(a.within_fraction == b.within_fraction);
    CHECK(a.geo_mean_eps_records == b.geo_mean_eps_records);

    CorpusReport c = run_quality_suite(corpus, 0.8, 0.2, 778, 2, OracleConfig{});
    bool any_differs = false;
    for (size_t i = 0; i < c.records.size(); ++i)
        if (!(c.records[i].seed == a.records[i].seed)) any_differs = true;
    CHECK(any_differs);
}

TEST_CASE("quality suite records failures without aborting") {
    std::vector<CorpusEntry> corpus;
    corpus.push_back(
        CorpusEntry{"huge", parse_smt2("(declare-fun a () (_ BitVec 24)) (assert (= a (_ bv1 24)))")});
    corpus.push_back(
        CorpusEntry{"tiny", parse_smt2("(declare-fun a () (_ BitVec 4)) (assert (= a #x1))")});
    OracleConfig strict;
    strict.budget_seconds = 1e-9;  // every enumeration call times out
    CorpusReport report = run_quality_suite(corpus, 0.8, 0.9999, 3, 1, strict);
    REQUIRE(report.records.size() == 2);
    CHECK_FALSE(report.records[0].counted);
    CHECK_FALSE(report.records[0].error.empty());
    CHECK_FALSE(report.records[1].counted);
}

TEST_CASE("hash law suite at the reference configuration") {
    // n=2, k=2, C=(1): five cells under the width-2 prime 5
    uint32_t c[] = {1};
    HashConfig cfg = make_config(2, 2, c);
    CHECK(cfg.levels[0].prime.value == 5);
    std::vector<uint64_t> x{1, 2}, y{0, 0}, z{3, 1};
    HashLawReport rep = hash_law_suite(cfg, 20000, x, y, z, 31);
    CHECK(rep.domain == 5);
    CHECK(rep.expected_single == doctest::Approx(0.2));
    CHECK(rep.uniform_ok);
    CHECK(rep.expected_joint == doctest::Approx(0.04));
    CHECK(rep.pairwise_ok);
    CHECK(rep.expected_collision == doctest::Approx(0.2));
    CHECK(rep.collision_ok);
}

TEST_CASE("hash law suite rejects oversized domains") {
    uint32_t c[] = {3};
    HashConfig cfg = make_config(2, 8, c);  // 257^3 cells
    std::vector<uint64_t> x{1, 2};
    CHECK_THROWS_AS(hash_law_suite(cfg, 100, x, x, x, 1), Error);
}
