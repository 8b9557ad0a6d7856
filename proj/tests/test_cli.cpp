#include "doctest.h"

#include <array>
#include <cstdio>
#include <string>

#include <sys/wait.h>

#include "json.hpp"

namespace {

struct CliResult {
    int status;
    std::string out;
};

CliResult run_cli(const std::string& args) {
    std::string cmd = std::string(SMTMC_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    std::array<char, 4096> buf;
    size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
    int rc = pclose(pipe);
    return CliResult{WIFEXITED(rc) ? WEXITSTATUS(rc) : -1, out};
}

std::string corpus_file(const std::string& name) {
    return std::string(SMTMC_CORPUS_DIR) + "/" + name;
}

}  // namespace

TEST_CASE("cli count on an exact-path formula") {
    CliResult r = run_cli("count " + corpus_file("point_w8.smt2") + " --seed 42");
    CHECK(r.status == 0);
    CHECK(r.out.find("s mc 1\n") != std::string::npos);
}

TEST_CASE("cli exact") {
    CliResult r = run_cli("exact " + corpus_file("ult5_w4.smt2"));
    CHECK(r.status == 0);
    CHECK(r.out.find("s mc 5\n") != std::string::npos);

    CliResult u = run_cli("exact " + corpus_file("unsat_w4.smt2"));
    CHECK(u.status == 0);
    CHECK(u.out.find("s mc 0\n") != std::string::npos);
}

TEST_CASE("cli json output is deterministic and schema-complete") {
    std::string args = "count " + corpus_file("add_wrap_w4.smt2") +
                       " --epsilon 0.8 --delta 0.375 --seed 9 --backend enum --json";
    CliResult a = run_cli(args);
    CliResult b = run_cli(args);
    CHECK(a.status == 0);
    REQUIRE(a.out == b.out);

    nlohmann::json j = nlohmann::json::parse(a.out);
    CHECK(j.contains("final_count"));
    CHECK(j["final_count"].is_string());
    CHECK(j["t"] == 105);
    CHECK(j["pivot"] == 4);
    CHECK(j.contains("successes"));
    CHECK(j["status"] == "ok");
    REQUIRE(j["iterations"].is_array());
    CHECK(j["iterations"].size() == 105);
    const auto& it0 = j["iterations"][0];
    CHECK(it0.contains("C"));
    CHECK(it0.contains("num_cells"));
    CHECK(it0.contains("leaf"));
    CHECK(it0.contains("outcome"));
}

TEST_CASE("cli count respects the seed") {
    std::string base = "count " + corpus_file("cube_w4.smt2") + " --delta 0.9 --json --seed ";
    CliResult a = run_cli(base + "1");
    CliResult b = run_cli(base + "2");
    CHECK(a.status == 0);
    CHECK(b.status == 0);
    CHECK(a.out != b.out);  // different trace details
}

TEST_CASE("cli usage and parse errors exit with 2") {
    CHECK(run_cli("count").status == 2);
    CHECK(run_cli("count /no/such/file.smt2").status == 2);
    CHECK(run_cli("bogus-subcommand").status == 2);
    CHECK(run_cli("count " + corpus_file("point_w8.smt2") + " --epsilon -1").status == 2);
}

TEST_CASE("cli reports timeout exhaustion with exit 3") {
    CliResult r = run_cli("count " + corpus_file("cube_w4.smt2") +
                          " --backend process --solver-cmd \"sleep 30\""
                          " --budget 0.05 --delta 0.9999");
    CHECK(r.status == 3);
}

TEST_CASE("cli validate on a corpus directory") {
    CliResult r = run_cli("validate --corpus " + std::string(SMTMC_CORPUS_DIR) +
                          " --runs 1 --delta 0.9 --seed 11 --json");
    CHECK(r.status == 0);
    nlohmann::json j = nlohmann::json::parse(r.out);
    CHECK(j["records"].size() == 6);
    CHECK(j.contains("within_fraction"));
    CHECK(j.contains("geo_mean_eps_medians"));
    CHECK(j.contains("note"));
}

TEST_CASE("cli hash-stats") {
    CliResult r = run_cli("hash-stats --n 2 --k 2 --C 1 --trials 20000 --seed 3 --json");
    CHECK(r.status == 0);
    nlohmann::json j = nlohmann::json::parse(r.out);
    CHECK(j["domain"] == 5);
    CHECK(j["uniform"]["ok"] == true);
    CHECK(j["pairwise"]["ok"] == true);
    CHECK(j["collision"]["ok"] == true);
}
