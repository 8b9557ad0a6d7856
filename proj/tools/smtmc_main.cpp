// smtmc: hashing-based approximate model counter for QF_BV formulas.
//
// Subcommands: count, exact, validate, hash-stats, solve.
// Exit codes: 0 success, 1 all counting iterations failed, 2 usage or input
// error, 3 solver misconfiguration or timeout exhaustion.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "smtmc/smtmc.hpp"

using nlohmann::json;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw smtmc::Error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct CommonOpts {
    double epsilon = 0.8;
    double delta = 0.2;
    uint64_t seed = 1;
    std::string backend = "enum";
    std::string solver_cmd;
    double budget = 60.0;
    bool json_out = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--epsilon", opts.epsilon, "tolerance (> 0)")->check(CLI::PositiveNumber);
    cmd->add_option("--delta", opts.delta, "1 - confidence, in (0,1)");
    cmd->add_option("--seed", opts.seed, "master random seed");
    cmd->add_option("--backend", opts.backend, "solver backend: enum | process")
        ->check(CLI::IsMember({"enum", "process"}));
    cmd->add_option("--solver-cmd", opts.solver_cmd,
                    "external SMT solver command (process backend)");
    cmd->add_option("--budget", opts.budget, "per-solver-call budget in seconds")
        ->check(CLI::PositiveNumber);
    cmd->add_flag("--json", opts.json_out, "machine-readable JSON output");
}

smtmc::OracleConfig make_oracle(const CommonOpts& opts) {
    smtmc::OracleConfig cfg;
    cfg.backend = opts.backend == "process" ? smtmc::BackendKind::ExternalProcess
                                            : smtmc::BackendKind::BuiltinEnum;
    cfg.solver_cmd = opts.solver_cmd;
    cfg.budget_seconds = opts.budget;
    return cfg;
}

json trace_to_json(const smtmc::CoreTrace& tr) {
    json j;
    j["C"] = tr.level_counts;
    j["num_cells"] = tr.num_cells.to_string();
    j["leaf"] = tr.leaf;
    j["outcome"] = smtmc::to_string(tr.outcome);
    return j;
}

int run_count(const std::string& path, const CommonOpts& opts) {
    smtmc::Formula f = smtmc::parse_smt2(read_file(path));
    smtmc::CountEstimate est =
        smtmc::approx_mc(f, opts.epsilon, opts.delta, make_oracle(opts), opts.seed);

    if (opts.json_out) {
        json j;
        j["final_count"] = est.ok ? est.final_count.to_string() : "0";
        j["t"] = est.t;
        j["pivot"] = est.pivot;
        j["successes"] = est.successes;
        j["status"] = est.ok ? "ok" : "failed";
        j["iterations"] = json::array();
        for (const smtmc::CoreTrace& tr : est.traces) j["iterations"].push_back(trace_to_json(tr));
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "c [smtmc] epsilon " << opts.epsilon << " delta " << opts.delta << " pivot "
                  << est.pivot << " t " << est.t << " seed " << opts.seed << "\n";
        uint32_t exact = 0, estimated = 0;
        for (const smtmc::CoreTrace& tr : est.traces) {
            if (tr.outcome == smtmc::CoreOutcome::ExactSmall) ++exact;
            if (tr.outcome == smtmc::CoreOutcome::Estimate) ++estimated;
        }
        std::cout << "c [smtmc] iterations: " << exact << " exact, " << estimated
                  << " hashed, " << (est.t - est.successes) << " failed\n";
        if (!est.ok) {
            std::cerr << "error: all " << est.t << " counting iterations failed\n";
            return est.saw_timeout ? 3 : 1;
        }
        std::cout << "s mc " << est.final_count.to_string() << "\n";
    }
    if (!est.ok) return est.saw_timeout ? 3 : 1;
    return 0;
}

int run_exact(const std::string& path, const CommonOpts& opts) {
    smtmc::Formula f = smtmc::parse_smt2(read_file(path));
    uint64_t count = smtmc::exact_count(f);
    if (opts.json_out) {
        json j;
        j["exact_count"] = std::to_string(count);
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "s mc " << count << "\n";
    }
    return 0;
}

std::vector<smtmc::CorpusEntry> load_corpus(const std::string& dir) {
    std::vector<smtmc::CorpusEntry> corpus;
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir))
        if (entry.path().extension() == ".smt2") files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    for (const auto& path : files)
        corpus.push_back(smtmc::CorpusEntry{path.stem().string(),
                                            smtmc::parse_smt2(read_file(path.string()))});
    if (corpus.empty()) throw smtmc::Error("no .smt2 files found in " + dir);
    return corpus;
}

int run_validate(const std::string& corpus_dir, uint32_t runs, const CommonOpts& opts) {
    std::vector<smtmc::CorpusEntry> corpus =
        corpus_dir.empty() ? smtmc::desk_corpus() : load_corpus(corpus_dir);
    smtmc::CorpusReport report = smtmc::run_quality_suite(corpus, opts.epsilon, opts.delta,
                                                          opts.seed, runs, make_oracle(opts));

    if (opts.json_out) {
        json j;
        j["note"] = "geometric means are computed over (1 + eps_obs) factors, minus 1";
        j["epsilon"] = report.epsilon;
        j["delta"] = report.delta;
        j["seed"] = report.master_seed;
        j["runs_per_formula"] = report.runs_per_formula;
        j["within_fraction"] = report.within_fraction;
        j["geo_mean_eps_records"] = report.geo_mean_eps_records;
        j["geo_mean_eps_medians"] = report.geo_mean_eps_medians;
        j["records"] = json::array();
        for (const smtmc::QualityRecord& r : report.records) {
            json rec;
            rec["id"] = r.id;
            rec["seed"] = r.seed;
            rec["exact"] = std::to_string(r.exact);
            rec["estimate"] = r.counted ? r.estimate.to_string() : "";
            rec["within"] = r.within;
            if (r.eps_defined) rec["eps_obs"] = r.eps;
            if (!r.error.empty()) rec["error"] = r.error;
            j["records"].push_back(rec);
        }
        std::cout << j.dump(2) << "\n";
        return 0;
    }

    // plain-text table over per-formula medians
    std::cout << "c geometric means use (1 + eps_obs) factors, minus 1\n";
    std::printf("%4s  %-16s %14s %18s %10s %8s\n", "id", "benchmark", "exact count",
                "estimated count", "eps_obs", "within");
    for (size_t i = 0; i < report.per_formula.size(); ++i) {
        const smtmc::FormulaSummary& s = report.per_formula[i];
        std::printf("%4zu  %-16s %14llu %18s %10.4f %7.2f%%\n", i + 1, s.id.c_str(),
                    (unsigned long long)s.exact,
                    s.counted ? s.median_estimate.to_string().c_str() : "-",
                    s.eps_defined ? s.eps_of_median : 0.0,
                    s.runs ? 100.0 * s.within / s.runs : 0.0);
    }
    std::printf("within-tolerance fraction: %.4f\n", report.within_fraction);
    std::printf("geometric mean eps_obs (all runs): %.4f\n", report.geo_mean_eps_records);
    std::printf("geometric mean eps_obs (medians):  %.4f\n", report.geo_mean_eps_medians);
    return 0;
}

int run_hash_stats(uint32_t n, uint32_t k, const std::string& c_list, uint64_t trials,
                   const CommonOpts& opts) {
    std::vector<uint32_t> counts;
    std::stringstream ss(c_list);
    for (std::string part; std::getline(ss, part, ',');)
        counts.push_back((uint32_t)std::stoul(part));
    smtmc::HashConfig cfg = smtmc::make_config(n, k, counts);

    std::vector<uint64_t> x1(n, 0), x2(n, 0);
    for (uint32_t i = 0; i < n; ++i) {
        x1[i] = (i + 1) & smtmc::mask64(k);
        x2[i] = (2 * i + 3) & smtmc::mask64(k);
    }
    if (x1 == x2) x2[0] = (x2[0] + 1) & smtmc::mask64(k);
    smtmc::HashLawReport rep = smtmc::hash_law_suite(cfg, trials, x1, x1, x2, opts.seed);

    if (opts.json_out) {
        json j;
        j["trials"] = rep.trials;
        j["domain"] = rep.domain;
        j["uniform"] = {{"expected", rep.expected_single},
                        {"max_dev", rep.max_dev_single},
                        {"bound_4se", rep.bound_single},
                        {"ok", rep.uniform_ok}};
        j["pairwise"] = {{"expected", rep.expected_joint},
                         {"max_dev", rep.max_dev_joint},
                         {"bound_4se", rep.bound_joint},
                         {"ok", rep.pairwise_ok}};
        j["collision"] = {{"rate", rep.collision_rate},
                          {"expected", rep.expected_collision},
                          {"bound_4se", rep.bound_collision},
                          {"ok", rep.collision_ok}};
        std::cout << j.dump(2) << "\n";
    } else {
        std::printf("domain size %llu, %llu trials\n", (unsigned long long)rep.domain,
                    (unsigned long long)rep.trials);
        std::printf("uniformity : expected %.6f max dev %.6f bound %.6f  %s\n",
                    rep.expected_single, rep.max_dev_single, rep.bound_single,
                    rep.uniform_ok ? "ok" : "FAIL");
        std::printf("pairwise   : expected %.6f max dev %.6f bound %.6f  %s\n",
                    rep.expected_joint, rep.max_dev_joint, rep.bound_joint,
                    rep.pairwise_ok ? "ok" : "FAIL");
        std::printf("collision  : rate %.6f expected %.6f bound %.6f  %s\n", rep.collision_rate,
                    rep.expected_collision, rep.bound_collision, rep.collision_ok ? "ok" : "FAIL");
    }
    return (rep.uniform_ok && rep.pairwise_ok && rep.collision_ok) ? 0 : 1;
}

// Minimal SMT-LIB2 server over stdin/stdout backed by exhaustive enumeration,
// so the process backend can be exercised without an external solver.
int run_solve() {
    std::vector<smtmc::Variable> decls;
    std::vector<smtmc::Bool> asserts;
    smtmc::Assignment model;
    bool have_model = false;

    while (auto text = smtmc::read_one_sexpr(std::cin)) {
        std::vector<smtmc::SExpr> exprs;
        try {
            exprs = smtmc::read_sexprs(*text);
        } catch (const smtmc::Error& e) {
            std::cout << "(error \"" << e.what() << "\")" << std::endl;
            continue;
        }
        for (const smtmc::SExpr& cmd : exprs) {
            const std::string& head = cmd.head();
            try {
                if (head == "exit") return 0;
                if (head == "set-logic" || head == "set-option" || head == "set-info") continue;
                if (head == "declare-fun") {
                    smtmc::Variable v = smtmc::detail::parse_declare_fun(cmd);
                    decls.push_back(v);
                    continue;
                }
                if (head == "assert") {
                    if (cmd.items.size() != 2) throw smtmc::Error("assert expects 1 argument");
                    smtmc::detail::ParseEnv env{decls};
                    asserts.push_back(smtmc::detail::parse_bool(cmd.items[1], env));
                    continue;
                }
                if (head == "check-sat") {
                    smtmc::Formula f{decls, smtmc::mk_and(asserts)};
                    smtmc::BoundedResult r = smtmc::enum_backend(f, 0);
                    have_model = !r.models.empty();
                    if (have_model) model = r.models.front();
                    std::cout << (have_model ? "sat" : "unsat") << std::endl;
                    continue;
                }
                if (head == "get-value") {
                    if (!have_model) throw smtmc::Error("no model available");
                    if (cmd.items.size() != 2 || !cmd.items[1].is_list)
                        throw smtmc::Error("get-value expects a list of symbols");
                    std::string out = "(";
                    bool first = true;
                    for (const smtmc::SExpr& sym : cmd.items[1].items) {
                        const smtmc::Variable* v = nullptr;
                        for (const smtmc::Variable& d : decls)
                            if (d.name == sym.atom) v = &d;
                        if (!v) throw smtmc::Error("unknown symbol " + sym.atom);
                        if (!first) out += " ";
                        first = false;
                        out += "(" + v->name + " " +
                               smtmc::print_const(model.values.at(v->name), v->width) + ")";
                    }
                    out += ")";
                    std::cout << out << std::endl;
                    continue;
                }
                throw smtmc::Error("unsupported command '" + head + "'");
            } catch (const smtmc::Error& e) {
                std::cout << "(error \"" << e.what() << "\")" << std::endl;
            }
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hashing-based approximate model counter for QF_BV formulas"};
    app.require_subcommand(1);

    CommonOpts opts;
    std::string input_path;
    std::string corpus_dir;
    uint32_t runs = 5;
    uint32_t hs_n = 2, hs_k = 2;
    std::string hs_c = "1";
    uint64_t hs_trials = 100000;

    CLI::App* count_cmd = app.add_subcommand("count", "approximate model count of an SMT-LIB2 file");
    count_cmd->add_option("file", input_path, "input .smt2 file")->required();
    add_common(count_cmd, opts);

    CLI::App* exact_cmd = app.add_subcommand("exact", "exact model count by exhaustive enumeration");
    exact_cmd->add_option("file", input_path, "input .smt2 file")->required();
    exact_cmd->add_flag("--json", opts.json_out, "machine-readable JSON output");

    CLI::App* validate_cmd =
        app.add_subcommand("validate", "accuracy suite against brute-force exact counts");
    validate_cmd->add_option("--corpus", corpus_dir, "directory of .smt2 files (default: built-in corpus)");
    validate_cmd->add_option("--runs", runs, "seeds per formula");
    add_common(validate_cmd, opts);

    CLI::App* hash_cmd = app.add_subcommand("hash-stats", "empirical hash-family law checks");
    hash_cmd->add_option("--n", hs_n, "number of variables")->required();
    hash_cmd->add_option("--k", hs_k, "common width")->required();
    hash_cmd->add_option("--C", hs_c, "comma-separated per-level component counts")->required();
    hash_cmd->add_option("--trials", hs_trials, "number of sampled hash functions");
    add_common(hash_cmd, opts);

    CLI::App* solve_cmd =
        app.add_subcommand("solve", "SMT-LIB2 stdin/stdout solver backed by enumeration");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (count_cmd->parsed()) return run_count(input_path, opts);
        if (exact_cmd->parsed()) return run_exact(input_path, opts);
        if (validate_cmd->parsed()) return run_validate(corpus_dir, runs, opts);
        if (hash_cmd->parsed()) return run_hash_stats(hs_n, hs_k, hs_c, hs_trials, opts);
        if (solve_cmd->parsed()) return run_solve();
    } catch (const smtmc::OracleFailure& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return 3;
    } catch (const smtmc::OracleTimeout& e) {
        std::cerr << "solver timeout: " << e.what() << "\n";
        return 3;
    } catch (const smtmc::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const smtmc::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
