#pragma once

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mlst/bench.hpp"
#include "mlst/devo.hpp"
#include "mlst/exact.hpp"
#include "mlst/graph.hpp"
#include "mlst/heuristics.hpp"
#include "mlst/solution.hpp"

namespace mlst {

namespace cli_detail {

inline LabeledGraph load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open instance file: " + path);
    return parse_instance(in);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string tok;
    while (std::getline(in, tok, sep))
        if (!tok.empty()) out.push_back(tok);
    return out;
}

inline std::vector<BenchCell> parse_cells(const std::string& s) {
    // "12:0.5:6,25:0.25:12"
    std::vector<BenchCell> cells;
    for (const std::string& part : split(s, ',')) {
        std::vector<std::string> f = split(part, ':');
        if (f.size() != 3) throw std::runtime_error("bad cell spec '" + part + "'");
        cells.push_back({std::stoi(f[0]), std::stod(f[1]), std::stoi(f[2])});
    }
    return cells;
}

}  // namespace cli_detail

inline int run_cli(int argc, const char* const* argv) {
    CLI::App app{"minimum labeling Steiner tree solver suite"};
    app.require_subcommand(1);

    // --- gen ---------------------------------------------------------------
    auto* gen = app.add_subcommand("gen", "generate a random instance");
    int gen_nodes = 50;
    double gen_density = 0.5;
    int gen_colors = 12;
    double gen_ratio = 0.25;
    std::uint64_t gen_seed = 1;
    std::string gen_out;
    gen->add_option("--nodes", gen_nodes, "node count")->required();
    gen->add_option("--density", gen_density, "edge density in (0,1]")->required();
    gen->add_option("--colors", gen_colors, "label count")->required();
    gen->add_option("--terminal-ratio", gen_ratio, "terminal fraction (default 0.25)");
    gen->add_option("--seed", gen_seed, "generator seed");
    gen->add_option("--out", gen_out, "output file (default stdout)");

    // --- solve -------------------------------------------------------------
    auto* solve_cmd = app.add_subcommand("solve", "solve an instance");
    std::string solve_instance, solve_algo = "dga", solve_link = "eq3";
    std::uint64_t solve_seed = 1, solve_work = 0;
    int solve_pop = 0, solve_feas = 3;
    double solve_mut = 0.1, solve_time = 0.0;
    solve_cmd->add_option("instance", solve_instance, "instance file")->required();
    solve_cmd->add_option("--algo", solve_algo, "dga|bb|brute|mvca|pilot");
    solve_cmd->add_option("--pop-size", solve_pop, "dga population (default min(|Q|,12))");
    solve_cmd->add_option("--feasible-target", solve_feas, "dga stopping archive size");
    solve_cmd->add_option("--mutation-rate", solve_mut, "dga mutation probability");
    solve_cmd->add_option("--seed", solve_seed, "rng seed");
    solve_cmd->add_option("--time-limit", solve_time, "wall time limit in ms (0 = none)");
    solve_cmd->add_option("--work-limit", solve_work, "LP work unit limit (0 = none)");
    solve_cmd->add_option("--link-mode", solve_link, "label linking: eq3|eq9");

    // --- verify ------------------------------------------------------------
    auto* verify_cmd = app.add_subcommand("verify", "check a solution document");
    std::string verify_instance, verify_solution_path;
    verify_cmd->add_option("instance", verify_instance, "instance file")->required();
    verify_cmd->add_option("solution", verify_solution_path, "solution file")->required();

    // --- bench -------------------------------------------------------------
    auto* bench_cmd = app.add_subcommand("bench", "run a benchmark suite");
    std::string bench_suite = "default", bench_cells_arg, bench_algos = "dga,bb,mvca,pilot";
    std::string bench_outdir = ".", bench_sweep;
    int bench_instances = 5, bench_threads = 1;
    std::uint64_t bench_seed = 1, bench_work = 1'000'000'000;
    bool bench_wall = false;
    bench_cmd->add_option("--suite", bench_suite, "default|small (ignored with --cells)");
    bench_cmd->add_option("--cells", bench_cells_arg, "explicit cells 'n:d:c,n:d:c,...'");
    bench_cmd->add_option("--instances", bench_instances, "instances per cell");
    bench_cmd->add_option("--algos", bench_algos, "comma list of brute,bb,mvca,pilot,dga");
    bench_cmd->add_option("--seed", bench_seed, "base seed");
    bench_cmd->add_option("--out-dir", bench_outdir, "directory for CSV reports");
    bench_cmd->add_option("--sweep", bench_sweep, "population sizes 'lo..hi' or 'a,b,c'");
    bench_cmd->add_option("--work-limit", bench_work, "per-run LP work limit");
    bench_cmd->add_flag("--wall-time", bench_wall, "report wall times instead of virtual ms");
    bench_cmd->add_option("--threads", bench_threads, "worker threads");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (gen->parsed()) {
            InstanceSpec spec;
            spec.nodes = gen_nodes;
            spec.density = gen_density;
            spec.colors = gen_colors;
            spec.terminal_ratio = gen_ratio;
            spec.seed = gen_seed;
            LabeledGraph g = generate_random(spec);
            if (gen_out.empty()) {
                write_instance(g, std::cout);
            } else {
                std::ofstream out(gen_out);
                if (!out) throw std::runtime_error("cannot open output file: " + gen_out);
                write_instance(g, out);
            }
            std::cerr << "n=" << g.node_count << " m=" << g.edges.size()
                      << " L=" << g.label_count << " Q=" << g.terminals.size() << "\n";
            return 0;
        }

        if (solve_cmd->parsed()) {
            LabeledGraph g = cli_detail::load_instance(solve_instance);
            LinkMode mode = solve_link == "eq9" ? LinkMode::aggregated : LinkMode::per_edge;
            auto t0 = std::chrono::steady_clock::now();
            auto elapsed = [&] {
                return std::chrono::duration_cast<std::chrono::milliseconds>(
                           std::chrono::steady_clock::now() - t0)
                    .count();
            };
            SolutionDoc doc;
            int exit_code = 0;

            if (solve_algo == "brute") {
                BruteForceResult r = brute_force(g);
                doc = make_solution_doc(g, r.tree, "brute", elapsed(), solve_seed, "proven");
            } else if (solve_algo == "mvca") {
                doc = make_solution_doc(g, mvca(g).tree, "mvca", elapsed(), solve_seed);
            } else if (solve_algo == "pilot") {
                doc = make_solution_doc(g, pilot(g).tree, "pilot", elapsed(), solve_seed);
            } else if (solve_algo == "bb") {
                WorkMeter meter;
                if (solve_work > 0) meter.limit = solve_work;
                BnbLimits limits;
                limits.time_limit_ms = solve_time;
                BnbResult r = branch_and_bound(g, limits, mode, &meter);
                doc = make_solution_doc(g, r.tree, "bb", elapsed(), solve_seed,
                                        r.proven ? "proven" : "unproven");
                doc.extras["node_count"] = std::to_string(r.nodes);
                doc.extras["root_bound"] = std::to_string(r.root_bound);
                if (!r.proven) exit_code = 2;
            } else if (solve_algo == "dga") {
                DevoConfig cfg;
                cfg.population = solve_pop;
                cfg.feasible_target = solve_feas;
                cfg.mutation_rate = solve_mut;
                cfg.seed = solve_seed;
                cfg.time_limit_ms = solve_time;
                if (solve_work > 0) cfg.work_limit = solve_work;
                cfg.link_mode = mode;
                DevoResult r = devo_run(g, cfg);
                doc = make_solution_doc(g, r.tree, "dga", elapsed(), solve_seed,
                                        r.fallback ? "fallback" : "ok");
                doc.extras["generations"] = std::to_string(r.stats.generations_run);
                if (r.fallback) exit_code = 2;
            } else {
                throw std::runtime_error("unknown algorithm '" + solve_algo + "'");
            }
            write_solution(doc, std::cout);
            return exit_code;
        }

        if (verify_cmd->parsed()) {
            LabeledGraph g = cli_detail::load_instance(verify_instance);
            std::ifstream in(verify_solution_path);
            if (!in)
                throw std::runtime_error("cannot open solution file: " + verify_solution_path);
            SolutionDoc doc = parse_solution(in);
            VerifyOutcome out = verify_solution(g, doc);
            std::cout << "recomputed_value " << out.recomputed_value << "\n";
            if (out.pass) {
                std::cout << "PASS\n";
                return 0;
            }
            std::cout << "FAIL " << out.message << "\n";
            return 1;
        }

        if (bench_cmd->parsed()) {
            SuiteSpec spec;
            if (!bench_cells_arg.empty())
                spec.cells = cli_detail::parse_cells(bench_cells_arg);
            else if (bench_suite == "small")
                spec.cells = small_cells();
            else
                spec.cells = default_cells();
            spec.instances_per_cell = bench_instances;
            spec.base_seed = bench_seed;
            spec.algos = cli_detail::split(bench_algos, ',');
            spec.work_limit = bench_work;
            spec.wall_time = bench_wall;
            spec.threads = bench_threads;

            BenchReport report = run_suite(spec);
            std::string report_path = bench_outdir + "/report.csv";
            {
                std::ofstream out(report_path);
                if (!out) throw std::runtime_error("cannot write " + report_path);
                out << report.csv();
            }
            std::cout << report.summary();
            std::cout << "report written to " << report_path << "\n";

            auto has = [&](const std::string& a) {
                return std::find(spec.algos.begin(), spec.algos.end(), a) != spec.algos.end();
            };
            if (has("dga") && has("bb")) {
                WilcoxonResult w =
                    wilcoxon_rank_sum(report.values_for("dga"), report.values_for("bb"));
                std::cout << "wilcoxon dga-vs-bb: statistic=" << w.statistic << " p=" << w.p
                          << (w.degenerate ? " (degenerate)" : "") << "\n";
            }

            if (!bench_sweep.empty()) {
                std::vector<int> sizes;
                auto dots = bench_sweep.find("..");
                if (dots != std::string::npos) {
                    int lo = std::stoi(bench_sweep.substr(0, dots));
                    int hi = std::stoi(bench_sweep.substr(dots + 2));
                    for (int s = lo; s <= hi; s += 2) sizes.push_back(s);
                } else {
                    for (const std::string& tok : cli_detail::split(bench_sweep, ','))
                        sizes.push_back(std::stoi(tok));
                }
                SweepTable table = population_size_sweep(spec, sizes);
                std::string sweep_path = bench_outdir + "/sweep.csv";
                std::ofstream out(sweep_path);
                if (!out) throw std::runtime_error("cannot write " + sweep_path);
                out << table.csv();
                std::cout << table.csv();
                std::cout << "sweep written to " << sweep_path << "\n";
            }
            return 0;
        }
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }
    return 1;
}

}  // namespace mlst
