#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "mlst/devo.hpp"
#include "mlst/exact.hpp"
#include "mlst/graph.hpp"
#include "mlst/heuristics.hpp"

namespace mlst {

// Work units per reported virtual millisecond; the deterministic time mode
// divides the LP work counter by this to get reproducible "times".
constexpr std::uint64_t kWorkPerMs = 1'000'000;

struct WilcoxonResult {
    double statistic = 0.0;  // rank sum of the first sample
    double p = 0.5;          // one-sided: first sample stochastically smaller
    bool degenerate = false; // all values tied, or a sample of size < 2
};

// Rank-sum with midrank ties, normal approximation with tie correction and
// continuity correction.
inline WilcoxonResult wilcoxon_rank_sum(const std::vector<double>& a,
                                        const std::vector<double>& b) {
    if (a.empty() || b.empty()) throw std::runtime_error("wilcoxon: empty sample");
    const std::size_t n1 = a.size(), n2 = b.size();
    const double N = static_cast<double>(n1 + n2);

    std::vector<std::pair<double, int>> all;  // (value, 0=a / 1=b)
    for (double v : a) all.push_back({v, 0});
    for (double v : b) all.push_back({v, 1});
    std::sort(all.begin(), all.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });

    WilcoxonResult res;
    double tie_term = 0.0;
    std::size_t i = 0;
    while (i < all.size()) {
        std::size_t j = i;
        while (j < all.size() && all[j].first == all[i].first) ++j;
        double t = static_cast<double>(j - i);
        double midrank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        for (std::size_t k = i; k < j; ++k)
            if (all[k].second == 0) res.statistic += midrank;
        tie_term += t * t * t - t;
        i = j;
    }

    if (n1 < 2 || n2 < 2) res.degenerate = true;

    double mu = static_cast<double>(n1) * (N + 1.0) / 2.0;
    double var = static_cast<double>(n1) * static_cast<double>(n2) / 12.0 *
                 ((N + 1.0) - tie_term / (N * (N - 1.0)));
    if (var <= 1e-12) {
        res.degenerate = true;
        res.p = 0.5;
        return res;
    }
    double z = (res.statistic + 0.5 - mu) / std::sqrt(var);
    res.p = 0.5 * std::erfc(-z / std::sqrt(2.0));
    return res;
}

// --- suite driver -------------------------------------------------------------

struct BenchCell {
    int n = 0;
    double d = 0.0;
    int c = 0;
};

struct SuiteSpec {
    std::vector<BenchCell> cells;
    int instances_per_cell = 5;
    std::uint64_t base_seed = 1;
    std::vector<std::string> algos;  // brute | bb | mvca | pilot | dga
    double terminal_ratio = 0.25;
    std::uint64_t work_limit = 1'000'000'000;  // per run; ~0.5-1 s of LP work
    bool wall_time = false;                    // false: deterministic virtual ms
    int threads = 1;
    DevoConfig dga;  // seed/work_limit overridden per run
};

// The paper's desk-scale grid: three sizes, three densities, colors tied to n.
inline std::vector<BenchCell> default_cells() {
    std::vector<BenchCell> cells;
    for (int n : {12, 25, 50})
        for (double d : {0.25, 0.5, 0.8})
            for (double cf : {0.25, 0.5, 1.0})
                cells.push_back({n, d, std::max(2, static_cast<int>(cf * n))});
    return cells;
}

inline std::vector<BenchCell> small_cells() {
    std::vector<BenchCell> cells;
    for (double d : {0.5, 0.8})
        for (int c : {4, 6}) cells.push_back({12, d, c});
    return cells;
}

struct RunRecord {
    BenchCell cell;
    int instance = 0;
    std::uint64_t seed = 0;
    std::string algo;
    int value = 0;
    std::int64_t time_to_best_ms = 0;
    std::int64_t total_ms = 0;
    std::string status;  // ok | proven | unproven | fallback | aborted
    bool feasible = true;
};

struct BenchReport {
    std::vector<RunRecord> rows;

    std::string csv() const {
        std::ostringstream out;
        out << "n,d,c,instance,seed,algo,value,time_to_best_ms,total_ms,status\n";
        char dbuf[32];
        for (const RunRecord& r : rows) {
            std::snprintf(dbuf, sizeof dbuf, "%g", r.cell.d);
            out << r.cell.n << ',' << dbuf << ',' << r.cell.c << ',' << r.instance << ',' << r.seed
                << ',' << r.algo << ',' << r.value << ',' << r.time_to_best_ms << ','
                << r.total_ms << ',' << r.status << '\n';
        }
        return out.str();
    }

    // mean value and mean time-to-best per (cell, algo), feasible runs only
    struct Aggregate {
        double mean_value = 0.0;
        double mean_time_to_best_ms = 0.0;
        int feasible_runs = 0;
        int failed_runs = 0;
    };

    std::map<std::pair<std::string, std::string>, Aggregate> aggregates() const {
        std::map<std::pair<std::string, std::string>, Aggregate> out;
        for (const RunRecord& r : rows) {
            char key[64];
            std::snprintf(key, sizeof key, "n%d d%g c%d", r.cell.n, r.cell.d, r.cell.c);
            Aggregate& a = out[{key, r.algo}];
            if (r.feasible) {
                ++a.feasible_runs;
                a.mean_value += r.value;
                a.mean_time_to_best_ms += static_cast<double>(r.time_to_best_ms);
            } else {
                ++a.failed_runs;
            }
        }
        for (auto& [k, a] : out)
            if (a.feasible_runs > 0) {
                a.mean_value /= a.feasible_runs;
                a.mean_time_to_best_ms /= a.feasible_runs;
            }
        return out;
    }

    std::vector<double> values_for(const std::string& algo) const {
        std::vector<double> out;
        for (const RunRecord& r : rows)
            if (r.algo == algo && r.feasible) out.push_back(r.value);
        return out;
    }

    std::string summary() const {
        std::ostringstream out;
        out << "cell                algo    mean_value  mean_ttb_ms  runs  failed\n";
        for (const auto& [key, a] : aggregates()) {
            char line[160];
            std::snprintf(line, sizeof line, "%-18s  %-6s  %10.3f  %11.1f  %4d  %6d\n",
                          key.first.c_str(), key.second.c_str(), a.mean_value,
                          a.mean_time_to_best_ms, a.feasible_runs, a.failed_runs);
            out << line;
        }
        return out.str();
    }
};

namespace detail {

struct TimedResult {
    int value = 0;
    bool feasible = true;
    std::string status = "ok";
    std::int64_t time_to_best_ms = 0;
    std::int64_t total_ms = 0;
};

inline TimedResult run_algorithm(const std::string& algo, const LabeledGraph& g,
                                 const SuiteSpec& spec, std::uint64_t run_seed) {
    TimedResult out;
    WorkMeter meter;
    meter.limit = spec.work_limit;
    auto t0 = std::chrono::steady_clock::now();
    std::uint64_t work_to_best = 0;

    if (algo == "brute") {
        BruteForceResult r = brute_force(g);
        out.value = r.value;
        work_to_best = meter.used;
    } else if (algo == "mvca") {
        out.value = mvca(g).tree.value;
        work_to_best = meter.used;
    } else if (algo == "pilot") {
        out.value = pilot(g).tree.value;
        work_to_best = meter.used;
    } else if (algo == "bb") {
        BnbLimits limits;
        BnbResult r = branch_and_bound(g, limits, spec.dga.link_mode, &meter);
        out.value = r.value;
        out.status = r.proven ? "proven" : "unproven";
        work_to_best = r.work_to_best;
    } else if (algo == "dga") {
        DevoConfig cfg = spec.dga;
        cfg.seed = run_seed;
        cfg.work_limit = spec.work_limit;
        DevoResult r = devo_run(g, cfg);
        out.value = r.value;
        out.status = r.fallback ? "fallback" : "ok";
        work_to_best = r.stats.work_to_best;
    } else {
        throw std::runtime_error("unknown algorithm '" + algo + "'");
    }

    auto t1 = std::chrono::steady_clock::now();
    if (spec.wall_time) {
        out.total_ms = std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
        out.time_to_best_ms = out.total_ms;  // wall mode: per-run resolution only
    } else {
        out.total_ms = static_cast<std::int64_t>(meter.used / kWorkPerMs);
        out.time_to_best_ms = static_cast<std::int64_t>(work_to_best / kWorkPerMs);
    }
    if (out.time_to_best_ms > out.total_ms) out.time_to_best_ms = out.total_ms;
    return out;
}

}  // namespace detail

inline BenchReport run_suite(const SuiteSpec& spec) {
    struct Task {
        int cell_idx, instance, algo_idx;
    };
    std::vector<Task> tasks;
    for (int ci = 0; ci < static_cast<int>(spec.cells.size()); ++ci)
        for (int inst = 0; inst < spec.instances_per_cell; ++inst)
            for (int ai = 0; ai < static_cast<int>(spec.algos.size()); ++ai)
                tasks.push_back({ci, inst, ai});

    BenchReport report;
    report.rows.resize(tasks.size());

    auto run_task = [&](const Task& t, RunRecord& row) {
        const BenchCell& cell = spec.cells[t.cell_idx];
        std::uint64_t instance_seed = mix_seed(spec.base_seed, t.cell_idx, t.instance);
        std::uint64_t run_seed = mix_seed(spec.base_seed, t.cell_idx, t.instance, t.algo_idx + 1);

        InstanceSpec ispec;
        ispec.nodes = cell.n;
        ispec.density = cell.d;
        ispec.colors = cell.c;
        ispec.terminal_ratio = spec.terminal_ratio;
        ispec.seed = instance_seed;
        LabeledGraph g = generate_random(ispec);

        row.cell = cell;
        row.instance = t.instance;
        row.seed = instance_seed;
        row.algo = spec.algos[t.algo_idx];
        try {
            detail::TimedResult r = detail::run_algorithm(row.algo, g, spec, run_seed);
            row.value = r.value;
            row.status = r.status;
            row.feasible = r.feasible;
            row.time_to_best_ms = r.time_to_best_ms;
            row.total_ms = r.total_ms;
        } catch (const std::exception& ex) {
            row.status = std::string("error:") + ex.what();
            row.feasible = false;
        }
    };

    if (spec.threads <= 1) {
        for (std::size_t i = 0; i < tasks.size(); ++i) run_task(tasks[i], report.rows[i]);
    } else {
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            while (true) {
                std::size_t i = next.fetch_add(1);
                if (i >= tasks.size()) return;
                run_task(tasks[i], report.rows[i]);
            }
        };
        std::vector<std::thread> pool;
        for (int t = 0; t < spec.threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    return report;
}

// --- population-size sensitivity ----------------------------------------------

struct SweepRow {
    int size = 0;
    double mean_gap_pct = 0.0;       // vs the BB optimum
    double mean_time_var_pct = 0.0;  // vs the size-2 mean time
    int instances_used = 0;
    int excluded_bb_unproven = 0;
};

struct SweepTable {
    std::vector<SweepRow> rows;

    std::string csv() const {
        std::ostringstream out;
        out << "size,mean_gap_pct,mean_time_var_pct\n";
        char buf[96];
        for (const SweepRow& r : rows) {
            std::snprintf(buf, sizeof buf, "%d,%.4f,%.4f\n", r.size, r.mean_gap_pct,
                          r.mean_time_var_pct);
            out << buf;
        }
        return out.str();
    }
};

inline SweepTable population_size_sweep(const SuiteSpec& spec, const std::vector<int>& sizes) {
    // instances plus their proven optima, shared across all sizes
    struct Inst {
        LabeledGraph g;
        int optimum;
        bool proven;
    };
    std::vector<Inst> instances;
    for (int ci = 0; ci < static_cast<int>(spec.cells.size()); ++ci)
        for (int inst = 0; inst < spec.instances_per_cell; ++inst) {
            InstanceSpec ispec;
            ispec.nodes = spec.cells[ci].n;
            ispec.density = spec.cells[ci].d;
            ispec.colors = spec.cells[ci].c;
            ispec.terminal_ratio = spec.terminal_ratio;
            ispec.seed = mix_seed(spec.base_seed, ci, inst);
            LabeledGraph g = generate_random(ispec);
            WorkMeter meter;
            meter.limit = spec.work_limit;
            BnbResult bb = branch_and_bound(g, {}, spec.dga.link_mode, &meter);
            instances.push_back({std::move(g), bb.value, bb.proven});
        }

    SweepTable table;
    double base_mean_time = 0.0;
    for (std::size_t si = 0; si < sizes.size(); ++si) {
        SweepRow row;
        row.size = sizes[si];
        double time_sum = 0.0;
        int time_count = 0;
        for (std::size_t ii = 0; ii < instances.size(); ++ii) {
            DevoConfig cfg = spec.dga;
            cfg.population = sizes[si];
            cfg.seed = mix_seed(spec.base_seed, 1000 + ii, sizes[si]);
            cfg.work_limit = spec.work_limit;
            DevoResult r = devo_run(instances[ii].g, cfg);
            double t = spec.wall_time ? r.stats.wall_ms
                                      : static_cast<double>(r.stats.work_total) / kWorkPerMs;
            time_sum += t;
            ++time_count;
            if (!instances[ii].proven) {
                ++row.excluded_bb_unproven;
                continue;
            }
            row.mean_gap_pct +=
                100.0 * (r.value - instances[ii].optimum) / std::max(1, instances[ii].optimum);
            ++row.instances_used;
        }
        if (row.instances_used > 0) row.mean_gap_pct /= row.instances_used;
        double mean_time = time_count > 0 ? time_sum / time_count : 0.0;
        if (si == 0) base_mean_time = mean_time;
        row.mean_time_var_pct =
            base_mean_time > 0 ? 100.0 * (mean_time - base_mean_time) / base_mean_time : 0.0;
        table.rows.push_back(row);
    }
    return table;
}

}  // namespace mlst
