#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <vector>

#include "mlst/graph.hpp"
#include "mlst/heuristics.hpp"
#include "mlst/lp.hpp"
#include "mlst/model.hpp"
#include "mlst/rng.hpp"

namespace mlst {

struct DevoConfig {
    int population = 0;  // 0: min(|Q|, 12)
    int feasible_target = 3;
    int generation_cap = 50;
    double mutation_rate = 0.1;
    double selection_fraction = 0.5;
    std::uint64_t seed = 1;
    std::uint64_t work_limit = ~std::uint64_t(0);
    double time_limit_ms = 0.0;  // 0: none
    LinkMode link_mode = LinkMode::per_edge;
    int cycle_targets_per_edge = 4;

    int effective_population(const LabeledGraph& g) const {
        if (population > 0) return population;
        return std::min<int>(static_cast<int>(g.terminals.size()), 12);
    }
};

// A devolutionary genome: anchor choice, accumulated restrictions, and the
// cuts (by shared-pool id) its LP carries. The phenotype is the subtour
// fixpoint of the base relaxation plus the genome.
struct Individual {
    int q0 = -1;
    std::map<int, double> fixings;  // LP column -> fixed value
    std::vector<int> cut_ids;       // sorted pool ids
    LpSolution phenotype;
    double objective = 0.0;
    int fitness = 0;
    bool feasible = false;
    std::vector<int> tree_edges;  // original edge ids when feasible
    int created_idx = -1;
    std::set<int> branched_labels;  // labels used for init branching
};

struct CrossoverRecord {
    int generation = 0;
    double parent_a_obj = 0.0, parent_b_obj = 0.0;
    double child_obj = 0.0;
    bool discarded = false;  // infeasible union of fixings
};

struct GenerationRecord {
    int generation = 0;
    int pool_size = 0;
    int archive_size = 0;
    int best_fitness = 0;
    double obj_min = 0.0, obj_max = 0.0;
    int cut_pool_size = 0;
    std::uint64_t work_used = 0;
};

struct RunStats {
    std::vector<GenerationRecord> generations;
    std::vector<CrossoverRecord> crossovers;
    int generations_run = 0;
    bool fallback = false;
    bool budget_exhausted = false;
    bool population_warning = false;  // init could not reach the requested size
    int edges_without_cycle = 0;
    int mutations_applied = 0;
    std::uint64_t work_total = 0;
    std::uint64_t work_to_best = 0;
    double wall_ms = 0.0;

    std::string to_text() const {
        std::ostringstream out;
        for (const GenerationRecord& g : generations)
            out << "gen " << g.generation << " pool " << g.pool_size << " archive "
                << g.archive_size << " best_fitness " << g.best_fitness << " obj_min " << g.obj_min
                << " obj_max " << g.obj_max << " cuts " << g.cut_pool_size << " work "
                << g.work_used << "\n";
        return out.str();
    }
};

struct DevoResult {
    SteinerTree tree;
    int value = 0;
    bool fallback = false;
    RunStats stats;
};

// --- crossover pieces, usable standalone -------------------------------------

struct CommonFixes {
    std::vector<int> labels;  // y_l = 1
    std::vector<int> edges;   // x_e = 1 (implies the label fix)
};

// Phase 1: per terminal, the incident edges whose label is priced 1 in both
// parents; their labels get fixed, and the edges themselves when both parents
// use them integrally.
inline CommonFixes crossover_common_fixes(const MlstModel& m, const std::vector<double>& v1,
                                          const std::vector<double>& v2) {
    const AugmentedGraph& g = m.graph;
    CommonFixes out;
    std::set<int> labels, edges;
    for (int t : g.base.terminals) {
        for (int e : g.base.incidence[t]) {
            int l = g.base.edges[e].label;
            int yc = m.label_column(l);
            if (v1[yc] < 1.0 - kIntTol || v2[yc] < 1.0 - kIntTol) continue;
            labels.insert(l);
            int xc = m.edge_column(e);
            if (v1[xc] >= 1.0 - kIntTol && v2[xc] >= 1.0 - kIntTol) edges.insert(e);
        }
    }
    out.labels.assign(labels.begin(), labels.end());
    out.edges.assign(edges.begin(), edges.end());
    return out;
}

// Phase 2: one constraint per fractional edge incident to Steiner nodes —
// a triangle cut when both endpoints are Steiner, otherwise cycle cuts formed
// through v' via depth-first-search paths from the terminal endpoint to other
// Steiner nodes. Edges are taken most-fractional first and the output is
// bounded so dense instances cannot flood the LP in a single mating.
inline std::vector<Cut> crossover_cuts(const MlstModel& m, const std::vector<double>& v1,
                                       const std::vector<double>& v2, int targets_per_edge = 4,
                                       int* edges_without_cycle = nullptr, int max_cuts = 48) {
    const AugmentedGraph& g = m.graph;
    std::vector<Cut> cuts;
    std::set<std::string> seen;
    auto push = [&](Cut c) {
        if (seen.insert(c.key()).second) cuts.push_back(std::move(c));
    };
    auto fractional = [&](double v) { return v > kIntTol && v < 1.0 - kIntTol; };

    std::vector<std::pair<double, int>> frac_edges;  // (distance from 1/2, edge)
    for (int e = 0; e < g.total_edge_count(); ++e) {
        int xc = m.edge_column(e);
        if (!fractional(v1[xc]) && !fractional(v2[xc])) continue;
        double away = 1.0;
        for (double v : {v1[xc], v2[xc]})
            if (fractional(v)) away = std::min(away, std::abs(v - 0.5));
        frac_edges.push_back({away, e});
    }
    std::sort(frac_edges.begin(), frac_edges.end());

    for (auto [away, e] : frac_edges) {
        if (static_cast<int>(cuts.size()) >= max_cuts) break;
        int u = g.all_edges[e].u, v = g.all_edges[e].v;
        if (u == g.virtual_node || v == g.virtual_node) continue;
        bool us = g.is_steiner(u), vs = g.is_steiner(v);
        if (us && vs) {
            push(make_triangle_cut(m, u, v));
        } else if (us || vs) {
            int steiner_end = us ? u : v;
            int terminal_end = us ? v : u;
            int made = 0;
            for (int s = 0; s < g.base.node_count && made < targets_per_edge; ++s) {
                if (!g.is_steiner(s) || s == steiner_end) continue;
                auto path = dfs_path(g, terminal_end, s, {steiner_end}, {e});
                if (!path) continue;
                std::vector<int> seq = {steiner_end, terminal_end};
                int at = terminal_end;
                for (int pe : *path) {
                    at = g.all_edges[pe].other(at);
                    seq.push_back(at);
                }
                push(make_cycle_cut(m, seq));
                ++made;
            }
            if (made == 0 && edges_without_cycle) ++*edges_without_cycle;
        }
    }
    return cuts;
}

// --- the engine ---------------------------------------------------------------

class DevoEngine {
  public:
    DevoEngine(const LabeledGraph& g, DevoConfig cfg)
        : g_(g), cfg_(cfg), rng_(mix_seed(cfg.seed, 0x6465766fULL /*"devo"*/)) {
        meter_.limit = cfg.work_limit;
    }

    const CutPool& pool() const { return pool_; }
    WorkMeter& meter() { return meter_; }
    RunStats& stats() { return stats_; }
    const std::vector<Individual>& population() const { return population_; }

    std::shared_ptr<MlstModel> model_for(int q0) {
        auto it = models_.find(q0);
        if (it != models_.end()) return it->second;
        auto m = std::make_shared<MlstModel>(build_relaxation(augment(g_, q0), cfg_.link_mode));
        models_.emplace(q0, m);
        return m;
    }

    // Solved base relaxation per anchor; clones of it warm-start every
    // genome evaluation for that anchor.
    LpSolver* base_solver_for(int q0) {
        auto it = base_solvers_.find(q0);
        if (it != base_solvers_.end()) return it->second.get();
        auto m = model_for(q0);
        auto solver = std::make_unique<LpSolver>(m->base_lp, &meter_);
        solver->solve();
        auto* raw = solver.get();
        base_solvers_.emplace(q0, std::move(solver));
        return raw;
    }

    int fitness_of(const MlstModel& m, const std::vector<double>& x) const {
        int count = 0;
        for (int e = 0; e < m.num_edge_columns(); ++e) {
            double v = x[m.edge_column(e)];
            if (std::abs(v - std::round(v)) <= kIntTol) ++count;
        }
        return count;
    }

    // Solves the genome's LP to its subtour fixpoint and fills the phenotype
    // fields. False when the fixings conflict (infeasible) or the budget ran
    // out mid-solve.
    bool evaluate(Individual& ind) {
        auto m = model_for(ind.q0);
        LpSolver solver = *base_solver_for(ind.q0);  // clone of the solved base
        solver.set_meter(&meter_);
        for (auto [col, val] : ind.fixings) solver.fix(col, val);
        std::set<int> applied(ind.cut_ids.begin(), ind.cut_ids.end());
        for (int id : ind.cut_ids) solver.add_row(materialize_cut(pool_[id], *m));

        CutLoopResult loop = cutting_plane_solve(*m, solver, pool_, applied);
        ind.cut_ids.assign(applied.begin(), applied.end());
        ind.phenotype = loop.solution;
        if (loop.solution.status == LpStatus::aborted) stats_.budget_exhausted = true;
        if (loop.solution.status != LpStatus::optimal) return false;

        ind.objective = loop.solution.objective;
        ind.fitness = fitness_of(*m, loop.solution.values);
        ind.feasible = false;
        ind.tree_edges.clear();
        if (edge_vector_integral(*m, loop.solution.values)) {
            std::vector<int> original;
            for (int e = 0; e < m->graph.original_edge_count(); ++e)
                if (loop.solution.values[m->edge_column(e)] > 0.5) original.push_back(e);
            ValidationResult v = validate_solution(g_, original);
            if (v.ok()) {
                ind.feasible = true;
                ind.tree_edges = v.tree->edge_set;
            }
        }
        return true;
    }

    void add_fixing(Individual& ind, int col, double val) {
        auto m = model_for(ind.q0);
        ind.fixings[col] = val;
        // consistency: a used edge forces its label
        if (val == 1.0 && col < m->graph.original_edge_count())
            ind.fixings[m->label_column(m->graph.base.edges[col].label)] = 1.0;
    }

    // --- population construction -------------------------------------------

    std::vector<Individual> init_population() {
        const int pop = cfg_.effective_population(g_);
        std::vector<Individual> out;

        // anchor at high-degree terminals first: exempting a poorly-connected
        // terminal from real coverage costs the most bound quality
        std::vector<int> anchors = g_.terminals;
        std::sort(anchors.begin(), anchors.end(), [&](int a, int b) {
            std::size_t da = g_.incidence[a].size(), db = g_.incidence[b].size();
            if (da != db) return da > db;
            return a < b;
        });

        for (std::size_t i = 0; i < anchors.size() && static_cast<int>(out.size()) < pop; ++i) {
            Individual ind;
            ind.q0 = anchors[i];
            ind.created_idx = next_idx_++;
            if (evaluate(ind)) out.push_back(std::move(ind));
            if (meter_.exhausted()) return out;
        }

        // diversify by branching on a fractional label variable
        std::size_t scan = 0;
        while (static_cast<int>(out.size()) < pop && scan < out.size()) {
            Individual& parent = out[scan];
            auto m = model_for(parent.q0);
            int pick = -1;
            double best = kIntTol;
            if (!parent.feasible && parent.phenotype.status == LpStatus::optimal) {
                for (int l = 0; l < g_.label_count; ++l) {
                    int col = m->label_column(l);
                    if (parent.fixings.count(col) || parent.branched_labels.count(l)) continue;
                    double v = parent.phenotype.values[col];
                    double f = 0.5 - std::abs(v - std::floor(v) - 0.5);
                    if (f > best + 1e-12) {
                        best = f;
                        pick = l;
                    }
                }
            }
            if (pick < 0) {
                ++scan;
                continue;
            }
            parent.branched_labels.insert(pick);
            for (double side : {0.0, 1.0}) {
                if (static_cast<int>(out.size()) >= pop) break;
                Individual child;
                child.q0 = parent.q0;
                child.fixings = parent.fixings;
                child.cut_ids = parent.cut_ids;
                child.created_idx = next_idx_++;
                add_fixing(child, m->label_column(pick), side);
                if (evaluate(child)) out.push_back(std::move(child));
                if (meter_.exhausted()) return out;
            }
        }
        if (static_cast<int>(out.size()) < pop) stats_.population_warning = true;
        return out;
    }

    // --- selection -----------------------------------------------------------

    static bool rank_less(const Individual& a, const Individual& b) {
        if (a.fitness != b.fitness) return a.fitness > b.fitness;
        if (a.objective != b.objective) return a.objective < b.objective;
        return a.created_idx < b.created_idx;
    }

    // Expects an infeasible-only pool; returns index pairs into it.
    std::vector<std::pair<int, int>> select_pairs(const std::vector<Individual>& pool,
                                                  std::vector<int>* candidates_out = nullptr) {
        std::vector<int> order(pool.size());
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(),
                  [&](int a, int b) { return rank_less(pool[a], pool[b]); });
        int k = static_cast<int>(
            std::ceil(cfg_.selection_fraction * static_cast<double>(pool.size())));
        k = std::max(k, 2);  // a pool of two infeasible individuals can always mate
        k = std::min<int>(k, static_cast<int>(pool.size()));
        std::vector<int> candidates(order.begin(), order.begin() + k);
        if (candidates_out) *candidates_out = candidates;
        rng_.shuffle(candidates);
        std::vector<std::pair<int, int>> pairs;
        for (std::size_t i = 0; i + 1 < candidates.size(); i += 2)
            pairs.push_back({candidates[i], candidates[i + 1]});
        return pairs;
    }

    // --- crossover / mutation -------------------------------------------------

    std::optional<Individual> crossover(const Individual& a, const Individual& b, int generation) {
        CrossoverRecord rec;
        rec.generation = generation;
        rec.parent_a_obj = a.objective;
        rec.parent_b_obj = b.objective;

        // the child devolves in the anchor space of the tighter parent, so its
        // bound can only rise
        const Individual& lead = a.objective >= b.objective ? a : b;
        Individual child;
        child.q0 = lead.q0;
        child.created_idx = next_idx_++;
        auto m = model_for(child.q0);

        // union of fixings; a conflict means the mating was contradictory
        child.fixings = a.fixings;
        for (auto [col, val] : b.fixings) {
            auto it = child.fixings.find(col);
            if (it != child.fixings.end() && it->second != val) {
                rec.discarded = true;
                stats_.crossovers.push_back(rec);
                return std::nullopt;
            }
            child.fixings[col] = val;
        }
        std::set<int> ids(a.cut_ids.begin(), a.cut_ids.end());
        ids.insert(b.cut_ids.begin(), b.cut_ids.end());

        CommonFixes common =
            crossover_common_fixes(*m, a.phenotype.values, b.phenotype.values);
        for (int l : common.labels) child.fixings[m->label_column(l)] = 1.0;
        for (int e : common.edges) add_fixing(child, m->edge_column(e), 1.0);

        std::vector<Cut> cuts =
            crossover_cuts(*m, a.phenotype.values, b.phenotype.values,
                           cfg_.cycle_targets_per_edge, &stats_.edges_without_cycle);
        for (const Cut& c : cuts) ids.insert(pool_.intern(c));
        child.cut_ids.assign(ids.begin(), ids.end());

        if (!evaluate(child)) {
            rec.discarded = true;
            stats_.crossovers.push_back(rec);
            return std::nullopt;
        }
        rec.child_obj = child.objective;
        stats_.crossovers.push_back(rec);
        return child;
    }

    // With probability p_mut, pick a terminal and enable one of its incident
    // labels that is not already forced on.
    void mutate(Individual& child) {
        if (child.feasible) return;
        if (rng_.next_real() >= cfg_.mutation_rate) return;
        auto m = model_for(child.q0);
        int t = g_.terminals[rng_.next_below(g_.terminals.size())];
        std::set<int> labels;
        for (int e : g_.incidence[t]) labels.insert(g_.edges[e].label);
        std::vector<int> eligible;
        for (int l : labels) {
            auto it = child.fixings.find(m->label_column(l));
            if (it == child.fixings.end() || it->second != 1.0) eligible.push_back(l);
        }
        if (eligible.empty()) return;
        int l = eligible[rng_.next_below(eligible.size())];
        child.fixings[m->label_column(l)] = 1.0;
        evaluate(child);
        ++stats_.mutations_applied;
    }

    // --- main loop -------------------------------------------------------------

    DevoResult run() {
        start_time_ = std::chrono::steady_clock::now();
        auto t0 = start_time_;
        population_ = init_population();
        archive_feasible(0);

        int generation = 0;
        record_generation(generation);
        while (!should_stop(generation)) {
            std::vector<int> candidates;
            std::vector<std::pair<int, int>> pairs = select_pairs(population_, &candidates);
            if (pairs.empty()) break;

            std::vector<Individual> children;
            for (auto [ia, ib] : pairs) {
                auto child = crossover(population_[ia], population_[ib], generation + 1);
                if (child) {
                    mutate(*child);
                    children.push_back(std::move(*child));
                }
                if (meter_.exhausted()) break;
            }

            // replacement: children plus unselected survivors; mated parents
            // return only when the pool would otherwise fall below a mating
            // pair, so small populations keep refining instead of dying out
            std::set<int> consumed(candidates.begin(), candidates.end());
            std::vector<Individual> next;
            for (auto& c : children) next.push_back(std::move(c));
            std::vector<Individual> mated;
            for (std::size_t i = 0; i < population_.size(); ++i) {
                if (consumed.count(static_cast<int>(i)))
                    mated.push_back(std::move(population_[i]));
                else
                    next.push_back(std::move(population_[i]));
            }
            std::sort(mated.begin(), mated.end(), rank_less);
            for (auto& p : mated) {
                if (next.size() >= 2) break;
                next.push_back(std::move(p));
            }
            std::sort(next.begin(), next.end(), rank_less);
            int pop = cfg_.effective_population(g_);
            if (static_cast<int>(next.size()) > pop) next.resize(pop);
            population_ = std::move(next);

            ++generation;
            archive_feasible(generation);
            record_generation(generation);
        }

        stats_.generations_run = generation;
        stats_.work_total = meter_.used;
        stats_.wall_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                .count();

        DevoResult res;
        res.stats = stats_;
        if (archive_.empty()) {
            HeuristicResult fb = mvca(g_);
            res.tree = fb.tree;
            res.value = fb.tree.value;
            res.fallback = true;
            res.stats.fallback = true;
        } else {
            const ArchiveEntry* best = &archive_.front();
            for (const ArchiveEntry& e : archive_) {
                if (e.tree.value < best->tree.value ||
                    (e.tree.value == best->tree.value &&
                     (e.generation < best->generation ||
                      (e.generation == best->generation && e.created_idx < best->created_idx))))
                    best = &e;
            }
            res.tree = best->tree;
            res.value = best->tree.value;
            res.stats.work_to_best = best->work_at_archive;
        }
        return res;
    }

    struct ArchiveEntry {
        SteinerTree tree;
        int generation = 0;
        int created_idx = 0;
        std::uint64_t work_at_archive = 0;
    };
    const std::vector<ArchiveEntry>& archive() const { return archive_; }

  private:
    const LabeledGraph& g_;
    DevoConfig cfg_;
    Rng rng_;
    WorkMeter meter_;
    CutPool pool_;
    std::map<int, std::shared_ptr<MlstModel>> models_;
    std::map<int, std::unique_ptr<LpSolver>> base_solvers_;
    std::vector<Individual> population_;
    std::vector<ArchiveEntry> archive_;
    RunStats stats_;
    int next_idx_ = 0;

    void archive_feasible(int generation) {
        std::vector<Individual> rest;
        for (Individual& ind : population_) {
            if (ind.feasible) {
                ValidationResult v = validate_solution(g_, ind.tree_edges);
                ArchiveEntry e;
                e.tree = *v.tree;
                e.generation = generation;
                e.created_idx = ind.created_idx;
                e.work_at_archive = meter_.used;
                archive_.push_back(std::move(e));
            } else {
                rest.push_back(std::move(ind));
            }
        }
        population_ = std::move(rest);
    }

    void record_generation(int generation) {
        GenerationRecord r;
        r.generation = generation;
        r.pool_size = static_cast<int>(population_.size());
        r.archive_size = static_cast<int>(archive_.size());
        r.cut_pool_size = pool_.size();
        r.work_used = meter_.used;
        if (!population_.empty()) {
            r.best_fitness = 0;
            r.obj_min = r.obj_max = population_.front().objective;
            for (const Individual& ind : population_) {
                r.best_fitness = std::max(r.best_fitness, ind.fitness);
                r.obj_min = std::min(r.obj_min, ind.objective);
                r.obj_max = std::max(r.obj_max, ind.objective);
            }
        }
        stats_.generations.push_back(r);
    }

    bool should_stop(int generation) {
        if (static_cast<int>(archive_.size()) >= cfg_.feasible_target) return true;
        if (generation >= cfg_.generation_cap) return true;
        if (meter_.exhausted()) {
            stats_.budget_exhausted = true;
            return true;
        }
        if (cfg_.time_limit_ms > 0.0) {
            double ms = std::chrono::duration<double, std::milli>(
                            std::chrono::steady_clock::now() - start_time_)
                            .count();
            if (ms > cfg_.time_limit_ms) return true;
        }
        if (population_.size() < 2) return true;
        return false;
    }

    std::chrono::steady_clock::time_point start_time_;
};

inline DevoResult devo_run(const LabeledGraph& g, const DevoConfig& cfg) {
    DevoEngine engine(g, cfg);
    return engine.run();
}

}  // namespace mlst
