#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "mlst/graph.hpp"
#include "mlst/heuristics.hpp"
#include "mlst/model.hpp"

namespace mlst {

struct BruteForceResult {
    int value = 0;
    SteinerTree tree;
};

// Label-subset enumeration in increasing cardinality; the first feasible
// cardinality is optimal. Independent of the LP machinery by design.
inline BruteForceResult brute_force(const LabeledGraph& g) {
    if (g.label_count > 20) throw std::runtime_error("brute_force: more than 20 labels");

    for (int k = 1; k <= g.label_count; ++k) {
        std::vector<int> pick(k);
        for (int i = 0; i < k; ++i) pick[i] = i;
        while (true) {
            std::vector<char> allowed(g.label_count, 0);
            for (int l : pick) allowed[l] = 1;
            if (detail::labels_connect_terminals(g, allowed)) {
                BruteForceResult res;
                res.value = k;
                std::vector<int> edges = tree_from_labels(g, pick);
                res.tree = *validate_solution(g, edges).tree;
                return res;
            }
            // next k-combination
            int i = k - 1;
            while (i >= 0 && pick[i] == g.label_count - k + i) --i;
            if (i < 0) break;
            ++pick[i];
            for (int j = i + 1; j < k; ++j) pick[j] = pick[j - 1] + 1;
        }
    }
    throw std::runtime_error("brute_force: graph not connected?");
}

struct BnbResult {
    int value = 0;
    SteinerTree tree;
    std::int64_t nodes = 0;
    double root_bound = 0.0;
    bool proven = false;
    std::uint64_t work_to_best = 0;
};

struct BnbLimits {
    double time_limit_ms = 0.0;        // 0 = none (wall clock)
    std::uint64_t work_limit = ~std::uint64_t(0);
};

// Cutting-plane based branch and bound. Bound at each node is the subtour
// fixpoint LP value under the node's fixings; branching picks the most
// fractional label variable first, then the most fractional edge variable.
// All cuts discovered anywhere in the tree are globally valid and stay in
// the solver.
class BranchAndBound {
  public:
    BranchAndBound(const LabeledGraph& g, LinkMode mode = LinkMode::per_edge,
                   WorkMeter* meter = nullptr)
        : g_(g), meter_(meter) {
        model_ = build_relaxation(augment(g), mode);
    }

    BnbResult run(BnbLimits limits = {}) {
        limits_ = limits;
        start_ = std::chrono::steady_clock::now();
        timed_out_ = false;

        HeuristicResult seed = mvca(g_);
        incumbent_value_ = seed.tree.value;
        incumbent_tree_ = seed.tree;

        WorkMeter local;
        if (!meter_) meter_ = &local;
        if (limits_.work_limit != ~std::uint64_t(0))
            meter_->limit = std::min(meter_->limit, meter_->used + limits_.work_limit);

        solver_.emplace(model_.base_lp, meter_);
        nodes_ = 0;
        root_bound_ = 0.0;
        bool complete = dive(0, true);

        BnbResult res;
        res.value = incumbent_value_;
        res.tree = incumbent_tree_;
        res.nodes = nodes_;
        res.root_bound = root_bound_;
        res.proven = complete && !timed_out_;
        res.work_to_best = work_to_best_;
        return res;
    }

  private:
    const LabeledGraph& g_;
    MlstModel model_;
    WorkMeter* meter_;
    std::optional<LpSolver> solver_;
    CutPool pool_;
    std::set<int> applied_;
    BnbLimits limits_;
    std::chrono::steady_clock::time_point start_;
    bool timed_out_ = false;

    int incumbent_value_ = 0;
    SteinerTree incumbent_tree_;
    std::int64_t nodes_ = 0;
    double root_bound_ = 0.0;
    std::uint64_t work_to_best_ = 0;

    bool out_of_budget() {
        if (meter_->exhausted()) return true;
        if (limits_.time_limit_ms > 0.0) {
            double ms = std::chrono::duration<double, std::milli>(
                            std::chrono::steady_clock::now() - start_)
                            .count();
            if (ms > limits_.time_limit_ms) {
                timed_out_ = true;
                return true;
            }
        }
        return false;
    }

    // returns true when the subtree was fully explored
    bool dive(int depth, bool is_root) {
        if (out_of_budget()) return false;

        ++nodes_;
        CutLoopResult loop = cutting_plane_solve(model_, *solver_, pool_, applied_);
        if (loop.solution.status == LpStatus::aborted) return false;
        if (loop.solution.status != LpStatus::optimal) return true;  // infeasible: pruned exactly

        double bound = loop.solution.objective;
        if (is_root) root_bound_ = bound;
        if (bound >= incumbent_value_ - (1.0 - kIntTol)) return true;  // cannot beat incumbent

        const std::vector<double>& x = loop.solution.values;
        if (edge_vector_integral(model_, x)) {
            // fixpoint + integral => acyclic spanning structure; the real part
            // is a Steiner tree
            std::vector<int> original;
            for (int e = 0; e < model_.graph.original_edge_count(); ++e)
                if (x[model_.edge_column(e)] > 0.5) original.push_back(e);
            ValidationResult v = validate_solution(g_, original);
            if (!v.ok()) throw std::runtime_error("bnb: integral fixpoint failed validation");
            if (v.tree->value < incumbent_value_) {
                incumbent_value_ = v.tree->value;
                incumbent_tree_ = *v.tree;
                work_to_best_ = meter_->used;
            }
            // under the aggregated link mode the LP may price labels below
            // the tree's true label count; branch on, unless the gap is closed
            if (incumbent_value_ - bound < 1.0 - kIntTol) return true;
        }

        int branch_col = pick_branch_column(x);
        if (branch_col < 0) return true;  // fully integral in x and y

        double lo = solver_->lower_bound(branch_col);
        double hi = solver_->upper_bound(branch_col);
        double first = x[branch_col] >= 0.5 ? 1.0 : 0.0;
        bool complete = true;
        for (double side : {first, 1.0 - first}) {
            std::vector<std::pair<int, std::pair<double, double>>> undo;
            fix_with_consistency(branch_col, side, undo);
            complete = dive(depth + 1, false) && complete;
            for (auto& [col, bounds] : undo) solver_->set_bounds(col, bounds.first, bounds.second);
            if (out_of_budget()) return false;
        }
        // restore the branch variable itself
        solver_->set_bounds(branch_col, lo, hi);
        return complete;
    }

    int pick_branch_column(const std::vector<double>& x) {
        int best = -1;
        double best_frac = kIntTol;
        for (int l = 0; l < g_.label_count; ++l) {
            int col = model_.label_column(l);
            double f = 0.5 - std::abs(x[col] - std::floor(x[col]) - 0.5);
            if (f > best_frac + 1e-12) {
                best_frac = f;
                best = col;
            }
        }
        if (best >= 0) return best;
        for (int e = 0; e < model_.num_edge_columns(); ++e) {
            int col = model_.edge_column(e);
            double f = 0.5 - std::abs(x[col] - std::floor(x[col]) - 0.5);
            if (f > best_frac + 1e-12) {
                best_frac = f;
                best = col;
            }
        }
        return best;
    }

    void fix_with_consistency(int col, double value,
                              std::vector<std::pair<int, std::pair<double, double>>>& undo) {
        auto apply = [&](int c, double v) {
            undo.push_back({c, {solver_->lower_bound(c), solver_->upper_bound(c)}});
            solver_->set_bounds(c, v, v);
        };
        apply(col, value);
        // x_e = 1 forces y_{l(e)} = 1
        if (value == 1.0 && col < model_.graph.original_edge_count()) {
            int ycol = model_.label_column(model_.graph.base.edges[col].label);
            if (solver_->upper_bound(ycol) != solver_->lower_bound(ycol)) apply(ycol, 1.0);
        }
    }
};

inline BnbResult branch_and_bound(const LabeledGraph& g, BnbLimits limits = {},
                                  LinkMode mode = LinkMode::per_edge,
                                  WorkMeter* meter = nullptr) {
    BranchAndBound solver(g, mode, meter);
    return solver.run(limits);
}

}  // namespace mlst
