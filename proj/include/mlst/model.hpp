#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "mlst/graph.hpp"
#include "mlst/lp.hpp"

namespace mlst {

// Label linking: one row per edge (y_{l(e)} >= x_e) or one aggregated row per
// label (sum of the label's edges <= min{|S_l|, n-1} * y_l).
enum class LinkMode { per_edge, aggregated };

// ---------------------------------------------------------------------------
// Valid inequalities. Cuts are stored symbolically (node data) and
// materialized into LP rows against a concrete model, so a cut learned under
// one anchor terminal stays usable under another: cycle and triangle cuts
// only ever reference Steiner colorless edges, which exist in every
// augmentation, and subtour cuts rebuild E(W) per model.
// ---------------------------------------------------------------------------

struct Cut {
    enum Kind { subtour, cycle, triangle } kind;

    // subtour: W as sorted node ids (may include v')
    // cycle:   node sequence [s_i, mid..., s_j]; closed through v' on both ends
    // triangle: {s_i, s_j}
    std::vector<int> nodes;

    std::string key() const {
        std::string k = kind == subtour ? "W" : kind == cycle ? "C" : "T";
        std::vector<int> canon = nodes;
        if (kind == cycle) {
            // same cycle read from either end
            std::vector<int> rev(canon.rbegin(), canon.rend());
            if (rev < canon) canon = rev;
        } else {
            std::sort(canon.begin(), canon.end());
        }
        for (int v : canon) k += ":" + std::to_string(v);
        return k;
    }
};

struct MlstModel {
    AugmentedGraph graph;
    LinkMode link_mode = LinkMode::per_edge;
    std::vector<std::vector<int>> label_edges;  // S_l: original edge ids per label
    LinearProgram base_lp;

    int edge_column(int edge_id) const { return edge_id; }
    int label_column(int label) const { return graph.total_edge_count() + label; }
    int num_edge_columns() const { return graph.total_edge_count(); }
    int num_columns() const { return graph.total_edge_count() + graph.base.label_count; }
};

inline MlstModel build_relaxation(const AugmentedGraph& g, LinkMode mode = LinkMode::per_edge) {
    MlstModel m;
    m.graph = g;
    m.link_mode = mode;

    const int n = g.base.node_count;
    const int total_edges = g.total_edge_count();

    m.label_edges.assign(g.base.label_count, {});
    for (int e = 0; e < g.original_edge_count(); ++e)
        m.label_edges[g.base.edges[e].label].push_back(e);

    LinearProgram& lp = m.base_lp;
    for (int e = 0; e < total_edges; ++e) lp.add_variable(0.0, 1.0, 0.0);
    for (int l = 0; l < g.base.label_count; ++l) lp.add_variable(0.0, 1.0, 1.0);

    // a spanning tree of G' (n+1 nodes) has n edges
    {
        std::vector<std::pair<int, double>> row;
        for (int e = 0; e < total_edges; ++e) row.push_back({m.edge_column(e), 1.0});
        lp.add_constraint(std::move(row), '=', static_cast<double>(n));
    }

    if (mode == LinkMode::per_edge) {
        for (int e = 0; e < g.original_edge_count(); ++e)
            lp.add_constraint({{m.edge_column(e), 1.0},
                               {m.label_column(g.base.edges[e].label), -1.0}},
                              '<', 0.0);
    } else {
        for (int l = 0; l < g.base.label_count; ++l) {
            if (m.label_edges[l].empty()) continue;
            double cap = std::min<double>(m.label_edges[l].size(), n - 1);
            std::vector<std::pair<int, double>> row;
            for (int e : m.label_edges[l]) row.push_back({m.edge_column(e), 1.0});
            row.push_back({m.label_column(l), -cap});
            lp.add_constraint(std::move(row), '<', 0.0);
        }
    }

    // degree rule: a Steiner node adjacent to v' cannot also use a real edge
    for (int k = 0; k < n; ++k) {
        if (g.base.is_terminal(k)) continue;
        int colorless = g.colorless_edge_to(k);
        for (int e : g.base.incidence[k])
            lp.add_constraint({{m.edge_column(colorless), 1.0}, {m.edge_column(e), 1.0}}, '<',
                              1.0);
    }

    return m;
}

// --- cut construction -------------------------------------------------------

inline Cut make_subtour_cut(const std::vector<int>& node_subset) {
    Cut c;
    c.kind = Cut::subtour;
    c.nodes = node_subset;
    std::sort(c.nodes.begin(), c.nodes.end());
    c.nodes.erase(std::unique(c.nodes.begin(), c.nodes.end()), c.nodes.end());
    if (c.nodes.empty()) throw std::runtime_error("subtour cut: empty node set");
    return c;
}

// Cycle through v': [v', seq.front(), ..., seq.back(), v'] where the two ends
// are Steiner nodes. |C| = |seq| + 1 edges >= 4, so |seq| >= 3 nodes.
inline Cut make_cycle_cut(const MlstModel& m, const std::vector<int>& seq) {
    const AugmentedGraph& g = m.graph;
    if (seq.size() < 3)
        throw std::runtime_error("cycle cut: triangle or shorter, use make_triangle_cut");
    int si = seq.front(), sj = seq.back();
    if (!g.is_steiner(si) || !g.is_steiner(sj))
        throw std::runtime_error("cycle cut: cycle must meet v' at two Steiner nodes");
    std::set<int> distinct(seq.begin(), seq.end());
    if (distinct.size() != seq.size() || distinct.count(g.virtual_node))
        throw std::runtime_error("cycle cut: cycle is not elementary");
    for (std::size_t i = 0; i + 1 < seq.size(); ++i)
        if (g.base.find_edge(seq[i], seq[i + 1]) < 0)
            throw std::runtime_error("cycle cut: missing edge in cycle");
    Cut c;
    c.kind = Cut::cycle;
    c.nodes = seq;
    return c;
}

inline Cut make_triangle_cut(const MlstModel& m, int si, int sj) {
    const AugmentedGraph& g = m.graph;
    if (!g.is_steiner(si) || !g.is_steiner(sj))
        throw std::runtime_error("triangle cut: endpoints must be Steiner nodes");
    if (g.base.find_edge(si, sj) < 0)
        throw std::runtime_error("triangle cut: edge {s_i,s_j} does not exist");
    Cut c;
    c.kind = Cut::triangle;
    c.nodes = {std::min(si, sj), std::max(si, sj)};
    return c;
}

// --- cut evaluation / materialization ---------------------------------------

struct CutRow {
    LinearProgram::Row row;
    double lhs = 0.0;  // evaluated form as written in the inequality
    double rhs = 0.0;
};

inline std::vector<int> cut_edge_ids(const Cut& c, const MlstModel& m) {
    const AugmentedGraph& g = m.graph;
    std::vector<int> ids;
    switch (c.kind) {
        case Cut::subtour: {
            std::vector<char> in(g.base.node_count + 1, 0);
            for (int v : c.nodes) in[v] = 1;
            for (int e = 0; e < g.total_edge_count(); ++e)
                if (in[g.all_edges[e].u] && in[g.all_edges[e].v]) ids.push_back(e);
            break;
        }
        case Cut::cycle: {
            ids.push_back(g.colorless_edge_to(c.nodes.front()));
            for (std::size_t i = 0; i + 1 < c.nodes.size(); ++i)
                ids.push_back(g.base.find_edge(c.nodes[i], c.nodes[i + 1]));
            ids.push_back(g.colorless_edge_to(c.nodes.back()));
            break;
        }
        case Cut::triangle: {
            ids.push_back(g.colorless_edge_to(c.nodes[0]));
            ids.push_back(g.colorless_edge_to(c.nodes[1]));
            break;
        }
    }
    for (int e : ids)
        if (e < 0) throw std::runtime_error("cut references a missing edge");
    return ids;
}

inline LinearProgram::Row materialize_cut(const Cut& c, const MlstModel& m) {
    std::vector<int> ids = cut_edge_ids(c, m);
    LinearProgram::Row row;
    switch (c.kind) {
        case Cut::subtour:
            for (int e : ids) row.coeffs.push_back({m.edge_column(e), 1.0});
            row.rel = '<';
            row.rhs = static_cast<double>(c.nodes.size()) - 1.0;
            break;
        case Cut::cycle: {
            for (int e : ids) row.coeffs.push_back({m.edge_column(e), 1.0});
            int chord = m.graph.base.find_edge(c.nodes.front(), c.nodes.back());
            if (chord >= 0) row.coeffs.push_back({m.edge_column(chord), 1.0});
            row.rel = '<';
            row.rhs = static_cast<double>(ids.size()) - 2.0;
            break;
        }
        case Cut::triangle: {
            row.coeffs.push_back({m.edge_column(ids[0]), 0.5});
            row.coeffs.push_back({m.edge_column(ids[1]), 0.5});
            int chord = m.graph.base.find_edge(c.nodes[0], c.nodes[1]);
            row.coeffs.push_back({m.edge_column(chord), 1.0});
            row.rel = '<';
            row.rhs = 1.0;
            break;
        }
    }
    return row;
}

// lhs/rhs exactly as the inequality is written in its displayed form
inline std::pair<double, double> evaluate_cut(const Cut& c, const MlstModel& m,
                                              const std::vector<double>& x) {
    std::vector<int> ids = cut_edge_ids(c, m);
    switch (c.kind) {
        case Cut::subtour: {
            double lhs = 0.0;
            for (int e : ids) lhs += x[m.edge_column(e)];
            return {lhs, static_cast<double>(c.nodes.size()) - 1.0};
        }
        case Cut::cycle: {
            double lhs = 0.0;
            for (int e : ids) lhs += x[m.edge_column(e)];
            double rhs = static_cast<double>(ids.size()) - 2.0;
            int chord = m.graph.base.find_edge(c.nodes.front(), c.nodes.back());
            if (chord >= 0) rhs -= x[m.edge_column(chord)];
            return {lhs, rhs};
        }
        case Cut::triangle: {
            double lhs = 0.5 * (x[m.edge_column(ids[0])] + x[m.edge_column(ids[1])]);
            int chord = m.graph.base.find_edge(c.nodes[0], c.nodes[1]);
            return {lhs, 1.0 - x[m.edge_column(chord)]};
        }
    }
    return {0.0, 0.0};
}

inline bool cut_violated(const Cut& c, const MlstModel& m, const std::vector<double>& x,
                         double tol = kIntTol) {
    auto [lhs, rhs] = evaluate_cut(c, m, x);
    return lhs > rhs + tol;
}

inline bool check_cut_against_tree(const Cut& c, const MlstModel& m,
                                   const std::vector<double>& incidence) {
    auto [lhs, rhs] = evaluate_cut(c, m, incidence);
    return lhs <= rhs + 1e-9;
}

// Shared, deduplicating pool. Cut ids are stable across a whole run.
class CutPool {
  public:
    int intern(const Cut& c) {
        std::string k = c.key();
        auto it = index_.find(k);
        if (it != index_.end()) return it->second;
        cuts_.push_back(c);
        int id = static_cast<int>(cuts_.size()) - 1;
        index_.emplace(std::move(k), id);
        return id;
    }
    const Cut& operator[](int id) const { return cuts_[id]; }
    int size() const { return static_cast<int>(cuts_.size()); }

  private:
    std::vector<Cut> cuts_;
    std::map<std::string, int> index_;
};

// --- separation --------------------------------------------------------------

inline bool edge_vector_integral(const MlstModel& m, const std::vector<double>& x) {
    for (int e = 0; e < m.num_edge_columns(); ++e) {
        double v = x[m.edge_column(e)];
        if (std::abs(v - std::round(v)) > kIntTol) return false;
    }
    return true;
}

inline std::vector<int> chosen_edges(const MlstModel& m, const std::vector<double>& x) {
    std::vector<int> out;
    for (int e = 0; e < m.num_edge_columns(); ++e)
        if (x[m.edge_column(e)] > 0.5) out.push_back(e);
    return out;
}

namespace detail {

inline double subtour_violation(const MlstModel& m, const std::vector<int>& w,
                                const std::vector<double>& x) {
    std::vector<char> in(m.graph.base.node_count + 1, 0);
    for (int v : w) in[v] = 1;
    double mass = 0.0;
    for (int e = 0; e < m.graph.total_edge_count(); ++e)
        if (in[m.graph.all_edges[e].u] && in[m.graph.all_edges[e].v])
            mass += x[m.edge_column(e)];
    return mass - (static_cast<double>(w.size()) - 1.0);
}

// Walks one cycle in the subgraph given by edge ids; empty if acyclic.
// Recursive DFS (depth bounded by the node count), so every non-tree edge
// closes a cycle against an ancestor.
inline std::vector<int> find_cycle_nodes(const AugmentedGraph& g, const std::vector<int>& edge_ids) {
    int vn = g.base.node_count + 1;
    std::vector<std::vector<std::pair<int, int>>> adj(vn);
    for (int e : edge_ids) {
        adj[g.all_edges[e].u].push_back({g.all_edges[e].v, e});
        adj[g.all_edges[e].v].push_back({g.all_edges[e].u, e});
    }
    std::vector<char> visited(vn, 0);
    std::vector<int> parent(vn, -1);
    std::vector<int> cyc;

    auto rec = [&](auto&& self, int u, int via_edge) -> bool {
        visited[u] = 1;
        for (auto [v, e] : adj[u]) {
            if (e == via_edge) continue;
            if (visited[v]) {
                cyc.clear();
                for (int w = u; w != v; w = parent[w]) cyc.push_back(w);
                cyc.push_back(v);
                return true;
            }
            parent[v] = u;
            if (self(self, v, e)) return true;
        }
        return false;
    };
    for (int root = 0; root < vn; ++root)
        if (!visited[root] && rec(rec, root, -1)) return cyc;
    return {};
}

}  // namespace detail

// Subtour separation per the cutting-plane loop contract: exact on integral
// vectors; on fractional vectors a layered heuristic (support components at
// two thresholds, a support cycle, then subset enumeration up to size 8 when
// the graph is small).
inline std::vector<Cut> separate_subtour(const MlstModel& m, const std::vector<double>& x,
                                         double tol = kIntTol) {
    const AugmentedGraph& g = m.graph;
    const int vn = g.base.node_count + 1;
    std::vector<Cut> found;
    std::set<std::string> keys;
    auto emit = [&](const std::vector<int>& w) {
        if (w.size() < 2 || static_cast<int>(w.size()) > vn - 1) return false;
        if (detail::subtour_violation(m, w, x) <= tol) return false;
        Cut c = make_subtour_cut(w);
        if (keys.insert(c.key()).second) found.push_back(std::move(c));
        return true;
    };

    if (edge_vector_integral(m, x)) {
        // exact: the chosen edge set either is a spanning tree of G' or
        // contains a cycle whose node set gives a violated row
        std::vector<int> remaining = chosen_edges(m, x);
        for (int pass = 0; pass < 10; ++pass) {
            std::vector<int> cyc = detail::find_cycle_nodes(g, remaining);
            if (cyc.empty()) break;
            emit(cyc);
            // drop one actual cycle edge, then look for further cycles
            int a = cyc[0], b = cyc[1 % cyc.size()];
            for (std::size_t i = 0; i < remaining.size(); ++i) {
                if (g.all_edges[remaining[i]].touches(a) && g.all_edges[remaining[i]].touches(b)) {
                    remaining.erase(remaining.begin() + i);
                    break;
                }
            }
        }
        return found;
    }

    // (a) connected components of the thresholded support
    for (double thr : {0.5, 0.25}) {
        Dsu dsu(vn);
        for (int e = 0; e < g.total_edge_count(); ++e)
            if (x[m.edge_column(e)] >= thr) dsu.unite(g.all_edges[e].u, g.all_edges[e].v);
        std::map<int, std::vector<int>> comps;
        for (int v = 0; v < vn; ++v) comps[dsu.find(v)].push_back(v);
        for (auto& [root, members] : comps) emit(members);
    }

    // (b) a cycle in the positive support
    {
        std::vector<int> support;
        for (int e = 0; e < g.total_edge_count(); ++e)
            if (x[m.edge_column(e)] > tol) support.push_back(e);
        std::vector<int> cyc = detail::find_cycle_nodes(g, support);
        if (!cyc.empty()) emit(cyc);
    }

    // (c) small graphs: enumerate candidate subsets up to size 8
    if (found.empty() && vn <= 18) {
        std::vector<int> pick;
        auto rec = [&](auto&& self, int start, int remaining_size) -> void {
            if (static_cast<int>(found.size()) >= 20) return;
            if (remaining_size == 0) {
                emit(pick);
                return;
            }
            for (int v = start; v <= vn - remaining_size; ++v) {
                pick.push_back(v);
                self(self, v + 1, remaining_size - 1);
                pick.pop_back();
            }
        };
        for (int size = 2; size <= std::min(8, vn - 1) && found.empty(); ++size)
            rec(rec, 0, size);
    }
    return found;
}

// --- cutting-plane loop -------------------------------------------------------

struct CutLoopResult {
    LpSolution solution;
    int rounds = 0;
    int cuts_added = 0;
};

// Iterates solve / separate / add on an incrementally-managed solver.
// `applied` tracks which pool cuts already sit in this solver as rows and is
// updated in place; the fixpoint guarantees separate_subtour comes back empty.
inline CutLoopResult cutting_plane_solve(const MlstModel& m, LpSolver& solver, CutPool& pool,
                                         std::set<int>& applied, int round_cap = 500) {
    CutLoopResult res;
    while (true) {
        res.solution = solver.solve();
        if (res.solution.status != LpStatus::optimal) return res;
        if (res.rounds >= round_cap) return res;
        std::vector<Cut> cuts = separate_subtour(m, res.solution.values);
        int added = 0;
        for (const Cut& c : cuts) {
            int id = pool.intern(c);
            if (applied.insert(id).second) {
                solver.add_row(materialize_cut(pool[id], m));
                ++added;
            }
        }
        if (added == 0) return res;
        res.cuts_added += added;
        ++res.rounds;
    }
}

// Convenience wrapper: fresh solver, base relaxation only.
inline CutLoopResult cutting_plane_solve(const MlstModel& m, WorkMeter* meter = nullptr,
                                         int round_cap = 500) {
    LpSolver solver(m.base_lp, meter);
    CutPool pool;
    std::set<int> applied;
    return cutting_plane_solve(m, solver, pool, applied, round_cap);
}

inline void dump_model(const MlstModel& m, const CutPool& pool, std::ostream& out) {
    out << "mlst model: n=" << m.graph.base.node_count << " |E'|=" << m.graph.total_edge_count()
        << " |L|=" << m.graph.base.label_count << " q0=" << m.graph.anchor_terminal
        << " link=" << (m.link_mode == LinkMode::per_edge ? "eq3" : "eq9") << "\n";
    write_lp_text(m.base_lp, out);
    out << "cut pool (" << pool.size() << "):\n";
    for (int i = 0; i < pool.size(); ++i) out << "  " << i << ": " << pool[i].key() << "\n";
}

// ---------------------------------------------------------------------------
// Random degree-rule spanning trees of G' (property-suite sampling): a random
// spanning tree of the base graph pruned to a Steiner tree, unused nodes
// re-attached to v' as leaves.
// ---------------------------------------------------------------------------

inline std::vector<double> sample_degree_rule_tree(const MlstModel& m, Rng& rng) {
    const AugmentedGraph& g = m.graph;
    std::vector<int> order(g.original_edge_count());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    rng.shuffle(order);
    Dsu dsu(g.base.node_count);
    std::vector<int> tree;
    for (int e : order)
        if (dsu.unite(g.base.edges[e].u, g.base.edges[e].v)) tree.push_back(e);
    tree = prune_to_terminals(g.base, tree);

    std::vector<double> x(m.num_columns(), 0.0);
    std::vector<char> used(g.base.node_count, 0);
    for (int e : tree) {
        x[m.edge_column(e)] = 1.0;
        used[g.base.edges[e].u] = 1;
        used[g.base.edges[e].v] = 1;
        x[m.label_column(g.base.edges[e].label)] = 1.0;
    }
    for (int t : g.base.terminals) used[t] = 1;
    for (int k = 0; k < g.base.node_count; ++k)
        if (!used[k]) x[m.edge_column(g.colorless_edge_to(k))] = 1.0;
    x[m.edge_column(g.colorless_edge_to(g.anchor_terminal))] = 1.0;
    return x;
}

}  // namespace mlst
