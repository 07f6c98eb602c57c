#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <numeric>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "mlst/rng.hpp"

namespace mlst {

struct Edge {
    int u = -1;
    int v = -1;
    int label = -1;  // -1 on colorless edges of the augmented graph

    int other(int node) const { return node == u ? v : u; }
    bool touches(int node) const { return node == u || node == v; }
};

// Union-find, used all over: connectivity checks, generators, validators.
class Dsu {
  public:
    explicit Dsu(int n) : parent_(n), rank_(n, 0), components_(n) {
        std::iota(parent_.begin(), parent_.end(), 0);
    }
    int find(int x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }
    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        if (rank_[a] < rank_[b]) std::swap(a, b);
        parent_[b] = a;
        if (rank_[a] == rank_[b]) ++rank_[a];
        --components_;
        return true;
    }
    bool same(int a, int b) { return find(a) == find(b); }
    int components() const { return components_; }

  private:
    std::vector<int> parent_;
    std::vector<int> rank_;
    int components_;
};

// Undirected edge-labeled graph with a terminal set. Immutable once built.
struct LabeledGraph {
    int node_count = 0;
    int label_count = 0;
    std::vector<Edge> edges;
    std::vector<int> terminals;                 // sorted, unique
    std::vector<std::vector<int>> incidence;    // node -> edge ids, ascending

    bool is_terminal(int node) const {
        return std::binary_search(terminals.begin(), terminals.end(), node);
    }
    int label_of(int edge_id) const { return edges[edge_id].label; }
    const std::vector<int>& incident_edges(int node) const { return incidence[node]; }

    int find_edge(int a, int b) const {  // -1 if absent
        for (int e : incidence[a])
            if (edges[e].touches(b)) return e;
        return -1;
    }

    void build_incidence() {
        incidence.assign(node_count, {});
        for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
            incidence[edges[e].u].push_back(e);
            incidence[edges[e].v].push_back(e);
        }
    }

    bool connected() const {
        if (node_count == 0) return false;
        Dsu dsu(node_count);
        for (const Edge& e : edges) dsu.unite(e.u, e.v);
        return dsu.components() == 1;
    }
};

namespace detail {
inline std::uint64_t pair_key(int a, int b) {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
}
}  // namespace detail

// ---------------------------------------------------------------------------
// Instance I/O.
//
// Format (0-based ids, '#' starts a comment):
//   p mlst <n> <m> <L> <|Q|>
//   t <node>              (|Q| lines)
//   e <u> <v> <label>     (m lines)
// ---------------------------------------------------------------------------

inline LabeledGraph parse_instance(std::istream& in) {
    auto fail = [](int line, const std::string& what) {
        throw std::runtime_error("line " + std::to_string(line) + ": " + what);
    };

    LabeledGraph g;
    int line_no = 0;
    int m_declared = 0, q_declared = 0;
    bool have_header = false;
    std::set<std::uint64_t> seen_pairs;
    std::string raw;

    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = raw.substr(0, raw.find('#'));
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag)) continue;

        if (tag == "p") {
            if (have_header) fail(line_no, "duplicate header");
            std::string kind;
            if (!(ls >> kind >> g.node_count >> m_declared >> g.label_count >> q_declared) ||
                kind != "mlst")
                fail(line_no, "malformed header, expected 'p mlst <n> <m> <L> <|Q|>'");
            if (g.node_count <= 0 || g.label_count <= 0 || m_declared < 0 || q_declared < 2)
                fail(line_no, "header values out of range (need n>0, L>0, |Q|>=2)");
            have_header = true;
        } else if (tag == "t") {
            if (!have_header) fail(line_no, "terminal line before header");
            int node;
            if (!(ls >> node)) fail(line_no, "malformed terminal line");
            if (node < 0 || node >= g.node_count) fail(line_no, "terminal node out of range");
            g.terminals.push_back(node);
        } else if (tag == "e") {
            if (!have_header) fail(line_no, "edge line before header");
            Edge e;
            if (!(ls >> e.u >> e.v >> e.label)) fail(line_no, "malformed edge line");
            if (e.u < 0 || e.u >= g.node_count || e.v < 0 || e.v >= g.node_count)
                fail(line_no, "edge endpoint out of range");
            if (e.u == e.v) fail(line_no, "self-loop");
            if (e.label < 0 || e.label >= g.label_count) fail(line_no, "label out of range");
            if (!seen_pairs.insert(detail::pair_key(e.u, e.v)).second)
                fail(line_no, "duplicate edge");
            g.edges.push_back(e);
        } else {
            fail(line_no, "unknown line tag '" + tag + "'");
        }
    }

    if (!have_header) fail(line_no, "missing header");
    if (static_cast<int>(g.edges.size()) != m_declared)
        fail(line_no, "edge count mismatch: declared " + std::to_string(m_declared) + ", got " +
                          std::to_string(g.edges.size()));
    std::sort(g.terminals.begin(), g.terminals.end());
    g.terminals.erase(std::unique(g.terminals.begin(), g.terminals.end()), g.terminals.end());
    if (static_cast<int>(g.terminals.size()) != q_declared)
        fail(line_no, "terminal count mismatch");
    g.build_incidence();
    if (!g.connected()) fail(line_no, "graph is not connected");
    return g;
}

inline LabeledGraph parse_instance(const std::string& text) {
    std::istringstream in(text);
    return parse_instance(in);
}

inline void write_instance(const LabeledGraph& g, std::ostream& out) {
    out << "p mlst " << g.node_count << ' ' << g.edges.size() << ' ' << g.label_count << ' '
        << g.terminals.size() << '\n';
    for (int t : g.terminals) out << "t " << t << '\n';
    for (const Edge& e : g.edges) out << "e " << e.u << ' ' << e.v << ' ' << e.label << '\n';
}

// ---------------------------------------------------------------------------
// Random instances.
// ---------------------------------------------------------------------------

struct InstanceSpec {
    int nodes = 0;
    double density = 0.5;        // fraction of the complete graph's edge count
    int colors = 1;
    double terminal_ratio = 0.25;
    std::uint64_t seed = 0;

    int edge_count() const {
        return static_cast<int>(density * nodes * (nodes - 1) / 2.0);
    }
    int terminal_count() const { return static_cast<int>(terminal_ratio * nodes); }
};

// Connected by construction: a uniform random spanning tree (random Prüfer
// sequence) first, then the remaining edges drawn without replacement.
inline LabeledGraph generate_random(const InstanceSpec& spec) {
    const int n = spec.nodes;
    const int m = spec.edge_count();
    if (n < 2) throw std::runtime_error("generate_random: need at least 2 nodes");
    if (m < n - 1)
        throw std::runtime_error("generate_random: density too low to connect (m=" +
                                 std::to_string(m) + " < n-1=" + std::to_string(n - 1) + ")");
    if (spec.terminal_count() < 2)
        throw std::runtime_error("generate_random: need at least 2 terminals");
    if (spec.colors < 1) throw std::runtime_error("generate_random: need at least 1 color");

    Rng rng(mix_seed(spec.seed, 0x6d6c7374 /*"mlst"*/, n, m));

    LabeledGraph g;
    g.node_count = n;
    g.label_count = spec.colors;

    std::set<std::uint64_t> used;
    if (n == 2) {
        g.edges.push_back({0, 1, 0});
        used.insert(detail::pair_key(0, 1));
    } else {
        std::vector<int> pruefer(n - 2);
        for (int& p : pruefer) p = static_cast<int>(rng.next_below(n));
        std::vector<int> degree(n, 1);
        for (int p : pruefer) ++degree[p];
        std::set<int> leaves;
        for (int v = 0; v < n; ++v)
            if (degree[v] == 1) leaves.insert(v);
        for (int p : pruefer) {
            int leaf = *leaves.begin();
            leaves.erase(leaves.begin());
            g.edges.push_back({leaf, p, 0});
            used.insert(detail::pair_key(leaf, p));
            if (--degree[p] == 1) leaves.insert(p);
        }
        int a = *leaves.begin(), b = *std::next(leaves.begin());
        g.edges.push_back({a, b, 0});
        used.insert(detail::pair_key(a, b));
    }

    // remaining m-(n-1) edges, uniform over the unused pairs
    std::vector<std::pair<int, int>> pool;
    pool.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (!used.count(detail::pair_key(u, v))) pool.push_back({u, v});
    rng.shuffle(pool);
    for (int k = 0; k < m - (n - 1); ++k) g.edges.push_back({pool[k].first, pool[k].second, 0});

    for (Edge& e : g.edges) e.label = static_cast<int>(rng.next_below(spec.colors));

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order);
    g.terminals.assign(order.begin(), order.begin() + spec.terminal_count());
    std::sort(g.terminals.begin(), g.terminals.end());

    g.build_incidence();
    return g;
}

// ---------------------------------------------------------------------------
// Augmentation: add a virtual node v' joined by colorless edges to every
// Steiner node and to one anchor terminal q0.
// ---------------------------------------------------------------------------

struct AugmentedGraph {
    LabeledGraph base;
    int virtual_node = -1;      // == base.node_count
    int anchor_terminal = -1;   // q0
    std::vector<Edge> all_edges;  // base edges first, then colorless ones
    std::vector<std::vector<int>> incidence;  // over all_edges, node -> edge ids

    int original_edge_count() const { return static_cast<int>(base.edges.size()); }
    int total_edge_count() const { return static_cast<int>(all_edges.size()); }
    bool is_colorless(int edge_id) const { return all_edges[edge_id].label < 0; }
    bool is_steiner(int node) const {
        return node != virtual_node && !base.is_terminal(node);
    }

    // colorless edge id for {v', node}, -1 if absent
    int colorless_edge_to(int node) const {
        for (int e : incidence[virtual_node])
            if (all_edges[e].other(virtual_node) == node) return e;
        return -1;
    }
    int find_edge(int a, int b) const {
        for (int e : incidence[a])
            if (all_edges[e].touches(b)) return e;
        return -1;
    }
};

inline AugmentedGraph augment(const LabeledGraph& g, int q0) {
    if (!g.is_terminal(q0)) throw std::runtime_error("augment: q0 is not a terminal");
    AugmentedGraph a;
    a.base = g;
    a.virtual_node = g.node_count;
    a.anchor_terminal = q0;
    a.all_edges = g.edges;
    for (int k = 0; k < g.node_count; ++k)
        if (!g.is_terminal(k)) a.all_edges.push_back({a.virtual_node, k, -1});
    a.all_edges.push_back({a.virtual_node, q0, -1});
    a.incidence.assign(g.node_count + 1, {});
    for (int e = 0; e < static_cast<int>(a.all_edges.size()); ++e) {
        a.incidence[a.all_edges[e].u].push_back(e);
        a.incidence[a.all_edges[e].v].push_back(e);
    }
    return a;
}

inline AugmentedGraph augment(const LabeledGraph& g) {  // default anchor: lowest terminal
    return augment(g, g.terminals.front());
}

// Elementary path between two nodes restricted to original (colored) edges,
// avoiding the given node and edge sets. Deterministic: edges explored in
// ascending id order. Returns the ordered edge-id list, or nullopt.
inline std::optional<std::vector<int>> dfs_path(const AugmentedGraph& g, int from, int to,
                                                const std::vector<int>& forbidden_nodes,
                                                const std::vector<int>& forbidden_edges) {
    if (from == to) throw std::runtime_error("dfs_path: from == to");
    std::vector<char> node_blocked(g.base.node_count + 1, 0);
    for (int v : forbidden_nodes) node_blocked[v] = 1;
    std::vector<char> edge_blocked(g.total_edge_count(), 0);
    for (int e : forbidden_edges) edge_blocked[e] = 1;
    if (node_blocked[from] || node_blocked[to]) return std::nullopt;

    std::vector<char> visited(g.base.node_count + 1, 0);
    std::vector<int> path;
    bool found = false;

    auto rec = [&](auto&& self, int node) -> void {
        if (found) return;
        visited[node] = 1;
        for (int e : g.incidence[node]) {
            if (found) return;
            if (g.is_colorless(e) || edge_blocked[e]) continue;
            int next = g.all_edges[e].other(node);
            if (visited[next] || node_blocked[next]) continue;
            path.push_back(e);
            if (next == to) {
                found = true;
                return;
            }
            self(self, next);
            if (!found) path.pop_back();
        }
    };
    rec(rec, from);
    if (!found) return std::nullopt;
    return path;
}

// ---------------------------------------------------------------------------
// Solution validation.
// ---------------------------------------------------------------------------

struct SteinerTree {
    std::vector<int> edge_set;   // original edge ids, sorted
    std::vector<int> label_set;  // sorted distinct labels
    int value = 0;               // == label_set.size()
};

struct Violation {
    enum Kind { cycle_found, terminals_disconnected } kind;
    std::vector<int> cycle_edges;  // populated for cycle_found
    std::string message;
};

struct ValidationResult {
    std::optional<SteinerTree> tree;
    std::optional<Violation> violation;
    bool ok() const { return tree.has_value(); }
};

inline ValidationResult validate_solution(const LabeledGraph& g, const std::vector<int>& edge_set) {
    ValidationResult res;
    Dsu dsu(g.node_count);
    for (int e : edge_set) {
        const Edge& ed = g.edges[e];
        if (!dsu.unite(ed.u, ed.v)) {
            // walk the already-united part to report the actual cycle
            std::vector<std::vector<std::pair<int, int>>> adj(g.node_count);
            for (int f : edge_set) {
                if (f == e) break;
                adj[g.edges[f].u].push_back({g.edges[f].v, f});
                adj[g.edges[f].v].push_back({g.edges[f].u, f});
            }
            std::vector<int> parent_edge(g.node_count, -1), parent(g.node_count, -1);
            std::vector<char> vis(g.node_count, 0);
            std::vector<int> stack = {ed.u};
            vis[ed.u] = 1;
            while (!stack.empty()) {
                int x = stack.back();
                stack.pop_back();
                for (auto [y, f] : adj[x])
                    if (!vis[y]) {
                        vis[y] = 1;
                        parent[y] = x;
                        parent_edge[y] = f;
                        stack.push_back(y);
                    }
            }
            Violation v;
            v.kind = Violation::cycle_found;
            v.cycle_edges.push_back(e);
            for (int x = ed.v; x != ed.u; x = parent[x]) v.cycle_edges.push_back(parent_edge[x]);
            v.message = "cycle through edges:";
            for (int f : v.cycle_edges)
                v.message += " {" + std::to_string(g.edges[f].u) + "," +
                             std::to_string(g.edges[f].v) + "}";
            res.violation = v;
            return res;
        }
    }
    for (std::size_t i = 1; i < g.terminals.size(); ++i) {
        if (!dsu.same(g.terminals[0], g.terminals[i])) {
            Violation v;
            v.kind = Violation::terminals_disconnected;
            v.message = "terminals " + std::to_string(g.terminals[0]) + " and " +
                        std::to_string(g.terminals[i]) + " are disconnected";
            res.violation = v;
            return res;
        }
    }
    SteinerTree t;
    t.edge_set = edge_set;
    std::sort(t.edge_set.begin(), t.edge_set.end());
    for (int e : t.edge_set) t.label_set.push_back(g.edges[e].label);
    std::sort(t.label_set.begin(), t.label_set.end());
    t.label_set.erase(std::unique(t.label_set.begin(), t.label_set.end()), t.label_set.end());
    t.value = static_cast<int>(t.label_set.size());
    res.tree = std::move(t);
    return res;
}

// Drops non-terminal leaf branches; the result still connects all terminals.
inline std::vector<int> prune_to_terminals(const LabeledGraph& g, std::vector<int> edge_set) {
    bool changed = true;
    while (changed) {
        changed = false;
        std::vector<int> deg(g.node_count, 0);
        for (int e : edge_set) {
            ++deg[g.edges[e].u];
            ++deg[g.edges[e].v];
        }
        std::vector<int> kept;
        for (int e : edge_set) {
            const Edge& ed = g.edges[e];
            bool u_leaf = deg[ed.u] == 1 && !g.is_terminal(ed.u);
            bool v_leaf = deg[ed.v] == 1 && !g.is_terminal(ed.v);
            if (u_leaf || v_leaf) {
                changed = true;
            } else {
                kept.push_back(e);
            }
        }
        edge_set.swap(kept);
    }
    return edge_set;
}

// Spanning tree of the terminal component within the given label set; the
// input labels must connect all terminals.
inline std::vector<int> tree_from_labels(const LabeledGraph& g, const std::vector<int>& labels) {
    std::vector<char> allowed(g.label_count, 0);
    for (int l : labels) allowed[l] = 1;
    Dsu dsu(g.node_count);
    std::vector<int> tree;
    for (int e = 0; e < static_cast<int>(g.edges.size()); ++e)
        if (allowed[g.edges[e].label] && dsu.unite(g.edges[e].u, g.edges[e].v))
            tree.push_back(e);
    return prune_to_terminals(g, tree);
}

}  // namespace mlst
