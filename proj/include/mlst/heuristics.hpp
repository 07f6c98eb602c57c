#pragma once

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "mlst/graph.hpp"

namespace mlst {

struct HeuristicResult {
    std::vector<int> labels;  // final (pruned) label set, in kept order
    SteinerTree tree;
};

namespace detail {

struct ComponentCount {
    int terminal_components;  // components containing at least one terminal
    int total_components;
};

inline ComponentCount count_components(const LabeledGraph& g, const std::vector<char>& allowed) {
    Dsu dsu(g.node_count);
    for (const Edge& e : g.edges)
        if (allowed[e.label]) dsu.unite(e.u, e.v);
    std::vector<char> seen(g.node_count, 0);
    int with_terminal = 0;
    for (int t : g.terminals) {
        int r = dsu.find(t);
        if (!seen[r]) {
            seen[r] = 1;
            ++with_terminal;
        }
    }
    return {with_terminal, dsu.components()};
}

inline bool labels_connect_terminals(const LabeledGraph& g, const std::vector<char>& allowed) {
    Dsu dsu(g.node_count);
    for (const Edge& e : g.edges)
        if (allowed[e.label]) dsu.unite(e.u, e.v);
    for (std::size_t i = 1; i < g.terminals.size(); ++i)
        if (!dsu.same(g.terminals[0], g.terminals[i])) return false;
    return true;
}

// Greedy label addition from an initial set: repeatedly add the label that
// minimizes the number of terminal-bearing components (ties: fewest total
// components, then lowest label id). Returns labels in addition order,
// initial ones first.
inline std::vector<int> greedy_complete(const LabeledGraph& g, const std::vector<int>& initial) {
    std::vector<int> order = initial;
    std::vector<char> allowed(g.label_count, 0);
    for (int l : initial) allowed[l] = 1;

    while (!labels_connect_terminals(g, allowed)) {
        int best = -1;
        ComponentCount best_count{g.node_count + 1, g.node_count + 1};
        for (int l = 0; l < g.label_count; ++l) {
            if (allowed[l]) continue;
            allowed[l] = 1;
            ComponentCount c = count_components(g, allowed);
            allowed[l] = 0;
            if (c.terminal_components < best_count.terminal_components ||
                (c.terminal_components == best_count.terminal_components &&
                 c.total_components < best_count.total_components)) {
                best = l;
                best_count = c;
            }
        }
        if (best < 0) throw std::runtime_error("greedy: no label improves connectivity");
        allowed[best] = 1;
        order.push_back(best);
    }
    return order;
}

// Drop any label whose removal keeps the terminals connected, scanning in
// reverse addition order.
inline std::vector<int> prune_labels(const LabeledGraph& g, std::vector<int> order) {
    for (int i = static_cast<int>(order.size()) - 1; i >= 0; --i) {
        std::vector<char> allowed(g.label_count, 0);
        for (int j = 0; j < static_cast<int>(order.size()); ++j)
            if (j != i) allowed[order[j]] = 1;
        if (labels_connect_terminals(g, allowed)) order.erase(order.begin() + i);
    }
    return order;
}

inline HeuristicResult result_from_labels(const LabeledGraph& g, const std::vector<int>& labels) {
    HeuristicResult r;
    r.labels = labels;
    std::vector<int> edges = tree_from_labels(g, labels);
    ValidationResult v = validate_solution(g, edges);
    if (!v.ok()) throw std::runtime_error("heuristic produced an invalid tree");
    r.tree = *v.tree;
    return r;
}

}  // namespace detail

// MVCA-style greedy: terminal-aware component minimization plus a reverse
// pruning pass.
inline HeuristicResult mvca(const LabeledGraph& g) {
    std::vector<int> order = detail::greedy_complete(g, {});
    order = detail::prune_labels(g, order);
    return detail::result_from_labels(g, order);
}

// One-step-lookahead pilot: each round scores every unfixed candidate label
// by the value of its greedy completion and permanently fixes the best one.
inline HeuristicResult pilot(const LabeledGraph& g) {
    std::vector<int> fixed;
    std::vector<char> fixed_mask(g.label_count, 0);

    while (true) {
        std::vector<char> allowed(g.label_count, 0);
        for (int l : fixed) allowed[l] = 1;
        if (detail::labels_connect_terminals(g, allowed)) break;

        int best = -1;
        std::size_t best_value = g.label_count + 1;
        for (int c = 0; c < g.label_count; ++c) {
            if (fixed_mask[c]) continue;
            std::vector<int> initial = fixed;
            initial.push_back(c);
            std::vector<int> completed = detail::greedy_complete(g, initial);
            std::size_t value = detail::prune_labels(g, completed).size();
            if (value < best_value) {
                best_value = value;
                best = c;
            }
        }
        if (best < 0) throw std::runtime_error("pilot: no candidate label");
        fixed.push_back(best);
        fixed_mask[best] = 1;
    }

    return detail::result_from_labels(g, detail::prune_labels(g, fixed));
}

}  // namespace mlst
