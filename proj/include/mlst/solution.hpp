#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "mlst/graph.hpp"

namespace mlst {

// The common result document every solver emits (see the instance format in
// graph.hpp for its counterpart).
struct SolutionDoc {
    int value = 0;
    std::vector<int> labels;                  // sorted
    std::vector<std::pair<int, int>> edges;   // sorted (min,max) pairs
    std::string algorithm;
    std::int64_t elapsed_ms = 0;
    std::uint64_t seed = 0;
    std::string status = "ok";                // ok | proven | unproven | fallback | aborted
    std::map<std::string, std::string> extras;  // node_count, root_bound, ...
};

inline SolutionDoc make_solution_doc(const LabeledGraph& g, const SteinerTree& tree,
                                     const std::string& algorithm, std::int64_t elapsed_ms,
                                     std::uint64_t seed, const std::string& status = "ok") {
    SolutionDoc doc;
    doc.value = tree.value;
    doc.labels = tree.label_set;
    for (int e : tree.edge_set) {
        int u = g.edges[e].u, v = g.edges[e].v;
        doc.edges.push_back({std::min(u, v), std::max(u, v)});
    }
    std::sort(doc.edges.begin(), doc.edges.end());
    doc.algorithm = algorithm;
    doc.elapsed_ms = elapsed_ms;
    doc.seed = seed;
    doc.status = status;
    return doc;
}

inline void write_solution(const SolutionDoc& doc, std::ostream& out) {
    out << "s mlst\n";
    out << "value " << doc.value << '\n';
    out << "labels";
    for (int l : doc.labels) out << ' ' << l;
    out << '\n';
    out << "edges " << doc.edges.size() << '\n';
    for (auto [u, v] : doc.edges) out << "e " << u << ' ' << v << '\n';
    out << "algorithm " << doc.algorithm << '\n';
    out << "elapsed_ms " << doc.elapsed_ms << '\n';
    out << "seed " << doc.seed << '\n';
    out << "status " << doc.status << '\n';
    for (const auto& [k, v] : doc.extras) out << k << ' ' << v << '\n';
}

inline SolutionDoc parse_solution(std::istream& in) {
    SolutionDoc doc;
    std::string raw;
    int line_no = 0;
    bool have_magic = false;
    auto fail = [&](const std::string& what) {
        throw std::runtime_error("solution line " + std::to_string(line_no) + ": " + what);
    };
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = raw.substr(0, raw.find('#'));
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag)) continue;
        if (tag == "s") {
            std::string kind;
            if (!(ls >> kind) || kind != "mlst") fail("bad magic");
            have_magic = true;
        } else if (tag == "value") {
            if (!(ls >> doc.value)) fail("bad value");
        } else if (tag == "labels") {
            int l;
            while (ls >> l) doc.labels.push_back(l);
        } else if (tag == "edges") {
            // count line; edges follow as 'e u v'
        } else if (tag == "e") {
            int u, v;
            if (!(ls >> u >> v)) fail("bad edge");
            doc.edges.push_back({std::min(u, v), std::max(u, v)});
        } else if (tag == "algorithm") {
            ls >> doc.algorithm;
        } else if (tag == "elapsed_ms") {
            ls >> doc.elapsed_ms;
        } else if (tag == "seed") {
            ls >> doc.seed;
        } else if (tag == "status") {
            ls >> doc.status;
        } else {
            std::string rest;
            std::getline(ls, rest);
            if (!rest.empty() && rest.front() == ' ') rest.erase(rest.begin());
            doc.extras[tag] = rest;
        }
    }
    if (!have_magic) fail("missing 's mlst' header");
    std::sort(doc.edges.begin(), doc.edges.end());
    std::sort(doc.labels.begin(), doc.labels.end());
    return doc;
}

struct VerifyOutcome {
    bool pass = false;
    int recomputed_value = 0;
    std::string message;
};

// Re-runs the validator on the claimed edge set and cross-checks the claimed
// value and label list.
inline VerifyOutcome verify_solution(const LabeledGraph& g, const SolutionDoc& doc) {
    VerifyOutcome out;
    std::vector<int> edge_ids;
    for (auto [u, v] : doc.edges) {
        int e = g.find_edge(u, v);
        if (e < 0) {
            out.message =
                "edge {" + std::to_string(u) + "," + std::to_string(v) + "} not in instance";
            return out;
        }
        edge_ids.push_back(e);
    }
    ValidationResult v = validate_solution(g, edge_ids);
    if (!v.ok()) {
        out.message = v.violation->message;
        return out;
    }
    out.recomputed_value = v.tree->value;
    if (v.tree->value != doc.value) {
        out.message = "value mismatch: claimed " + std::to_string(doc.value) + ", recomputed " +
                      std::to_string(v.tree->value);
        return out;
    }
    if (v.tree->label_set != doc.labels) {
        out.message = "label set mismatch";
        return out;
    }
    out.pass = true;
    return out;
}

}  // namespace mlst
