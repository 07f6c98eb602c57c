#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "fixtures.hpp"
#include "mlst/graph.hpp"

using namespace mlst;

TEST_CASE("parse accepts the smallest valid instance") {
    LabeledGraph g = parse_instance("p mlst 2 1 1 2\nt 0\nt 1\ne 0 1 0\n");
    CHECK(g.node_count == 2);
    CHECK(g.edges.size() == 1);
    CHECK(g.terminals == std::vector<int>{0, 1});
}

TEST_CASE("parse accepts the walkthrough instance and a value-2 tree validates") {
    LabeledGraph g = parse_instance(fixtures::toy_instance_text());
    CHECK(g.node_count == 6);
    CHECK(g.edges.size() == 9);
    CHECK(g.label_count == 4);
    // {t1,t2} green, {t2,s3} red, {s3,t3} red: all terminals, two labels
    ValidationResult v = validate_solution(g, {0, 4, 3});
    REQUIRE(v.ok());
    CHECK(v.tree->value == 2);
}

TEST_CASE("parse rejects malformed input with line numbers") {
    auto expect_error = [](const std::string& text, const std::string& needle) {
        try {
            parse_instance(text);
            FAIL("expected parse error for: " << text);
        } catch (const std::runtime_error& e) {
            CHECK(std::string(e.what()).find("line") != std::string::npos);
            CHECK(std::string(e.what()).find(needle) != std::string::npos);
        }
    };
    expect_error("p wrong 2 1 1 2\nt 0\nt 1\ne 0 1 0\n", "header");
    expect_error("p mlst 2 1 4 2\nt 0\nt 1\ne 0 1 7\n", "label out of range");
    expect_error("p mlst 3 2 1 2\nt 0\nt 1\ne 0 1 0\ne 1 0 0\n", "duplicate edge");
    expect_error("p mlst 2 1 1 2\nt 0\nt 5\ne 0 1 0\n", "out of range");
    expect_error("p mlst 4 2 1 2\nt 0\nt 1\ne 0 1 0\ne 2 3 0\n", "not connected");
    expect_error("p mlst 2 1 1 2\nt 0\nt 1\ne 0 0 0\n", "self-loop");
}

TEST_CASE("instance writer round-trips") {
    LabeledGraph g = parse_instance(fixtures::toy_instance_text());
    std::ostringstream out;
    write_instance(g, out);
    LabeledGraph g2 = parse_instance(out.str());
    CHECK(g2.edges.size() == g.edges.size());
    CHECK(g2.terminals == g.terminals);
}

TEST_CASE("generator derives m and |Q| from the spec") {
    InstanceSpec spec;
    spec.nodes = 50;
    spec.density = 0.25;
    spec.colors = 12;
    spec.seed = 7;
    CHECK(spec.edge_count() == 306);
    CHECK(spec.terminal_count() == 12);
    LabeledGraph g = generate_random(spec);
    CHECK(static_cast<int>(g.edges.size()) == 306);
    CHECK(static_cast<int>(g.terminals.size()) == 12);
    CHECK(g.connected());
}

TEST_CASE("generator is deterministic for a fixed seed") {
    InstanceSpec spec;
    spec.nodes = 30;
    spec.density = 0.4;
    spec.colors = 8;
    spec.seed = 42;
    LabeledGraph a = generate_random(spec);
    LabeledGraph b = generate_random(spec);
    REQUIRE(a.edges.size() == b.edges.size());
    for (std::size_t i = 0; i < a.edges.size(); ++i) {
        CHECK(a.edges[i].u == b.edges[i].u);
        CHECK(a.edges[i].v == b.edges[i].v);
        CHECK(a.edges[i].label == b.edges[i].label);
    }
    CHECK(a.terminals == b.terminals);
}

TEST_CASE("generator rejects densities below the tree threshold") {
    InstanceSpec spec;
    spec.nodes = 3;
    spec.density = 0.1;
    spec.colors = 1;
    spec.terminal_ratio = 0.67;
    CHECK_THROWS_WITH(generate_random(spec), Catch::Matchers::ContainsSubstring("too low"));
}

TEST_CASE("generated graphs are always connected") {
    Rng rng(99);
    for (int i = 0; i < 1000; ++i) {
        InstanceSpec spec;
        spec.nodes = 8 + static_cast<int>(rng.next_below(25));
        spec.density = 0.2 + 0.7 * rng.next_real();
        if (spec.edge_count() < spec.nodes - 1) spec.density = 1.0;
        spec.colors = 1 + static_cast<int>(rng.next_below(10));
        spec.seed = rng.next_u64();
        LabeledGraph g = generate_random(spec);
        REQUIRE(g.connected());
        REQUIRE(static_cast<int>(g.edges.size()) == spec.edge_count());
    }
}

TEST_CASE("augment adds the right colorless edges") {
    LabeledGraph g = fixtures::toy_graph();
    AugmentedGraph a = augment(g, fixtures::T2);
    CHECK(a.virtual_node == 6);
    CHECK(a.total_edge_count() == 9 + 4);  // |E'| = m + (n - |Q| + 1)
    int vdeg = static_cast<int>(a.incidence[a.virtual_node].size());
    CHECK(vdeg == 4);  // three Steiner nodes plus q0
    CHECK(a.colorless_edge_to(fixtures::S1) >= 0);
    CHECK(a.colorless_edge_to(fixtures::T2) >= 0);
    CHECK(a.colorless_edge_to(fixtures::T1) < 0);

    SECTION("deleting v' recovers the base graph") {
        CHECK(a.base.edges.size() == g.edges.size());
        for (int e = 0; e < a.original_edge_count(); ++e) {
            CHECK(a.all_edges[e].u == g.edges[e].u);
            CHECK(a.all_edges[e].v == g.edges[e].v);
            CHECK(a.all_edges[e].label == g.edges[e].label);
        }
    }
    SECTION("q0 must be a terminal") {
        CHECK_THROWS(augment(g, fixtures::S1));
    }
}

TEST_CASE("augment with Q = V attaches v' to q0 only") {
    LabeledGraph g = parse_instance("p mlst 2 1 1 2\nt 0\nt 1\ne 0 1 0\n");
    AugmentedGraph a = augment(g, 0);
    CHECK(a.total_edge_count() == 2);
    CHECK(a.incidence[a.virtual_node].size() == 1);
}

TEST_CASE("dfs_path finds the walkthrough path and respects forbidden sets") {
    LabeledGraph g = fixtures::toy_graph();
    AugmentedGraph a = augment(g, fixtures::T2);

    // from t3 toward s2, avoiding the fractional edge {s3,t3} and node s3:
    // the direct green edge, giving the length-4 cycle v' s3 t3 s2 v'
    auto path = dfs_path(a, fixtures::T3, fixtures::S2, {fixtures::S3}, {3});
    REQUIRE(path.has_value());
    REQUIRE(path->size() == 1);
    CHECK((*path)[0] == 1);

    SECTION("blocked neighborhood yields none") {
        auto blocked = dfs_path(a, fixtures::T1, fixtures::T3, {fixtures::T2}, {});
        CHECK_FALSE(blocked.has_value());  // t1's only neighbor is t2
    }
    SECTION("forbidden edges are never used, paths are elementary") {
        auto p = dfs_path(a, fixtures::T2, fixtures::S2, {fixtures::S3}, {});
        REQUIRE(p.has_value());
        std::set<int> nodes_seen = {fixtures::T2};
        int at = fixtures::T2;
        for (int e : *p) {
            CHECK_FALSE(a.is_colorless(e));
            at = a.all_edges[e].other(at);
            CHECK(nodes_seen.insert(at).second);
            CHECK(at != fixtures::S3);
        }
        CHECK(at == fixtures::S2);
    }
}

TEST_CASE("validate_solution rejects cycles and disconnected terminals") {
    LabeledGraph g = fixtures::toy_graph();

    ValidationResult empty = validate_solution(g, {});
    REQUIRE_FALSE(empty.ok());
    CHECK(empty.violation->kind == Violation::terminals_disconnected);

    // triangle s2-s3-t3
    ValidationResult cyc = validate_solution(g, {1, 2, 3});
    REQUIRE_FALSE(cyc.ok());
    CHECK(cyc.violation->kind == Violation::cycle_found);
    CHECK(cyc.violation->cycle_edges.size() == 3);
}

TEST_CASE("prune_to_terminals drops dangling branches") {
    LabeledGraph g = fixtures::toy_graph();
    // tree covering terminals plus a dangling Steiner branch {s1,s2}
    std::vector<int> pruned = prune_to_terminals(g, {0, 4, 3, 7, 1});
    ValidationResult v = validate_solution(g, pruned);
    REQUIRE(v.ok());
    for (int e : pruned) CHECK(e != 7);
}
