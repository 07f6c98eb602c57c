#pragma once

// Shared test instances. The six-node walkthrough graph is reconstructed so
// that every printed quantity of the worked example holds: relaxation value
// 1.5 under per-edge linking, the two length-4 crossover cycles with their
// violations, common edges {t1,t2} and {t3,s2}, and optimum 2.

#include <string>
#include <vector>

#include "mlst/graph.hpp"
#include "mlst/model.hpp"

namespace fixtures {

// node ids
constexpr int T1 = 0, T2 = 1, T3 = 2, S1 = 3, S2 = 4, S3 = 5;
// labels
constexpr int RED = 0, GREEN = 1, BLUE = 2, YELLOW = 3;

// edge ids follow this order
inline mlst::LabeledGraph toy_graph() {
    mlst::LabeledGraph g;
    g.node_count = 6;
    g.label_count = 4;
    g.terminals = {T1, T2, T3};
    g.edges = {
        {T1, T2, GREEN},   // 0
        {T3, S2, GREEN},   // 1
        {S2, S3, GREEN},   // 2
        {S3, T3, RED},     // 3
        {T2, S3, RED},     // 4
        {S1, T3, BLUE},    // 5
        {T2, S1, BLUE},    // 6
        {S1, S2, BLUE},    // 7
        {S1, S3, YELLOW},  // 8
    };
    g.build_incidence();
    return g;
}

inline std::string toy_instance_text() {
    return "# six-node walkthrough instance\n"
           "p mlst 6 9 4 3\n"
           "t 0\nt 1\nt 2\n"
           "e 0 1 1\n"
           "e 2 4 1\n"
           "e 4 5 1\n"
           "e 5 2 0\n"
           "e 1 5 0\n"
           "e 3 2 2\n"
           "e 1 3 2\n"
           "e 3 4 2\n"
           "e 3 5 3\n";
}

// Column vectors for the q0 = t2 model (13 edge columns + 4 label columns).
// Augmented edge ids: 9 = {v',s1}, 10 = {v',s2}, 11 = {v',s3}, 12 = {v',t2}.
// X1: the green backbone plus a half-weight red detour (value 1.5).
inline std::vector<double> toy_x1() {
    std::vector<double> v(17, 0.0);
    v[0] = 1.0;   // {t1,t2} green
    v[1] = 1.0;   // {t3,s2} green
    v[2] = 1.0;   // {s2,s3} green
    v[3] = 0.5;   // {s3,t3} red
    v[4] = 0.5;   // {t2,s3} red
    v[9] = 1.0;   // {v',s1}
    v[12] = 1.0;  // {v',t2}
    v[13 + RED] = 0.5;
    v[13 + GREEN] = 1.0;
    return v;
}

// X2: the green backbone plus a half-weight blue detour (value 1.5).
inline std::vector<double> toy_x2() {
    std::vector<double> v(17, 0.0);
    v[0] = 1.0;   // {t1,t2} green
    v[1] = 1.0;   // {t3,s2} green
    v[2] = 1.0;   // {s2,s3} green
    v[5] = 0.5;   // {s1,t3} blue
    v[6] = 0.5;   // {t2,s1} blue
    v[7] = 0.5;   // {s1,s2} blue
    v[9] = 0.5;   // {v',s1}
    v[12] = 1.0;  // {v',t2}
    v[13 + GREEN] = 1.0;
    v[13 + BLUE] = 0.5;
    return v;
}

// ---------------------------------------------------------------------------
// The four-terminal illustration: terminals t1..t4 = 0..3, Steiner s1 = 4,
// s2 = 5, anchored at t1. The length-6 cycle v' s2 t2 t3 t4 s1 v' carries the
// displayed inequality.
// ---------------------------------------------------------------------------

inline mlst::LabeledGraph figure_graph() {
    mlst::LabeledGraph g;
    g.node_count = 6;
    g.label_count = 6;
    g.terminals = {0, 1, 2, 3};
    g.edges = {
        {0, 1, 0},  // 0 {t1,t2}
        {5, 1, 1},  // 1 {s2,t2}
        {1, 2, 2},  // 2 {t2,t3}
        {2, 3, 3},  // 3 {t3,t4}
        {3, 4, 4},  // 4 {t4,s1}
        {4, 5, 5},  // 5 {s1,s2}
    };
    g.build_incidence();
    return g;
}

// q0 = t1 model: augmented ids 6 = {v',s1}, 7 = {v',s2}, 8 = {v',t1};
// columns then 6 labels.
inline std::vector<double> figure_integer_tree() {
    std::vector<double> v(15, 0.0);
    v[0] = 1.0;  // {t1,t2}
    v[1] = 1.0;  // {s2,t2}
    v[2] = 1.0;  // {t2,t3}
    v[3] = 1.0;  // {t3,t4}
    v[6] = 1.0;  // {v',s1}
    v[8] = 1.0;  // {v',t1}
    for (int l : {0, 1, 2, 3}) v[9 + l] = 1.0;
    return v;
}

inline std::vector<double> figure_fractional() {
    std::vector<double> v = figure_integer_tree();
    v[0] = 0.5;      // {t1,t2} halved
    v[5] = 0.5;      // {s1,s2} gets the other half
    v[9 + 5] = 0.5;  // its label priced accordingly
    return v;
}

// Greedy trap: the optimum is {3,4} via x, but label 0 merges three nodes at
// once and drags the greedy through the long route 0,1,2.
//   nodes: a=0, b=1 (terminals), p=2, q=3, r=4, x=5
inline mlst::LabeledGraph trap_graph() {
    mlst::LabeledGraph g;
    g.node_count = 6;
    g.label_count = 5;
    g.terminals = {0, 1};
    g.edges = {
        {0, 2, 0},  // a-p
        {2, 3, 0},  // p-q
        {3, 4, 1},  // q-r
        {4, 1, 2},  // r-b
        {0, 5, 3},  // a-x
        {5, 1, 4},  // x-b
    };
    g.build_incidence();
    return g;
}

}  // namespace fixtures
