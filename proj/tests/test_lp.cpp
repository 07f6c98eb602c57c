#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

#include "fixtures.hpp"
#include "mlst/lp.hpp"
#include "mlst/model.hpp"
#include "mlst/rng.hpp"

using namespace mlst;

namespace {

// Independent oracle: enumerate candidate vertices as solutions of n active
// constraints drawn from rows-as-equalities and bounds, keep the feasible
// minimum. Exponential, test-only.
struct VertexOracle {
    bool feasible = false;
    double objective = 0.0;
};

VertexOracle enumerate_vertices(const LinearProgram& lp) {
    const int n = lp.num_vars();
    struct Constraint {
        std::vector<double> a;
        double b;
    };
    std::vector<Constraint> cands;
    for (const auto& row : lp.rows) {
        Constraint c{std::vector<double>(n, 0.0), row.rhs};
        for (auto [j, v] : row.coeffs) c.a[j] += v;
        cands.push_back(c);
    }
    for (int j = 0; j < n; ++j) {
        Constraint lo{std::vector<double>(n, 0.0), lp.lower[j]};
        lo.a[j] = 1.0;
        cands.push_back(lo);
        Constraint hi{std::vector<double>(n, 0.0), lp.upper[j]};
        hi.a[j] = 1.0;
        cands.push_back(hi);
    }

    VertexOracle out;
    std::vector<int> pick(n);
    auto check_point = [&](const std::vector<double>& x) {
        for (int j = 0; j < n; ++j)
            if (x[j] < lp.lower[j] - 1e-7 || x[j] > lp.upper[j] + 1e-7) return;
        for (const auto& row : lp.rows) {
            double act = 0.0;
            for (auto [j, v] : row.coeffs) act += v * x[j];
            if (row.rel == '<' && act > row.rhs + 1e-7) return;
            if (row.rel == '>' && act < row.rhs - 1e-7) return;
            if (row.rel == '=' && std::abs(act - row.rhs) > 1e-7) return;
        }
        double obj = 0.0;
        for (int j = 0; j < n; ++j) obj += lp.objective[j] * x[j];
        if (!out.feasible || obj < out.objective) {
            out.feasible = true;
            out.objective = obj;
        }
    };

    auto solve_active = [&](const std::vector<int>& idx) {
        std::vector<std::vector<double>> m(n, std::vector<double>(n + 1, 0.0));
        for (int r = 0; r < n; ++r) {
            for (int j = 0; j < n; ++j) m[r][j] = cands[idx[r]].a[j];
            m[r][n] = cands[idx[r]].b;
        }
        for (int col = 0; col < n; ++col) {
            int piv = -1;
            double best = 1e-9;
            for (int r = col; r < n; ++r)
                if (std::abs(m[r][col]) > best) {
                    best = std::abs(m[r][col]);
                    piv = r;
                }
            if (piv < 0) return;  // singular
            std::swap(m[col], m[piv]);
            for (int r = 0; r < n; ++r) {
                if (r == col) continue;
                double f = m[r][col] / m[col][col];
                for (int j = col; j <= n; ++j) m[r][j] -= f * m[col][j];
            }
        }
        std::vector<double> x(n);
        for (int j = 0; j < n; ++j) x[j] = m[j][n] / m[j][j];
        check_point(x);
    };

    auto rec = [&](auto&& self, int start, int depth) -> void {
        if (depth == n) {
            solve_active(pick);
            return;
        }
        for (int i = start; i < static_cast<int>(cands.size()); ++i) {
            pick[depth] = i;
            self(self, i + 1, depth + 1);
        }
    };
    rec(rec, 0, 0);
    return out;
}

LinearProgram random_box_lp(Rng& rng, int vars, int rows) {
    LinearProgram lp;
    for (int j = 0; j < vars; ++j)
        lp.add_variable(0.0, 1.0, static_cast<double>(rng.next_int(-5, 5)));
    for (int r = 0; r < rows; ++r) {
        std::vector<std::pair<int, double>> coeffs;
        for (int j = 0; j < vars; ++j) {
            int c = rng.next_int(-3, 3);
            if (c != 0) coeffs.push_back({j, static_cast<double>(c)});
        }
        if (coeffs.empty()) coeffs.push_back({0, 1.0});
        char rel = "<>="[rng.next_below(3)];
        double rhs = static_cast<double>(rng.next_int(-2, 4)) * 0.5;
        lp.add_constraint(coeffs, rel, rhs);
    }
    return lp;
}

}  // namespace

TEST_CASE("simple bound-driven minimum") {
    LinearProgram lp;
    lp.add_variable(0.0, 1.0, 1.0);
    lp.add_constraint({{0, 1.0}}, '>', 0.3);
    LpSolution s = solve(lp);
    REQUIRE(s.status == LpStatus::optimal);
    CHECK_THAT(s.values[0], Catch::Matchers::WithinAbs(0.3, 1e-9));
    CHECK_THAT(s.objective, Catch::Matchers::WithinAbs(0.3, 1e-9));
}

TEST_CASE("infeasible and unbounded statuses") {
    LinearProgram bad;
    bad.add_variable(0.0, 1.0, 0.0);
    bad.add_constraint({{0, 1.0}}, '<', -1.0);
    CHECK(solve(bad).status == LpStatus::infeasible);

    LinearProgram unb;
    unb.add_variable(0.0, kLpInfinity, -1.0);
    CHECK(solve(unb).status == LpStatus::unbounded);
}

TEST_CASE("fixing variables") {
    LinearProgram lp;
    lp.add_variable(0.0, 1.0, 1.0);
    lp.add_variable(0.0, 1.0, 1.0);
    lp.add_constraint({{0, 1.0}, {1, 1.0}}, '>', 1.0);
    lp.fix_variable(0, 1.0);
    LpSolution s = solve(lp);
    REQUIRE(s.status == LpStatus::optimal);
    CHECK(s.values[0] == 1.0);

    SECTION("conflicting fix turns infeasible") {
        lp.add_constraint({{0, 1.0}}, '<', 0.5);
        CHECK(solve(lp).status == LpStatus::infeasible);
    }
    SECTION("fix outside bounds is rejected") {
        CHECK_THROWS(lp.fix_variable(1, 2.0));
    }
    SECTION("index out of range is rejected") {
        CHECK_THROWS(lp.fix_variable(7, 0.0));
    }
}

TEST_CASE("incremental rows: infeasible cut detected by the warm path") {
    LinearProgram lp;
    lp.add_variable(0.0, 1.0, 1.0);
    LpSolver solver(lp);
    REQUIRE(solver.solve().status == LpStatus::optimal);
    solver.add_row({{{0, 1.0}}, '>', 2.0});
    CHECK(solver.solve().status == LpStatus::infeasible);
}

TEST_CASE("objective is monotone under added constraints") {
    Rng rng(2024);
    int checked = 0;
    for (int trial = 0; trial < 60; ++trial) {
        LinearProgram lp = random_box_lp(rng, 3 + rng.next_int(0, 2), 2 + rng.next_int(0, 2));
        LpSolver solver(lp);
        LpSolution s0 = solver.solve();
        if (s0.status != LpStatus::optimal) continue;
        double prev = s0.objective;
        for (int k = 0; k < 3; ++k) {
            std::vector<std::pair<int, double>> coeffs;
            for (int j = 0; j < lp.num_vars(); ++j) {
                int c = rng.next_int(-2, 2);
                if (c != 0) coeffs.push_back({j, static_cast<double>(c)});
            }
            if (coeffs.empty()) coeffs.push_back({0, 1.0});
            solver.add_row({coeffs, '<', static_cast<double>(rng.next_int(-1, 3)) * 0.5});
            LpSolution s = solver.solve();
            if (s.status != LpStatus::optimal) break;
            CHECK(s.objective >= prev - 1e-7);
            prev = s.objective;
            ++checked;
        }
    }
    CHECK(checked > 30);
}

TEST_CASE("warm incremental solves match scratch solves") {
    Rng rng(77);
    for (int trial = 0; trial < 40; ++trial) {
        LinearProgram lp = random_box_lp(rng, 3 + rng.next_int(0, 3), 2 + rng.next_int(0, 3));
        LpSolver warm(lp);
        warm.solve();
        LinearProgram full = lp;
        for (int k = 0; k < 3; ++k) {
            std::vector<std::pair<int, double>> coeffs;
            for (int j = 0; j < lp.num_vars(); ++j) {
                int c = rng.next_int(-2, 2);
                if (c != 0) coeffs.push_back({j, static_cast<double>(c)});
            }
            if (coeffs.empty()) coeffs.push_back({0, 1.0});
            char rel = rng.next_below(2) ? '<' : '>';
            double rhs = static_cast<double>(rng.next_int(-1, 3)) * 0.5;
            warm.add_row({coeffs, rel, rhs});
            full.add_constraint(coeffs, rel, rhs);
        }
        LpSolution via_warm = warm.solve();
        LpSolution via_scratch = solve(full);
        REQUIRE(via_warm.status == via_scratch.status);
        if (via_warm.status == LpStatus::optimal)
            CHECK_THAT(via_warm.objective,
                       Catch::Matchers::WithinAbs(via_scratch.objective, 1e-6));
    }
}

TEST_CASE("solver matches exhaustive vertex enumeration on boxed LPs") {
    Rng rng(4242);
    int optimal_cases = 0, infeasible_cases = 0;
    for (int trial = 0; trial < 50; ++trial) {
        LinearProgram lp = random_box_lp(rng, 3 + rng.next_int(0, 2), 2 + rng.next_int(0, 3));
        VertexOracle oracle = enumerate_vertices(lp);
        LpSolution s = solve(lp);
        if (oracle.feasible) {
            REQUIRE(s.status == LpStatus::optimal);
            CHECK_THAT(s.objective, Catch::Matchers::WithinAbs(oracle.objective, 1e-6));
            ++optimal_cases;
        } else {
            CHECK(s.status == LpStatus::infeasible);
            ++infeasible_cases;
        }
    }
    CHECK(optimal_cases > 15);

    SECTION("an eight-variable case") {
        Rng rng8(11);
        for (int trial = 0; trial < 3; ++trial) {
            LinearProgram lp = random_box_lp(rng8, 8, 3);
            VertexOracle oracle = enumerate_vertices(lp);
            LpSolution s = solve(lp);
            if (oracle.feasible) {
                REQUIRE(s.status == LpStatus::optimal);
                CHECK_THAT(s.objective, Catch::Matchers::WithinAbs(oracle.objective, 1e-6));
            } else {
                CHECK(s.status == LpStatus::infeasible);
            }
        }
    }
}

TEST_CASE("deterministic pivoting") {
    Rng rng(5);
    LinearProgram lp = random_box_lp(rng, 6, 5);
    LpSolution a = solve(lp);
    LpSolution b = solve(lp);
    REQUIRE(a.status == b.status);
    if (a.status == LpStatus::optimal) {
        CHECK(a.objective == b.objective);
        CHECK(a.values == b.values);
        CHECK(a.iterations == b.iterations);
    }
}

TEST_CASE("walkthrough relaxation solves to 1.5 under per-edge linking") {
    LabeledGraph g = fixtures::toy_graph();
    MlstModel m = build_relaxation(augment(g, fixtures::T2), LinkMode::per_edge);
    LpSolution s = solve(m.base_lp);
    REQUIRE(s.status == LpStatus::optimal);
    CHECK(s.objective <= 1.5 + 1e-6);  // the loose start, before any separation
    // with the initial separation rounds the relaxation value is exactly 1.5
    CutLoopResult loop = cutting_plane_solve(m);
    REQUIRE(loop.solution.status == LpStatus::optimal);
    CHECK_THAT(loop.solution.objective, Catch::Matchers::WithinAbs(1.5, 1e-6));
    CHECK_FALSE(edge_vector_integral(m, loop.solution.values));

    SECTION("the reconstructed super-optimal vectors are feasible at 1.5") {
        for (const std::vector<double>& x : {fixtures::toy_x1(), fixtures::toy_x2()}) {
            REQUIRE(static_cast<int>(x.size()) == m.base_lp.num_vars());
            for (const auto& row : m.base_lp.rows) {
                double act = 0.0;
                for (auto [j, c] : row.coeffs) act += c * x[j];
                if (row.rel == '<') CHECK(act <= row.rhs + 1e-9);
                if (row.rel == '>') CHECK(act >= row.rhs - 1e-9);
                if (row.rel == '=') CHECK_THAT(act, Catch::Matchers::WithinAbs(row.rhs, 1e-9));
            }
            double obj = 0.0;
            for (int j = 0; j < m.base_lp.num_vars(); ++j) obj += m.base_lp.objective[j] * x[j];
            CHECK_THAT(obj, Catch::Matchers::WithinAbs(1.5, 1e-9));
        }
    }
}

TEST_CASE("lp text dump is well-formed") {
    LinearProgram lp;
    lp.add_variable(0.0, 1.0, 1.0);
    lp.add_variable(0.0, 1.0, -2.0);
    lp.add_constraint({{0, 1.0}, {1, 1.0}}, '<', 1.0);
    std::ostringstream out;
    write_lp_text(lp, out);
    CHECK(out.str().find("Minimize") != std::string::npos);
    CHECK(out.str().find("Subject To") != std::string::npos);
    CHECK(out.str().find("Bounds") != std::string::npos);
}
