#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mlst {

constexpr double kLpInfinity = 1e30;
constexpr double kFeasTol = 1e-7;   // feasibility / optimality tolerance
constexpr double kIntTol = 1e-6;    // integrality detection (consumers)

inline bool lp_is_finite(double b) { return std::abs(b) < kLpInfinity / 2; }

// Deterministic work accounting. Doubles as the virtual clock for the bench
// harness: units are roughly proportional to tableau cells touched.
struct WorkMeter {
    std::uint64_t used = 0;
    std::uint64_t limit = ~std::uint64_t(0);
    void charge(std::uint64_t units) { used += units; }
    bool exhausted() const { return used >= limit; }
};

enum class LpStatus { optimal, infeasible, unbounded, aborted };

struct LpSolution {
    LpStatus status = LpStatus::aborted;
    std::vector<double> values;  // structural variables only
    double objective = 0.0;
    int iterations = 0;
};

struct LinearProgram {
    struct Row {
        std::vector<std::pair<int, double>> coeffs;
        char rel = '<';  // '<' (<=), '>' (>=), '=' (==)
        double rhs = 0.0;
    };

    std::vector<double> lower, upper, objective;
    std::vector<Row> rows;

    int num_vars() const { return static_cast<int>(lower.size()); }

    int add_variable(double lo, double hi, double cost) {
        if (lo > hi) throw std::runtime_error("add_variable: lower > upper");
        lower.push_back(lo);
        upper.push_back(hi);
        objective.push_back(cost);
        return num_vars() - 1;
    }

    void add_constraint(std::vector<std::pair<int, double>> coeffs, char rel, double rhs) {
        for (auto& [j, c] : coeffs)
            if (j < 0 || j >= num_vars())
                throw std::runtime_error("add_constraint: invalid variable index");
        rows.push_back(Row{std::move(coeffs), rel, rhs});
    }

    void fix_variable(int j, double value) {
        if (j < 0 || j >= num_vars()) throw std::runtime_error("fix_variable: index out of range");
        if (value < lower[j] - kFeasTol || value > upper[j] + kFeasTol)
            throw std::runtime_error("fix_variable: value outside original bounds");
        lower[j] = upper[j] = value;
    }
};

// Debug dump in the usual LP interchange text format (developer tooling).
inline void write_lp_text(const LinearProgram& lp, std::ostream& out) {
    out << "Minimize\n obj:";
    for (int j = 0; j < lp.num_vars(); ++j)
        if (lp.objective[j] != 0.0)
            out << (lp.objective[j] >= 0 ? " +" : " ") << lp.objective[j] << " x" << j;
    out << "\nSubject To\n";
    for (std::size_t r = 0; r < lp.rows.size(); ++r) {
        out << " c" << r << ":";
        for (auto [j, c] : lp.rows[r].coeffs) out << (c >= 0 ? " +" : " ") << c << " x" << j;
        const char* rel = lp.rows[r].rel == '<' ? "<=" : lp.rows[r].rel == '>' ? ">=" : "=";
        out << ' ' << rel << ' ' << lp.rows[r].rhs << '\n';
    }
    out << "Bounds\n";
    for (int j = 0; j < lp.num_vars(); ++j)
        out << ' ' << (lp_is_finite(lp.lower[j]) ? std::to_string(lp.lower[j]) : "-inf") << " <= x"
            << j << " <= " << (lp_is_finite(lp.upper[j]) ? std::to_string(lp.upper[j]) : "+inf")
            << '\n';
    out << "End\n";
}

// ---------------------------------------------------------------------------
// Bounded-variable simplex over a dense tableau.
//
// Column layout: structural variables first, then one slack per row (added
// as rows arrive), plus artificial columns when a cold start needs them.
// Scratch solves start from the slack basis; since every structural variable
// of interest has finite bounds, the start can always be made dual-feasible,
// so both cold starts and warm restarts after cuts/fixings run through the
// dual simplex. Entering ties break toward the lowest index, and a stall
// switches to Bland's rule, which bounds cycling.
// ---------------------------------------------------------------------------

class LpSolver {
  public:
    explicit LpSolver(LinearProgram lp, WorkMeter* meter = nullptr) : meter_(meter) {
        nv_ = lp.num_vars();
        lower_ = lp.lower;
        upper_ = lp.upper;
        cost_ = lp.objective;
        original_rows_ = std::move(lp.rows);
        for (const auto& row : original_rows_) install_row(row);
        state_valid_ = false;
    }

    LpSolver(const LpSolver&) = default;
    LpSolver& operator=(const LpSolver&) = default;
    LpSolver(LpSolver&&) = default;
    LpSolver& operator=(LpSolver&&) = default;

    int num_vars() const { return nv_; }
    int num_rows() const { return static_cast<int>(tableau_.size()); }
    void set_meter(WorkMeter* meter) { meter_ = meter; }

    void add_row(const LinearProgram::Row& row) {
        for (auto& [j, c] : row.coeffs)
            if (j < 0 || j >= nv_) throw std::runtime_error("add_row: invalid variable index");
        original_rows_.push_back(row);
        install_row(row);
    }

    void fix(int j, double value) { set_bounds(j, value, value); }

    void set_bounds(int j, double lo, double hi) {
        if (j < 0 || j >= nv_) throw std::runtime_error("set_bounds: index out of range");
        if (lo > hi) throw std::runtime_error("set_bounds: lower > upper");
        lower_[j] = lo;
        upper_[j] = hi;
        if (!state_valid_) return;
        if (in_basis_[j] < 0) {
            double target = value_[j];
            if (target < lo) target = lo;
            if (target > hi) target = hi;
            move_nonbasic(j, target);
            at_upper_[j] = (target >= hi - kFeasTol);
        }
        // basic variable out of its new bounds is repaired by the dual pass
    }

    LpSolution solve() {
        if (!state_valid_) cold_start();
        LpSolution sol;
        sol.status = run();
        sol.iterations = iterations_;
        if (sol.status == LpStatus::optimal && !verify_state()) {
            // numerical drift: rebuild once from scratch
            cold_start();
            sol.status = run();
        }
        sol.values.assign(nv_, 0.0);
        if (sol.status == LpStatus::optimal) {
            sync_values();
            for (int j = 0; j < nv_; ++j) sol.values[j] = value_[j];
            sol.objective = 0.0;
            for (int j = 0; j < nv_; ++j) sol.objective += cost_[j] * value_[j];
        }
        return sol;
    }

    double lower_bound(int j) const { return lower_[j]; }
    double upper_bound(int j) const { return upper_[j]; }

  private:
    // --- problem data -------------------------------------------------------
    int nv_ = 0;
    std::vector<double> lower_, upper_, cost_;  // grows with slack/artificial cols
    std::vector<LinearProgram::Row> original_rows_;
    WorkMeter* meter_ = nullptr;

    // --- simplex state ------------------------------------------------------
    std::vector<std::vector<double>> tableau_;  // per row, width = total columns
    std::vector<double> beta_;                  // value of the basic var per row
    std::vector<int> basis_;                    // row -> column
    std::vector<int> in_basis_;                 // column -> row or -1
    std::vector<double> value_;                 // column -> current value
    std::vector<char> at_upper_;                // nonbasic position flag
    std::vector<double> dcost_;                 // reduced costs (active objective)
    std::vector<char> is_artificial_;
    std::vector<double> normalized_rhs_;        // rhs after '>' negation
    std::vector<char> row_is_eq_;
    std::vector<int> slack_col_;                // row -> slack column
    bool state_valid_ = false;
    bool phase_one_ = false;
    int iterations_ = 0;
    int stall_ = 0;
    bool bland_ = false;
    double last_obj_ = 0.0;

    int width() const { return static_cast<int>(lower_.size()); }

    void charge(std::uint64_t units) {
        if (meter_) meter_->charge(units);
    }
    bool budget_gone() const { return meter_ && meter_->exhausted(); }

    bool fixed_col(int j) const { return upper_[j] - lower_[j] <= kFeasTol * 0.5; }

    // Registers the row in tableau form with a fresh slack column.
    void install_row(const LinearProgram::Row& row) {
        double sign = row.rel == '>' ? -1.0 : 1.0;
        bool eq = row.rel == '=';
        int r = num_rows();
        row_is_eq_.push_back(eq);
        normalized_rhs_.push_back(sign * row.rhs);

        int s = width();
        lower_.push_back(0.0);
        upper_.push_back(eq ? 0.0 : kLpInfinity);
        cost_.push_back(0.0);
        slack_col_.push_back(s);

        if (!state_valid_) {
            tableau_.emplace_back();
            basis_.push_back(s);
            beta_.push_back(0.0);
            return;
        }

        // warm path: express the new row in the current basis
        for (auto& trow : tableau_) trow.push_back(0.0);
        value_.push_back(0.0);
        at_upper_.push_back(0);
        dcost_.push_back(0.0);
        is_artificial_.push_back(0);
        in_basis_.push_back(-1);

        std::vector<double> trow(width(), 0.0);
        for (auto [j, c] : row.coeffs) trow[j] += sign * c;
        trow[s] = 1.0;
        double activity = 0.0;
        for (auto [j, c] : row.coeffs) activity += sign * c * value_[j];
        for (int rr = 0; rr < num_rows(); ++rr) {
            double mult = trow[basis_[rr]];
            if (std::abs(mult) > 1e-12) {
                const std::vector<double>& src = tableau_[rr];
                for (int k = 0; k < width(); ++k) trow[k] -= mult * src[k];
                trow[basis_[rr]] = 0.0;
                charge(static_cast<std::uint64_t>(width()));
            }
        }
        tableau_.push_back(std::move(trow));
        basis_.push_back(s);
        in_basis_[s] = num_rows() - 1;
        beta_.push_back(normalized_rhs_.back() - activity);
        value_[s] = beta_.back();
    }

    void cold_start() {
        int w = width();
        value_.assign(w, 0.0);
        at_upper_.assign(w, 0);
        in_basis_.assign(w, -1);
        dcost_.assign(w, 0.0);
        is_artificial_.resize(w, 0);
        for (int j = 0; j < w; ++j)  // stale artificials from an earlier start stay out
            if (is_artificial_[j]) lower_[j] = upper_[j] = 0.0;

        for (int j = 0; j < nv_; ++j) {
            double v;
            if (lp_is_finite(lower_[j]) && lp_is_finite(upper_[j]))
                v = cost_[j] >= 0 ? lower_[j] : upper_[j];
            else if (lp_is_finite(lower_[j]))
                v = lower_[j];
            else if (lp_is_finite(upper_[j]))
                v = upper_[j];
            else
                v = 0.0;
            value_[j] = v;
            at_upper_[j] = lp_is_finite(upper_[j]) && v >= upper_[j] - kFeasTol;
        }

        // rebuild tableau rows verbatim (slack basis)
        for (int r = 0; r < num_rows(); ++r) {
            tableau_[r].assign(w, 0.0);
            double sign = 1.0, activity = 0.0;
            const auto& row = original_rows_[r];
            if (row.rel == '>') sign = -1.0;
            for (auto [j, c] : row.coeffs) {
                tableau_[r][j] += sign * c;
                activity += sign * c * value_[j];
            }
            tableau_[r][slack_col_[r]] = 1.0;
            basis_[r] = slack_col_[r];
            in_basis_[slack_col_[r]] = r;
            beta_[r] = normalized_rhs_[r] - activity;
            value_[slack_col_[r]] = beta_[r];
        }
        charge(static_cast<std::uint64_t>(num_rows()) * w);

        phase_one_ = false;
        compute_reduced_costs();
        state_valid_ = true;
    }

    void compute_reduced_costs() {
        int w = width();
        dcost_.assign(w, 0.0);
        const std::vector<double>& active = phase_one_ ? phase_cost_ : cost_;
        for (int j = 0; j < w; ++j) dcost_[j] = j < static_cast<int>(active.size()) ? active[j] : 0.0;
        for (int r = 0; r < num_rows(); ++r) {
            double cb = basis_[r] < static_cast<int>(active.size()) ? active[basis_[r]] : 0.0;
            if (cb != 0.0) {
                const std::vector<double>& trow = tableau_[r];
                for (int k = 0; k < w; ++k) dcost_[k] -= cb * trow[k];
            }
        }
        charge(static_cast<std::uint64_t>(num_rows()) * w);
        for (int r = 0; r < num_rows(); ++r) dcost_[basis_[r]] = 0.0;
    }

    std::vector<double> phase_cost_;

    double current_objective() const {
        double z = 0.0;
        const std::vector<double>& active = phase_one_ ? phase_cost_ : cost_;
        int w = std::min<int>(width(), static_cast<int>(active.size()));
        for (int j = 0; j < w; ++j)
            if (active[j] != 0.0) z += active[j] * value_[j];
        return z;
    }

    bool primal_feasible() const {
        for (int r = 0; r < num_rows(); ++r) {
            int b = basis_[r];
            if (beta_[r] < lower_[b] - kFeasTol || beta_[r] > upper_[b] + kFeasTol) return false;
        }
        return true;
    }

    // Moves nonbasic column j to target value, updating basic values.
    void move_nonbasic(int j, double target) {
        double delta = target - value_[j];
        if (std::abs(delta) < 1e-15) {
            value_[j] = target;
            return;
        }
        for (int r = 0; r < num_rows(); ++r) {
            double a = tableau_[r][j];
            if (a != 0.0) {
                beta_[r] -= a * delta;
                value_[basis_[r]] = beta_[r];
            }
        }
        charge(static_cast<std::uint64_t>(num_rows()));
        value_[j] = target;
    }

    // Restores dual feasibility by flipping mispriced nonbasic columns to
    // their other (finite) bound. Returns false if a column cannot be fixed
    // that way (infinite bound or free column with nonzero reduced cost).
    bool snap_dual_feasible() {
        for (int j = 0; j < width(); ++j) {
            if (in_basis_[j] >= 0 || fixed_col(j)) continue;
            if (!at_upper_[j] && dcost_[j] < -kFeasTol) {
                if (!lp_is_finite(upper_[j])) return false;
                move_nonbasic(j, upper_[j]);
                at_upper_[j] = 1;
            } else if (at_upper_[j] && dcost_[j] > kFeasTol) {
                if (!lp_is_finite(lower_[j])) return false;
                move_nonbasic(j, lower_[j]);
                at_upper_[j] = 0;
            }
        }
        return true;
    }

    LpStatus run() {
        iterations_ = 0;
        stall_ = 0;
        bland_ = false;
        phase_one_ = false;
        compute_reduced_costs();

        if (primal_feasible()) {
            last_obj_ = current_objective();
            return primal_loop();
        }
        if (snap_dual_feasible()) {
            LpStatus st = dual_loop();
            if (st != LpStatus::optimal) return st;
            last_obj_ = current_objective();
            return primal_loop();  // usually 0 iterations
        }
        return phase_one_then_two();
    }

    LpStatus phase_one_then_two() {
        // artificial columns for rows whose slack cannot absorb the residual
        phase_cost_.assign(width(), 0.0);
        for (int r = 0; r < num_rows(); ++r) {
            int b = basis_[r];
            double lo = lower_[b], hi = upper_[b];
            if (beta_[r] >= lo - kFeasTol && beta_[r] <= hi + kFeasTol) continue;
            double target = beta_[r] < lo ? lo : hi;
            double resid = beta_[r] - target;  // artificial takes this value

            int a = width();
            lower_.push_back(0.0);
            upper_.push_back(kLpInfinity);
            cost_.push_back(0.0);
            phase_cost_.push_back(1.0);
            value_.push_back(0.0);
            at_upper_.push_back(0);
            dcost_.push_back(0.0);
            is_artificial_.push_back(1);
            in_basis_.push_back(-1);
            for (int rr = 0; rr < num_rows(); ++rr)
                tableau_[rr].push_back(rr == r ? (resid > 0 ? 1.0 : -1.0) : 0.0);

            // swap: artificial becomes basic, old basic column moves to bound
            value_[b] = target;
            at_upper_[b] = std::abs(target - upper_[b]) < kFeasTol;
            in_basis_[b] = -1;
            // normalize the row so the artificial's coefficient is +1
            if (resid < 0)
                for (double& x : tableau_[r]) x = -x;
            basis_[r] = a;
            in_basis_[a] = r;
            beta_[r] = std::abs(resid);
            value_[a] = beta_[r];
        }

        phase_one_ = true;
        compute_reduced_costs();
        last_obj_ = current_objective();
        LpStatus st = primal_loop();
        double infeasibility = current_objective();

        // artificials never participate again, whatever the outcome
        for (int j = 0; j < width(); ++j)
            if (is_artificial_[j]) {
                lower_[j] = upper_[j] = 0.0;
                if (in_basis_[j] < 0) value_[j] = 0.0;
            }
        phase_one_ = false;

        if (st != LpStatus::optimal) return st == LpStatus::unbounded ? LpStatus::infeasible : st;
        if (infeasibility > kFeasTol * 10) return LpStatus::infeasible;
        compute_reduced_costs();
        last_obj_ = current_objective();
        return primal_loop();
    }

    // --- primal simplex -----------------------------------------------------

    LpStatus primal_loop() {
        const int max_iters = 200000 + 400 * num_rows();
        std::vector<double> col(num_rows());
        while (true) {
            if (budget_gone()) return LpStatus::aborted;
            int q = pick_entering();
            if (q < 0) return LpStatus::optimal;

            double dir = at_upper_[q] ? -1.0 : 1.0;
            if (in_basis_[q] < 0 && !lp_is_finite(lower_[q]) && !lp_is_finite(upper_[q]))
                dir = dcost_[q] > 0 ? -1.0 : 1.0;  // free column

            for (int r = 0; r < num_rows(); ++r) col[r] = tableau_[r][q];
            charge(static_cast<std::uint64_t>(num_rows()));

            double flip_limit = upper_[q] - lower_[q];  // may be +inf
            double best = flip_limit;
            int leave_row = -1;
            double leave_target = 0.0;
            for (int r = 0; r < num_rows(); ++r) {
                double a = dir * col[r];
                if (std::abs(a) <= 1e-9) continue;
                int b = basis_[r];
                double room, target;
                if (a > 0) {  // basic decreases toward its lower bound
                    if (!lp_is_finite(lower_[b])) continue;
                    room = (beta_[r] - lower_[b]) / a;
                    target = lower_[b];
                } else {  // basic increases toward its upper bound
                    if (!lp_is_finite(upper_[b])) continue;
                    room = (beta_[r] - upper_[b]) / a;
                    target = upper_[b];
                }
                if (room < -kFeasTol) room = 0.0;  // degenerate, slightly out of bounds
                if (room < best - 1e-9) {
                    best = room;
                    leave_row = r;
                    leave_target = target;
                } else if (room < best + 1e-9 && leave_row >= 0) {
                    // tie: prefer a larger pivot element; Bland mode: lowest var id
                    bool take = bland_ ? basis_[r] < basis_[leave_row]
                                       : std::abs(col[r]) > std::abs(col[leave_row]);
                    if (take) {
                        if (room < best) best = room;
                        leave_row = r;
                        leave_target = target;
                    }
                }
            }

            if (leave_row < 0 && !lp_is_finite(flip_limit)) return LpStatus::unbounded;

            double improve;
            if (leave_row < 0) {
                improve = std::abs(dcost_[q]) * flip_limit;
                double target = at_upper_[q] ? lower_[q] : upper_[q];
                move_nonbasic(q, target);
                at_upper_[q] = !at_upper_[q];
            } else {
                improve = std::abs(dcost_[q]) * best;
                pivot(leave_row, q, col, dir, best, leave_target);
            }

            ++iterations_;
            track_progress(improve);
            if (iterations_ > max_iters) return LpStatus::aborted;
        }
    }

    int pick_entering() {
        int best = -1;
        double best_rate = kFeasTol;
        for (int j = 0; j < width(); ++j) {
            if (in_basis_[j] >= 0 || fixed_col(j)) continue;
            double d = dcost_[j];
            double rate = 0.0;
            bool free_col = !lp_is_finite(lower_[j]) && !lp_is_finite(upper_[j]);
            if (free_col)
                rate = std::abs(d);
            else if (!at_upper_[j] && d < 0)
                rate = -d;
            else if (at_upper_[j] && d > 0)
                rate = d;
            if (rate > best_rate + 1e-12 || (bland_ && rate > kFeasTol)) {
                best = j;
                best_rate = rate;
                if (bland_) break;  // lowest eligible index
            }
        }
        charge(static_cast<std::uint64_t>(width()));
        return best;
    }

    void pivot(int r, int q, const std::vector<double>& col, double dir, double step,
               double leave_target) {
        int b = basis_[r];
        double alpha = col[r];

        // move to the new point
        double new_q = value_[q] + dir * step;
        for (int rr = 0; rr < num_rows(); ++rr) {
            if (col[rr] == 0.0) continue;
            beta_[rr] -= dir * col[rr] * step;
            value_[basis_[rr]] = beta_[rr];
        }
        value_[b] = leave_target;
        at_upper_[b] = lp_is_finite(upper_[b]) && std::abs(leave_target - upper_[b]) < kFeasTol;
        in_basis_[b] = -1;

        basis_[r] = q;
        in_basis_[q] = r;
        beta_[r] = new_q;
        value_[q] = new_q;

        eliminate(r, q, alpha);
    }

    // Row elimination shared by primal and dual pivots.
    void eliminate(int r, int q, double alpha) {
        int w = width();
        std::vector<double>& prow = tableau_[r];
        double inv = 1.0 / alpha;
        for (double& x : prow) x *= inv;
        prow[q] = 1.0;
        std::uint64_t touched = static_cast<std::uint64_t>(w);
        for (int rr = 0; rr < num_rows(); ++rr) {
            if (rr == r) continue;
            double mult = tableau_[rr][q];
            if (std::abs(mult) <= 1e-12) continue;
            std::vector<double>& row = tableau_[rr];
            for (int k = 0; k < w; ++k) row[k] -= mult * prow[k];
            row[q] = 0.0;
            touched += static_cast<std::uint64_t>(w);
        }
        double dmult = dcost_[q];
        if (std::abs(dmult) > 1e-15) {
            for (int k = 0; k < w; ++k) dcost_[k] -= dmult * prow[k];
        }
        dcost_[q] = 0.0;
        charge(touched);
    }

    void track_progress(double improve) {
        if (improve > 1e-9) {
            stall_ = 0;
            bland_ = false;
        } else if (++stall_ > 500) {
            bland_ = true;
        }
    }

    // --- dual simplex -------------------------------------------------------

    LpStatus dual_loop() {
        const int max_iters = 200000 + 400 * num_rows();
        int local_iters = 0;
        int dual_stall = 0;
        bool dual_bland = false;
        while (true) {
            if (budget_gone()) return LpStatus::aborted;

            int r = -1;
            double worst = kFeasTol;
            for (int rr = 0; rr < num_rows(); ++rr) {
                int b = basis_[rr];
                double viol = std::max(lower_[b] - beta_[rr], beta_[rr] - upper_[b]);
                if (viol > worst + 1e-12 && !dual_bland) {
                    worst = viol;
                    r = rr;
                } else if (dual_bland && viol > kFeasTol && r < 0) {
                    r = rr;
                }
            }
            charge(static_cast<std::uint64_t>(num_rows()));
            if (r < 0) return LpStatus::optimal;

            int b = basis_[r];
            bool below = beta_[r] < lower_[b];
            double target = below ? lower_[b] : upper_[b];

            const std::vector<double>& prow = tableau_[r];
            int q = -1;
            double best_ratio = 0.0;
            for (int j = 0; j < width(); ++j) {
                if (in_basis_[j] >= 0 || fixed_col(j)) continue;
                double a = prow[j];
                if (std::abs(a) <= 1e-9) continue;
                bool free_col = !lp_is_finite(lower_[j]) && !lp_is_finite(upper_[j]);
                bool eligible;
                if (below)
                    eligible = free_col || (!at_upper_[j] && a < 0) || (at_upper_[j] && a > 0);
                else
                    eligible = free_col || (!at_upper_[j] && a > 0) || (at_upper_[j] && a < 0);
                if (!eligible) continue;
                double ratio = std::abs(dcost_[j] / a);
                if (q < 0 || ratio < best_ratio - 1e-12 ||
                    (ratio < best_ratio + 1e-12 &&
                     (dual_bland ? j < q : std::abs(a) > std::abs(prow[q])))) {
                    q = j;
                    best_ratio = ratio;
                }
            }
            charge(static_cast<std::uint64_t>(width()));
            if (q < 0) return LpStatus::infeasible;

            double alpha = prow[q];
            double delta_q = (beta_[r] - target) / alpha;
            std::vector<double> col(num_rows());
            for (int rr = 0; rr < num_rows(); ++rr) col[rr] = tableau_[rr][q];
            for (int rr = 0; rr < num_rows(); ++rr) {
                if (rr == r || col[rr] == 0.0) continue;
                beta_[rr] -= col[rr] * delta_q;
                value_[basis_[rr]] = beta_[rr];
            }
            charge(static_cast<std::uint64_t>(num_rows()));

            value_[b] = target;
            at_upper_[b] = lp_is_finite(upper_[b]) && std::abs(target - upper_[b]) < kFeasTol;
            in_basis_[b] = -1;

            double new_q = value_[q] + delta_q;
            basis_[r] = q;
            in_basis_[q] = r;
            beta_[r] = new_q;
            value_[q] = new_q;

            eliminate(r, q, alpha);

            ++iterations_;
            if (std::abs(delta_q) * std::abs(dcost_[q]) <= 1e-10) {
                if (++dual_stall > 500) dual_bland = true;
            } else {
                dual_stall = 0;
                dual_bland = false;
            }
            if (++local_iters > max_iters) return LpStatus::aborted;
        }
    }

    // --- verification -------------------------------------------------------

    void sync_values() {
        for (int r = 0; r < num_rows(); ++r) value_[basis_[r]] = beta_[r];
    }

    bool verify_state() {
        sync_values();
        for (int j = 0; j < width(); ++j) {
            double lo = lower_[j], hi = upper_[j];
            if (value_[j] < lo - 1e-6 || value_[j] > hi + 1e-6) return false;
        }
        for (int r = 0; r < num_rows(); ++r) {
            const auto& row = original_rows_[r];
            double act = 0.0, scale = 1.0;
            for (auto [j, c] : row.coeffs) {
                act += c * value_[j];
                scale = std::max(scale, std::abs(c));
            }
            double diff = act - row.rhs;
            double tol = 1e-6 * scale * std::max(1.0, std::abs(row.rhs));
            if (row.rel == '<' && diff > tol) return false;
            if (row.rel == '>' && diff < -tol) return false;
            if (row.rel == '=' && std::abs(diff) > tol) return false;
        }
        return true;
    }
};

// One-shot interface per the module contract; incremental callers hold an
// LpSolver directly.
inline LpSolution solve(const LinearProgram& lp, WorkMeter* meter = nullptr) {
    LpSolver solver(lp, meter);
    return solver.solve();
}

}  // namespace mlst
