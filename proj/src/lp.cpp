/*
 * Copyright (c) 2026, the linterm authors
 *
 * SPDX-License-Identifier: MIT
 */

#include "linterm/lp.hpp"

#include <cassert>
#include <stdexcept>

namespace linterm {

namespace {

// Dense simplex tableau in standard form: minimize cost.z subject to
// T z = rhs, z >= 0. Bland's rule throughout, so cycling is impossible.
class Tableau {
public:
    Tableau(std::vector<RatVec> rows, RatVec rhs, int nvars)
        : t_(std::move(rows)), rhs_(std::move(rhs)), n_(nvars) {}

    int m() const { return static_cast<int>(t_.size()); }

    // Phase 1: appends one artificial per row and minimizes their sum.
    // Returns false when the system is infeasible.
    bool phase1() {
        int m0 = m();
        for (int i = 0; i < m0; ++i) {
            if (rhs_[i] < Rat(0)) {
                for (auto &x : t_[i]) x = -x;
                rhs_[i] = -rhs_[i];
            }
        }
        basis_.assign(m0, -1);
        int art0 = n_;
        for (int i = 0; i < m0; ++i) {
            for (int r = 0; r < m0; ++r) t_[r].push_back(Rat(r == i ? 1 : 0));
            basis_[i] = art0 + i;
        }
        ncols_ = n_ + m0;
        RatVec cost(ncols_, Rat(0));
        for (int j = art0; j < ncols_; ++j) cost[j] = Rat(1);
        auto [val, unb] = optimize(cost);
        assert(!unb);
        if (val > Rat(0)) return false;
        // Pivot artificials out of the basis where possible; rows where no
        // pivot exists are redundant and dropped.
        for (int i = m(); i-- > 0;) {
            if (basis_[i] < art0) continue;
            int enter = -1;
            for (int j = 0; j < n_; ++j)
                if (!t_[i][j].is_zero()) { enter = j; break; }
            if (enter >= 0) {
                pivot(i, enter);
            } else {
                t_.erase(t_.begin() + i);
                rhs_.erase(rhs_.begin() + i);
                basis_.erase(basis_.begin() + i);
            }
        }
        for (auto &row : t_) row.resize(n_);
        ncols_ = n_;
        return true;
    }

    // Minimizes cost.z from the current feasible basis. Returns the optimum
    // and an unboundedness flag; when unbounded, ray() is the improving ray.
    // Dantzig pricing by default; a run of degenerate pivots switches to
    // Bland's rule, which cannot cycle.
    std::pair<Rat, bool> optimize(RatVec cost) {
        cost.resize(ncols_, Rat(0));
        // Reduced-cost row: c - c_B B^-1 A, maintained by pivoting.
        red_ = cost;
        obj_ = Rat(0);
        for (int i = 0; i < m(); ++i) reduce_row(i, cost[basis_[i]]);
        int stalled = 0;
        for (;;) {
            bool bland = stalled > 40;
            int enter = -1;
            for (int j = 0; j < ncols_; ++j) {
                if (red_[j] < Rat(0)) {
                    if (bland) {
                        enter = j;
                        break;
                    }
                    if (enter < 0 || red_[j] < red_[enter]) enter = j;
                }
            }
            if (enter < 0) return {obj_, false};
            int leave = -1;
            Rat best;
            for (int i = 0; i < m(); ++i) {
                if (t_[i][enter] > Rat(0)) {
                    Rat ratio = rhs_[i] / t_[i][enter];
                    if (leave < 0 || ratio < best ||
                        (ratio == best && basis_[i] < basis_[leave])) {
                        leave = i;
                        best = ratio;
                    }
                }
            }
            if (leave < 0) {
                make_ray(enter);
                return {Rat(0), true};
            }
            stalled = rhs_[leave].is_zero() ? stalled + 1 : 0;
            pivot(leave, enter);
        }
    }

    RatVec solution() const {
        RatVec z(ncols_, Rat(0));
        for (int i = 0; i < m(); ++i) z[basis_[i]] = rhs_[i];
        return z;
    }

    const RatVec &ray() const { return ray_; }

private:
    void reduce_row(int i, const Rat &cb) {
        if (cb.is_zero()) return;
        for (int j = 0; j < ncols_; ++j) red_[j] -= cb * t_[i][j];
        obj_ += cb * rhs_[i];
    }

    void pivot(int leave, int enter) {
        Rat p = t_[leave][enter];
        assert(!p.is_zero());
        Rat pinv = p.inv();
        for (auto &x : t_[leave]) x *= pinv;
        rhs_[leave] *= pinv;
        for (int i = 0; i < m(); ++i) {
            if (i == leave) continue;
            Rat f = t_[i][enter];
            if (f.is_zero()) continue;
            for (int j = 0; j < ncols_; ++j) t_[i][j] -= f * t_[leave][j];
            rhs_[i] -= f * rhs_[leave];
        }
        Rat f = red_[enter];
        if (!f.is_zero()) {
            for (int j = 0; j < ncols_; ++j) red_[j] -= f * t_[leave][j];
            obj_ += f * rhs_[leave];
        }
        basis_[leave] = enter;
    }

    void make_ray(int enter) {
        ray_.assign(ncols_, Rat(0));
        ray_[enter] = Rat(1);
        for (int i = 0; i < m(); ++i) ray_[basis_[i]] = -t_[i][enter];
    }

    std::vector<RatVec> t_;
    RatVec rhs_;
    RatVec red_;
    Rat obj_;
    std::vector<int> basis_;
    int n_;
    int ncols_ = 0;
    RatVec ray_;
};

// Standard-form encoding: x_i = u_i - v_i, one slack per <=-row.
struct Encoding {
    int n;
    int nslack;
    int cols;
    std::vector<int> slack_of_row; // -1 for equality rows

    explicit Encoding(const LpProblem &p) : n(p.n) {
        nslack = 0;
        for (const auto &r : p.rows) slack_of_row.push_back(r.eq ? -1 : nslack++);
        cols = 2 * n + nslack;
    }

    RatVec expand(const RatVec &a) const {
        RatVec row(cols, Rat(0));
        for (int i = 0; i < n && i < static_cast<int>(a.size()); ++i) {
            row[i] = a[i];
            row[n + i] = -a[i];
        }
        return row;
    }

    RatVec to_x(const RatVec &z) const {
        RatVec x(n, Rat(0));
        for (int i = 0; i < n; ++i) x[i] = z[i] - z[n + i];
        return x;
    }
};

LpOutcome solve_core(const LpProblem &p) {
    Encoding enc(p);
    std::vector<RatVec> rows;
    RatVec rhs;
    for (size_t i = 0; i < p.rows.size(); ++i) {
        RatVec row = enc.expand(p.rows[i].a);
        if (enc.slack_of_row[i] >= 0) row[2 * enc.n + enc.slack_of_row[i]] = Rat(1);
        rows.push_back(std::move(row));
        rhs.push_back(p.rows[i].b);
    }
    Tableau tab(std::move(rows), std::move(rhs), enc.cols);
    LpOutcome out;
    if (!tab.phase1()) {
        out.status = LpStatus::Infeasible;
        return out;
    }
    if (p.sense == LpSense::Feasibility) {
        out.status = LpStatus::Optimal;
        out.point = enc.to_x(tab.solution());
        out.value = Rat(0);
        return out;
    }
    RatVec cost = enc.expand(p.objective);
    bool maximize = p.sense == LpSense::Max;
    if (maximize)
        for (auto &c : cost) c = -c; // tableau minimizes
    auto [val, unbounded] = tab.optimize(cost);
    if (unbounded) {
        out.status = LpStatus::Unbounded;
        out.point = enc.to_x(tab.solution());
        out.ray = enc.to_x(tab.ray());
        return out;
    }
    out.status = LpStatus::Optimal;
    out.point = enc.to_x(tab.solution());
    out.value = maximize ? -val : val;
    return out;
}

// Certificate construction by solving the dual system as a plain LP; keeps
// the pivoting core free of dual bookkeeping and double-checks optimality.
RatVec solve_multipliers(const LpProblem &p, const RatVec &target, const Rat &bound,
                         bool bound_is_strictly_negative) {
    // Find mu with: mu_i >= 0 on <=-rows (free on =-rows), sum mu_i a_i =
    // target, and sum mu_i b_i <= bound (or <= -1 for infeasibility
    // certificates, rescalable to any negative value).
    int m = static_cast<int>(p.rows.size());
    LpProblem d;
    d.n = m;
    for (int j = 0; j < p.n; ++j) {
        LpRow r;
        r.a.assign(m, Rat(0));
        for (int i = 0; i < m; ++i)
            if (j < static_cast<int>(p.rows[i].a.size())) r.a[i] = p.rows[i].a[j];
        r.b = j < static_cast<int>(target.size()) ? target[j] : Rat(0);
        r.eq = true;
        d.rows.push_back(std::move(r));
    }
    for (int i = 0; i < m; ++i) {
        if (p.rows[i].eq) continue;
        LpRow r;
        r.a.assign(m, Rat(0));
        r.a[i] = Rat(-1);
        r.b = Rat(0);
        d.rows.push_back(std::move(r)); // mu_i >= 0
    }
    {
        LpRow r;
        r.a.assign(m, Rat(0));
        for (int i = 0; i < m; ++i) r.a[i] = p.rows[i].b;
        r.b = bound_is_strictly_negative ? Rat(-1) : bound;
        d.rows.push_back(std::move(r));
    }
    LpOutcome o = solve_core(d);
    if (o.status != LpStatus::Optimal) return {};
    return o.point;
}

} // namespace

LpOutcome lp_solve(const LpProblem &p) {
    LpOutcome out = solve_core(p);
    if (out.status == LpStatus::Infeasible) {
        out.farkas = solve_multipliers(p, RatVec(p.n, Rat(0)), Rat(0), true);
        if (out.farkas.empty())
            throw std::logic_error("lp_solve: infeasible but no Farkas certificate");
        return out;
    }
    if (out.status == LpStatus::Optimal && p.sense != LpSense::Feasibility) {
        RatVec target = p.objective;
        target.resize(p.n, Rat(0));
        if (p.sense == LpSense::Min)
            for (auto &c : target) c = -c;
        Rat bound = p.sense == LpSense::Max ? out.value : -out.value;
        out.dual = solve_multipliers(p, target, bound, false);
        if (out.dual.empty())
            throw std::logic_error("lp_solve: optimal but no dual certificate");
    }
    return out;
}

std::optional<RatVec> lp_feasible_point(int n, const std::vector<LpRow> &rows) {
    LpProblem p;
    p.n = n;
    p.rows = rows;
    p.sense = LpSense::Feasibility;
    LpOutcome o = solve_core(p);
    if (o.status == LpStatus::Infeasible) return std::nullopt;
    return o.point;
}

// The convenience optimizers skip certificate construction; callers that
// need duals use lp_solve directly.
LpOutcome lp_maximize(int n, const std::vector<LpRow> &rows, const RatVec &obj) {
    LpProblem p;
    p.n = n;
    p.rows = rows;
    p.objective = obj;
    p.sense = LpSense::Max;
    return solve_core(p);
}

LpOutcome lp_minimize(int n, const std::vector<LpRow> &rows, const RatVec &obj) {
    LpProblem p;
    p.n = n;
    p.rows = rows;
    p.objective = obj;
    p.sense = LpSense::Min;
    return solve_core(p);
}

} // namespace linterm
