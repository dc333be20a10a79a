/*
 * Copyright (c) 2026, the linterm authors
 *
 * SPDX-License-Identifier: MIT
 */

#pragma once

#include "linterm/rational.hpp"

#include <optional>
#include <vector>

namespace linterm {

enum class LpStatus { Optimal, Unbounded, Infeasible };
enum class LpSense { Max, Min, Feasibility };

/// One constraint a.x <= b (eq = false) or a.x == b (eq = true).
struct LpRow {
    RatVec a;
    Rat b;
    bool eq = false;
};

struct LpProblem {
    int n = 0;
    std::vector<LpRow> rows;
    RatVec objective; // dense, size n; ignored for Feasibility
    LpSense sense = LpSense::Feasibility;
};

/// Exact LP outcome. Every status carries a certificate checkable by plain
/// rational arithmetic:
///   Optimal    - point attains value; dual multipliers certify the bound
///                (mu >= 0 on <=-rows, free on =-rows, mu^T A = obj,
///                mu^T b = value for Max; negated objective for Min).
///   Unbounded  - feasible point plus an improving ray.
///   Infeasible - Farkas multipliers: mu^T A = 0, mu^T b < 0.
struct LpOutcome {
    LpStatus status = LpStatus::Infeasible;
    RatVec point;
    Rat value;
    RatVec ray;
    RatVec farkas;
    RatVec dual;
};

/// Simplex over exact rationals with Bland's rule; two-phase feasibility.
LpOutcome lp_solve(const LpProblem &p);

/// Convenience: feasibility of a row system. Returns a feasible point or
/// nothing.
std::optional<RatVec> lp_feasible_point(int n, const std::vector<LpRow> &rows);

/// Maximize obj over the rows. Returns outcome (Optimal/Unbounded/Infeasible).
LpOutcome lp_maximize(int n, const std::vector<LpRow> &rows, const RatVec &obj);
LpOutcome lp_minimize(int n, const std::vector<LpRow> &rows, const RatVec &obj);

} // namespace linterm
