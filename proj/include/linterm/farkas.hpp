/*
 * Copyright (c) 2026, the linterm authors
 *
 * SPDX-License-Identifier: MIT
 */

#pragma once

#include "linterm/poly.hpp"

#include <map>

namespace linterm {

/// Linear combination of LP unknowns plus a constant, used to express
/// template coefficients inside Farkas systems.
struct Comb {
    std::map<int, Rat> terms;
    Rat k;

    Comb() = default;
    explicit Comb(Rat c) : k(std::move(c)) {}
    static Comb of_var(int v, Rat c = Rat(1)) {
        Comb r;
        r.terms[v] = std::move(c);
        return r;
    }
    Comb &operator+=(const Comb &o) {
        for (const auto &[v, c] : o.terms) add(v, c);
        k += o.k;
        return *this;
    }
    void add(int v, const Rat &c) {
        auto it = terms.find(v);
        Rat s = (it == terms.end() ? Rat(0) : it->second) + c;
        if (s.is_zero())
            terms.erase(v);
        else
            terms[v] = s;
    }
    Comb negated() const {
        Comb r;
        for (const auto &[v, c] : terms) r.terms[v] = -c;
        r.k = -k;
        return r;
    }
};

/// Incremental builder for LP problems whose rows are Farkas-style
/// entailment blocks: fresh nonnegative multipliers per block, equality of
/// combined coefficients with a target combination per variable, and a
/// bound on the combined constants.
class FarkasBuilder {
public:
    /// Allocates `count` fresh unknowns; returns the first index.
    int alloc(int count) {
        int base = nvars_;
        nvars_ += count;
        return base;
    }

    /// Adds the block "P entails target(x) <= target_rhs" where target gives
    /// per-variable coefficient combinations. Returns the multiplier base.
    int add_entailment(const Poly &p, const std::vector<Comb> &target_coeffs,
                       const Comb &target_rhs) {
        auto view = p.ineq_view();
        int m = static_cast<int>(view.size());
        int base = alloc(m);
        for (int i = 0; i < m; ++i) add_lower_bound(base + i, Rat(0));
        for (int v = 0; v < p.dim(); ++v) {
            Comb lhs;
            for (int i = 0; i < m; ++i) {
                Rat a = view[i].coeff(v);
                if (!a.is_zero()) lhs.add(base + i, a);
            }
            add_eq(lhs, target_coeffs[v]);
        }
        Comb consts;
        for (int i = 0; i < m; ++i) {
            Rat c = -view[i].constant();
            if (!c.is_zero()) consts.add(base + i, c);
        }
        add_le(consts, target_rhs);
        return base;
    }

    void add_lower_bound(int var, const Rat &bound) {
        LpRow r;
        r.a.assign(var + 1, Rat(0));
        r.a[var] = Rat(-1);
        r.b = -bound;
        rows_.push_back(std::move(r));
    }

    void add_le(const Comb &lhs, const Comb &rhs) { add_row(lhs, rhs, false); }
    void add_eq(const Comb &lhs, const Comb &rhs) { add_row(lhs, rhs, true); }

    /// Feasibility solve; returns an assignment or nothing.
    std::optional<RatVec> solve() const {
        auto rows = padded();
        return lp_feasible_point(nvars_, rows);
    }

    /// The feasible region as a polyhedron over the allocated unknowns.
    Poly feasible_set() const {
        Poly p(nvars_);
        for (const auto &row : padded()) {
            LinExpr e;
            for (int v = 0; v < nvars_; ++v)
                if (!row.a[v].is_zero()) e.add_term(v, row.a[v]);
            e.set_constant(-row.b);
            p.add(row.eq ? Ineq::eq(e) : Ineq::le(e));
        }
        return p;
    }

    /// Maximize the objective combination; pads rows first.
    LpOutcome maximize(const Comb &obj) const {
        auto rows = padded();
        RatVec cost(nvars_, Rat(0));
        for (const auto &[v, c] : obj.terms) cost[v] = c;
        return lp_maximize(nvars_, rows, cost);
    }

    int var_count() const { return nvars_; }

private:
    void add_row(const Comb &lhs, const Comb &rhs, bool eq) {
        // lhs <= rhs  ->  lhs - rhs <= rhs.k - lhs.k
        LpRow r;
        r.a.assign(nvars_, Rat(0));
        auto put = [&](int v, const Rat &c) {
            if (v >= static_cast<int>(r.a.size())) r.a.resize(v + 1, Rat(0));
            r.a[v] += c;
        };
        for (const auto &[v, c] : lhs.terms) put(v, c);
        for (const auto &[v, c] : rhs.terms) put(v, -c);
        r.b = rhs.k - lhs.k;
        r.eq = eq;
        rows_.push_back(std::move(r));
    }

    std::vector<LpRow> padded() const {
        std::vector<LpRow> rows = rows_;
        for (auto &r : rows) r.a.resize(nvars_, Rat(0));
        return rows;
    }

    int nvars_ = 0;
    std::vector<LpRow> rows_;
};

/// Builds the affine function c.x + k from an LP solution slice
/// [base, base+n) with constant at index `const_idx`.
inline LinExpr expr_of_solution(const RatVec &sol, int base, int n, int const_idx) {
    LinExpr e;
    for (int i = 0; i < n; ++i) e.add_term(i, sol[base + i]);
    e.set_constant(sol[const_idx]);
    return e;
}

} // namespace linterm
