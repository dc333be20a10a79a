/*
 * Copyright (c) 2026, the linterm authors
 *
 * SPDX-License-Identifier: MIT
 */

#include "linterm/transition.hpp"

namespace linterm {

TransRel identity_rel(int n) {
    Poly p(2 * n);
    for (int i = 0; i < n; ++i) {
        LinExpr e = LinExpr::var(i);
        e.add_term(n + i, Rat(-1));
        p.add(Ineq::eq(e)); // x_i - x'_i = 0
    }
    return TransRel(n, std::move(p));
}

TransRel compose(const TransRel &q1, const TransRel &q2) {
    if (q1.n != q2.n) throw ArityError("compose: mismatched variable counts");
    int n = q1.n;
    // Shared mid variables z at ids n..2n-1 of a 3n-space (x, z, x'').
    Poly joint(3 * n);
    joint.add_all(rename(q1.rel, [&] {
        std::vector<VarId> m(2 * n);
        for (int i = 0; i < 2 * n; ++i) m[i] = i;
        return m;
    }(), 3 * n));
    joint.add_all(rename(q2.rel, [&] {
        std::vector<VarId> m(2 * n);
        for (int i = 0; i < n; ++i) m[i] = n + i;
        for (int i = 0; i < n; ++i) m[n + i] = 2 * n + i;
        return m;
    }(), 3 * n));
    std::vector<VarId> keep;
    for (int i = 0; i < n; ++i) keep.push_back(i);
    for (int i = 0; i < n; ++i) keep.push_back(2 * n + i);
    return TransRel(n, project(joint, keep));
}

Poly enabled_states(const TransRel &q) {
    std::vector<VarId> keep;
    for (int i = 0; i < q.n; ++i) keep.push_back(i);
    return project(q.rel, keep);
}

Poly post_states(const TransRel &q) {
    std::vector<VarId> keep;
    for (int i = 0; i < q.n; ++i) keep.push_back(q.n + i);
    return project(q.rel, keep);
}

std::vector<LinExpr> AffineView::update_exprs() const {
    int n = static_cast<int>(offset.size());
    std::vector<LinExpr> out;
    for (int i = 0; i < n; ++i) {
        LinExpr e(offset[i]);
        for (int j = 0; j < n; ++j) e.add_term(j, matrix[i][j]);
        out.push_back(std::move(e));
    }
    return out;
}

RatVec AffineView::apply(const RatVec &x) const {
    int n = static_cast<int>(offset.size());
    RatVec y(n, Rat(0));
    for (int i = 0; i < n; ++i) {
        y[i] = offset[i];
        for (int j = 0; j < n; ++j) y[i] += matrix[i][j] * x[j];
    }
    return y;
}

namespace {

// Implicit-equality rows of p: rows whose slack maximum over p is zero.
// Explicit equality rows are included as-is.
std::vector<LinExpr> affine_hull_rows(const Poly &p) {
    std::vector<LinExpr> eqs;
    for (const auto &r : p.rows()) {
        if (r.rel == Rel::Eq) {
            eqs.push_back(r.expr);
            continue;
        }
        LinExpr neg = r.expr;
        neg *= Rat(-1);
        if (entails_unchecked(p, Ineq::le(neg))) eqs.push_back(r.expr);
    }
    return eqs;
}

} // namespace

std::optional<AffineView> as_affine(const TransRel &q) {
    int n = q.n;
    if (is_empty(q.rel)) return std::nullopt;
    std::vector<LinExpr> eqs = affine_hull_rows(q.rel);
    // Gaussian elimination with x' columns as preferred pivots, so that each
    // x'_i becomes an expression over x alone when the relation pins it.
    std::vector<LinExpr> rows = eqs;
    std::vector<int> pivot_of(n, -1);
    std::vector<LinExpr> solved(n);
    for (int i = 0; i < n; ++i) {
        int col = n + i;
        int found = -1;
        for (size_t r = 0; r < rows.size(); ++r) {
            if (!rows[r].coeff(col).is_zero()) { found = static_cast<int>(r); break; }
        }
        if (found < 0) continue;
        LinExpr row = rows[found];
        rows.erase(rows.begin() + found);
        Rat c = row.coeff(col);
        LinExpr repl = row;
        repl.set_coeff(col, Rat(0));
        repl *= -c.inv(); // x'_i = repl
        for (auto &r2 : rows) r2 = r2.substituted(col, repl);
        for (int j = 0; j < n; ++j)
            if (pivot_of[j] >= 0) solved[j] = solved[j].substituted(col, repl);
        pivot_of[i] = 1;
        solved[i] = repl;
    }
    for (int i = 0; i < n; ++i) {
        if (pivot_of[i] < 0) return std::nullopt;
        // The update must reference current-state variables only.
        for (const auto &[v, c] : solved[i].terms())
            if (v >= n) return std::nullopt;
    }
    AffineView av;
    av.guard = enabled_states(q);
    av.offset.assign(n, Rat(0));
    av.matrix.assign(n, RatVec(n, Rat(0)));
    for (int i = 0; i < n; ++i) {
        av.offset[i] = solved[i].constant();
        for (int j = 0; j < n; ++j) av.matrix[i][j] = solved[i].coeff(j);
    }
    return av;
}

Poly substitute_update(const Poly &rows_2n, int n, const AffineView &av) {
    std::vector<LinExpr> upd = av.update_exprs();
    Poly out(n);
    for (const auto &r : rows_2n.rows()) {
        LinExpr e = r.expr;
        for (int i = 0; i < n; ++i) e = e.substituted(n + i, upd[i]);
        out.add(Ineq{e, r.rel});
    }
    return out;
}

} // namespace linterm
