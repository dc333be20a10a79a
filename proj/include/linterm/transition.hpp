/*
 * Copyright (c) 2026, the linterm authors
 *
 * SPDX-License-Identifier: MIT
 */

#pragma once

#include "linterm/poly.hpp"

#include <optional>

namespace linterm {

/// One program step: a polyhedron over (x, x') with x = vars 0..n-1 and
/// x' = vars n..2n-1.
struct TransRel {
    int n = 0;
    Poly rel; // dim 2n

    TransRel() = default;
    TransRel(int n_, Poly rel_) : n(n_), rel(std::move(rel_)) {
        if (rel.dim() != 2 * n) throw ArityError("TransRel: relation must have dimension 2n");
    }
};

/// The identity step x' = x.
TransRel identity_rel(int n);

/// Exact relational composition: first q1, then q2.
TransRel compose(const TransRel &q1, const TransRel &q2);

/// States with at least one successor (projection onto x).
Poly enabled_states(const TransRel &q);

/// Projection onto x'.
Poly post_states(const TransRel &q);

/// Deterministic affine update x' = A x + d with guard over x.
struct AffineView {
    Poly guard;                  // dim n
    std::vector<RatVec> matrix;  // n rows of n coefficients
    RatVec offset;               // length n

    bool is_integral() const {
        for (const auto &row : matrix)
            for (const auto &c : row)
                if (!c.is_integer()) return false;
        for (const auto &c : offset)
            if (!c.is_integer()) return false;
        return true;
    }

    /// A x + d as expressions over x.
    std::vector<LinExpr> update_exprs() const;

    RatVec apply(const RatVec &x) const;
};

/// Extracts the affine-update view when every x'_i is pinned by implied
/// equalities of the relation; otherwise nothing.
std::optional<AffineView> as_affine(const TransRel &q);

/// Substitutes x' := A x + d into a polyhedron over (x, x') or over x'
/// (rows referencing only x'), producing a system over x.
Poly substitute_update(const Poly &rows_2n, int n, const AffineView &av);

} // namespace linterm
