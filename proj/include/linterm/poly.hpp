/*
 * Copyright (c) 2026, the linterm authors
 *
 * SPDX-License-Identifier: MIT
 */

#pragma once

#include "linterm/errors.hpp"
#include "linterm/linexpr.hpp"
#include "linterm/lp.hpp"

#include <optional>
#include <vector>

namespace linterm {

/// Convex polyhedron in H-representation: a conjunction of rows
/// `expr <= 0` / `expr = 0` over variables 0..dim-1.
class Poly {
public:
    Poly() : dim_(0) {}
    explicit Poly(int dim) : dim_(dim) {}
    Poly(int dim, std::vector<Ineq> rows) : dim_(dim) {
        for (auto &r : rows) add(std::move(r));
    }

    int dim() const { return dim_; }
    const std::vector<Ineq> &rows() const { return rows_; }
    bool trivially_true() const { return rows_.empty(); }

    void add(Ineq r) {
        if (r.expr.min_dim() > dim_)
            throw ArityError("constraint references variable beyond dimension");
        rows_.push_back(std::move(r));
    }
    void add_all(const Poly &other) {
        if (other.dim_ > dim_) throw ArityError("meet of mismatched dimensions");
        for (const auto &r : other.rows_) rows_.push_back(r);
    }

    /// The <=-only view: equalities expanded into two inequalities.
    std::vector<LinExpr> ineq_view() const {
        std::vector<LinExpr> v;
        for (const auto &r : rows_) {
            v.push_back(r.expr);
            if (r.rel == Rel::Eq) {
                LinExpr neg = r.expr;
                neg *= Rat(-1);
                v.push_back(neg);
            }
        }
        return v;
    }

    std::vector<LpRow> lp_rows() const {
        std::vector<LpRow> v;
        for (const auto &r : rows_) {
            LpRow row;
            row.a = r.expr.dense(dim_);
            row.b = -r.expr.constant();
            row.eq = r.rel == Rel::Eq;
            v.push_back(std::move(row));
        }
        return v;
    }

    bool contains(const RatVec &point) const {
        for (const auto &r : rows_)
            if (!r.sat(point)) return false;
        return true;
    }

    /// Canonical empty polyhedron of the given dimension (0 <= -1).
    static Poly empty(int dim) {
        Poly p(dim);
        p.add(Ineq::le(LinExpr(Rat(1))));
        return p;
    }

    static Poly whole(int dim) { return Poly(dim); }

    std::string str(const std::vector<std::string> &names) const;

private:
    int dim_;
    std::vector<Ineq> rows_;
};

/// Generator representation: conv(vertices) + cone(rays). Lines are stored
/// as two opposite rays.
struct GenRep {
    int dim = 0;
    std::vector<RatVec> vertices;
    std::vector<RatVec> rays;

    bool contains(const RatVec &point) const; // membership by LP
};

/// Nonnegative multipliers over the <=-view rows proving entailment:
/// mu^T A = lambda and mu^T c <= lambda_0.
struct FarkasCert {
    RatVec mu;
};

bool is_empty(const Poly &p);
std::optional<RatVec> feasible_point(const Poly &p);

/// Entailment of `q.expr <= 0` (or the two sides of an equality) by P.
/// Returns the certificate over P.ineq_view() rows, or nothing when not
/// entailed. Throws EmptyInput when P is empty.
std::optional<FarkasCert> entails(const Poly &p, const Ineq &q);

/// Entailment without the emptiness precondition; empty P entails anything.
bool entails_unchecked(const Poly &p, const Ineq &q);

/// All rows of q entailed by p.
bool entails_all(const Poly &p, const Poly &q);

/// Mutual entailment (same point set).
bool same_set(const Poly &a, const Poly &b);

/// Exact projection onto the listed variables (result dimension =
/// keep.size(), result var i = keep[i]). Fourier-Motzkin with per-step
/// redundancy elimination.
Poly project(const Poly &p, const std::vector<VarId> &keep);

/// Remaps variable i to map[i]; rows referencing unmapped vars are rejected.
Poly rename(const Poly &p, const std::vector<VarId> &map, int new_dim);

/// Drops rows entailed by the remaining ones.
Poly remove_redundant(const Poly &p);

GenRep to_generators(const Poly &p); // throws EmptyInput
Poly to_constraints(const GenRep &g);

/// {y | Ay <= 0}.
Poly recession_cone(const Poly &p);

/// conv(P intersect Z^n), exactly; throws ResourceLimit past the candidate
/// cap. Empty result is the canonical empty polyhedron.
Poly integer_hull(const Poly &p, long candidate_cap = 1000000);

/// Some integer point of P, or nothing (a definite absence proof) within the
/// node cap; throws ResourceLimit when the cap is hit.
std::optional<RatVec> integer_point(const Poly &p, long node_cap = 20000);

/// A point strictly inside every row that is not an implicit equality of P.
/// Average of per-row max-slack LP optima. Throws EmptyInput.
RatVec relative_interior_point(const Poly &p);

/// Lattice points of P inside the per-dimension bounds [lo, hi]. The
/// OpenMP variant splits the leading dimension; both produce the same set.
std::vector<RatVec> lattice_points_serial(const Poly &p, const std::vector<mpz_class> &lo,
                                          const std::vector<mpz_class> &hi, long cap);
std::vector<RatVec> lattice_points_parallel(const Poly &p, const std::vector<mpz_class> &lo,
                                            const std::vector<mpz_class> &hi, long cap);

} // namespace linterm
