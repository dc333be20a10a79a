/*
 * Copyright (c) 2026, the linterm authors
 *
 * SPDX-License-Identifier: MIT
 */

#include "linterm/poly.hpp"

#include <atomic>
#include <algorithm>
#include <set>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace linterm {

namespace {

// LP bounds of variable d over P with a prefix of variables already fixed.
// Returns false when the restriction is infeasible.
bool var_bounds(const Poly &p, const std::vector<Rat> &prefix, int d, const mpz_class &lo0,
                const mpz_class &hi0, mpz_class &lo, mpz_class &hi) {
    std::vector<LpRow> rows = p.lp_rows();
    for (size_t i = 0; i < prefix.size(); ++i) {
        LpRow r;
        r.a.assign(p.dim(), Rat(0));
        r.a[i] = Rat(1);
        r.b = prefix[i];
        r.eq = true;
        rows.push_back(std::move(r));
    }
    RatVec obj(p.dim(), Rat(0));
    obj[d] = Rat(1);
    LpOutcome mn = lp_minimize(p.dim(), rows, obj);
    if (mn.status == LpStatus::Infeasible) return false;
    LpOutcome mx = lp_maximize(p.dim(), rows, obj);
    lo = lo0;
    hi = hi0;
    if (mn.status == LpStatus::Optimal) {
        mpz_class c = mn.value.ceil();
        if (c > lo) lo = c;
    }
    if (mx.status == LpStatus::Optimal) {
        mpz_class f = mx.value.floor();
        if (f < hi) hi = f;
    }
    return lo <= hi;
}

struct LatticeCap : ResourceLimit {
    LatticeCap() : ResourceLimit("lattice enumeration cap exceeded") {}
};

void lattice_rec(const Poly &p, const std::vector<mpz_class> &lo, const std::vector<mpz_class> &hi,
                 std::vector<Rat> &prefix, long cap, long &count, std::vector<RatVec> &out) {
    int d = static_cast<int>(prefix.size());
    if (d == p.dim()) {
        out.push_back(prefix);
        return;
    }
    mpz_class a, b;
    if (!var_bounds(p, prefix, d, lo[d], hi[d], a, b)) return;
    for (mpz_class v = a; v <= b; ++v) {
        if (++count > cap) throw LatticeCap();
        prefix.emplace_back(v);
        lattice_rec(p, lo, hi, prefix, cap, count, out);
        prefix.pop_back();
    }
}

} // namespace

std::vector<RatVec> lattice_points_serial(const Poly &p, const std::vector<mpz_class> &lo,
                                          const std::vector<mpz_class> &hi, long cap) {
    std::vector<RatVec> out;
    if (p.dim() == 0) return out;
    std::vector<Rat> prefix;
    long count = 0;
    lattice_rec(p, lo, hi, prefix, cap, count, out);
    return out;
}

std::vector<RatVec> lattice_points_parallel(const Poly &p, const std::vector<mpz_class> &lo,
                                            const std::vector<mpz_class> &hi, long cap) {
    if (p.dim() == 0) return {};
    mpz_class a, b;
    {
        std::vector<Rat> none;
        if (!var_bounds(p, none, 0, lo[0], hi[0], a, b)) return {};
    }
    mpz_class width = b - a + 1;
    if (!width.fits_slong_p() || width.get_si() <= 1) return lattice_points_serial(p, lo, hi, cap);
    long w = width.get_si();

    std::vector<std::vector<RatVec>> parts(static_cast<size_t>(w));
    std::atomic<long> count{0};
    std::atomic<bool> capped{false};
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < w; ++i) {
        if (capped.load()) continue;
        mpz_class v = a + i;
        std::vector<Rat> prefix{Rat(v)};
        long local = 0;
        std::vector<RatVec> got;
        try {
            // Per-branch budget: the shared counter keeps the global cap exact
            // enough while branches stay independent.
            long budget = cap - count.load();
            if (budget <= 0) throw LatticeCap();
            lattice_rec(p, lo, hi, prefix, budget, local, got);
        } catch (const LatticeCap &) {
            capped.store(true);
        }
        count += local + 1;
        if (count.load() > cap) capped.store(true);
        parts[static_cast<size_t>(i)] = std::move(got);
    }
    if (capped.load()) throw LatticeCap();
    std::vector<RatVec> out;
    for (auto &p2 : parts)
        for (auto &pt : p2) out.push_back(std::move(pt));
    return out;
}

Poly integer_hull(const Poly &p, long candidate_cap) {
    int n = p.dim();
    if (n == 0) return Poly(0);
    Poly t = remove_redundant(p);
    if (is_empty(t)) return Poly::empty(n);
    GenRep g = to_generators(t);
    std::vector<RatVec> rays;
    {
        std::set<std::string> seen;
        for (const auto &r : g.rays) {
            RatVec pr = primitive(r);
            std::string k;
            for (const auto &c : pr) k += c.str() + ",";
            if (seen.insert(k).second) rays.push_back(std::move(pr));
        }
    }
    // Candidate box: vertex bounding box widened by the ray zonotope, the
    // bounded region whose lattice points generate the full hull.
    std::vector<mpz_class> lo(n), hi(n);
    for (int d = 0; d < n; ++d) {
        Rat mn = g.vertices[0][d], mx = g.vertices[0][d];
        for (const auto &v : g.vertices) {
            if (v[d] < mn) mn = v[d];
            if (v[d] > mx) mx = v[d];
        }
        for (const auto &r : rays) {
            if (r[d].sign() < 0) mn += r[d];
            if (r[d].sign() > 0) mx += r[d];
        }
        lo[d] = mn.ceil();
        hi[d] = mx.floor();
    }
    std::vector<RatVec> pts = lattice_points_parallel(t, lo, hi, candidate_cap);
    if (pts.empty()) return Poly::empty(n);
    GenRep hull;
    hull.dim = n;
    hull.vertices = std::move(pts);
    hull.rays = std::move(rays);
    return to_constraints(hull);
}

std::optional<RatVec> integer_point(const Poly &p, long node_cap) {
    if (p.dim() == 0) return RatVec{};
    std::vector<Poly> stack{remove_redundant(p)};
    long nodes = 0;
    while (!stack.empty()) {
        if (++nodes > node_cap) throw ResourceLimit("integer_point: branch-and-bound cap");
        Poly cur = std::move(stack.back());
        stack.pop_back();
        auto pt = feasible_point(cur);
        if (!pt) continue;
        int frac = -1;
        for (int d = 0; d < cur.dim(); ++d) {
            if (!(*pt)[d].is_integer()) {
                frac = d;
                break;
            }
        }
        if (frac < 0) return pt;
        mpz_class fl = (*pt)[frac].floor();
        Poly below = cur, above = cur;
        {
            LinExpr e = LinExpr::var(frac);
            e.set_constant(Rat(mpz_class(-fl)));
            below.add(Ineq::le(e)); // x_d <= floor
        }
        {
            LinExpr e = LinExpr::var(frac, Rat(-1));
            e.set_constant(Rat(mpz_class(fl + 1)));
            above.add(Ineq::le(e)); // x_d >= floor+1
        }
        stack.push_back(std::move(above));
        stack.push_back(std::move(below));
    }
    return std::nullopt;
}

} // namespace linterm
