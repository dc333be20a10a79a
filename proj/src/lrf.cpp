/*
 * Copyright (c) 2026, the linterm authors
 *
 * SPDX-License-Identifier: MIT
 */

#include "linterm/lrf.hpp"

#include "linterm/farkas.hpp"

namespace linterm {

namespace {

// Dense matrix slices of a transition polyhedron's <=-view: A (x columns),
// A' (x' columns), c (right-hand sides).
struct Slices {
    std::vector<RatVec> a, ap;
    RatVec c;
};

Slices slices_of(const Poly &rel, int n) {
    Slices s;
    for (const auto &e : rel.ineq_view()) {
        RatVec row = e.dense(2 * n);
        s.a.emplace_back(row.begin(), row.begin() + n);
        s.ap.emplace_back(row.begin() + n, row.end());
        s.c.push_back(-e.constant());
    }
    return s;
}

// The two-certificate reduction for a single path, with lambda eliminated:
//   mu A' = 0, (mu - eta) A = 0, eta (A + A') = 0, eta c <= -1, mu, eta >= 0
// and then rho = -(mu A) x + mu c.
std::optional<LinExpr> lrf_single_path(const TransRel &q) {
    int n = q.n;
    Slices s = slices_of(q.rel, n);
    int m = static_cast<int>(s.c.size());
    FarkasBuilder fb;
    int mu = fb.alloc(m);
    int eta = fb.alloc(m);
    for (int i = 0; i < m; ++i) {
        fb.add_lower_bound(mu + i, Rat(0));
        fb.add_lower_bound(eta + i, Rat(0));
    }
    for (int v = 0; v < n; ++v) {
        Comb mu_ap, mu_a, eta_a, eta_sum;
        for (int i = 0; i < m; ++i) {
            if (!s.ap[i][v].is_zero()) mu_ap.add(mu + i, s.ap[i][v]);
            if (!s.a[i][v].is_zero()) {
                mu_a.add(mu + i, s.a[i][v]);
                eta_a.add(eta + i, -s.a[i][v]);
            }
            Rat sum = s.a[i][v] + s.ap[i][v];
            if (!sum.is_zero()) eta_sum.add(eta + i, sum);
        }
        fb.add_eq(mu_ap, Comb(Rat(0)));
        Comb diff = mu_a;
        diff += eta_a; // mu A - eta A
        fb.add_eq(diff, Comb(Rat(0)));
        fb.add_eq(eta_sum, Comb(Rat(0)));
    }
    Comb eta_c;
    for (int i = 0; i < m; ++i)
        if (!s.c[i].is_zero()) eta_c.add(eta + i, s.c[i]);
    fb.add_le(eta_c, Comb(Rat(-1)));
    auto sol = fb.solve();
    if (!sol) return std::nullopt;
    LinExpr rho;
    for (int v = 0; v < n; ++v) {
        Rat coeff;
        for (int i = 0; i < m; ++i) coeff += (*sol)[mu + i] * s.a[i][v];
        rho.add_term(v, -coeff);
    }
    Rat c0;
    for (int i = 0; i < m; ++i) c0 += (*sol)[mu + i] * s.c[i];
    rho.set_constant(c0);
    return rho;
}

// Shared (lambda, lambda0) across all paths, one pair of certificate blocks
// per path.
std::optional<LinExpr> lrf_multi_path(const std::vector<TransRel> &paths, int n) {
    FarkasBuilder fb;
    int lam = fb.alloc(n);
    int lam0 = fb.alloc(1);
    for (const auto &q : paths) {
        std::vector<Comb> nonneg(2 * n), decrease(2 * n);
        for (int v = 0; v < n; ++v) {
            nonneg[v] = Comb::of_var(lam + v, Rat(-1));
            decrease[v] = Comb::of_var(lam + v, Rat(-1));
            decrease[n + v] = Comb::of_var(lam + v, Rat(1));
        }
        fb.add_entailment(q.rel, nonneg, Comb::of_var(lam0));
        fb.add_entailment(q.rel, decrease, Comb(Rat(-1)));
    }
    auto sol = fb.solve();
    if (!sol) return std::nullopt;
    return expr_of_solution(*sol, lam, n, lam0);
}

std::vector<TransRel> hulled_paths(const MlcLoop &loop) {
    std::vector<TransRel> out;
    for (const auto &q : loop.paths) {
        Poly h = integer_hull(q.rel);
        if (is_empty(h)) continue; // no integer transitions on this path
        out.emplace_back(loop.n, std::move(h));
    }
    return out;
}

bool path_entails(const TransRel &q, Domain dom, const Ineq &row) {
    if (entails_unchecked(q.rel, row)) return true;
    if (dom != Domain::Int) return false;
    Poly h = integer_hull(q.rel);
    if (is_empty(h)) return true;
    return entails_unchecked(h, row);
}

Ineq nonneg_row(const LinExpr &rho) {
    LinExpr e = rho;
    e *= Rat(-1);
    return Ineq::le(e); // -rho <= 0
}

Ineq decrease_row(const LinExpr &rho_src, const LinExpr &rho_dst, int n, const Rat &bound) {
    // rho_src(x) - rho_dst(x') >= bound
    LinExpr e(bound);
    LinExpr src = rho_src;
    src *= Rat(-1);
    e += src;
    for (const auto &[v, c] : rho_dst.terms()) e.add_term(n + v, c);
    e.set_constant(e.constant() + rho_dst.constant());
    return Ineq::le(e);
}

} // namespace

std::optional<LinExpr> synth_lrf(const MlcLoop &loop) {
    for (const auto &q : loop.paths)
        if (is_empty(q.rel)) throw EmptyPath("synth_lrf: path with no transitions");
    if (loop.paths.size() == 1) return lrf_single_path(loop.paths[0]);
    return lrf_multi_path(loop.paths, loop.n);
}

std::optional<LinExpr> synth_lrf_int(const MlcLoop &loop) {
    std::vector<TransRel> hulls = hulled_paths(loop);
    if (hulls.empty()) return LinExpr(Rat(0)); // no integer transitions at all
    if (hulls.size() == 1) return lrf_single_path(hulls[0]);
    return lrf_multi_path(hulls, loop.n);
}

std::optional<Lrf> synth_lrf_cfg(const Cfg &cfg) {
    int n = cfg.n;
    std::vector<TransRel> rels;
    std::vector<const Cfg::Edge *> live;
    for (const auto &e : cfg.edges) {
        TransRel r = e.rel;
        if (cfg.domain == Domain::Int) {
            Poly h = integer_hull(r.rel);
            if (is_empty(h)) continue;
            r = TransRel(n, std::move(h));
        } else if (is_empty(r.rel)) {
            continue;
        }
        rels.push_back(std::move(r));
        live.push_back(&e);
    }
    FarkasBuilder fb;
    int nloc = static_cast<int>(cfg.locations.size());
    std::vector<int> lam(nloc), lam0(nloc);
    for (int l = 0; l < nloc; ++l) {
        lam[l] = fb.alloc(n);
        lam0[l] = fb.alloc(1);
    }
    for (size_t i = 0; i < rels.size(); ++i) {
        int src = live[i]->src, dst = live[i]->dst;
        std::vector<Comb> nonneg(2 * n), decrease(2 * n);
        for (int v = 0; v < n; ++v) {
            nonneg[v] = Comb::of_var(lam[src] + v, Rat(-1));
            decrease[v] = Comb::of_var(lam[src] + v, Rat(-1));
            decrease[n + v] = Comb::of_var(lam[dst] + v, Rat(1));
        }
        fb.add_entailment(rels[i].rel, nonneg, Comb::of_var(lam0[src]));
        Comb rhs(Rat(-1));
        rhs.add(lam0[src], Rat(1));
        rhs.add(lam0[dst], Rat(-1));
        fb.add_entailment(rels[i].rel, decrease, rhs);
    }
    auto sol = fb.solve();
    if (!sol) return std::nullopt;
    Lrf w;
    for (int l = 0; l < nloc; ++l) w.funcs[l] = expr_of_solution(*sol, lam[l], n, lam0[l]);
    return w;
}

VerifyReport verify_lrf(const MlcLoop &loop, const LinExpr &rho, const Rat &bound) {
    VerifyReport rep;
    for (size_t i = 0; i < loop.paths.size(); ++i) {
        const auto &q = loop.paths[i];
        if (is_empty(q.rel)) continue;
        if (!path_entails(q, loop.domain, nonneg_row(rho)))
            rep.fail("path " + std::to_string(i) + ": nonnegativity fails");
        if (!path_entails(q, loop.domain, decrease_row(rho, rho, loop.n, bound)))
            rep.fail("path " + std::to_string(i) + ": decrease condition fails");
    }
    return rep;
}

VerifyReport verify_lrf_cfg(const Cfg &cfg, const Lrf &w, const Rat &bound) {
    VerifyReport rep;
    for (size_t i = 0; i < cfg.edges.size(); ++i) {
        const auto &e = cfg.edges[i];
        if (is_empty(e.rel.rel)) continue;
        if (w.funcs.find(e.src) == w.funcs.end() || w.funcs.find(e.dst) == w.funcs.end()) {
            rep.fail("edge " + std::to_string(i) + ": missing location function");
            continue;
        }
        const LinExpr &src = w.at(e.src);
        const LinExpr &dst = w.at(e.dst);
        if (!path_entails(e.rel, cfg.domain, nonneg_row(src)))
            rep.fail("edge " + std::to_string(i) + " (" + cfg.locations[e.src] + " -> " +
                     cfg.locations[e.dst] + "): nonnegativity fails");
        if (!path_entails(e.rel, cfg.domain, decrease_row(src, dst, cfg.n, bound)))
            rep.fail("edge " + std::to_string(i) + " (" + cfg.locations[e.src] + " -> " +
                     cfg.locations[e.dst] + "): decrease condition fails");
    }
    return rep;
}

} // namespace linterm
