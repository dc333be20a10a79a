/*
 * Copyright (c) 2026, the linterm authors
 *
 * SPDX-License-Identifier: MIT
 */

#include "linterm/poly.hpp"

#include <algorithm>
#include <set>

namespace linterm {

namespace {

struct DdRay {
    RatVec y;
    std::vector<char> tight; // per processed constraint
};

struct DdState {
    std::vector<RatVec> lines;
    std::vector<DdRay> rays;
    int processed = 0;
};

std::string ray_key(const RatVec &y) {
    std::string s;
    for (const auto &c : y) s += c.str() + ",";
    return s;
}

// Incremental double description for {y | d.y <= 0 for all d}: maintains the
// minimal (lines, extreme rays) pair while constraints are inserted.
void dd_insert(DdState &st, const RatVec &d) {
    int k = st.processed++;
    // A line not orthogonal to d pivots: remaining generators are projected
    // onto the hyperplane and the line itself turns into one ray.
    int pivot = -1;
    for (size_t i = 0; i < st.lines.size(); ++i) {
        if (!dot(d, st.lines[i]).is_zero()) {
            pivot = static_cast<int>(i);
            break;
        }
    }
    if (pivot >= 0) {
        RatVec lp = st.lines[pivot];
        Rat vp = dot(d, lp);
        st.lines.erase(st.lines.begin() + pivot);
        for (auto &l : st.lines) {
            Rat v = dot(d, l);
            if (!v.is_zero()) {
                Rat f = v / vp;
                for (size_t j = 0; j < l.size(); ++j) l[j] -= f * lp[j];
                l = primitive(l);
            }
        }
        for (auto &r : st.rays) {
            Rat v = dot(d, r.y);
            if (!v.is_zero()) {
                Rat f = v / vp;
                for (size_t j = 0; j < r.y.size(); ++j) r.y[j] -= f * lp[j];
                r.y = primitive(r.y);
            }
            r.tight.push_back(1);
        }
        DdRay nr;
        nr.y = vp < Rat(0) ? lp : scale(lp, Rat(-1));
        nr.y = primitive(nr.y);
        nr.tight.assign(k, 1);
        nr.tight.push_back(0);
        st.rays.push_back(std::move(nr));
        return;
    }
    std::vector<DdRay> keep;
    std::vector<size_t> plus, minus;
    for (size_t i = 0; i < st.rays.size(); ++i) {
        int s = dot(d, st.rays[i].y).sign();
        if (s > 0)
            plus.push_back(i);
        else if (s < 0)
            minus.push_back(i);
    }
    if (plus.empty()) {
        for (auto &r : st.rays) r.tight.push_back(dot(d, r.y).is_zero() ? 1 : 0);
        return;
    }
    auto adjacent = [&](const DdRay &a, const DdRay &b, std::vector<char> &meet) {
        meet.assign(k, 0);
        for (int t = 0; t < k; ++t) meet[t] = a.tight[t] && b.tight[t];
        for (const auto &r : st.rays) {
            if (&r == &a || &r == &b) continue;
            bool covers = true;
            for (int t = 0; t < k && covers; ++t)
                if (meet[t] && !r.tight[t]) covers = false;
            if (covers) return false;
        }
        return true;
    };
    std::set<std::string> seen;
    std::vector<DdRay> combos;
    std::vector<char> meet;
    for (size_t ip : plus) {
        for (size_t im : minus) {
            if (!adjacent(st.rays[ip], st.rays[im], meet)) continue;
            const RatVec &p = st.rays[ip].y;
            const RatVec &m = st.rays[im].y;
            Rat dp = dot(d, p), dm = dot(d, m);
            RatVec y(p.size(), Rat(0));
            for (size_t j = 0; j < p.size(); ++j) y[j] = dp * m[j] - dm * p[j];
            y = primitive(y);
            if (is_zero_vec(y)) continue;
            std::string key = ray_key(y);
            if (!seen.insert(key).second) continue;
            DdRay nr;
            nr.y = std::move(y);
            nr.tight = meet;
            nr.tight.push_back(1);
            combos.push_back(std::move(nr));
        }
    }
    for (size_t i = 0; i < st.rays.size(); ++i) {
        int s = dot(d, st.rays[i].y).sign();
        if (s > 0) continue;
        DdRay r = std::move(st.rays[i]);
        r.tight.push_back(s == 0 ? 1 : 0);
        keep.push_back(std::move(r));
    }
    for (auto &c : combos) keep.push_back(std::move(c));
    st.rays = std::move(keep);
}

// Generators of the cone {y in R^dim | d.y <= 0 for every d in ds}.
DdState dd_cone(int dim, const std::vector<RatVec> &ds) {
    DdState st;
    for (int i = 0; i < dim; ++i) {
        RatVec e(dim, Rat(0));
        e[i] = Rat(1);
        st.lines.push_back(std::move(e));
    }
    for (const auto &d : ds) {
        if (is_zero_vec(d)) {
            st.processed++;
            for (auto &r : st.rays) r.tight.push_back(1);
            continue;
        }
        dd_insert(st, d);
    }
    return st;
}

RatVec homogenize(const LinExpr &e, int n) {
    RatVec d = e.dense(n);
    d.push_back(e.constant());
    return d;
}

} // namespace

GenRep to_generators(const Poly &p) {
    int n = p.dim();
    std::vector<RatVec> ds;
    for (const auto &e : p.ineq_view()) ds.push_back(homogenize(e, n));
    {
        RatVec tpos(n + 1, Rat(0));
        tpos[n] = Rat(-1); // -t <= 0
        ds.push_back(std::move(tpos));
    }
    DdState st = dd_cone(n + 1, ds);
    GenRep g;
    g.dim = n;
    std::set<std::string> seen;
    auto add_ray = [&](RatVec y) {
        y = primitive(y);
        if (is_zero_vec(y)) return;
        if (seen.insert(ray_key(y)).second) g.rays.push_back(std::move(y));
    };
    for (const auto &l : st.lines) {
        // Lines satisfy -t <= 0 in both directions, so their t-part is 0.
        RatVec y(l.begin(), l.begin() + n);
        add_ray(y);
        add_ray(scale(y, Rat(-1)));
    }
    std::set<std::string> vseen;
    for (const auto &r : st.rays) {
        const Rat &t = r.y[n];
        if (t.is_zero()) {
            add_ray(RatVec(r.y.begin(), r.y.begin() + n));
        } else {
            RatVec v(n, Rat(0));
            Rat tinv = t.inv();
            for (int j = 0; j < n; ++j) v[j] = r.y[j] * tinv;
            if (vseen.insert(ray_key(v)).second) g.vertices.push_back(std::move(v));
        }
    }
    if (g.vertices.empty()) throw EmptyInput("to_generators: empty polyhedron");
    return g;
}

Poly to_constraints(const GenRep &g) {
    int n = g.dim;
    if (g.vertices.empty()) return Poly::empty(n);
    // Facets are the extreme rays of the polar cone over (a, beta):
    //   a.v - beta <= 0 for vertices, a.r <= 0 for rays.
    std::vector<RatVec> ds;
    for (const auto &v : g.vertices) {
        RatVec d(v);
        d.push_back(Rat(-1));
        ds.push_back(std::move(d));
    }
    for (const auto &r : g.rays) {
        RatVec d(r);
        d.push_back(Rat(0));
        ds.push_back(std::move(d));
    }
    DdState st = dd_cone(n + 1, ds);
    Poly out(n);
    auto row_of = [&](const RatVec &y) {
        LinExpr e;
        for (int j = 0; j < n; ++j) e.add_term(j, y[j]);
        e.set_constant(-y[n]);
        return e; // a.x - beta <= 0
    };
    for (const auto &l : st.lines) {
        RatVec a(l.begin(), l.begin() + n);
        if (is_zero_vec(a)) continue;
        out.add(Ineq::eq(row_of(l)));
    }
    for (const auto &r : st.rays) {
        RatVec a(r.y.begin(), r.y.begin() + n);
        if (is_zero_vec(a)) continue; // 0 <= beta tautology
        out.add(Ineq::le(row_of(r.y)));
    }
    return remove_redundant(out);
}

bool GenRep::contains(const RatVec &point) const {
    size_t nv = vertices.size(), nr = rays.size();
    int m = static_cast<int>(nv + nr);
    if (m == 0) return false;
    std::vector<LpRow> rows;
    for (int j = 0; j < dim; ++j) {
        LpRow r;
        r.a.assign(m, Rat(0));
        for (size_t i = 0; i < nv; ++i) r.a[i] = vertices[i][j];
        for (size_t i = 0; i < nr; ++i) r.a[nv + i] = rays[i][j];
        r.b = point[j];
        r.eq = true;
        rows.push_back(std::move(r));
    }
    LpRow sum;
    sum.a.assign(m, Rat(0));
    for (size_t i = 0; i < nv; ++i) sum.a[i] = Rat(1);
    sum.b = Rat(1);
    sum.eq = true;
    rows.push_back(std::move(sum));
    for (int i = 0; i < m; ++i) {
        LpRow r;
        r.a.assign(m, Rat(0));
        r.a[i] = Rat(-1);
        r.b = Rat(0);
        rows.push_back(std::move(r));
    }
    return lp_feasible_point(m, rows).has_value();
}

} // namespace linterm
