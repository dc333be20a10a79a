/*
 * Copyright (c) 2026, the linterm authors
 *
 * SPDX-License-Identifier: MIT
 */

#include "linterm/sctmc.hpp"

#include "linterm/llrf.hpp"

#include <algorithm>
#include <map>
#include <set>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace linterm {

std::string SizeChangeGraph::key() const {
    std::string s;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (w[i][j]) s += std::to_string(i) + ">" + std::to_string(j) + ":" +
                              std::to_string(*w[i][j]) + ";";
    return s;
}

Poly SizeChangeGraph::to_poly(bool with_nonneg) const {
    Poly p(2 * n);
    for (int s = 0; s < n; ++s) {
        for (int d = 0; d < n; ++d) {
            if (!w[s][d]) continue;
            LinExpr e = LinExpr::var(n + d);
            e.add_term(s, Rat(-1));
            e.set_constant(Rat(-*w[s][d])); // x'_d - x_s - delta <= 0
            p.add(Ineq::le(e));
        }
    }
    if (with_nonneg) {
        for (int i = 0; i < 2 * n; ++i) {
            LinExpr e = LinExpr::var(i, Rat(-1));
            p.add(Ineq::le(e));
        }
    }
    return p;
}

SizeChangeGraph graph_of(const TransRel &q, bool sct_only) {
    SizeChangeGraph g(q.n);
    for (const auto &e : q.rel.ineq_view()) {
        // Accept -x_i <= 0; everything else must be x'_d - x_s <= delta.
        const auto &terms = e.terms();
        if (terms.size() == 1) {
            auto [v, c] = *terms.begin();
            if (c == Rat(-1) && e.constant().is_zero()) continue; // x_v >= 0
            throw FlavorError("size-change graphs admit only bound constraints");
        }
        if (terms.size() != 2) throw FlavorError("size-change graphs admit only bound constraints");
        auto it = terms.begin();
        auto [v1, c1] = *it;
        ++it;
        auto [v2, c2] = *it;
        int primed = -1, plain = -1;
        if (v1 < q.n && v2 >= q.n && c1 == Rat(-1) && c2 == Rat(1)) {
            plain = v1;
            primed = v2 - q.n;
        } else if (v1 >= q.n && v2 < q.n) {
            throw FlavorError("size-change rows are ordered x then x'"); // map order makes this dead
        }
        if (primed < 0 || plain < 0)
            throw FlavorError("size-change graphs admit only bound constraints");
        Rat delta = -e.constant();
        if (!delta.is_integer()) throw FlavorError("size-change deltas must be integers");
        long d = static_cast<long>(delta.num().get_si());
        if (sct_only && (d < -1 || d > 0))
            throw FlavorError("size-change composition requires deltas in {0,-1}");
        g.arc(plain, primed, d);
    }
    return g;
}

DsctDecision dsct_wellfounded(const SizeChangeGraph &g) {
    int n = g.n;
    int nodes = 2 * n; // 0..n-1 plain, n..2n-1 primed
    const long inf = std::numeric_limits<long>::max() / 4;
    struct Arc {
        int from, to;
        long w;
    };
    std::vector<Arc> arcs;
    for (int s = 0; s < n; ++s)
        for (int d = 0; d < n; ++d)
            if (g.w[s][d]) arcs.push_back({s, n + d, *g.w[s][d]});
    for (int i = 0; i < n; ++i) arcs.push_back({n + i, i, 0}); // backward
    std::vector<long> dist(nodes, 0);
    std::vector<int> pred(nodes, -1);
    int improved_at = -1;
    // n-pass relaxation over the 2n nodes, plus one improvement probe.
    for (int pass = 0; pass <= nodes; ++pass) {
        bool changed = false;
        for (const auto &a : arcs) {
            if (dist[a.from] >= inf) continue;
            if (dist[a.from] + a.w < dist[a.to]) {
                dist[a.to] = dist[a.from] + a.w;
                pred[a.to] = a.from;
                changed = true;
                if (pass == nodes) improved_at = a.to;
            }
        }
        if (!changed) break;
    }
    DsctDecision out;
    if (improved_at >= 0) {
        // Reconstruct a negative cycle through min-plus powers: the shortest
        // negative closed walk (fewest arcs over all base vertices) cannot
        // revisit a vertex, so it is a simple cycle.
        std::vector<std::vector<long>> adj(nodes, std::vector<long>(nodes, inf));
        for (const auto &a : arcs) adj[a.from][a.to] = std::min(adj[a.from][a.to], a.w);
        std::vector<std::vector<std::vector<long>>> pw(
            static_cast<size_t>(nodes) + 1,
            std::vector<std::vector<long>>(nodes, std::vector<long>(nodes, inf)));
        for (int v = 0; v < nodes; ++v) pw[0][v][v] = 0;
        int best_v = -1, best_k = -1;
        for (int k = 1; k <= nodes && best_v < 0; ++k) {
            for (int u = 0; u < nodes; ++u)
                for (int mid = 0; mid < nodes; ++mid) {
                    if (pw[k - 1][u][mid] >= inf) continue;
                    for (int v = 0; v < nodes; ++v) {
                        if (adj[mid][v] >= inf) continue;
                        long w = pw[k - 1][u][mid] + adj[mid][v];
                        if (w < pw[k][u][v]) pw[k][u][v] = w;
                    }
                }
            for (int v = 0; v < nodes; ++v)
                if (pw[k][v][v] < 0) {
                    best_v = v;
                    best_k = k;
                    break;
                }
        }
        if (best_v < 0) throw std::logic_error("dsct_wellfounded: detection disagreement");
        std::set<int> vars;
        int cur = best_v;
        for (int k = best_k; k > 0; --k) {
            // Find the predecessor on the optimal walk.
            int prev = -1;
            for (int u = 0; u < nodes; ++u) {
                if (pw[k - 1][best_v][u] >= inf || adj[u][cur] >= inf) continue;
                if (pw[k - 1][best_v][u] + adj[u][cur] == pw[k][best_v][cur]) {
                    prev = u;
                    break;
                }
            }
            if (prev < 0) throw std::logic_error("dsct_wellfounded: reconstruction failed");
            if (prev < n) vars.insert(prev);
            cur = prev;
        }
        out.wf = true;
        out.lrf_vars.assign(vars.begin(), vars.end());
        return out;
    }
    // No negative cycle: the shifted distances stutter.
    long lo = 0;
    for (int i = 0; i < n; ++i) lo = std::min(lo, dist[i]);
    out.wf = false;
    for (int i = 0; i < n; ++i) out.point.emplace_back(dist[i] - lo);
    return out;
}

SizeChangeGraph sct_compose(const SizeChangeGraph &a, const SizeChangeGraph &b) {
    if (!a.sct_flavored() || !b.sct_flavored())
        throw FlavorError("sct_compose: deltas must lie in {0,-1}");
    SizeChangeGraph g = dsct_compose(a, b, -1, 0);
    return g;
}

SizeChangeGraph dsct_compose(const SizeChangeGraph &a, const SizeChangeGraph &b, long floor_w,
                             long ceil_w) {
    if (a.n != b.n) throw ArityError("compose: mismatched variable counts");
    SizeChangeGraph g(a.n);
    for (int s = 0; s < a.n; ++s) {
        for (int mid = 0; mid < a.n; ++mid) {
            if (!a.w[s][mid]) continue;
            for (int d = 0; d < a.n; ++d) {
                if (!b.w[mid][d]) continue;
                long w = *a.w[s][mid] + *b.w[mid][d];
                if (w < floor_w) w = floor_w;
                if (w > ceil_w) continue; // too weak to matter
                g.arc(s, d, w);
            }
        }
    }
    return g;
}

std::string McRelation::key() const {
    std::string s;
    for (int u = 0; u < 2 * n; ++u)
        for (int v = 0; v < 2 * n; ++v)
            if (ge[u][v]) s += std::to_string(u) + ">" + std::to_string(v) + ":" +
                               std::to_string(*ge[u][v]) + ";";
    return s;
}

Poly McRelation::to_poly() const {
    Poly p(2 * n);
    for (int u = 0; u < 2 * n; ++u) {
        for (int v = 0; v < 2 * n; ++v) {
            if (!ge[u][v]) continue;
            // v >= u + w  <=>  u - v + w <= 0
            LinExpr e = LinExpr::var(u);
            e.add_term(v, Rat(-1));
            e.set_constant(Rat(*ge[u][v]));
            p.add(Ineq::le(e));
        }
    }
    return p;
}

namespace {

// Max-plus transitive closure of the order digraph; nullopt when a positive
// cycle (unsatisfiable system) shows up. Exact for difference constraints.
std::optional<std::vector<std::vector<std::optional<int>>>>
order_closure(std::vector<std::vector<std::optional<int>>> d) {
    size_t m = d.size();
    for (size_t k = 0; k < m; ++k) {
        for (size_t i = 0; i < m; ++i) {
            if (!d[i][k]) continue;
            for (size_t j = 0; j < m; ++j) {
                if (!d[k][j]) continue;
                int w = std::min(*d[i][k] + *d[k][j], 1); // strictness saturates
                if (!d[i][j] || *d[i][j] < w) d[i][j] = w;
            }
        }
    }
    for (size_t i = 0; i < m; ++i) {
        if (d[i][i] && *d[i][i] > 0) return std::nullopt;
        d[i][i].reset(); // reflexive entries are vacuous
    }
    return d;
}

} // namespace

std::optional<McRelation> mc_relation_of(const TransRel &q) {
    McRelation r(q.n);
    std::vector<std::vector<std::optional<int>>> d(2 * q.n,
                                                   std::vector<std::optional<int>>(2 * q.n));
    for (const auto &e : q.rel.ineq_view()) {
        const auto &terms = e.terms();
        if (terms.size() != 2) throw FlavorError("monotonicity constraints relate two variables");
        auto it = terms.begin();
        auto [v1, c1] = *it;
        ++it;
        auto [v2, c2] = *it;
        if (!((c1 == Rat(1) && c2 == Rat(-1)) || (c1 == Rat(-1) && c2 == Rat(1))))
            throw FlavorError("monotonicity constraints have unit coefficients");
        int u = c1 == Rat(1) ? v1 : v2; // u - v + k <= 0, i.e. v >= u + k
        int v = c1 == Rat(1) ? v2 : v1;
        Rat k = e.constant();
        if (!(k.is_zero() || k == Rat(1)))
            throw FlavorError("monotonicity constraints carry no offsets");
        int w = k.is_zero() ? 0 : 1;
        if (!d[u][v] || *d[u][v] < w) d[u][v] = w;
    }
    auto closed = order_closure(std::move(d));
    if (!closed) return std::nullopt;
    r.ge = std::move(*closed);
    return r;
}

std::optional<McRelation> mc_compose(const McRelation &a, const McRelation &b) {
    if (a.n != b.n) throw ArityError("mc_compose: mismatched variable counts");
    int n = a.n;
    // Three groups: x (0..n), z (n..2n), x' (2n..3n).
    std::vector<std::vector<std::optional<int>>> d(3 * n, std::vector<std::optional<int>>(3 * n));
    auto put = [&](int u, int v, int w) {
        if (!d[u][v] || *d[u][v] < w) d[u][v] = w;
    };
    for (int u = 0; u < 2 * n; ++u)
        for (int v = 0; v < 2 * n; ++v)
            if (a.ge[u][v]) put(u, v, *a.ge[u][v]); // a over (x, z)
    auto shift = [&](int v) { return v + n; };      // b's vars shifted: x->z, x'->x'
    for (int u = 0; u < 2 * n; ++u)
        for (int v = 0; v < 2 * n; ++v)
            if (b.ge[u][v]) put(shift(u), shift(v), *b.ge[u][v]);
    auto closed = order_closure(std::move(d));
    if (!closed) return std::nullopt;
    McRelation r(n);
    auto outer = [&](int v) { return v < n ? v : v - n; }; // drop the z block
    for (int u = 0; u < 3 * n; ++u) {
        if (u >= n && u < 2 * n) continue;
        for (int v = 0; v < 3 * n; ++v) {
            if (v >= n && v < 2 * n) continue;
            if ((*closed)[u][v]) r.ge[outer(u)][outer(v)] = (*closed)[u][v];
        }
    }
    return r;
}

namespace {

// a describes a superset of b's transitions (a is the weaker constraint set).
bool graph_weaker_or_equal(const SizeChangeGraph &a, const SizeChangeGraph &b) {
    for (int s = 0; s < a.n; ++s)
        for (int d = 0; d < a.n; ++d) {
            if (!a.w[s][d]) continue;
            if (!b.w[s][d] || *b.w[s][d] > *a.w[s][d]) return false;
        }
    return true;
}

bool mc_weaker_or_equal(const McRelation &a, const McRelation &b) {
    for (int u = 0; u < 2 * a.n; ++u)
        for (int v = 0; v < 2 * a.n; ++v) {
            if (!a.ge[u][v]) continue;
            if (!b.ge[u][v] || *b.ge[u][v] < *a.ge[u][v]) return false;
        }
    return true;
}

struct WfVerdict {
    bool decided = false;
    bool wf = false;
    std::vector<LinExpr> witness;
    RatVec point;
};

WfVerdict check_self_graph(const SizeChangeGraph &g) {
    WfVerdict v;
    DsctDecision d = dsct_wellfounded(g);
    v.decided = true;
    v.wf = d.wf;
    if (d.wf) {
        LinExpr rho;
        for (int var : d.lrf_vars) rho.add_term(var, Rat(1));
        v.witness.push_back(std::move(rho));
    } else {
        v.point = d.point;
    }
    return v;
}

WfVerdict check_self_mc(const McRelation &r, int depth_cap, bool complete_cap) {
    WfVerdict v;
    Poly rel = r.to_poly();
    int n = r.n;
    // Fast refutation: a fixpoint state stutters forever.
    {
        Poly fix = rel;
        for (int i = 0; i < n; ++i) {
            LinExpr e = LinExpr::var(i);
            e.add_term(n + i, Rat(-1));
            fix.add(Ineq::eq(e));
        }
        auto pt = feasible_point(fix);
        if (pt) {
            v.decided = true;
            v.wf = false;
            v.point.assign(pt->begin(), pt->begin() + n);
            return v;
        }
    }
    MlcLoop loop;
    loop.n = n;
    loop.domain = Domain::Rat; // MC polyhedra are integral; Q suffices
    loop.paths.emplace_back(n, rel);
    for (int d = 1; d <= depth_cap; ++d) {
        auto w = synth_nlrf(loop, d);
        if (w) {
            v.decided = true;
            v.wf = true;
            v.witness = w->components;
            return v;
        }
    }
    if (complete_cap) {
        v.decided = true; // the cap is the exact bound: absence refutes
        v.wf = false;
    }
    return v;
}

} // namespace

ClosureResult closure(const Cfg &cfg, ClosureFlavor flavor, const ClosureOptions &opts) {
    ClosureResult res;
    res.flavor = flavor;
    int n = cfg.n;
    int depth_cap = opts.mc_depth_cap > 0 ? opts.mc_depth_cap : 2 * n + 1;
    if (opts.mc_complete_cap) {
        if (n > 2) throw DepthCapReached("the exact 5^(2n) cap is accepted only for n <= 2");
        depth_cap = 1;
        for (int i = 0; i < 2 * n; ++i) depth_cap *= 5;
    }

    // Antichain worklist: an element subsumed by a weaker one contributes
    // nothing (well-foundedness transfers downward along inclusion), so only
    // the weakest representatives are kept.
    std::vector<ClosureElement> pool;
    std::vector<bool> alive;
    auto weaker_eq = [&](const ClosureElement &a, const ClosureElement &b) {
        return flavor == ClosureFlavor::MC ? mc_weaker_or_equal(a.mc, b.mc)
                                           : graph_weaker_or_equal(a.graph, b.graph);
    };
    auto push = [&](ClosureElement e) -> bool {
        for (size_t i = 0; i < pool.size(); ++i) {
            if (!alive[i] || pool[i].src != e.src || pool[i].dst != e.dst) continue;
            if (weaker_eq(pool[i], e)) return false; // covered already
        }
        for (size_t i = 0; i < pool.size(); ++i) {
            if (!alive[i] || pool[i].src != e.src || pool[i].dst != e.dst) continue;
            if (weaker_eq(e, pool[i])) alive[i] = false; // strictly stronger leftovers
        }
        pool.push_back(std::move(e));
        alive.push_back(true);
        return true;
    };
    for (const auto &edge : cfg.edges) {
        ClosureElement e;
        e.src = edge.src;
        e.dst = edge.dst;
        if (flavor == ClosureFlavor::MC) {
            auto r = mc_relation_of(edge.rel);
            if (!r) continue; // unsatisfiable edges drop out
            e.mc = std::move(*r);
        } else {
            e.graph = graph_of(edge.rel, flavor == ClosureFlavor::SCT);
        }
        push(std::move(e));
    }
    for (bool grew = true; grew;) {
        grew = false;
        size_t snapshot = pool.size();
        for (size_t i = 0; i < snapshot; ++i) {
            if (!alive[i]) continue;
            for (size_t j = 0; j < snapshot; ++j) {
                if (!alive[i]) break;
                if (!alive[j] || pool[i].dst != pool[j].src) continue;
                ClosureElement e;
                e.src = pool[i].src;
                e.dst = pool[j].dst;
                if (flavor == ClosureFlavor::MC) {
                    auto r = mc_compose(pool[i].mc, pool[j].mc);
                    if (!r) continue;
                    e.mc = std::move(*r);
                } else if (flavor == ClosureFlavor::SCT) {
                    e.graph = sct_compose(pool[i].graph, pool[j].graph);
                } else {
                    e.graph = dsct_compose(pool[i].graph, pool[j].graph, opts.dsct_floor,
                                           opts.dsct_ceil);
                }
                if (push(std::move(e))) grew = true;
            }
        }
    }
    for (size_t i = 0; i < pool.size(); ++i)
        if (alive[i]) res.elements.push_back(std::move(pool[i]));

    // Well-foundedness of the self-loop elements; independent checks, so the
    // loop parallelizes.
    std::vector<int> selfs;
    for (size_t i = 0; i < res.elements.size(); ++i)
        if (res.elements[i].src == res.elements[i].dst) selfs.push_back(static_cast<int>(i));
    std::vector<WfVerdict> verdicts(selfs.size());
#pragma omp parallel for schedule(dynamic)
    for (size_t k = 0; k < selfs.size(); ++k) {
        ClosureElement &e = res.elements[selfs[k]];
        verdicts[k] = flavor == ClosureFlavor::MC
                          ? check_self_mc(e.mc, depth_cap, opts.mc_complete_cap)
                          : check_self_graph(e.graph);
    }
    for (size_t k = 0; k < selfs.size(); ++k) {
        ClosureElement &e = res.elements[selfs[k]];
        const WfVerdict &v = verdicts[k];
        if (!v.decided) {
            if (res.status == ClosureStatus::AllWellFounded) {
                res.status = ClosureStatus::DepthCapped;
                res.bad_element = selfs[k];
            }
            continue;
        }
        e.wf = v.wf;
        e.witness = v.witness;
        e.bad_point = v.point;
        if (!v.wf && res.status != ClosureStatus::NotWellFounded) {
            res.status = ClosureStatus::NotWellFounded;
            res.bad_element = selfs[k];
        }
    }
    return res;
}

std::vector<LinExpr> extract_lrf_dti(const ClosureResult &res) {
    std::set<std::string> seen;
    std::vector<LinExpr> out;
    for (const auto &e : res.elements) {
        if (e.src != e.dst) continue;
        if (!e.wf) throw std::logic_error("extract_lrf_dti: element not well-founded");
        for (const auto &rho : e.witness) {
            std::string k;
            for (const auto &[v, c] : rho.terms()) k += std::to_string(v) + ":" + c.str() + ";";
            k += "|" + rho.constant().str();
            if (seen.insert(k).second) out.push_back(rho);
        }
    }
    return out;
}

} // namespace linterm
