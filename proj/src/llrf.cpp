/*
 * Copyright (c) 2026, the linterm authors
 *
 * SPDX-License-Identifier: MIT
 */

#include "linterm/llrf.hpp"

#include "linterm/farkas.hpp"

#include <algorithm>
#include <cassert>
#include <functional>

namespace linterm {

std::string flavor_name(LlrfFlavor f) {
    switch (f) {
    case LlrfFlavor::General: return "general";
    case LlrfFlavor::BG: return "bg";
    case LlrfFlavor::ADFG: return "adfg";
    case LlrfFlavor::BMS: return "bms";
    case LlrfFlavor::MPhase: return "mphase";
    case LlrfFlavor::Nested: return "nested";
    }
    return "?";
}

namespace {

// ---------------------------------------------------------------------------
// Mixed strict/non-strict systems. Feasibility over Q is exact via an
// epsilon-maximization LP; over Z strict rows become closed integer shifts
// and emptiness falls back to integer-point search.

struct StrictSys {
    Poly closed;
    std::vector<LinExpr> strict; // each means expr < 0

    explicit StrictSys(Poly p) : closed(std::move(p)) {}
};

bool strict_nonempty_q(const StrictSys &s) {
    if (s.strict.empty()) return !is_empty(s.closed);
    int n = s.closed.dim();
    std::vector<LpRow> rows;
    for (const auto &r : s.closed.lp_rows()) {
        LpRow ext = r;
        ext.a.resize(n + 1, Rat(0));
        rows.push_back(std::move(ext));
    }
    for (const auto &e : s.strict) {
        LpRow r;
        r.a = e.dense(n);
        r.a.push_back(Rat(1)); // e(x) + eps <= 0
        r.b = -e.constant();
        rows.push_back(std::move(r));
    }
    LpRow cap;
    cap.a.assign(n + 1, Rat(0));
    cap.a[n] = Rat(1);
    cap.b = Rat(1);
    rows.push_back(std::move(cap));
    RatVec obj(n + 1, Rat(0));
    obj[n] = Rat(1);
    LpOutcome o = lp_maximize(n + 1, rows, obj);
    return o.status == LpStatus::Optimal && o.value > Rat(0);
}

LinExpr int_scaled(const LinExpr &e) {
    RatVec cs{e.constant()};
    for (const auto &[v, c] : e.terms()) cs.push_back(c);
    Rat k = Rat(mpz_class(den_lcm(cs)));
    LinExpr r = e;
    r *= k;
    return r;
}

// Emptiness of a strict system interpreted over the integers: strict rows
// shift by one after integral scaling, then a definite integer-point check.
bool strict_empty_int(const StrictSys &s) {
    Poly p = s.closed;
    for (const auto &e : s.strict) {
        LinExpr r = int_scaled(e);
        r.set_constant(r.constant() + Rat(1)); // e < 0 over Z: e <= -1
        p.add(Ineq::le(r));
    }
    return !integer_point(p).has_value();
}

bool strict_empty(const StrictSys &s, Domain dom) {
    if (dom == Domain::Int) return strict_empty_int(s);
    return !strict_nonempty_q(s);
}

// Entailment of e <= 0 over a plain polyhedron, exact for the domain.
bool entails_dom(const Poly &p, const LinExpr &e, Domain dom) {
    if (entails_unchecked(p, Ineq::le(e))) return true;
    if (dom != Domain::Int) return false;
    // No rational certificate; over Z ask for an integer counterexample.
    LinExpr viol = int_scaled(e);
    viol *= Rat(-1);
    viol.set_constant(viol.constant() + Rat(1)); // e >= 1 over Z
    Poly q = p;
    q.add(Ineq::le(viol));
    return !integer_point(q).has_value();
}

// ---------------------------------------------------------------------------
// Component contexts. A loop component is one expression; a CFG component
// assigns one expression per location, and every edge picks src/dst.

struct EdgeCtx {
    const Poly *rel;   // over 2n
    int n;
    std::vector<LinExpr> src; // component value at the source, over x
    std::vector<LinExpr> dst; // component value at the target, over x
};

LinExpr delta_expr(const EdgeCtx &ctx, size_t j) {
    // rho_src(x) - rho_dst(x') over the 2n-space
    LinExpr e = ctx.src[j];
    for (const auto &[v, c] : ctx.dst[j].terms()) e.add_term(ctx.n + v, -c);
    e.set_constant(e.constant() - ctx.dst[j].constant());
    return e;
}

// rows meaning "ranked by component i" for the disjunctive flavors.
std::vector<LinExpr> ranked_rows(const EdgeCtx &ctx, LlrfFlavor f, size_t i) {
    std::vector<LinExpr> rows; // each must satisfy expr <= 0
    size_t d = ctx.src.size();
    auto nonneg = [&](size_t j) {
        LinExpr e = ctx.src[j];
        e *= Rat(-1);
        rows.push_back(std::move(e)); // -rho_j(x) <= 0
    };
    auto nondec = [&](size_t j) {
        LinExpr e = delta_expr(ctx, j);
        e *= Rat(-1);
        rows.push_back(std::move(e)); // -(rho_j(x) - rho_j(x')) <= 0
    };
    auto strict_dec = [&](size_t j) {
        LinExpr e = delta_expr(ctx, j);
        e *= Rat(-1);
        e.set_constant(e.constant() + Rat(1));
        rows.push_back(std::move(e)); // delta >= 1
    };
    switch (f) {
    case LlrfFlavor::General:
        for (size_t j = 0; j < i; ++j) nondec(j);
        strict_dec(i);
        nonneg(i);
        break;
    case LlrfFlavor::BG:
        for (size_t j = 0; j <= i; ++j) nonneg(j);
        for (size_t j = 0; j < i; ++j) nondec(j);
        strict_dec(i);
        break;
    case LlrfFlavor::ADFG:
        for (size_t j = 0; j < d; ++j) nonneg(j);
        for (size_t j = 0; j < i; ++j) nondec(j);
        strict_dec(i);
        break;
    default:
        throw std::logic_error("ranked_rows: disjunctive flavors only");
    }
    return rows;
}

// Is rel covered by the union of the per-index ranked sets? Set difference
// splits over row negations; strict pieces stay exact.
bool covered_by_ranked(const EdgeCtx &ctx, LlrfFlavor f, Domain dom, long *nodes) {
    size_t d = ctx.src.size();
    std::function<bool(StrictSys &, size_t)> go = [&](StrictSys &s, size_t i) -> bool {
        if (*nodes <= 0) throw ResourceLimit("verify_llrf: case split too large");
        --*nodes;
        if (strict_empty(s, dom)) return true;
        if (i >= d) return false;
        for (const auto &row : ranked_rows(ctx, f, i)) {
            StrictSys piece = s;
            LinExpr neg = row;
            neg *= Rat(-1);
            piece.strict.push_back(std::move(neg)); // row > 0, i.e. -row < 0
            if (!go(piece, i + 1)) return false;
        }
        return true;
    };
    StrictSys start(*ctx.rel);
    return go(start, 0);
}

// Multiphase check: every prefix component decreases until it dips negative;
// the transitions left after the last phase must not exist.
bool mphase_ok(const EdgeCtx &ctx, Domain dom, std::string *why) {
    StrictSys cur(*ctx.rel);
    size_t d = ctx.src.size();
    for (size_t i = 0; i < d; ++i) {
        // On the current phase set, component i must strictly decrease.
        LinExpr dec = delta_expr(ctx, i);
        dec *= Rat(-1);
        dec.set_constant(dec.constant() + Rat(1)); // <= 0 iff delta >= 1
        {
            StrictSys viol = cur;
            LinExpr pos = dec;
            pos *= Rat(-1);
            viol.strict.push_back(std::move(pos));
            if (!strict_empty(viol, dom)) {
                if (why) *why = "component " + std::to_string(i + 1) + " does not decrease";
                return false;
            }
        }
        // Unranked transitions have rho_i(x) < 0.
        LinExpr neg = ctx.src[i];
        cur.strict.push_back(std::move(neg)); // rho_i(x) < 0
    }
    if (!strict_empty(cur, dom)) {
        if (why) *why = "transitions remain after the last phase";
        return false;
    }
    return true;
}

bool nested_ok(const EdgeCtx &ctx, Domain dom, std::string *why) {
    size_t d = ctx.src.size();
    {
        LinExpr last = ctx.src[d - 1];
        last *= Rat(-1);
        if (!entails_dom(*ctx.rel, last, dom)) {
            if (why) *why = "last component is not nonnegative on enabled states";
            return false;
        }
    }
    for (size_t i = 0; i < d; ++i) {
        // delta_i + rho_{i-1} >= 1
        LinExpr e = delta_expr(ctx, i);
        if (i > 0) e += ctx.src[i - 1];
        e *= Rat(-1);
        e.set_constant(e.constant() + Rat(1));
        if (!entails_dom(*ctx.rel, e, dom)) {
            if (why)
                *why = "nesting condition fails at component " + std::to_string(i + 1);
            return false;
        }
    }
    return true;
}

// BMS is path-level: some component is a full LRF for the whole edge while
// all earlier ones are non-increasing on it.
bool bms_path_ok(const EdgeCtx &ctx, Domain dom, std::string *why) {
    size_t d = ctx.src.size();
    for (size_t i = 0; i < d; ++i) {
        bool ok = true;
        for (size_t j = 0; j < i && ok; ++j) {
            LinExpr e = delta_expr(ctx, j);
            e *= Rat(-1);
            ok = entails_dom(*ctx.rel, e, dom);
        }
        if (!ok) continue;
        LinExpr nn = ctx.src[i];
        nn *= Rat(-1);
        if (!entails_dom(*ctx.rel, nn, dom)) continue;
        LinExpr dec = delta_expr(ctx, i);
        dec *= Rat(-1);
        dec.set_constant(dec.constant() + Rat(1));
        if (entails_dom(*ctx.rel, dec, dom)) return true;
    }
    if (why) *why = "no component fully ranks this path";
    return false;
}

std::vector<TransRel> live_paths(const MlcLoop &loop, bool hull) {
    std::vector<TransRel> out;
    for (const auto &q : loop.paths) {
        if (hull) {
            Poly h = integer_hull(q.rel);
            if (!is_empty(h)) out.emplace_back(loop.n, std::move(h));
        } else if (!is_empty(q.rel)) {
            out.push_back(q);
        }
    }
    return out;
}

EdgeCtx loop_ctx(const Poly &rel, int n, const std::vector<LinExpr> &comps) {
    EdgeCtx ctx;
    ctx.rel = &rel;
    ctx.n = n;
    ctx.src = comps;
    ctx.dst = comps;
    return ctx;
}

std::vector<LinExpr> int_scaled_components(const std::vector<LinExpr> &comps) {
    std::vector<LinExpr> out;
    for (const auto &c : comps) out.push_back(int_scaled(c));
    return out;
}

// ---------------------------------------------------------------------------
// Quasi-LRF synthesis.

// BG: rho >= 0 and delta >= 0 entailed by every current path.
std::optional<LinExpr> bg_candidate(const std::vector<TransRel> &current, int n) {
    FarkasBuilder fb;
    int lam = fb.alloc(n);
    int lam0 = fb.alloc(1);
    for (const auto &q : current) {
        std::vector<Comb> nonneg(2 * n), nondec(2 * n);
        for (int v = 0; v < n; ++v) {
            nonneg[v] = Comb::of_var(lam + v, Rat(-1));
            nondec[v] = Comb::of_var(lam + v, Rat(-1));
            nondec[n + v] = Comb::of_var(lam + v, Rat(1));
        }
        fb.add_entailment(q.rel, nonneg, Comb::of_var(lam0));
        fb.add_entailment(q.rel, nondec, Comb(Rat(0)));
    }
    Poly feas = fb.feasible_set();
    RatVec point = relative_interior_point(feas); // never empty: rho = 0 is in
    return expr_of_solution(point, lam, n, lam0);
}

Rat max_delta(const TransRel &q, const LinExpr &rho) {
    // max of rho(x) - rho(x') over the path; returns 1 on unbounded.
    RatVec obj(2 * q.n, Rat(0));
    for (const auto &[v, c] : rho.terms()) {
        obj[v] += c;
        obj[q.n + v] -= c;
    }
    LpOutcome o = lp_maximize(2 * q.n, q.rel.lp_rows(), obj);
    if (o.status == LpStatus::Unbounded) return Rat(1);
    if (o.status != LpStatus::Optimal) return Rat(0);
    return o.value;
}

Rat min_delta(const TransRel &q, const LinExpr &rho) {
    RatVec obj(2 * q.n, Rat(0));
    for (const auto &[v, c] : rho.terms()) {
        obj[v] += c;
        obj[q.n + v] -= c;
    }
    LpOutcome o = lp_minimize(2 * q.n, q.rel.lp_rows(), obj);
    if (o.status != LpStatus::Optimal) return Rat(0);
    return o.value;
}

} // namespace

std::optional<QlrfOutcome> qlrf_bg(const std::vector<TransRel> &current) {
    if (current.empty()) return std::nullopt;
    int n = current[0].n;
    auto rho = bg_candidate(current, n);
    if (!rho) return std::nullopt;
    bool nontrivial = false;
    for (const auto &q : current)
        if (max_delta(q, *rho) > Rat(0)) {
            nontrivial = true;
            break;
        }
    if (!nontrivial) return std::nullopt;
    QlrfOutcome out;
    out.rho = *rho;
    out.face_elimination = true;
    return out;
}

std::optional<QlrfOutcome> qlrf_adfg(const std::vector<TransRel> &current,
                                     const std::vector<TransRel> &original) {
    if (current.empty()) return std::nullopt;
    int n = current[0].n;
    FarkasBuilder fb;
    int lam = fb.alloc(n);
    int lam0 = fb.alloc(1);
    int delta = fb.alloc(static_cast<int>(current.size()));
    for (size_t j = 0; j < current.size(); ++j) {
        fb.add_lower_bound(delta + static_cast<int>(j), Rat(0));
        Comb cap = Comb::of_var(delta + static_cast<int>(j));
        fb.add_le(cap, Comb(Rat(1)));
    }
    for (const auto &q : original) {
        std::vector<Comb> nonneg(2 * n);
        for (int v = 0; v < n; ++v) nonneg[v] = Comb::of_var(lam + v, Rat(-1));
        fb.add_entailment(q.rel, nonneg, Comb::of_var(lam0));
    }
    for (size_t j = 0; j < current.size(); ++j) {
        std::vector<Comb> dec(2 * n);
        for (int v = 0; v < n; ++v) {
            dec[v] = Comb::of_var(lam + v, Rat(-1));
            dec[n + v] = Comb::of_var(lam + v, Rat(1));
        }
        fb.add_entailment(current[j].rel, dec,
                          Comb::of_var(delta + static_cast<int>(j), Rat(-1)));
    }
    Comb obj;
    for (size_t j = 0; j < current.size(); ++j) obj.add(delta + static_cast<int>(j), Rat(1));
    LpOutcome o = fb.maximize(obj);
    if (o.status != LpStatus::Optimal) throw std::logic_error("qlrf_adfg: unbounded sum");
    if (o.value == Rat(0)) return std::nullopt;
    QlrfOutcome out;
    out.rho = expr_of_solution(o.point, lam, n, lam0);
    for (size_t j = 0; j < current.size(); ++j) {
        const Rat &dj = o.point[delta + static_cast<int>(j)];
        if (dj == Rat(1))
            out.eliminated_paths.push_back(static_cast<int>(j));
        else if (dj != Rat(0))
            throw std::logic_error("qlrf_adfg: fractional delta at optimum");
    }
    if (out.eliminated_paths.empty()) return std::nullopt;
    return out;
}

namespace {

// Paths of `current` fully ranked by rho (nonnegative and decreasing by 1).
std::vector<int> fully_ranked(const std::vector<TransRel> &current, const LinExpr &rho, int n) {
    std::vector<int> out;
    for (size_t j = 0; j < current.size(); ++j) {
        LinExpr nn = rho;
        nn *= Rat(-1);
        LinExpr dc = rho;
        for (const auto &[v, c] : rho.terms()) dc.add_term(n + v, -c);
        dc.set_constant(Rat(0));
        dc *= Rat(-1);
        dc.set_constant(dc.constant() + Rat(1));
        if (entails_unchecked(current[j].rel, Ineq::le(nn)) &&
            entails_unchecked(current[j].rel, Ineq::le(dc)))
            out.push_back(static_cast<int>(j));
    }
    return out;
}

// The LP of one BMS round aimed at a specific target path.
std::optional<LinExpr> bms_candidate(const std::vector<TransRel> &current, size_t target) {
    int n = current[0].n;
    FarkasBuilder fb;
    int lam = fb.alloc(n);
    int lam0 = fb.alloc(1);
    for (const auto &q : current) {
        std::vector<Comb> nondec(2 * n);
        for (int v = 0; v < n; ++v) {
            nondec[v] = Comb::of_var(lam + v, Rat(-1));
            nondec[n + v] = Comb::of_var(lam + v, Rat(1));
        }
        fb.add_entailment(q.rel, nondec, Comb(Rat(0)));
    }
    std::vector<Comb> nonneg(2 * n), dec(2 * n);
    for (int v = 0; v < n; ++v) {
        nonneg[v] = Comb::of_var(lam + v, Rat(-1));
        dec[v] = Comb::of_var(lam + v, Rat(-1));
        dec[n + v] = Comb::of_var(lam + v, Rat(1));
    }
    fb.add_entailment(current[target].rel, nonneg, Comb::of_var(lam0));
    fb.add_entailment(current[target].rel, dec, Comb(Rat(-1)));
    auto sol = fb.solve();
    if (!sol) return std::nullopt;
    return expr_of_solution(*sol, lam, n, lam0);
}

std::vector<std::pair<LinExpr, std::vector<int>>>
qlrf_bms_all_targets(const std::vector<TransRel> &current) {
    std::vector<std::pair<LinExpr, std::vector<int>>> out;
    for (size_t target = 0; target < current.size(); ++target) {
        auto rho = bms_candidate(current, target);
        if (!rho) continue;
        auto ranked = fully_ranked(current, *rho, current[0].n);
        if (!ranked.empty()) out.emplace_back(*rho, std::move(ranked));
    }
    return out;
}

} // namespace

std::optional<QlrfOutcome> qlrf_bms(const std::vector<TransRel> &current) {
    if (current.empty()) return std::nullopt;
    for (size_t target = 0; target < current.size(); ++target) {
        auto rho = bms_candidate(current, target);
        if (!rho) continue;
        auto ranked = fully_ranked(current, *rho, current[0].n);
        if (ranked.empty()) continue;
        QlrfOutcome out;
        out.rho = *rho;
        out.eliminated_paths = std::move(ranked);
        return out;
    }
    return std::nullopt;
}

namespace {

struct GreedyRound {
    LinExpr rho;
    std::vector<TransRel> before;
    std::vector<int> dropped; // indices into `before` removed entirely
};

// The generic greedy engine over paths; returns the rounds or nothing.
std::optional<std::vector<GreedyRound>> greedy(std::vector<TransRel> paths,
                                               const std::vector<TransRel> &original,
                                               LlrfFlavor flavor, int n, int k) {
    std::vector<GreedyRound> rounds;
    int guard = 2 * n + k + 4;
    while (!paths.empty()) {
        if (--guard < 0) throw std::logic_error("llrfsyn: elimination does not converge");
        std::optional<QlrfOutcome> q;
        switch (flavor) {
        case LlrfFlavor::BG: q = qlrf_bg(paths); break;
        case LlrfFlavor::ADFG: q = qlrf_adfg(paths, original); break;
        case LlrfFlavor::BMS: q = qlrf_bms(paths); break;
        default: throw std::logic_error("llrfsyn: unsupported flavor");
        }
        if (!q) return std::nullopt;
        GreedyRound round;
        round.rho = q->rho;
        round.before = paths;
        std::vector<TransRel> next;
        if (q->face_elimination) {
            for (size_t j = 0; j < paths.size(); ++j) {
                LinExpr delta;
                delta += q->rho;
                for (const auto &[v, c] : q->rho.terms()) delta.add_term(n + v, -c);
                delta.set_constant(Rat(0));
                Poly face = paths[j].rel;
                face.add(Ineq::eq(delta));
                if (is_empty(face))
                    round.dropped.push_back(static_cast<int>(j));
                else
                    next.emplace_back(n, remove_redundant(face));
            }
        } else {
            for (size_t j = 0; j < paths.size(); ++j) {
                if (std::find(q->eliminated_paths.begin(), q->eliminated_paths.end(),
                              static_cast<int>(j)) != q->eliminated_paths.end())
                    round.dropped.push_back(static_cast<int>(j));
                else
                    next.push_back(paths[j]);
            }
        }
        rounds.push_back(std::move(round));
        paths = std::move(next);
    }
    return rounds;
}

// Rescales BG components so that fully-dropped paths decrease by >= 1.
// Fails (weak-only witness) when a surviving path still decreases somewhere.
bool strictify_bg(std::vector<GreedyRound> &rounds, std::vector<LinExpr> &comps) {
    for (size_t i = 0; i < rounds.size(); ++i) {
        Rat lo;
        bool have = false;
        for (size_t j = 0; j < rounds[i].before.size(); ++j) {
            bool dropped = std::find(rounds[i].dropped.begin(), rounds[i].dropped.end(),
                                     static_cast<int>(j)) != rounds[i].dropped.end();
            if (dropped) {
                Rat m = min_delta(rounds[i].before[j], comps[i]);
                if (m <= Rat(0)) return false;
                if (!have || m < lo) {
                    lo = m;
                    have = true;
                }
            } else {
                if (max_delta(rounds[i].before[j], comps[i]) > Rat(0)) return false;
            }
        }
        if (have && lo < Rat(1)) comps[i] *= lo.inv();
    }
    return true;
}

std::optional<Llrf> finish_loop_witness(const MlcLoop &loop, LlrfFlavor flavor,
                                        std::vector<GreedyRound> rounds) {
    std::vector<LinExpr> comps;
    for (const auto &r : rounds) comps.push_back(r.rho);
    if (loop.domain == Domain::Int) {
        comps = int_scaled_components(comps);
    } else if (flavor == LlrfFlavor::BG) {
        if (!strictify_bg(rounds, comps)) return std::nullopt;
    }
    Llrf w;
    w.flavor = flavor;
    w.components = std::move(comps);
    if (!verify_llrf(loop, w).ok) return std::nullopt;
    return w;
}

} // namespace

std::optional<Llrf> llrfsyn(const MlcLoop &loop, LlrfFlavor flavor) {
    if (flavor != LlrfFlavor::BG && flavor != LlrfFlavor::ADFG && flavor != LlrfFlavor::BMS)
        throw std::logic_error("llrfsyn: flavor must be BG, ADFG, or BMS");
    std::vector<TransRel> paths = live_paths(loop, loop.domain == Domain::Int);
    if (paths.empty()) {
        Llrf w;
        w.flavor = flavor;
        w.components.push_back(LinExpr(Rat(0)));
        return w; // no transitions at all
    }
    int k = static_cast<int>(paths.size());
    auto rounds = greedy(paths, paths, flavor, loop.n, k);
    if (!rounds) return std::nullopt;
    int depth = static_cast<int>(rounds->size());
    int bound = flavor == LlrfFlavor::BG      ? loop.n
                : flavor == LlrfFlavor::ADFG ? std::min(loop.n, k)
                                             : k;
    if (depth > bound) throw std::logic_error("llrfsyn: depth exceeds the flavor bound");
    return finish_loop_witness(loop, flavor, std::move(*rounds));
}

std::optional<Llrf> llrfsyn_bms_minimal(const MlcLoop &loop, int max_paths) {
    std::vector<TransRel> paths = live_paths(loop, loop.domain == Domain::Int);
    if (static_cast<int>(paths.size()) > max_paths) return llrfsyn(loop, LlrfFlavor::BMS);
    int k = static_cast<int>(paths.size());
    // Depth-first over target orders, keeping the best completed tuple.
    std::optional<std::vector<LinExpr>> best;
    std::vector<LinExpr> cur;
    std::function<void(std::vector<TransRel>)> go = [&](std::vector<TransRel> rem) {
        if (best && cur.size() + 1 >= best->size()) return; // cannot improve
        if (rem.empty()) {
            best = cur;
            return;
        }
        auto q = qlrf_bms_all_targets(rem);
        for (auto &[rho, eliminated] : q) {
            std::vector<TransRel> next;
            for (size_t j = 0; j < rem.size(); ++j)
                if (std::find(eliminated.begin(), eliminated.end(), static_cast<int>(j)) ==
                    eliminated.end())
                    next.push_back(rem[j]);
            cur.push_back(rho);
            go(std::move(next));
            cur.pop_back();
        }
    };
    go(paths);
    (void)k;
    if (!best) return std::nullopt;
    Llrf w;
    w.flavor = LlrfFlavor::BMS;
    w.components =
        loop.domain == Domain::Int ? int_scaled_components(*best) : *best;
    if (!verify_llrf(loop, w).ok) return std::nullopt;
    return w;
}

std::optional<Llrf> synth_nlrf(const MlcLoop &loop, int d) {
    if (d < 1) throw std::logic_error("synth_nlrf: depth must be positive");
    std::vector<TransRel> paths = live_paths(loop, loop.domain == Domain::Int);
    int n = loop.n;
    if (paths.empty()) {
        Llrf w;
        w.flavor = LlrfFlavor::Nested;
        w.components.assign(d, LinExpr(Rat(0)));
        return w;
    }
    FarkasBuilder fb;
    std::vector<int> lam(d), lam0(d);
    for (int i = 0; i < d; ++i) {
        lam[i] = fb.alloc(n);
        lam0[i] = fb.alloc(1);
    }
    for (const auto &q : paths) {
        {
            std::vector<Comb> nonneg(2 * n);
            for (int v = 0; v < n; ++v) nonneg[v] = Comb::of_var(lam[d - 1] + v, Rat(-1));
            fb.add_entailment(q.rel, nonneg, Comb::of_var(lam0[d - 1]));
        }
        for (int i = 0; i < d; ++i) {
            // delta_i + rho_{i-1} >= 1:
            //   -(lam_i + lam_{i-1}) x + lam_i x' <= lam0_{i-1} - 1
            std::vector<Comb> target(2 * n);
            for (int v = 0; v < n; ++v) {
                Comb c = Comb::of_var(lam[i] + v, Rat(-1));
                if (i > 0) c.add(lam[i - 1] + v, Rat(-1));
                target[v] = c;
                target[n + v] = Comb::of_var(lam[i] + v, Rat(1));
            }
            Comb rhs(Rat(-1));
            if (i > 0) rhs.add(lam0[i - 1], Rat(1));
            fb.add_entailment(q.rel, target, rhs);
        }
    }
    auto sol = fb.solve();
    if (!sol) return std::nullopt;
    Llrf w;
    w.flavor = LlrfFlavor::Nested;
    for (int i = 0; i < d; ++i) w.components.push_back(expr_of_solution(*sol, lam[i], n, lam0[i]));
    return w;
}

std::optional<Llrf> synth_mlrf(const MlcLoop &loop, int max_depth) {
    for (int d = 1; d <= max_depth; ++d) {
        auto w = synth_nlrf(loop, d);
        if (w) {
            w->flavor = LlrfFlavor::MPhase;
            return w;
        }
    }
    return std::nullopt;
}

VerifyReport verify_llrf(const MlcLoop &loop, const Llrf &w) {
    VerifyReport rep;
    if (w.components.empty()) {
        rep.fail("empty witness");
        return rep;
    }
    std::vector<LinExpr> comps = w.components;
    if (loop.domain == Domain::Int) comps = int_scaled_components(comps);
    std::vector<TransRel> paths = live_paths(loop, loop.domain == Domain::Int);
    for (size_t pi = 0; pi < paths.size(); ++pi) {
        EdgeCtx ctx = loop_ctx(paths[pi].rel, loop.n, comps);
        std::string why;
        bool ok = true;
        switch (w.flavor) {
        case LlrfFlavor::General:
        case LlrfFlavor::BG:
        case LlrfFlavor::ADFG: {
            long nodes = 200000;
            ok = covered_by_ranked(ctx, w.flavor, loop.domain, &nodes);
            why = "some transition is ranked by no component";
            break;
        }
        case LlrfFlavor::BMS:
            ok = bms_path_ok(ctx, loop.domain, &why);
            break;
        case LlrfFlavor::MPhase:
            ok = mphase_ok(ctx, loop.domain, &why);
            break;
        case LlrfFlavor::Nested:
            ok = nested_ok(ctx, loop.domain, &why);
            break;
        }
        if (!ok) rep.fail("path " + std::to_string(pi) + ": " + why);
    }
    return rep;
}

namespace {

// CFG components assign one expression per location. Shared-coefficient
// templates use one lambda with per-location constants.
using LocExprs = std::map<int, LinExpr>;

struct CfgRound {
    LocExprs rho;
    std::vector<Cfg::Edge> before;
    std::vector<int> dropped;
};

LinExpr loc_expr(const LocExprs &m, int loc) {
    auto it = m.find(loc);
    return it == m.end() ? LinExpr() : it->second;
}

Rat edge_max_delta(const Cfg::Edge &e, const LocExprs &rho, int n) {
    RatVec obj(2 * n, Rat(0));
    LinExpr src = loc_expr(rho, e.src), dst = loc_expr(rho, e.dst);
    for (const auto &[v, c] : src.terms()) obj[v] += c;
    for (const auto &[v, c] : dst.terms()) obj[n + v] -= c;
    Rat shift = src.constant() - dst.constant();
    LpOutcome o = lp_maximize(2 * n, e.rel.rel.lp_rows(), obj);
    if (o.status == LpStatus::Unbounded) return Rat(1);
    if (o.status != LpStatus::Optimal) return Rat(0);
    return o.value + shift;
}

Rat edge_min_delta(const Cfg::Edge &e, const LocExprs &rho, int n) {
    RatVec obj(2 * n, Rat(0));
    LinExpr src = loc_expr(rho, e.src), dst = loc_expr(rho, e.dst);
    for (const auto &[v, c] : src.terms()) obj[v] += c;
    for (const auto &[v, c] : dst.terms()) obj[n + v] -= c;
    Rat shift = src.constant() - dst.constant();
    LpOutcome o = lp_minimize(2 * n, e.rel.rel.lp_rows(), obj);
    if (o.status != LpStatus::Optimal) return Rat(0);
    return o.value + shift;
}

LinExpr edge_delta_2n(const Cfg::Edge &e, const LocExprs &rho, int n) {
    LinExpr d = loc_expr(rho, e.src);
    LinExpr dst = loc_expr(rho, e.dst);
    for (const auto &[v, c] : dst.terms()) d.add_term(n + v, -c);
    d.set_constant(d.constant() - dst.constant());
    return d;
}

// Location-indexed template coefficients inside one Farkas system.
struct CfgTemplate {
    int n = 0;
    bool full = false;
    std::vector<int> lam;  // shared: lam[0]; full: one block per location
    std::vector<int> lam0; // per location

    int lam_of(int loc) const { return full ? lam[loc] : lam[0]; }

    void alloc(FarkasBuilder &fb, int nloc) {
        if (full) {
            for (int l = 0; l < nloc; ++l) lam.push_back(fb.alloc(n));
        } else {
            lam.push_back(fb.alloc(n));
        }
        for (int l = 0; l < nloc; ++l) lam0.push_back(fb.alloc(1));
    }

    void add_nonneg(FarkasBuilder &fb, const Cfg::Edge &e) const {
        std::vector<Comb> t(2 * n);
        for (int v = 0; v < n; ++v) t[v] = Comb::of_var(lam_of(e.src) + v, Rat(-1));
        fb.add_entailment(e.rel.rel, t, Comb::of_var(lam0[e.src]));
    }

    // delta >= bound, where bound is a combination (e.g. 0, 1, or delta_e).
    void add_decrease(FarkasBuilder &fb, const Cfg::Edge &e, const Comb &bound) const {
        std::vector<Comb> t(2 * n);
        for (int v = 0; v < n; ++v) {
            t[v] = Comb::of_var(lam_of(e.src) + v, Rat(-1));
            t[n + v] = Comb::of_var(lam_of(e.dst) + v, Rat(1));
        }
        Comb rhs = bound.negated();
        rhs.add(lam0[e.src], Rat(1));
        rhs.add(lam0[e.dst], Rat(-1));
        fb.add_entailment(e.rel.rel, t, rhs);
    }

    LocExprs extract(const RatVec &sol, int nloc) const {
        LocExprs out;
        for (int l = 0; l < nloc; ++l)
            out[l] = expr_of_solution(sol, lam_of(l), n, lam0[l]);
        return out;
    }
};

std::optional<LocExprs> cfg_qlrf_bg(const std::vector<Cfg::Edge> &current, int n, int nloc,
                                    bool full) {
    FarkasBuilder fb;
    CfgTemplate t{n, full, {}, {}};
    t.alloc(fb, nloc);
    for (const auto &e : current) {
        t.add_nonneg(fb, e);
        t.add_decrease(fb, e, Comb(Rat(0)));
    }
    RatVec point = relative_interior_point(fb.feasible_set());
    LocExprs rho = t.extract(point, nloc);
    for (const auto &e : current)
        if (edge_max_delta(e, rho, n) > Rat(0)) return rho;
    return std::nullopt;
}

std::optional<std::pair<LocExprs, std::vector<int>>>
cfg_qlrf_adfg(const std::vector<Cfg::Edge> &current, const std::vector<Cfg::Edge> &original,
              int n, int nloc, bool full) {
    FarkasBuilder fb;
    CfgTemplate t{n, full, {}, {}};
    t.alloc(fb, nloc);
    int delta = fb.alloc(static_cast<int>(current.size()));
    for (size_t j = 0; j < current.size(); ++j) {
        fb.add_lower_bound(delta + static_cast<int>(j), Rat(0));
        fb.add_le(Comb::of_var(delta + static_cast<int>(j)), Comb(Rat(1)));
    }
    for (const auto &e : original) t.add_nonneg(fb, e);
    for (size_t j = 0; j < current.size(); ++j)
        t.add_decrease(fb, current[j], Comb::of_var(delta + static_cast<int>(j)));
    Comb obj;
    for (size_t j = 0; j < current.size(); ++j) obj.add(delta + static_cast<int>(j), Rat(1));
    LpOutcome o = fb.maximize(obj);
    if (o.status != LpStatus::Optimal || o.value == Rat(0)) return std::nullopt;
    std::vector<int> ranked;
    for (size_t j = 0; j < current.size(); ++j)
        if (o.point[delta + static_cast<int>(j)] == Rat(1)) ranked.push_back(static_cast<int>(j));
    if (ranked.empty()) return std::nullopt;
    return std::make_pair(t.extract(o.point, nloc), ranked);
}

std::optional<std::pair<LocExprs, std::vector<int>>>
cfg_qlrf_bms(const std::vector<Cfg::Edge> &current, int n, int nloc, bool full) {
    for (size_t target = 0; target < current.size(); ++target) {
        FarkasBuilder fb;
        CfgTemplate t{n, full, {}, {}};
        t.alloc(fb, nloc);
        for (const auto &e : current) t.add_decrease(fb, e, Comb(Rat(0)));
        t.add_nonneg(fb, current[target]);
        t.add_decrease(fb, current[target], Comb(Rat(1)));
        auto sol = fb.solve();
        if (!sol) continue;
        LocExprs rho = t.extract(*sol, nloc);
        std::vector<int> ranked;
        for (size_t j = 0; j < current.size(); ++j) {
            const auto &e = current[j];
            LinExpr nn = loc_expr(rho, e.src);
            nn *= Rat(-1);
            LinExpr dec = edge_delta_2n(e, rho, n);
            dec *= Rat(-1);
            dec.set_constant(dec.constant() + Rat(1));
            if (entails_unchecked(e.rel.rel, Ineq::le(nn)) &&
                entails_unchecked(e.rel.rel, Ineq::le(dec)))
                ranked.push_back(static_cast<int>(j));
        }
        if (!ranked.empty()) return std::make_pair(rho, ranked);
    }
    return std::nullopt;
}

std::vector<Cfg::Edge> live_edges(const Cfg &cfg) {
    std::vector<Cfg::Edge> out;
    for (const auto &e : cfg.edges) {
        if (cfg.domain == Domain::Int) {
            Poly h = integer_hull(e.rel.rel);
            if (is_empty(h)) continue;
            out.push_back({e.src, e.dst, TransRel(cfg.n, std::move(h))});
        } else if (!is_empty(e.rel.rel)) {
            out.push_back(e);
        }
    }
    return out;
}

} // namespace

std::optional<Llrf> llrfsyn_cfg(const Cfg &cfg, LlrfFlavor flavor, bool full_templates) {
    int n = cfg.n;
    int nloc = static_cast<int>(cfg.locations.size());
    std::vector<Cfg::Edge> edges = live_edges(cfg);
    if (edges.empty()) {
        Llrf w;
        w.flavor = flavor;
        w.per_loc.push_back({});
        for (int l = 0; l < nloc; ++l) w.per_loc[0][l] = LinExpr(Rat(0));
        return w;
    }
    std::vector<Cfg::Edge> original = edges;
    std::vector<CfgRound> rounds;
    int guard = 2 * n + static_cast<int>(edges.size()) + 4;
    while (!edges.empty()) {
        if (--guard < 0) return std::nullopt;
        CfgRound round;
        round.before = edges;
        std::vector<Cfg::Edge> next;
        if (flavor == LlrfFlavor::BG) {
            auto rho = cfg_qlrf_bg(edges, n, nloc, full_templates);
            if (!rho) return std::nullopt;
            round.rho = *rho;
            for (size_t j = 0; j < edges.size(); ++j) {
                Poly face = edges[j].rel.rel;
                face.add(Ineq::eq(edge_delta_2n(edges[j], *rho, n)));
                if (is_empty(face))
                    round.dropped.push_back(static_cast<int>(j));
                else
                    next.push_back({edges[j].src, edges[j].dst,
                                    TransRel(n, remove_redundant(face))});
            }
        } else {
            std::optional<std::pair<LocExprs, std::vector<int>>> q;
            if (flavor == LlrfFlavor::ADFG)
                q = cfg_qlrf_adfg(edges, original, n, nloc, full_templates);
            else if (flavor == LlrfFlavor::BMS)
                q = cfg_qlrf_bms(edges, n, nloc, full_templates);
            else
                throw std::logic_error("llrfsyn_cfg: flavor must be BG, ADFG, or BMS");
            if (!q) return std::nullopt;
            round.rho = q->first;
            for (size_t j = 0; j < edges.size(); ++j) {
                if (std::find(q->second.begin(), q->second.end(), static_cast<int>(j)) !=
                    q->second.end())
                    round.dropped.push_back(static_cast<int>(j));
                else
                    next.push_back(edges[j]);
            }
        }
        rounds.push_back(std::move(round));
        edges = std::move(next);
    }
    std::vector<LocExprs> comps;
    for (const auto &r : rounds) comps.push_back(r.rho);
    if (cfg.domain == Domain::Int) {
        for (auto &comp : comps) {
            RatVec dens;
            for (const auto &[l, e] : comp) {
                dens.push_back(e.constant());
                for (const auto &[v, c] : e.terms()) dens.push_back(c);
            }
            Rat k = Rat(mpz_class(den_lcm(dens)));
            for (auto &[l, e] : comp) e *= k;
        }
    } else if (flavor == LlrfFlavor::BG) {
        for (size_t i = 0; i < rounds.size(); ++i) {
            Rat lo;
            bool have = false;
            for (size_t j = 0; j < rounds[i].before.size(); ++j) {
                bool dropped = std::find(rounds[i].dropped.begin(), rounds[i].dropped.end(),
                                         static_cast<int>(j)) != rounds[i].dropped.end();
                if (dropped) {
                    Rat m = edge_min_delta(rounds[i].before[j], comps[i], n);
                    if (m <= Rat(0)) return std::nullopt;
                    if (!have || m < lo) {
                        lo = m;
                        have = true;
                    }
                } else if (edge_max_delta(rounds[i].before[j], comps[i], n) > Rat(0)) {
                    return std::nullopt;
                }
            }
            if (have && lo < Rat(1)) {
                Rat k = lo.inv();
                for (auto &[l, e] : comps[i]) e *= k;
            }
        }
    }
    Llrf w;
    w.flavor = flavor;
    w.per_loc = std::move(comps);
    if (!verify_llrf_cfg(cfg, w).ok) return std::nullopt;
    return w;
}

VerifyReport verify_llrf_cfg(const Cfg &cfg, const Llrf &w) {
    VerifyReport rep;
    if (w.per_loc.empty()) {
        // A plain loop witness applied to a one-location graph.
        if (cfg.locations.size() == 1) return verify_llrf(as_mlc(cfg), w);
        rep.fail("witness has no per-location components");
        return rep;
    }
    size_t d = w.per_loc.size();
    std::vector<Cfg::Edge> edges = live_edges(cfg);
    for (size_t ei = 0; ei < edges.size(); ++ei) {
        const auto &e = edges[ei];
        EdgeCtx ctx;
        ctx.rel = &e.rel.rel;
        ctx.n = cfg.n;
        for (size_t i = 0; i < d; ++i) {
            LinExpr src = loc_expr(w.per_loc[i], e.src);
            LinExpr dst = loc_expr(w.per_loc[i], e.dst);
            if (cfg.domain == Domain::Int) {
                src = int_scaled(src);
                dst = int_scaled(dst);
            }
            ctx.src.push_back(src);
            ctx.dst.push_back(dst);
        }
        std::string why;
        bool ok = true;
        switch (w.flavor) {
        case LlrfFlavor::General:
        case LlrfFlavor::BG:
        case LlrfFlavor::ADFG: {
            long nodes = 200000;
            ok = covered_by_ranked(ctx, w.flavor, cfg.domain, &nodes);
            why = "some transition is ranked by no component";
            break;
        }
        case LlrfFlavor::BMS:
            ok = bms_path_ok(ctx, cfg.domain, &why);
            break;
        case LlrfFlavor::MPhase:
            ok = mphase_ok(ctx, cfg.domain, &why);
            break;
        case LlrfFlavor::Nested:
            ok = nested_ok(ctx, cfg.domain, &why);
            break;
        }
        if (!ok)
            rep.fail("edge " + std::to_string(ei) + " (" + cfg.locations[e.src] + " -> " +
                     cfg.locations[e.dst] + "): " + why);
    }
    return rep;
}

} // namespace linterm
