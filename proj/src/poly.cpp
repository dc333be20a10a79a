/*
 * Copyright (c) 2026, the linterm authors
 *
 * SPDX-License-Identifier: MIT
 */

#include "linterm/poly.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace linterm {

std::string LinExpr::str(const std::vector<std::string> &names) const {
    std::string s;
    for (const auto &[v, c] : terms()) {
        std::string name = v < static_cast<int>(names.size()) ? names[v] : ("v" + std::to_string(v));
        if (s.empty()) {
            if (c == Rat(1))
                s = name;
            else if (c == Rat(-1))
                s = "-" + name;
            else
                s = c.str() + "*" + name;
        } else {
            if (c.sign() > 0)
                s += " + " + (c == Rat(1) ? name : c.str() + "*" + name);
            else {
                Rat a = c.abs();
                s += " - " + (a == Rat(1) ? name : a.str() + "*" + name);
            }
        }
    }
    const Rat &k = constant();
    if (s.empty()) return k.str();
    if (k.sign() > 0) s += " + " + k.str();
    if (k.sign() < 0) s += " - " + k.abs().str();
    return s;
}

std::string Ineq::str(const std::vector<std::string> &names) const {
    // Rendered as expr' <= c with the constant moved right.
    LinExpr lhs = expr;
    Rat c = -lhs.constant();
    lhs.set_constant(Rat(0));
    std::string op = rel == Rel::Eq ? " = " : " <= ";
    if (lhs.is_constant()) return "0" + op + c.str();
    return lhs.str(names) + op + c.str();
}

std::string Poly::str(const std::vector<std::string> &names) const {
    std::string s = "{ ";
    for (size_t i = 0; i < rows_.size(); ++i) {
        if (i) s += ", ";
        s += rows_[i].str(names);
    }
    return s + " }";
}

bool is_empty(const Poly &p) { return !lp_feasible_point(p.dim(), p.lp_rows()).has_value(); }

std::optional<RatVec> feasible_point(const Poly &p) {
    return lp_feasible_point(p.dim(), p.lp_rows());
}

namespace {

// Core entailment of e <= 0 over the <=-view rows. Produces multipliers when
// entailed; assumes nothing about emptiness (an empty system entails all and
// yields a certificate through the unbounded dual).
std::optional<RatVec> entail_mu(const Poly &p, const LinExpr &e) {
    std::vector<LinExpr> view = p.ineq_view();
    int m = static_cast<int>(view.size());
    int n = p.dim();
    // Dual system in mu: mu >= 0, sum mu_i a_i = lambda, minimize sum mu_i c_i.
    // Entailed iff the minimum is <= lambda0 (rows a.x <= c, target
    // lambda.x <= lambda0 with lambda = coeffs(e), lambda0 = -constant(e)).
    std::vector<LpRow> rows;
    for (int j = 0; j < n; ++j) {
        LpRow r;
        r.a.assign(m, Rat(0));
        for (int i = 0; i < m; ++i) r.a[i] = view[i].coeff(j);
        r.b = e.coeff(j);
        r.eq = true;
        rows.push_back(std::move(r));
    }
    for (int i = 0; i < m; ++i) {
        LpRow r;
        r.a.assign(m, Rat(0));
        r.a[i] = Rat(-1);
        r.b = Rat(0);
        rows.push_back(std::move(r));
    }
    RatVec cost(m, Rat(0));
    for (int i = 0; i < m; ++i) cost[i] = -view[i].constant();
    Rat lambda0 = -e.constant();

    LpOutcome o = lp_minimize(m, rows, cost);
    if (o.status == LpStatus::Infeasible) return std::nullopt;
    if (o.status == LpStatus::Unbounded) {
        // P is empty; slide along the improving ray until the bound holds.
        RatVec mu = o.point;
        Rat val = dot(cost, mu);
        Rat drop = dot(cost, o.ray);
        if (val > lambda0) {
            Rat t = (val - lambda0) / (-drop);
            for (int i = 0; i < m; ++i) mu[i] += t * o.ray[i];
        }
        return mu;
    }
    if (o.value > lambda0) return std::nullopt;
    return o.point;
}

LinExpr normalize_expr(const LinExpr &e) {
    // Primitive integer coefficients; the constant scales along.
    if (e.is_constant()) return e;
    RatVec cs;
    for (const auto &[v, c] : e.terms()) cs.push_back(c);
    mpz_class l = den_lcm(cs);
    mpz_class g = 0;
    for (const auto &c : cs) {
        mpz_class z = c.num() * (l / c.den());
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), z.get_mpz_t());
    }
    if (g == 0) return e;
    Rat k = Rat(mpz_class(l)) / Rat(mpz_class(g));
    LinExpr r = e;
    r *= k;
    return r;
}

std::string expr_key(const LinExpr &e) {
    std::string s = e.constant().str();
    for (const auto &[v, c] : e.terms()) s += "|" + std::to_string(v) + ":" + c.str();
    return s;
}

// Syntactic cleanup: normalize rows, drop tautologies and duplicates,
// collapse a <= pair into an equality. Returns empty(dim) on a constant
// contradiction.
Poly tidy(const Poly &p) {
    std::set<std::string> seen_le, seen_eq;
    std::vector<LinExpr> les;
    std::vector<LinExpr> eqs;
    for (const auto &r : p.rows()) {
        LinExpr e = normalize_expr(r.expr);
        if (e.is_constant()) {
            bool bad = r.rel == Rel::Eq ? !e.constant().is_zero() : e.constant() > Rat(0);
            if (bad) return Poly::empty(p.dim());
            continue;
        }
        if (r.rel == Rel::Eq) {
            LinExpr neg = e;
            neg *= Rat(-1);
            std::string k = expr_key(e), kn = expr_key(neg);
            if (seen_eq.count(k) || seen_eq.count(kn)) continue;
            seen_eq.insert(k);
            eqs.push_back(e);
        } else {
            std::string k = expr_key(e);
            if (seen_le.count(k)) continue;
            seen_le.insert(k);
            les.push_back(e);
        }
    }
    // Pair x <= 0 with -x <= 0 into x = 0.
    std::vector<bool> drop(les.size(), false);
    for (size_t i = 0; i < les.size(); ++i) {
        if (drop[i]) continue;
        LinExpr neg = les[i];
        neg *= Rat(-1);
        std::string kn = expr_key(neg);
        for (size_t j = i + 1; j < les.size(); ++j) {
            if (!drop[j] && expr_key(les[j]) == kn) {
                drop[i] = drop[j] = true;
                std::string k = expr_key(les[i]);
                if (!seen_eq.count(k) && !seen_eq.count(kn)) {
                    seen_eq.insert(k);
                    eqs.push_back(les[i]);
                }
                break;
            }
        }
    }
    Poly out(p.dim());
    for (const auto &e : eqs) out.add(Ineq::eq(e));
    for (size_t i = 0; i < les.size(); ++i)
        if (!drop[i]) out.add(Ineq::le(les[i]));
    return out;
}

} // namespace

bool entails_unchecked(const Poly &p, const Ineq &q) {
    if (!entail_mu(p, q.expr)) return false;
    if (q.rel == Rel::Eq) {
        LinExpr neg = q.expr;
        neg *= Rat(-1);
        if (!entail_mu(p, neg)) return false;
    }
    return true;
}

std::optional<FarkasCert> entails(const Poly &p, const Ineq &q) {
    if (is_empty(p)) throw EmptyInput("entails: empty polyhedron");
    auto mu = entail_mu(p, q.expr);
    if (!mu) return std::nullopt;
    if (q.rel == Rel::Eq) {
        LinExpr neg = q.expr;
        neg *= Rat(-1);
        if (!entail_mu(p, neg)) return std::nullopt;
    }
    return FarkasCert{*mu};
}

bool entails_all(const Poly &p, const Poly &q) {
    for (const auto &r : q.rows())
        if (!entails_unchecked(p, r)) return false;
    return true;
}

bool same_set(const Poly &a, const Poly &b) { return entails_all(a, b) && entails_all(b, a); }

Poly remove_redundant(const Poly &p) {
    Poly t = tidy(p);
    if (t.rows().size() <= 1) return t;
    std::vector<Ineq> rows(t.rows().begin(), t.rows().end());
    std::vector<bool> keep(rows.size(), true);
    for (size_t i = 0; i < rows.size(); ++i) {
        Poly rest(t.dim());
        for (size_t j = 0; j < rows.size(); ++j)
            if (j != i && keep[j]) rest.add(rows[j]);
        if (entails_unchecked(rest, rows[i])) keep[i] = false;
    }
    Poly out(t.dim());
    for (size_t i = 0; i < rows.size(); ++i)
        if (keep[i]) out.add(rows[i]);
    return out;
}

Poly rename(const Poly &p, const std::vector<VarId> &map, int new_dim) {
    Poly out(new_dim);
    for (const auto &r : p.rows()) {
        LinExpr e(r.expr.constant());
        for (const auto &[v, c] : r.expr.terms()) {
            if (v >= static_cast<int>(map.size()) || map[v] < 0)
                throw ArityError("rename: unmapped variable");
            e.add_term(map[v], c);
        }
        out.add(Ineq{e, r.rel});
    }
    return out;
}

namespace {

// Eliminates one variable. Equality rows with the variable substitute; plain
// Fourier-Motzkin otherwise.
Poly eliminate_var(const Poly &p, VarId v) {
    for (size_t i = 0; i < p.rows().size(); ++i) {
        const Ineq &r = p.rows()[i];
        if (r.rel != Rel::Eq) continue;
        Rat c = r.expr.coeff(v);
        if (c.is_zero()) continue;
        // v = -(rest)/c
        LinExpr repl = r.expr;
        repl.set_coeff(v, Rat(0));
        repl *= (-c.inv());
        Poly out(p.dim());
        for (size_t j = 0; j < p.rows().size(); ++j) {
            if (j == i) continue;
            const Ineq &s = p.rows()[j];
            out.add(Ineq{s.expr.substituted(v, repl), s.rel});
        }
        return tidy(out);
    }
    std::vector<LinExpr> pos, neg, rest_le;
    std::vector<LinExpr> rest_eq;
    for (const auto &r : p.rows()) {
        Rat c = r.expr.coeff(v);
        if (c.is_zero()) {
            (r.rel == Rel::Eq ? rest_eq : rest_le).push_back(r.expr);
            continue;
        }
        // Only <= rows can reach here.
        if (c.sign() > 0)
            pos.push_back(r.expr);
        else
            neg.push_back(r.expr);
    }
    Poly out(p.dim());
    for (const auto &e : rest_eq) out.add(Ineq::eq(e));
    for (const auto &e : rest_le) out.add(Ineq::le(e));
    for (const auto &up : pos) {
        for (const auto &lo : neg) {
            // up: a*v + e1 <= 0 (a>0), lo: -b*v + e2 <= 0 (b>0)
            Rat a = up.coeff(v), b = -lo.coeff(v);
            LinExpr comb = up;
            comb *= b;
            LinExpr lo_scaled = lo;
            lo_scaled *= a;
            comb += lo_scaled;
            comb.set_coeff(v, Rat(0)); // exact cancellation; guard rounding-free
            out.add(Ineq::le(comb));
        }
    }
    return remove_redundant(out);
}

} // namespace

Poly project(const Poly &p, const std::vector<VarId> &keep) {
    std::vector<bool> kept(p.dim(), false);
    for (VarId v : keep) {
        if (v < 0 || v >= p.dim()) throw ArityError("project: variable out of range");
        kept[v] = true;
    }
    Poly cur = tidy(p);
    // Cheapest variable first: fewest pos*neg products.
    for (;;) {
        VarId best = -1;
        long best_cost = -1;
        for (VarId v = 0; v < p.dim(); ++v) {
            if (kept[v]) continue;
            long np = 0, nn = 0, ne = 0;
            for (const auto &r : cur.rows()) {
                Rat c = r.expr.coeff(v);
                if (c.is_zero()) continue;
                if (r.rel == Rel::Eq)
                    ne++;
                else if (c.sign() > 0)
                    np++;
                else
                    nn++;
            }
            if (np + nn + ne == 0) {
                kept[v] = true; // nothing mentions it
                continue;
            }
            long cost = ne > 0 ? 0 : np * nn;
            if (best < 0 || cost < best_cost) {
                best = v;
                best_cost = cost;
            }
        }
        if (best < 0) break;
        cur = eliminate_var(cur, best);
        kept[best] = true;
    }
    std::vector<VarId> map(p.dim(), -1);
    for (size_t i = 0; i < keep.size(); ++i) map[keep[i]] = static_cast<VarId>(i);
    return rename(cur, map, static_cast<int>(keep.size()));
}

Poly recession_cone(const Poly &p) {
    Poly out(p.dim());
    for (const auto &r : p.rows()) {
        LinExpr e = r.expr;
        e.set_constant(Rat(0));
        out.add(Ineq{e, r.rel});
    }
    return tidy(out);
}

namespace {

// Gaussian elimination of equality rows: returns an inequality-only system
// plus the substitution chain for lifting reduced points back.
struct EqReduction {
    Poly reduced;                                  // same dimension, Le rows only
    std::vector<std::pair<VarId, LinExpr>> chain;  // eliminated var -> expr
    bool contradictory = false;

    explicit EqReduction(int dim) : reduced(dim) {}

    RatVec lift(RatVec x) const {
        for (auto it = chain.rbegin(); it != chain.rend(); ++it)
            x[it->first] = it->second.eval(x);
        return x;
    }
};

EqReduction reduce_equalities(const Poly &p) {
    EqReduction out(p.dim());
    std::vector<Ineq> rows(p.rows().begin(), p.rows().end());
    for (;;) {
        int found = -1;
        for (size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].rel == Rel::Eq && !rows[i].expr.is_constant()) {
                found = static_cast<int>(i);
                break;
            }
        }
        if (found < 0) break;
        LinExpr e = rows[found].expr;
        rows.erase(rows.begin() + found);
        VarId v = e.terms().begin()->first;
        Rat c = e.terms().begin()->second;
        LinExpr repl = e;
        repl.set_coeff(v, Rat(0));
        repl *= -c.inv(); // v = repl
        for (auto &r : rows) r.expr = r.expr.substituted(v, repl);
        for (auto &[w, expr] : out.chain) expr = expr.substituted(v, repl);
        out.chain.emplace_back(v, repl);
    }
    for (const auto &r : rows) {
        if (r.expr.is_constant()) {
            bool bad = r.rel == Rel::Eq ? !r.expr.constant().is_zero()
                                        : r.expr.constant() > Rat(0);
            if (bad) out.contradictory = true;
            continue;
        }
        out.reduced.add(r);
    }
    return out;
}

} // namespace

RatVec relative_interior_point(const Poly &p) {
    EqReduction red = reduce_equalities(p);
    if (red.contradictory) throw EmptyInput("relative_interior_point: empty polyhedron");
    const Poly &work = red.reduced;
    auto base0 = feasible_point(work);
    if (!base0) throw EmptyInput("relative_interior_point: empty polyhedron");
    std::vector<LinExpr> view = work.ineq_view();
    if (view.empty()) return red.lift(RatVec(p.dim(), Rat(0)));
    const Poly &pr = work;
    auto base = base0;
    int n = p.dim();

    // Per-row max-slack LP (slack capped at 1), restricted to one row or run
    // with a shared bound across all rows.
    auto max_slack = [&](int row) -> std::pair<Rat, RatVec> {
        std::vector<LpRow> rows;
        for (const auto &r : pr.lp_rows()) {
            LpRow ext = r;
            ext.a.resize(n + 1, Rat(0));
            rows.push_back(std::move(ext));
        }
        LpRow cap;
        cap.a.assign(n + 1, Rat(0));
        cap.a[n] = Rat(1);
        cap.b = Rat(1);
        rows.push_back(cap);
        for (size_t i = 0; i < view.size(); ++i) {
            if (row >= 0 && static_cast<int>(i) != row) continue;
            LpRow slack;
            slack.a = view[i].dense(n);
            slack.a.push_back(Rat(1)); // e(x) + s <= 0
            slack.b = -view[i].constant();
            rows.push_back(std::move(slack));
        }
        RatVec obj(n + 1, Rat(0));
        obj[n] = Rat(1);
        LpOutcome o = lp_maximize(n + 1, rows, obj);
        if (o.status != LpStatus::Optimal) return {Rat(0), *base};
        return {o.value, RatVec(o.point.begin(), o.point.begin() + n)};
    };

    // One shared LP first: a positive joint slack already certifies a
    // relative-interior point. Rows still tight at that point are worked
    // off one LP at a time, each new point crediting every row it clears;
    // implicit equalities stay at zero everywhere.
    auto [joint, pt0] = max_slack(-1);
    if (joint > Rat(0)) return red.lift(pt0);
    std::vector<RatVec> points{pt0};
    std::vector<size_t> pending;
    for (size_t i = 0; i < view.size(); ++i)
        if (!(view[i].eval(pt0) < Rat(0))) pending.push_back(i);
    while (!pending.empty()) {
        size_t row = pending.back();
        auto [s, pt] = max_slack(static_cast<int>(row));
        if (s > Rat(0)) {
            std::vector<size_t> still;
            for (size_t i : pending)
                if (!(view[i].eval(pt) < Rat(0))) still.push_back(i);
            pending = std::move(still);
            points.push_back(std::move(pt));
        } else {
            pending.pop_back(); // implicit equality
        }
    }
    if (points.size() == 1) return red.lift(pt0);
    RatVec avg(n, Rat(0));
    for (const auto &pt : points)
        for (int j = 0; j < n; ++j) avg[j] += pt[j];
    Rat k = Rat(1, static_cast<long>(points.size()));
    for (auto &c : avg) c *= k;
    return red.lift(avg);
}

} // namespace linterm
