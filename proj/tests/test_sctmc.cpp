#include <doctest.h>

#include "util.hpp"
#include "linterm/sctmc.hpp"
#include "linterm/llrf.hpp"

#include <fstream>
#include <set>
#include <sstream>

using namespace linterm;
using namespace tt;

namespace {

Program load(const std::string &name) {
    std::ifstream in(std::string(CORPUS_DIR) + "/" + name);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_program(ss.str());
}

std::set<std::string> witness_set(const std::vector<LinExpr> &fs,
                                  const std::vector<std::string> &names) {
    std::set<std::string> s;
    for (const auto &f : fs) s.insert(f.str(names));
    return s;
}

} // namespace

TEST_CASE("dsct: the swap relation is well-founded with the pair sum") {
    MlcLoop m = std::get<MlcLoop>(load("dsct_fig52_q1.lt"));
    SizeChangeGraph g = graph_of(m.paths[0], false);
    CHECK(g.fan_in(0) == 1);
    DsctDecision d = dsct_wellfounded(g);
    REQUIRE(d.wf);
    CHECK(d.lrf_vars == std::vector<int>{0, 1}); // x + y
    // The subset sum passes the plain verifier over the graph's polyhedron.
    MlcLoop chk;
    chk.n = m.n;
    chk.domain = Domain::Int;
    chk.paths.emplace_back(m.n, g.to_poly(true));
    LinExpr rho = LinExpr::var(0) + LinExpr::var(1);
    CHECK(verify_lrf(chk, rho).ok);
}

TEST_CASE("dsct: the fan-in relation stutters") {
    MlcLoop m = std::get<MlcLoop>(load("dsct_fig52_q2.lt"));
    SizeChangeGraph g = graph_of(m.paths[0], false);
    CHECK(g.fan_in(1) == 2); // y' bounded by both x and y
    DsctDecision d = dsct_wellfounded(g);
    REQUIRE(!d.wf);
    // The returned state repeats forever: (p, p) is a transition. The
    // textbook point (3,2,0) works as well.
    RatVec pp = d.point;
    pp.insert(pp.end(), d.point.begin(), d.point.end());
    CHECK(g.to_poly(true).contains(pp));
    RatVec textbook = vec({3, 2, 0, 3, 2, 0});
    CHECK(g.to_poly(true).contains(textbook));
}

TEST_CASE("dsct: single strict arc ranks by its variable") {
    SizeChangeGraph g(1);
    g.arc(0, 0, -1);
    DsctDecision d = dsct_wellfounded(g);
    REQUIRE(d.wf);
    CHECK(d.lrf_vars == std::vector<int>{0});
}

TEST_CASE("sct: composition follows the strictness rules") {
    // {x' < x} * {x' < x} = {x' < x}
    SizeChangeGraph dec(1);
    dec.arc(0, 0, -1);
    SizeChangeGraph c = sct_compose(dec, dec);
    CHECK(c.w[0][0] == -1);

    // Composing with the identity-shaped graph is idempotent.
    SizeChangeGraph id(1);
    id.arc(0, 0, 0);
    CHECK(sct_compose(id, id).key() == id.key());
    CHECK(sct_compose(dec, id).key() == dec.key());

    SizeChangeGraph bad(1);
    bad.arc(0, 0, -2);
    CHECK_THROWS_AS(sct_compose(bad, id), FlavorError);
}

TEST_CASE("sct: the three-path loop closes with exactly one new graph") {
    MlcLoop m = std::get<MlcLoop>(load("sct_ex56.lt"));
    // Q3 * Q3 = {x' < x, y' < y}
    SizeChangeGraph q3 = graph_of(m.paths[2], true);
    SizeChangeGraph q4 = sct_compose(q3, q3);
    CHECK(q4.w[0][0] == -1);
    CHECK(q4.w[1][1] == -1);
    CHECK(!q4.w[0][1]);
    CHECK(!q4.w[1][0]);
    // Q1 * Q2 = Q1 and Q2 * Q2 = Q2.
    SizeChangeGraph q1 = graph_of(m.paths[0], true);
    SizeChangeGraph q2 = graph_of(m.paths[1], true);
    CHECK(sct_compose(q1, q2).key() == q1.key());
    CHECK(sct_compose(q2, q2).key() == q2.key());

    ClosureResult res = closure(as_cfg(m), ClosureFlavor::SCT);
    CHECK(res.status == ClosureStatus::AllWellFounded);
    CHECK(res.elements.size() == 4); // the three paths plus Q4
    auto dti = extract_lrf_dti(res);
    CHECK(witness_set(dti, m.vars) == std::set<std::string>{"x", "y", "x + y"});
}

TEST_CASE("sct: acyclic graphs close to an empty certificate") {
    Cfg c;
    c.n = 1;
    c.vars = {"x"};
    c.domain = Domain::Int;
    c.locations = {"a", "b"};
    Poly step(2);
    LinExpr e = LinExpr::var(1);
    e.add_term(0, Rat(-1));
    step.add(Ineq::le(e)); // x' <= x
    c.edges.push_back({0, 1, TransRel(1, step)});
    ClosureResult res = closure(c, ClosureFlavor::SCT);
    CHECK(res.status == ClosureStatus::AllWellFounded);
    CHECK(extract_lrf_dti(res).empty());
}

TEST_CASE("dsct: the two-location graph program proves terminating") {
    Cfg c = std::get<Cfg>(load("dsct_fig51.lt"));
    // Not expressible in the strict SCT fragment (x' <= y + 1).
    CHECK_THROWS_AS(closure(c, ClosureFlavor::SCT), FlavorError);
    ClosureResult res = closure(c, ClosureFlavor::DSCT);
    CHECK(res.status == ClosureStatus::AllWellFounded);
    auto dti = extract_lrf_dti(res);
    std::set<std::string> names = witness_set(dti, c.vars);
    CHECK(names.count("x"));
    CHECK(names.count("y"));
    CHECK(names.count("z"));
}

TEST_CASE("mc: composition emits exactly the entailed order constraints") {
    Cfg c = std::get<Cfg>(load("mc_fig53.lt"));
    // Q3 (l2 -> l1) composed with Q5 (l1 -> l2) gives
    // Q6 = {x > z, x >= x', y > z, y >= y', z' > z}.
    auto q3 = mc_relation_of(c.edges[2].rel);
    auto q5 = mc_relation_of(c.edges[4].rel);
    REQUIRE(q3);
    REQUIRE(q5);
    auto q6 = mc_compose(*q3, *q5);
    REQUIRE(q6);
    int n = c.n; // vars x y z -> 0 1 2; primed +n
    // x > z, y > z, z' > z strict; x >= x', y >= y'.
    CHECK(q6->ge[2][0] == 1);     // x >= z + 1
    CHECK(q6->ge[2][1] == 1);     // y >= z + 1
    CHECK(q6->ge[2][n + 2] == 1); // z' >= z + 1
    CHECK(q6->ge[n + 0][0] == 0); // x >= x'
    CHECK(q6->ge[n + 1][1] == 0); // y >= y'
    // Exactness on order constraints, both ways: every emitted constraint is
    // entailed by the exact relational composition, and every entailed order
    // constraint is emitted.
    TransRel exact = compose(c.edges[2].rel, c.edges[4].rel);
    Poly q6p = q6->to_poly();
    for (const auto &row : q6p.rows()) CHECK(entails_unchecked(exact.rel, row));
    for (int u = 0; u < 2 * n; ++u) {
        for (int v = 0; v < 2 * n; ++v) {
            if (u == v) continue;
            for (int strict = 0; strict <= 1; ++strict) {
                LinExpr e2 = LinExpr::var(u);
                e2.add_term(v, Rat(-1));
                e2.set_constant(Rat(strict)); // u - v + strict <= 0, i.e. v >= u (+1)
                if (entails_unchecked(exact.rel, Ineq::le(e2)))
                    CHECK((q6->ge[u][v] && *q6->ge[u][v] >= strict));
            }
        }
    }

    // Composing with the full identity is the identity.
    Poly idp(2 * n);
    for (int i = 0; i < n; ++i) {
        LinExpr eq = LinExpr::var(i);
        eq.add_term(n + i, Rat(-1));
        idp.add(Ineq::eq(eq));
    }
    auto idr = mc_relation_of(TransRel(n, idp));
    REQUIRE(idr);
    auto same = mc_compose(*q3, *idr);
    REQUIRE(same);
    CHECK(same->key() == q3->key());
}

TEST_CASE("mc: unsatisfiable compositions are dropped") {
    Poly up(2);
    {
        LinExpr e = LinExpr::var(0);
        e.add_term(1, Rat(-1));
        e.set_constant(Rat(1));
        up.add(Ineq::le(e)); // x' >= x + 1
    }
    Poly down(2);
    {
        LinExpr e = LinExpr::var(1);
        e.add_term(0, Rat(-1));
        e.set_constant(Rat(1));
        down.add(Ineq::le(e)); // x' <= x - 1
    }
    auto a = mc_relation_of(TransRel(1, up));
    auto b = mc_relation_of(TransRel(1, down));
    REQUIRE(a);
    REQUIRE(b);
    // x < x' then x'' < x' composes fine; but x < x' and x' < x is empty.
    Poly both = up;
    both.add_all(down);
    CHECK(!mc_relation_of(TransRel(1, both)).has_value());
}

TEST_CASE("mc: the two-location program closes to sixteen relations") {
    Cfg c = std::get<Cfg>(load("mc_fig53.lt"));
    ClosureResult res = closure(c, ClosureFlavor::MC);
    CHECK(res.status == ClosureStatus::AllWellFounded);
    CHECK(res.elements.size() == 16);
    int self_count = 0;
    for (const auto &e : res.elements)
        if (e.src == e.dst) {
            self_count++;
            CHECK(e.wf);
            CHECK(!e.witness.empty());
        }
    CHECK(self_count == 8);
    // Every witness verifies as a multiphase tuple on its own element.
    for (const auto &e : res.elements) {
        if (e.src != e.dst) continue;
        MlcLoop one;
        one.n = c.n;
        one.domain = Domain::Int;
        one.paths.emplace_back(c.n, e.mc.to_poly());
        Llrf w;
        w.flavor = LlrfFlavor::MPhase;
        w.components = e.witness;
        CHECK(verify_llrf(one, w).ok);
    }
    // The multiphase element x' <= y, y' <= x, z' > z, y >= z needs depth 2,
    // and the textbook witness <x + y - 2z, y - z> passes on it.
    bool found_q4 = false;
    for (const auto &e : res.elements) {
        if (e.src != e.dst) continue;
        if (e.witness.size() == 2) {
            found_q4 = true;
            MlcLoop one;
            one.n = c.n;
            one.domain = Domain::Int;
            one.paths.emplace_back(c.n, e.mc.to_poly());
            LinExpr a = LinExpr::var(0) + LinExpr::var(1) + LinExpr::var(2, Rat(-2));
            LinExpr b = LinExpr::var(1) + LinExpr::var(2, Rat(-1));
            Llrf w;
            w.flavor = LlrfFlavor::MPhase;
            w.components = {a, b};
            CHECK(verify_llrf(one, w).ok);
        }
    }
    CHECK(found_q4);
}

TEST_CASE("mc: a pure counter-up loop is undecided at the short cap") {
    // x' > x has no fixpoint and no multiphase witness: it spins forever.
    Poly up(2);
    LinExpr e = LinExpr::var(0);
    e.add_term(1, Rat(-1));
    e.set_constant(Rat(1));
    up.add(Ineq::le(e));
    Cfg c;
    c.n = 1;
    c.vars = {"x"};
    c.domain = Domain::Int;
    c.locations = {"l"};
    c.edges.push_back({0, 0, TransRel(1, up)});
    ClosureResult capped = closure(c, ClosureFlavor::MC);
    CHECK(capped.status == ClosureStatus::DepthCapped);
    // The exact bound refutes well-foundedness outright.
    ClosureOptions opts;
    opts.mc_complete_cap = true;
    ClosureResult full = closure(c, ClosureFlavor::MC, opts);
    CHECK(full.status == ClosureStatus::NotWellFounded);
}

TEST_CASE("closure: certificates are composition-closed up to subsumption") {
    MlcLoop m = std::get<MlcLoop>(load("sct_ex56.lt"));
    ClosureResult res = closure(as_cfg(m), ClosureFlavor::SCT);
    auto covered = [&](const SizeChangeGraph &g) {
        for (const auto &e : res.elements) {
            bool weaker = true;
            for (int s = 0; s < g.n && weaker; ++s)
                for (int d = 0; d < g.n && weaker; ++d)
                    if (e.graph.w[s][d] && (!g.w[s][d] || *g.w[s][d] > *e.graph.w[s][d]))
                        weaker = false;
            if (weaker) return true;
        }
        return false;
    };
    for (const auto &a : res.elements)
        for (const auto &b : res.elements) {
            if (a.dst != b.src) continue;
            CHECK(covered(sct_compose(a.graph, b.graph)));
        }
}
