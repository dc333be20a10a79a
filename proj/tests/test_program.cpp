#include <doctest.h>

#include "util.hpp"
#include "linterm/program.hpp"

#include <fstream>
#include <sstream>

using namespace linterm;
using namespace tt;

namespace {

std::string slurp(const std::string &name) {
    std::ifstream in(std::string(CORPUS_DIR) + "/" + name);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Program load(const std::string &name) { return parse_program(slurp(name)); }

} // namespace

TEST_CASE("parse: single-path loop") {
    Program p = load("lrf_loop1.lt");
    REQUIRE(std::holds_alternative<MlcLoop>(p));
    const auto &m = std::get<MlcLoop>(p);
    CHECK(m.n == 2);
    CHECK(m.paths.size() == 1);
    CHECK(m.domain == Domain::Rat);
    // (x1, x2, x1', x2') = (5, 1, 4, 1) is a transition; (5, 1, 5, 1) is not.
    CHECK(m.paths[0].rel.contains(vec({5, 1, 4, 1})));
    CHECK(!m.paths[0].rel.contains(vec({5, 1, 5, 1})));
}

TEST_CASE("parse: empty path list is a syntax error") {
    CHECK_THROWS_AS(parse_program("vars x\nloop { }"), SyntaxError);
}

TEST_CASE("parse: strict inequality needs the integer domain") {
    CHECK_THROWS_AS(parse_program("vars x\ndomain rat\nloop { path { x > 0, x' = x } }"),
                    DomainError);
    Program ok = parse_program("vars x\ndomain int\nloop { path { x > 0, x' = x } }");
    const auto &m = std::get<MlcLoop>(ok);
    // x > 0 over int becomes x >= 1.
    CHECK(m.paths[0].rel.contains(vec({1, 1})));
    CHECK(!m.paths[0].rel.contains(vec({0, 0})));
}

TEST_CASE("parse: undeclared variables and bad tokens are flagged with location") {
    try {
        parse_program("vars x\nloop { path { y >= 0 } }");
        FAIL("expected SyntaxError");
    } catch (const SyntaxError &e) {
        CHECK(e.line == 2);
    }
}

TEST_CASE("parse: nested-loop program has six locations and nine edges") {
    Program p = load("fig23.lt");
    REQUIRE(std::holds_alternative<Cfg>(p));
    const auto &c = std::get<Cfg>(p);
    CHECK(c.locations.size() == 6);
    CHECK(c.edges.size() == 9);
    CHECK(c.domain == Domain::Int);
    CHECK(c.init_states.has_value());
    CHECK(c.invariants.size() == 6);
}

TEST_CASE("parse/print round trip is stable") {
    for (const char *name : {"lrf_loop1.lt", "fig23.lt", "mc_fig53.lt", "fig61.lt"}) {
        Program p = load(name);
        std::string once = print_program(p);
        std::string twice = print_program(parse_program(once));
        CHECK(once == twice);
    }
}

TEST_CASE("json export carries the stable fields") {
    std::string j = program_to_json(load("fig23.lt"));
    CHECK(j.find("\"schema\"") != std::string::npos);
    CHECK(j.find("\"vars\"") != std::string::npos);
    CHECK(j.find("\"edges\"") != std::string::npos);
    CHECK(j.find("\"invariants\"") != std::string::npos);
}

TEST_CASE("compose: identity is neutral and steps accumulate") {
    Program p = load("lrf_loop1.lt");
    const auto &m = std::get<MlcLoop>(p);
    const TransRel &q = m.paths[0];
    TransRel qi = compose(q, identity_rel(2));
    CHECK(same_set(qi.rel, q.rel));
    // {x' <= x - 1} twice entails x'' <= x - 2
    Poly dec(2 * 1);
    dec.add(le({-1, 1}, 1)); // x' - x + 1 <= 0
    TransRel step(1, dec);
    TransRel twice = compose(step, step);
    CHECK(entails_unchecked(twice.rel, le({-1, 1}, 2)));
}

TEST_CASE("as_affine: deterministic updates are recovered") {
    Program p = load("rset_ex62.lt");
    const auto &m = std::get<MlcLoop>(p);
    auto av = as_affine(m.paths[0]);
    REQUIRE(av.has_value());
    CHECK(av->matrix[0] == vecq({Rat(-1), Rat(1)}));
    CHECK(av->matrix[1] == vecq({Rat(0), Rat(1)}));
    CHECK(av->offset == vecq({Rat(0), Rat(-1)}));
    CHECK(av->is_integral());
    Poly guard(2);
    guard.add(le({-1, 1}, 1)); // -x1 + x2 <= -1
    CHECK(same_set(av->guard, guard));

    // x' <= x is nondeterministic.
    Poly nd(2);
    nd.add(le({1, -1}));
    CHECK(!as_affine(TransRel(1, nd)).has_value());
}

TEST_CASE("as_affine: reconstructed loops round-trip") {
    // x' = 2x - 3y + 1, y' = y - 4 under guard x >= y
    Poly q(4);
    q.add(ge({1, -1, 0, 0}));
    q.add(eq({-2, 3, 1, 0}, -1));
    q.add(eq({0, -1, 0, 1}, 4));
    auto av = as_affine(TransRel(2, q));
    REQUIRE(av.has_value());
    CHECK(av->matrix[0] == vecq({Rat(2), Rat(-3)}));
    CHECK(av->offset[0] == Rat(1));
    CHECK(av->matrix[1] == vecq({Rat(0), Rat(1)}));
    CHECK(av->offset[1] == Rat(-4));
}

TEST_CASE("scc: the two-loop program splits into two nontrivial components") {
    Program p = load("fig41.lt");
    const auto &c = std::get<Cfg>(p);
    SccSplit split = scc_decompose(c);
    int nontrivial = 0;
    std::vector<size_t> sizes;
    for (const auto &scc : split.sccs) {
        if (!scc.edges.empty()) {
            nontrivial++;
            sizes.push_back(scc.locations.size());
        }
    }
    CHECK(nontrivial == 2);
    std::sort(sizes.begin(), sizes.end());
    CHECK(sizes == std::vector<size_t>{1, 4}); // {l6} and {l1..l4}
    // Edges inside components plus bridges account for everything.
    size_t inside = 0;
    for (const auto &scc : split.sccs) inside += scc.edges.size();
    CHECK(inside + split.bridges.size() == c.edges.size());
}

TEST_CASE("scc: acyclic graphs have only trivial components") {
    Cfg c;
    c.n = 1;
    c.vars = {"x"};
    c.locations = {"a", "b"};
    Poly step(2);
    step.add(eq({1, -1}));
    c.edges.push_back({0, 1, TransRel(1, step)});
    SccSplit split = scc_decompose(c);
    for (const auto &scc : split.sccs) CHECK(scc.edges.empty());
    CHECK(split.bridges.size() == 1);
}

TEST_CASE("invariants: inductive ones check out; false ones are flagged") {
    Program p = load("fig23.lt");
    const auto &c = std::get<Cfg>(p);
    InvariantReport rep = check_invariants(c);
    CHECK(rep.ok);
    CHECK(rep.violations.empty());

    Cfg broken = c;
    broken.invariants[broken.initial] = Poly::empty(c.n);
    InvariantReport rep2 = check_invariants(broken);
    CHECK(!rep2.ok);

    // Applying invariants never enlarges an edge relation.
    Cfg applied = apply_invariants(c);
    for (size_t i = 0; i < c.edges.size(); ++i)
        CHECK(entails_all(applied.edges[i].rel.rel, c.edges[i].rel.rel));

    Cfg plain = c;
    plain.invariants.clear();
    Cfg same = apply_invariants(plain);
    for (size_t i = 0; i < c.edges.size(); ++i)
        CHECK(same_set(same.edges[i].rel.rel, c.edges[i].rel.rel));
}

TEST_CASE("lassos: single self-loop yields the edge with an identity stem") {
    Cfg c;
    c.n = 1;
    c.vars = {"x"};
    c.locations = {"l"};
    Poly dec(2);
    dec.add(ge({1, 0}));
    dec.add(eq({-1, 1}, 1)); // x' = x - 1
    c.edges.push_back({0, 0, TransRel(1, dec)});
    LassoBudgets b;
    b.max_stem = 2;
    b.max_cycle = 2;
    b.max_unroll = 1;
    auto ls = enumerate_lassos(c, b);
    REQUIRE(!ls.empty());
    CHECK(ls[0].stem_edges.empty());
    CHECK(same_set(ls[0].stem.rel, identity_rel(1).rel));
    CHECK(same_set(ls[0].loop.rel, dec));
}

TEST_CASE("lassos: every loop relation is a self-relation at its head") {
    Program p = load("fig61.lt");
    const auto &c = std::get<Cfg>(p);
    LassoBudgets b;
    b.max_stem = 4;
    b.max_cycle = 2;
    b.max_unroll = 2;
    b.max_lassos = 64;
    auto ls = enumerate_lassos(c, b);
    CHECK(!ls.empty());
    for (const auto &l : ls) {
        if (l.cycle_edges.empty()) continue;
        CHECK(c.edges[l.cycle_edges.front()].src == l.head);
        CHECK(c.edges[l.cycle_edges.back()].dst == l.head);
    }
}
