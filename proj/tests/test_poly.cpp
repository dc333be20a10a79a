#include <doctest.h>

#include "util.hpp"

using namespace linterm;
using namespace tt;

TEST_CASE("poly: emptiness") {
    Poly contradictory(1);
    contradictory.add(le({1}));      // x <= 0
    contradictory.add(le({-1}, 1));  // x >= 1
    CHECK(is_empty(contradictory));
    CHECK(!is_empty(fig21()));
}

TEST_CASE("poly: Farkas entailment of -x1 <= -1/2 over the figure system") {
    Poly p = fig21();
    Ineq q = Ineq::le(exprq({Rat(-1), Rat(0)}, Rat(1, 2)));
    auto cert = entails(p, q);
    REQUIRE(cert.has_value());
    // Recompute mu^T A = lambda and mu^T c <= lambda0 exactly.
    auto view = p.ineq_view();
    REQUIRE(cert->mu.size() == view.size());
    LinExpr sum;
    Rat rhs;
    for (size_t i = 0; i < view.size(); ++i) {
        CHECK(cert->mu[i] >= Rat(0));
        LinExpr scaled = view[i];
        scaled.set_constant(Rat(0));
        scaled *= cert->mu[i];
        sum += scaled;
        rhs += cert->mu[i] * (-view[i].constant());
    }
    CHECK(sum == exprq({Rat(-1), Rat(0)}));
    CHECK(rhs <= Rat(1, 2));
    // The worked multipliers (1/2, 1/2, 0) are themselves a valid certificate.
    RatVec paper{Rat(1, 2), Rat(1, 2), Rat(0)};
    LinExpr psum;
    Rat prhs;
    for (size_t i = 0; i < view.size(); ++i) {
        LinExpr scaled = view[i];
        scaled.set_constant(Rat(0));
        scaled *= paper[i];
        psum += scaled;
        prhs += paper[i] * (-view[i].constant());
    }
    CHECK(psum == exprq({Rat(-1), Rat(0)}));
    CHECK(prhs <= Rat(1, 2));
}

TEST_CASE("poly: everything entails 0 <= 1") {
    Ineq triv = Ineq::le(expr({}, -1));
    CHECK(entails(fig21(), triv).has_value());
}

TEST_CASE("poly: entails on an empty polyhedron is an error") {
    Poly e = Poly::empty(2);
    CHECK_THROWS_AS(entails(e, le({1, 0})), EmptyInput);
}

TEST_CASE("poly: projection of {x=y, y>=1} onto x is {x>=1}") {
    Poly p(2);
    p.add(eq({1, -1}));
    p.add(ge({0, 1}, -1));
    Poly q = project(p, {0});
    Poly expect(1);
    expect.add(ge({1}, -1));
    CHECK(same_set(q, expect));
}

TEST_CASE("poly: projection of the two-variable update loop onto (x1, x1')") {
    // while (4x1 >= x2, x2 >= 1) do 5x1' <= 2x1+1, 5x1' >= 2x1-3, x2' = x2
    Poly q(4);
    q.add(ge({4, -1, 0, 0}));        // 4x1 - x2 >= 0
    q.add(ge({0, 1, 0, 0}, -1));     // x2 >= 1
    q.add(le({-2, 0, 5, 0}, -1));    // 5x1' <= 2x1 + 1
    q.add(ge({-2, 0, 5, 0}, 3));     // 5x1' >= 2x1 - 3
    q.add(eq({0, 1, 0, -1}));        // x2' = x2
    Poly proj = project(q, {0, 2});
    Poly expect(2);
    expect.add(ge({4, 0}, -1));      // 4x1 >= 1
    expect.add(le({-2, 5}, -1));
    expect.add(ge({-2, 5}, 3));
    CHECK(same_set(proj, expect));
    CHECK(proj.rows().size() == 3);
}

TEST_CASE("poly: projection keeps sampled points") {
    Poly p = fig21();
    Poly px = project(p, {0});
    auto pt = feasible_point(p);
    REQUIRE(pt);
    CHECK(px.contains({(*pt)[0]}));
}

TEST_CASE("poly: generators of the figure polyhedron") {
    GenRep g = to_generators(fig21());
    CHECK(point_set(g.vertices) ==
          point_set({vecq({Rat(1, 2), Rat(7, 2)}), vecq({Rat(10, 3), Rat(2, 3)})}));
    CHECK(ray_set(g.rays) == ray_set({vec({1, 1}), vec({2, 1})}));
    // Membership of (3,2) through the generator representation.
    CHECK(g.contains(vec({3, 2})));
    CHECK(!g.contains(vec({0, 0})));
}

TEST_CASE("poly: unit box generators are its corners") {
    Poly box(2);
    box.add(ge({1, 0}));
    box.add(ge({0, 1}));
    box.add(le({1, 0}, -1));
    box.add(le({0, 1}, -1));
    GenRep g = to_generators(box);
    CHECK(g.rays.empty());
    CHECK(point_set(g.vertices) ==
          point_set({vec({0, 0}), vec({0, 1}), vec({1, 0}), vec({1, 1})}));
}

TEST_CASE("poly: constraint/generator round trip preserves the set") {
    Poly p = fig21();
    Poly back = to_constraints(to_generators(p));
    CHECK(same_set(p, back));
}

TEST_CASE("poly: to_generators of an empty polyhedron is an error") {
    CHECK_THROWS_AS(to_generators(Poly::empty(2)), EmptyInput);
}

TEST_CASE("poly: recession cones") {
    Poly box(2);
    box.add(ge({1, 0}));
    box.add(ge({0, 1}));
    box.add(le({1, 1}, -1));
    Poly cone = recession_cone(box);
    Poly origin(2);
    origin.add(eq({1, 0}));
    origin.add(eq({0, 1}));
    CHECK(same_set(cone, origin));

    Poly fig_cone = recession_cone(fig21());
    GenRep g = to_generators(fig_cone);
    CHECK(ray_set(g.rays) == ray_set({vec({1, 1}), vec({2, 1})}));
    // Scaling test: vertices of P pushed far along each ray stay inside.
    for (const auto &r : g.rays) {
        RatVec far = vec_add(vecq({Rat(1, 2), Rat(7, 2)}), scale(r, Rat(1000)));
        CHECK(fig21().contains(far));
    }
}

TEST_CASE("poly: integer hull of the figure polyhedron") {
    Poly hull = integer_hull(fig21());
    Poly expect = fig21();
    expect.add(ge({1, 0}, -1));
    expect.add(ge({0, 1}, -1));
    CHECK(same_set(hull, expect));
    GenRep g = to_generators(hull);
    CHECK(point_set(g.vertices) ==
          point_set({vec({1, 3}), vec({1, 4}), vec({3, 1}), vec({4, 1})}));
    CHECK(ray_set(g.rays) == ray_set({vec({1, 1}), vec({2, 1})}));
    for (const auto &v : g.vertices)
        for (const auto &c : v) CHECK(c.is_integer());
    // Hull is contained in the original (row-wise entailment).
    Poly fig = fig21();
    for (const auto &r : fig.rows()) CHECK(entails_unchecked(hull, r));
}

TEST_CASE("poly: integer hull of an integral polyhedron is itself") {
    Poly box(2);
    box.add(ge({1, 0}));
    box.add(ge({0, 1}));
    box.add(le({1, 1}, -3));
    CHECK(same_set(integer_hull(box), box));
}

TEST_CASE("poly: integer hull with no lattice points is empty") {
    Poly p(1);
    p.add(eq({2}, -1)); // 2x = 1
    CHECK(is_empty(integer_hull(p)));
}

TEST_CASE("poly: integer points") {
    Poly p(1);
    p.add(eq({2}, -1));
    CHECK(!integer_point(p).has_value());

    auto pt = integer_point(fig21());
    REQUIRE(pt.has_value());
    for (const auto &c : *pt) CHECK(c.is_integer());
    CHECK(fig21().contains(*pt));
}

TEST_CASE("poly: relative interior points") {
    // Segment from (0,0) to (2,0).
    Poly seg(2);
    seg.add(eq({0, 1}));
    seg.add(ge({1, 0}));
    seg.add(le({1, 0}, -2));
    RatVec p = relative_interior_point(seg);
    CHECK(p[1] == Rat(0));
    CHECK(p[0] > Rat(0));
    CHECK(p[0] < Rat(2));

    Poly half(1);
    half.add(ge({1}));
    RatVec q = relative_interior_point(half);
    CHECK(q[0] > Rat(0));

    CHECK_THROWS_AS(relative_interior_point(Poly::empty(1)), EmptyInput);
}

TEST_CASE("poly: redundant rows are removed") {
    Poly p(2);
    p.add(ge({1, 0}));
    p.add(ge({0, 1}));
    p.add(ge({1, 1}));        // implied by the first two
    p.add(ge({2, 0}));        // duplicate up to scaling
    Poly r = remove_redundant(p);
    CHECK(r.rows().size() == 2);
    CHECK(same_set(r, p));
}
