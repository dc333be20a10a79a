#include <doctest.h>

#include "util.hpp"

using namespace linterm;
using namespace tt;

namespace {

// Exact recomputation of dual certificates: mu >= 0 on <=-rows,
// mu^T A = target, mu^T b compared against the claimed bound.
void check_multipliers(const LpProblem &p, const RatVec &mu, const RatVec &target,
                       const Rat &bound, bool strict) {
    REQUIRE(mu.size() == p.rows.size());
    for (size_t i = 0; i < p.rows.size(); ++i)
        if (!p.rows[i].eq) CHECK(mu[i] >= Rat(0));
    for (int j = 0; j < p.n; ++j) {
        Rat s;
        for (size_t i = 0; i < p.rows.size(); ++i)
            if (j < static_cast<int>(p.rows[i].a.size())) s += mu[i] * p.rows[i].a[j];
        CHECK(s == (j < static_cast<int>(target.size()) ? target[j] : Rat(0)));
    }
    Rat v;
    for (size_t i = 0; i < p.rows.size(); ++i) v += mu[i] * p.rows[i].b;
    if (strict)
        CHECK(v < bound);
    else
        CHECK(v <= bound);
}

LpProblem from_poly(const Poly &poly, const RatVec &obj, LpSense sense) {
    LpProblem p;
    p.n = poly.dim();
    p.rows = poly.lp_rows();
    p.objective = obj;
    p.sense = sense;
    return p;
}

} // namespace

TEST_CASE("lp: min x1 over the figure polyhedron attains 1/2") {
    LpProblem p = from_poly(fig21(), {Rat(1), Rat(0)}, LpSense::Min);
    LpOutcome o = lp_solve(p);
    REQUIRE(o.status == LpStatus::Optimal);
    CHECK(o.value == Rat(1, 2));
    CHECK(o.point[0] == Rat(1, 2));
    CHECK(o.point[1] == Rat(7, 2));
    CHECK(fig21().contains(o.point));
    RatVec negated{Rat(-1), Rat(0)};
    check_multipliers(p, o.dual, negated, -o.value, false);
}

TEST_CASE("lp: max 0 over a non-empty system is optimal at 0") {
    LpProblem p = from_poly(fig21(), {Rat(0), Rat(0)}, LpSense::Max);
    LpOutcome o = lp_solve(p);
    REQUIRE(o.status == LpStatus::Optimal);
    CHECK(o.value == Rat(0));
}

TEST_CASE("lp: contradictory bounds yield a Farkas certificate") {
    // x <= 0 and x >= 1
    Poly p(1);
    p.add(le({1}));
    p.add(le({-1}, 1));
    LpProblem lp = from_poly(p, {}, LpSense::Feasibility);
    LpOutcome o = lp_solve(lp);
    REQUIRE(o.status == LpStatus::Infeasible);
    check_multipliers(lp, o.farkas, RatVec(1, Rat(0)), Rat(0), true);
}

TEST_CASE("lp: unbounded maximization returns an improving ray") {
    Poly p(2);
    p.add(ge({1, 0}));  // x >= 0
    p.add(eq({0, 1}));  // y = 0
    LpProblem lp = from_poly(p, {Rat(1), Rat(0)}, LpSense::Max);
    LpOutcome o = lp_solve(lp);
    REQUIRE(o.status == LpStatus::Unbounded);
    CHECK(p.contains(o.point));
    CHECK(o.ray[0] > Rat(0));
    CHECK(o.ray[1] == Rat(0));
    // point + t*ray stays feasible and improves
    RatVec far = vec_add(o.point, scale(o.ray, Rat(100)));
    CHECK(p.contains(far));
}

TEST_CASE("lp: equality rows are honored exactly") {
    Poly p(2);
    p.add(eq({2, 3}, -12)); // 2x + 3y = 12
    p.add(ge({1, 0}));
    p.add(ge({0, 1}));
    LpProblem lp = from_poly(p, {Rat(0), Rat(1)}, LpSense::Max);
    LpOutcome o = lp_solve(lp);
    REQUIRE(o.status == LpStatus::Optimal);
    CHECK(o.value == Rat(4));
    CHECK(o.point[0] == Rat(0));
    check_multipliers(lp, o.dual, {Rat(0), Rat(1)}, o.value, false);
}

TEST_CASE("lp: degenerate and redundant rows do not cycle") {
    Poly p(2);
    p.add(le({1, 0}, -1));
    p.add(le({1, 0}, -1));
    p.add(le({2, 0}, -2));
    p.add(le({0, 1}, -1));
    p.add(ge({1, 1}));
    LpProblem lp = from_poly(p, {Rat(1), Rat(1)}, LpSense::Max);
    LpOutcome o = lp_solve(lp);
    REQUIRE(o.status == LpStatus::Optimal);
    CHECK(o.value == Rat(2));
}
