// Shared helpers for the test suites: terse builders for expressions,
// constraints, and the recurring textbook polyhedra.
#pragma once

#include "linterm/poly.hpp"

#include <initializer_list>
#include <set>
#include <string>
#include <vector>

namespace tt {

using namespace linterm;

// expr({a0, a1, ...}, k) = a0*x0 + a1*x1 + ... + k
inline LinExpr expr(std::initializer_list<long> coeffs, long k = 0) {
    LinExpr e;
    int i = 0;
    for (long c : coeffs) e.add_term(i++, Rat(c));
    e.set_constant(Rat(k));
    return e;
}

inline LinExpr exprq(std::initializer_list<Rat> coeffs, Rat k = Rat(0)) {
    LinExpr e;
    int i = 0;
    for (const Rat &c : coeffs) e.add_term(i++, c);
    e.set_constant(k);
    return e;
}

// le({a...}, k): a.x + k <= 0 ; ge: a.x + k >= 0 ; eq: a.x + k = 0
inline Ineq le(std::initializer_list<long> a, long k = 0) { return Ineq::le(expr(a, k)); }
inline Ineq ge(std::initializer_list<long> a, long k = 0) {
    LinExpr e = expr(a, k);
    e *= Rat(-1);
    return Ineq::le(e);
}
inline Ineq eq(std::initializer_list<long> a, long k = 0) { return Ineq::eq(expr(a, k)); }

inline Poly poly(int dim, std::initializer_list<Ineq> rows) {
    Poly p(dim);
    for (const auto &r : rows) p.add(r);
    return p;
}

inline RatVec vec(std::initializer_list<long> xs) {
    RatVec v;
    for (long x : xs) v.emplace_back(x);
    return v;
}

inline RatVec vecq(std::initializer_list<Rat> xs) { return RatVec(xs); }

inline std::set<std::string> point_set(const std::vector<RatVec> &pts) {
    std::set<std::string> s;
    for (const auto &p : pts) s.insert(vec_str(p));
    return s;
}

inline std::set<std::string> ray_set(const std::vector<RatVec> &rays) {
    std::set<std::string> s;
    for (const auto &r : rays) s.insert(vec_str(primitive(r)));
    return s;
}

// Figure-2.1 polyhedron, rows in the worked Farkas-example order:
// { -x1 - x2 <= -4, x2 - x1 <= 3, x1/2 - x2 <= 1 }
inline Poly fig21() {
    Poly p(2);
    p.add(le({-1, -1}, 4));
    p.add(le({-1, 1}, -3));
    p.add(Ineq::le(exprq({Rat(1, 2), Rat(-1)}, Rat(-1))));
    return p;
}

} // namespace tt
