/*
 * Copyright (c) 2026, the linterm authors
 *
 * SPDX-License-Identifier: MIT
 */

#pragma once

#include "linterm/rational.hpp"

#include <map>
#include <string>
#include <vector>

namespace linterm {

using VarId = int;

/// Affine expression sum(coeffs[v] * v) + constant over variable ids.
/// Zero coefficients are never stored.
class LinExpr {
public:
    LinExpr() = default;
    explicit LinExpr(Rat constant) : constant_(std::move(constant)) {}

    static LinExpr var(VarId v, Rat coeff = Rat(1)) {
        LinExpr e;
        e.set_coeff(v, std::move(coeff));
        return e;
    }

    const Rat &constant() const { return constant_; }
    void set_constant(Rat c) { constant_ = std::move(c); }

    Rat coeff(VarId v) const {
        auto it = coeffs_.find(v);
        return it == coeffs_.end() ? Rat(0) : it->second;
    }
    void set_coeff(VarId v, Rat c) {
        if (c.is_zero())
            coeffs_.erase(v);
        else
            coeffs_[v] = std::move(c);
    }
    void add_term(VarId v, const Rat &c) { set_coeff(v, coeff(v) + c); }

    const std::map<VarId, Rat> &terms() const { return coeffs_; }
    bool is_constant() const { return coeffs_.empty(); }

    LinExpr &operator+=(const LinExpr &o) {
        for (const auto &[v, c] : o.coeffs_) add_term(v, c);
        constant_ += o.constant_;
        return *this;
    }
    LinExpr &operator-=(const LinExpr &o) {
        for (const auto &[v, c] : o.coeffs_) add_term(v, -c);
        constant_ -= o.constant_;
        return *this;
    }
    LinExpr &operator*=(const Rat &k) {
        if (k.is_zero()) {
            coeffs_.clear();
            constant_ = Rat(0);
            return *this;
        }
        for (auto &[v, c] : coeffs_) c *= k;
        constant_ *= k;
        return *this;
    }
    friend LinExpr operator+(LinExpr a, const LinExpr &b) { return a += b; }
    friend LinExpr operator-(LinExpr a, const LinExpr &b) { return a -= b; }
    friend LinExpr operator*(LinExpr a, const Rat &k) { return a *= k; }

    friend bool operator==(const LinExpr &a, const LinExpr &b) {
        return a.constant_ == b.constant_ && a.coeffs_ == b.coeffs_;
    }

    /// Evaluates at a point indexed by VarId.
    Rat eval(const RatVec &point) const {
        Rat s = constant_;
        for (const auto &[v, c] : coeffs_) {
            if (v < 0 || static_cast<size_t>(v) >= point.size())
                throw std::out_of_range("LinExpr::eval: point too short");
            s += c * point[v];
        }
        return s;
    }

    /// Dense coefficient vector of length n (constant excluded).
    RatVec dense(int n) const {
        RatVec r(n, Rat(0));
        for (const auto &[v, c] : coeffs_) {
            if (v >= 0 && v < n) r[v] = c;
        }
        return r;
    }

    /// Largest referenced variable id plus one.
    int min_dim() const { return coeffs_.empty() ? 0 : coeffs_.rbegin()->first + 1; }

    /// Substitutes variable v by an expression.
    LinExpr substituted(VarId v, const LinExpr &repl) const {
        LinExpr r = *this;
        Rat c = r.coeff(v);
        if (c.is_zero()) return r;
        r.set_coeff(v, Rat(0));
        LinExpr scaled = repl;
        scaled *= c;
        r += scaled;
        return r;
    }

    /// Renders with the given variable names, e.g. "3*x - y/2 + 1".
    std::string str(const std::vector<std::string> &names) const;

private:
    std::map<VarId, Rat> coeffs_;
    Rat constant_;
};

enum class Rel { Le, Eq };

/// One constraint `expr <= 0` or `expr = 0`. Strict inequalities are
/// normalized away at parse time and never reach this representation.
struct Ineq {
    LinExpr expr;
    Rel rel = Rel::Le;

    static Ineq le(LinExpr e) { return {std::move(e), Rel::Le}; }
    static Ineq eq(LinExpr e) { return {std::move(e), Rel::Eq}; }

    bool sat(const RatVec &point) const {
        Rat v = expr.eval(point);
        return rel == Rel::Le ? v <= Rat(0) : v.is_zero();
    }

    std::string str(const std::vector<std::string> &names) const;
};

} // namespace linterm
