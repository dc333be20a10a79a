/*
 * Copyright (c) 2026, the linterm authors
 *
 * SPDX-License-Identifier: MIT
 */

#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace linterm {

/// Arbitrary-precision rational, always canonical (lowest terms, positive
/// denominator). Thin value wrapper over GMP's mpq_class.
class Rat {
public:
    Rat() : v_(0) {}
    Rat(long n) : v_(static_cast<signed long>(n)) {}
    Rat(int n) : v_(static_cast<signed long>(n)) {}
    Rat(long num, long den) : v_(static_cast<signed long>(num), static_cast<signed long>(den)) {
        if (den == 0) throw std::invalid_argument("Rat: zero denominator");
        v_.canonicalize();
    }
    explicit Rat(const mpq_class &q) : v_(q) { v_.canonicalize(); }
    explicit Rat(const mpz_class &z) : v_(z) {}

    /// Parses "p", "-p", or "p/q". Throws std::invalid_argument on junk.
    static Rat parse(const std::string &s) {
        mpq_class q;
        if (q.set_str(s, 10) != 0) throw std::invalid_argument("Rat: cannot parse '" + s + "'");
        if (q.get_den() == 0) throw std::invalid_argument("Rat: zero denominator in '" + s + "'");
        q.canonicalize();
        return Rat(q);
    }

    const mpq_class &raw() const { return v_; }
    mpz_class num() const { return v_.get_num(); }
    mpz_class den() const { return v_.get_den(); }

    bool is_zero() const { return sgn(v_) == 0; }
    bool is_integer() const { return v_.get_den() == 1; }
    int sign() const { return sgn(v_); }

    mpz_class floor() const {
        mpz_class q;
        mpz_fdiv_q(q.get_mpz_t(), v_.get_num_mpz_t(), v_.get_den_mpz_t());
        return q;
    }
    mpz_class ceil() const {
        mpz_class q;
        mpz_cdiv_q(q.get_mpz_t(), v_.get_num_mpz_t(), v_.get_den_mpz_t());
        return q;
    }

    Rat abs() const { return sign() < 0 ? Rat(mpq_class(-v_)) : *this; }
    Rat inv() const {
        if (is_zero()) throw std::domain_error("Rat: division by zero");
        return Rat(mpq_class(1) / v_);
    }

    Rat operator-() const { return Rat(mpq_class(-v_)); }
    Rat &operator+=(const Rat &o) { v_ += o.v_; return *this; }
    Rat &operator-=(const Rat &o) { v_ -= o.v_; return *this; }
    Rat &operator*=(const Rat &o) { v_ *= o.v_; return *this; }
    Rat &operator/=(const Rat &o) {
        if (o.is_zero()) throw std::domain_error("Rat: division by zero");
        v_ /= o.v_;
        return *this;
    }

    friend Rat operator+(Rat a, const Rat &b) { return a += b; }
    friend Rat operator-(Rat a, const Rat &b) { return a -= b; }
    friend Rat operator*(Rat a, const Rat &b) { return a *= b; }
    friend Rat operator/(Rat a, const Rat &b) { return a /= b; }

    friend bool operator==(const Rat &a, const Rat &b) { return a.v_ == b.v_; }
    friend bool operator!=(const Rat &a, const Rat &b) { return a.v_ != b.v_; }
    friend bool operator<(const Rat &a, const Rat &b) { return a.v_ < b.v_; }
    friend bool operator<=(const Rat &a, const Rat &b) { return a.v_ <= b.v_; }
    friend bool operator>(const Rat &a, const Rat &b) { return a.v_ > b.v_; }
    friend bool operator>=(const Rat &a, const Rat &b) { return a.v_ >= b.v_; }

    /// "p" when integral, "p/q" otherwise.
    std::string str() const { return v_.get_str(); }

    double approx() const { return v_.get_d(); }

private:
    mpq_class v_;
};

using RatVec = std::vector<Rat>;

inline Rat dot(const RatVec &a, const RatVec &b) {
    Rat s;
    size_t n = std::min(a.size(), b.size());
    for (size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

inline RatVec scale(const RatVec &a, const Rat &k) {
    RatVec r(a);
    for (auto &x : r) x *= k;
    return r;
}

inline RatVec vec_add(const RatVec &a, const RatVec &b) {
    RatVec r(a);
    for (size_t i = 0; i < b.size() && i < r.size(); ++i) r[i] += b[i];
    return r;
}

inline bool is_zero_vec(const RatVec &a) {
    for (const auto &x : a)
        if (!x.is_zero()) return false;
    return true;
}

/// Least common multiple of denominators; scaling by it makes the vector
/// integral.
inline mpz_class den_lcm(const RatVec &a) {
    mpz_class l = 1;
    for (const auto &x : a) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.den().get_mpz_t());
    return l;
}

/// Scales a rational vector to the primitive integer vector with the same
/// direction (gcd 1, same orientation). Zero vector stays zero.
inline RatVec primitive(const RatVec &a) {
    mpz_class l = den_lcm(a);
    mpz_class g = 0;
    std::vector<mpz_class> ints;
    ints.reserve(a.size());
    for (const auto &x : a) {
        mpz_class z = x.num() * (l / x.den());
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), z.get_mpz_t());
        ints.push_back(z);
    }
    RatVec r;
    r.reserve(a.size());
    if (g == 0) g = 1;
    for (auto &z : ints) r.emplace_back(Rat(mpz_class(z / g)));
    return r;
}

inline std::string vec_str(const RatVec &a) {
    std::string s = "(";
    for (size_t i = 0; i < a.size(); ++i) {
        if (i) s += ", ";
        s += a[i].str();
    }
    return s + ")";
}

} // namespace linterm

template <> struct std::hash<linterm::Rat> {
    size_t operator()(const linterm::Rat &r) const {
        return std::hash<std::string>()(r.str());
    }
};
