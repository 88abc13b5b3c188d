#pragma once

#include <numeric>
#include <string>

#include "common.hpp"

namespace kfree {

// Exact rational on 64-bit numerator/denominator, always reduced, den > 0.
// Products go through 128-bit intermediates; anything that would leave the
// 64-bit range throws resource_error.  Large enough for every desk-scale
// lattice this library handles; big-integer work (hole construction) uses
// boost::multiprecision instead.
struct Rational {
    i64 num = 0;
    i64 den = 1;

    Rational() = default;
    Rational(i64 n) : num(n), den(1) {}
    Rational(i64 n, i64 d) : num(n), den(d) { reduce(); }

    void reduce() {
        if (den == 0) throw domain_error("rational with zero denominator");
        if (den < 0) { num = -num; den = -den; }
        i64 g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) { num /= g; den /= g; }
    }

    friend Rational operator+(const Rational& a, const Rational& b) {
        i128 n = static_cast<i128>(a.num) * b.den + static_cast<i128>(b.num) * a.den;
        i128 d = static_cast<i128>(a.den) * b.den;
        return from_i128(n, d);
    }
    friend Rational operator-(const Rational& a, const Rational& b) {
        i128 n = static_cast<i128>(a.num) * b.den - static_cast<i128>(b.num) * a.den;
        i128 d = static_cast<i128>(a.den) * b.den;
        return from_i128(n, d);
    }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return from_i128(static_cast<i128>(a.num) * b.num,
                         static_cast<i128>(a.den) * b.den);
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.num == 0) throw domain_error("rational division by zero");
        return from_i128(static_cast<i128>(a.num) * b.den,
                         static_cast<i128>(a.den) * b.num);
    }
    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num == b.num && a.den == b.den;
    }
    friend bool operator<(const Rational& a, const Rational& b) {
        return static_cast<i128>(a.num) * b.den < static_cast<i128>(b.num) * a.den;
    }
    friend bool operator<=(const Rational& a, const Rational& b) {
        return static_cast<i128>(a.num) * b.den <= static_cast<i128>(b.num) * a.den;
    }

    long double to_ld() const {
        return static_cast<long double>(num) / static_cast<long double>(den);
    }
    double to_double() const { return static_cast<double>(to_ld()); }

    bool is_integer() const { return den == 1; }

    std::string str() const {
        if (den == 1) return std::to_string(num);
        return std::to_string(num) + "/" + std::to_string(den);
    }

    static Rational from_i128(i128 n, i128 d) {
        if (d == 0) throw domain_error("rational with zero denominator");
        if (d < 0) { n = -n; d = -d; }
        i128 an = n < 0 ? -n : n;
        i128 g = gcd128(an, d);
        if (g > 1) { n /= g; d /= g; }
        if (n > INT64_MAX || n < INT64_MIN || d > INT64_MAX)
            throw resource_error("rational overflow; reduce input magnitudes");
        Rational r;
        r.num = static_cast<i64>(n);
        r.den = static_cast<i64>(d);
        return r;
    }

    // Parses "p", "p/q" or a plain decimal like "-1.25" (decimals are exact).
    static Rational parse(const std::string& text);

private:
    static i128 gcd128(i128 a, i128 b) {
        while (b != 0) { i128 t = a % b; a = b; b = t; }
        return a < 0 ? -a : a;
    }
};

}  // namespace kfree
