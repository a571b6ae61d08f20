#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>

#include "gkplab/errors.hpp"

namespace gkp {

/// Arbitrary-precision rational, the base field of the exact-arithmetic path.
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& r) { return r.template convert_to<double>(); }

/// Element of the quadratic field Q(sqrt 2): value a + b*sqrt(2) with rational
/// a, b. This is the smallest field containing every matrix/vector entry the
/// fusion circuits produce (beamsplitter coefficients are 1/sqrt 2), so the
/// whole displacement-layer pipeline can run in it without rounding.
struct Root2 {
    Rational a{0};  // rational part
    Rational b{0};  // coefficient of sqrt(2)

    Root2() = default;
    Root2(int v) : a(v) {}                 // NOLINT(google-explicit-constructor)
    Root2(long long v) : a(v) {}           // NOLINT(google-explicit-constructor)
    Root2(Rational v) : a(std::move(v)) {} // NOLINT(google-explicit-constructor)
    Root2(Rational ra, Rational rb) : a(std::move(ra)), b(std::move(rb)) {}

    static Root2 sqrt2() { return Root2{Rational(0), Rational(1)}; }
    static Root2 inv_sqrt2() { return Root2{Rational(0), Rational(1, 2)}; }

    bool is_zero() const { return a == 0 && b == 0; }
    bool is_rational() const { return b == 0; }

    Root2 operator-() const { return Root2{-a, -b}; }
    Root2& operator+=(const Root2& o) { a += o.a; b += o.b; return *this; }
    Root2& operator-=(const Root2& o) { a -= o.a; b -= o.b; return *this; }
    Root2& operator*=(const Root2& o) {
        Rational na = a * o.a + 2 * b * o.b;
        Rational nb = a * o.b + b * o.a;
        a = std::move(na);
        b = std::move(nb);
        return *this;
    }
    Root2& operator/=(const Root2& o) {
        // Multiply by the conjugate a - b*sqrt2; the norm a^2 - 2 b^2 vanishes
        // only for the zero element because sqrt2 is irrational.
        Rational norm = o.a * o.a - 2 * o.b * o.b;
        if (norm == 0) throw ContractViolation("Root2: division by zero");
        Rational na = (a * o.a - 2 * b * o.b) / norm;
        Rational nb = (b * o.a - a * o.b) / norm;
        a = std::move(na);
        b = std::move(nb);
        return *this;
    }

    friend Root2 operator+(Root2 x, const Root2& y) { x += y; return x; }
    friend Root2 operator-(Root2 x, const Root2& y) { x -= y; return x; }
    friend Root2 operator*(Root2 x, const Root2& y) { x *= y; return x; }
    friend Root2 operator/(Root2 x, const Root2& y) { x /= y; return x; }
    friend bool operator==(const Root2& x, const Root2& y) { return x.a == y.a && x.b == y.b; }
    friend bool operator!=(const Root2& x, const Root2& y) { return !(x == y); }

    /// Exact sign of a + b*sqrt2.
    int sign() const {
        int sa = a.sign();
        int sb = b.sign();
        if (sb == 0) return sa;
        if (sa == 0) return sb;
        if (sa == sb) return sa;
        // Opposite signs: compare a^2 with 2 b^2; the larger magnitude wins
        // (d > 0 means the rational part dominates; d is never zero here
        // because sqrt2 is irrational).
        Rational d = a * a - 2 * b * b;
        return d.sign() > 0 ? sa : sb;
    }

    friend bool operator<(const Root2& x, const Root2& y) { return (x - y).sign() < 0; }
    friend bool operator>(const Root2& x, const Root2& y) { return (x - y).sign() > 0; }
    friend bool operator<=(const Root2& x, const Root2& y) { return (x - y).sign() <= 0; }
    friend bool operator>=(const Root2& x, const Root2& y) { return (x - y).sign() >= 0; }
};

inline double to_double(const Root2& x) {
    return to_double(x.a) + to_double(x.b) * 1.4142135623730950488;
}

/// Exact floor of a + b*sqrt2: start from the double estimate and fix up with
/// exact comparisons (the estimate is within one unit for any sane magnitude).
inline boost::multiprecision::cpp_int floor_exact(const Root2& x) {
    using boost::multiprecision::cpp_int;
    cpp_int f(static_cast<long long>(std::floor(to_double(x))));
    auto ge = [&x](const cpp_int& n) { return (x - Root2{Rational(n)}).sign() >= 0; };
    while (!ge(f)) --f;
    while (ge(f + 1)) ++f;
    return f;
}

inline std::string to_string(const Rational& r) {
    std::ostringstream os;
    os << r;
    return os.str();
}

inline std::string to_string(const Root2& x) {
    if (x.b == 0) return to_string(x.a);
    std::string s;
    if (x.a != 0) s += to_string(x.a);
    if (x.b.sign() >= 0 && !s.empty()) s += "+";
    s += to_string(x.b) + "*sqrt2";
    return s;
}

/// Scalar abstraction so the Gaussian/graph engines can be instantiated both
/// with doubles (runtime path) and with Root2 (exact acceptance path).
template <class T>
struct ScalarTraits;

template <>
struct ScalarTraits<double> {
    static constexpr bool exact = false;
    static double zero() { return 0.0; }
    static double one() { return 1.0; }
    static double from_int(long long v) { return static_cast<double>(v); }
    static double from_ratio(long long n, long long d) {
        return static_cast<double>(n) / static_cast<double>(d);
    }
    static double inv_sqrt2() { return 0.70710678118654752440; }
    static double to_d(double v) { return v; }
    static bool is_zero(double v) { return v == 0.0; }
    static long long floor_ll(double v) { return static_cast<long long>(std::floor(v)); }
};

template <>
struct ScalarTraits<Root2> {
    static constexpr bool exact = true;
    static Root2 zero() { return Root2{}; }
    static Root2 one() { return Root2{1}; }
    static Root2 from_int(long long v) { return Root2{v}; }
    static Root2 from_ratio(long long n, long long d) { return Root2{Rational(n, d)}; }
    static Root2 inv_sqrt2() { return Root2::inv_sqrt2(); }
    static double to_d(const Root2& v) { return to_double(v); }
    static bool is_zero(const Root2& v) { return v.is_zero(); }
    static long long floor_ll(const Root2& v) {
        return floor_exact(v).template convert_to<long long>();
    }
};

}  // namespace gkp
