#pragma once

#include <numeric>
#include <stdexcept>
#include <string>

namespace rlab {

// Base class for everything this library throws.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A field description violates an invariant (non-Eisenstein polynomial,
// reducible unramified polynomial, missing root of unity, ...).
struct field_error : error {
    using error::error;
};

// An operation was called outside its domain (log of a non-principal unit,
// exp outside the convergence disc, inverse of zero, ...).
struct domain_error : error {
    using error::error;
};

// Not enough tracked precision to decide or certify the result.
struct precision_error : error {
    using error::error;
};

// Truncated Laurent arithmetic would push a nonzero coefficient outside the
// tracked window.
struct window_error : error {
    using error::error;
};

// Expression or config syntax error, annotated with a 1-based column.
struct parse_error : error {
    parse_error(const std::string& msg, std::size_t col)
        : error(msg + " at column " + std::to_string(col)), column(col) {}
    std::size_t column;
};

// Exact rational with small numerator/denominator; valuations live in (1/e)Z.
struct Rat {
    long num = 0;
    long den = 1;

    Rat() = default;
    Rat(long n) : num(n), den(1) {}
    Rat(long n, long d) : num(n), den(d) { normalize(); }

    void normalize() {
        if (den == 0) throw error("Rat: zero denominator");
        if (den < 0) { num = -num; den = -den; }
        long g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) { num /= g; den /= g; }
        if (num == 0) den = 1;
    }

    friend bool operator==(const Rat& a, const Rat& b) {
        return a.num == b.num && a.den == b.den;
    }
    friend bool operator<(const Rat& a, const Rat& b) {
        return a.num * b.den < b.num * a.den;
    }
    friend bool operator<=(const Rat& a, const Rat& b) { return a == b || a < b; }
    friend bool operator>(const Rat& a, const Rat& b) { return b < a; }
    friend bool operator>=(const Rat& a, const Rat& b) { return b <= a; }
    friend bool operator!=(const Rat& a, const Rat& b) { return !(a == b); }

    friend Rat operator+(const Rat& a, const Rat& b) {
        return Rat(a.num * b.den + b.num * a.den, a.den * b.den);
    }
    friend Rat operator-(const Rat& a, const Rat& b) {
        return Rat(a.num * b.den - b.num * a.den, a.den * b.den);
    }
    friend Rat operator*(const Rat& a, const Rat& b) {
        return Rat(a.num * b.num, a.den * b.den);
    }

    std::string str() const {
        if (den == 1) return std::to_string(num);
        return std::to_string(num) + "/" + std::to_string(den);
    }
};

}  // namespace rlab
