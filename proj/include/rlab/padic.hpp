#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

#include "rlab/common.hpp"

namespace rlab {

inline mpz_class pow_p(long p, long k) {
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(p),
                  static_cast<unsigned long>(k < 0 ? 0 : k));
    return r;
}

/// A p-adic number known to a stated absolute precision: value = unit * p^val
/// with p ∤ unit, known mod p^abs_prec.  unit == 0 means the value is
/// indistinguishable from 0 at the stated precision.
class PadicScalar {
public:
    PadicScalar() = default;

    /// Interpret `value` exactly and reduce mod p^abs_prec.
    PadicScalar(long p, const mpz_class& value, long abs_prec)
        : p_(p), abs_prec_(abs_prec) {
        set_from(value);
    }
    PadicScalar(long p, long value, long abs_prec)
        : PadicScalar(p, mpz_class(value), abs_prec) {}

    static PadicScalar zero_at(long p, long abs_prec) {
        PadicScalar z;
        z.p_ = p;
        z.abs_prec_ = abs_prec;
        return z;
    }

    /// unit * p^val known mod p^abs_prec; requires p ∤ unit.
    static PadicScalar from_unit(long p, const mpz_class& unit, long val, long abs_prec) {
        if (val >= abs_prec) return zero_at(p, abs_prec);
        PadicScalar r;
        r.p_ = p;
        r.abs_prec_ = abs_prec;
        r.val_ = val;
        r.unit_ = unit % pow_p(p, abs_prec - val);
        if (r.unit_ < 0) r.unit_ += pow_p(p, abs_prec - val);
        if (r.unit_ == 0)
            return zero_at(p, abs_prec);
        if (mpz_divisible_ui_p(r.unit_.get_mpz_t(), static_cast<unsigned long>(p)))
            throw error("PadicScalar::from_unit: unit divisible by p");
        return r;
    }

    long p() const { return p_; }
    long abs_prec() const { return abs_prec_; }
    bool is_zero() const { return unit_ == 0; }

    long valuation() const {
        if (is_zero())
            throw precision_error("valuation indeterminate: zero at precision " +
                                  std::to_string(abs_prec_));
        return val_;
    }
    /// Valuation, or abs_prec when indistinguishable from zero.
    long valuation_or(long fallback) const { return is_zero() ? fallback : val_; }

    const mpz_class& unit() const { return unit_; }

    /// Canonical representative in [0, p^abs_prec); requires valuation >= 0.
    mpz_class lift() const {
        if (is_zero()) return 0;
        if (val_ < 0) throw domain_error("lift: negative valuation");
        return unit_ * pow_p(p_, val_);
    }

    PadicScalar operator-() const {
        if (is_zero()) return *this;
        return from_unit(p_, pow_p(p_, abs_prec_ - val_) - unit_, val_, abs_prec_);
    }

    friend PadicScalar operator+(const PadicScalar& a, const PadicScalar& b) {
        a.check_same(b);
        long n = std::min(a.abs_prec_, b.abs_prec_);
        if (a.is_zero() && b.is_zero()) return zero_at(a.p_, n);
        if (a.is_zero()) return b.reduced(n);
        if (b.is_zero()) return a.reduced(n);
        long v = std::min(a.val_, b.val_);
        if (v >= n) return zero_at(a.p_, n);
        // Work on units scaled to the common valuation v.
        mpz_class s = a.unit_ * pow_p(a.p_, a.val_ - v) + b.unit_ * pow_p(a.p_, b.val_ - v);
        return from_value_scaled(a.p_, s, v, n);
    }
    friend PadicScalar operator-(const PadicScalar& a, const PadicScalar& b) {
        return a + (-b);
    }
    friend PadicScalar operator*(const PadicScalar& a, const PadicScalar& b) {
        a.check_same(b);
        if (a.is_zero() || b.is_zero()) {
            // ord(product) >= val_or_prec(a) + val_or_prec(b)
            long bound = a.valuation_or(a.abs_prec_) + b.valuation_or(b.abs_prec_);
            return zero_at(a.p_, bound);
        }
        long v = a.val_ + b.val_;
        long rel = std::min(a.abs_prec_ - a.val_, b.abs_prec_ - b.val_);
        mpz_class u = (a.unit_ * b.unit_) % pow_p(a.p_, rel);
        return from_unit(a.p_, u, v, v + rel);
    }

    PadicScalar inv() const {
        if (is_zero())
            throw domain_error("inv: element indistinguishable from 0 at precision " +
                               std::to_string(abs_prec_));
        long rel = abs_prec_ - val_;
        mpz_class m = pow_p(p_, rel);
        mpz_class u;
        if (!mpz_invert(u.get_mpz_t(), unit_.get_mpz_t(), m.get_mpz_t()))
            throw error("inv: no modular inverse");  // unreachable: unit is prime to p
        return from_unit(p_, u, -val_, rel - val_);
    }

    friend PadicScalar operator/(const PadicScalar& a, const PadicScalar& b) {
        return a * b.inv();
    }

    /// Exact division by p^k (k may be negative).  Lowers absolute precision by k.
    PadicScalar div_pow_p(long k) const {
        PadicScalar r = *this;
        r.abs_prec_ -= k;
        if (!r.is_zero()) r.val_ -= k;
        return r;
    }

    /// Forget digits beyond n (n <= abs_prec).
    PadicScalar reduced(long n) const {
        if (n > abs_prec_)
            throw precision_error("reduced: cannot raise precision");
        if (is_zero() || val_ >= n) return zero_at(p_, n);
        return from_unit(p_, unit_ % pow_p(p_, n - val_), val_, n);
    }

    /// Equality at the common precision.
    friend bool eq(const PadicScalar& a, const PadicScalar& b) {
        return (a - b).is_zero();
    }

    /// Little-endian base-p digit string of the canonical lift, e.g. "120..."
    std::string digits() const {
        mpz_class v = lift();
        std::string s;
        for (long i = 0; i < abs_prec_; ++i) {
            mpz_class d = v % p_;
            s += static_cast<char>('0' + d.get_si());
            v /= p_;
        }
        return s;
    }

private:
    void set_from(const mpz_class& value) {
        mpz_class m = pow_p(p_, abs_prec_);
        mpz_class v = value % m;
        if (v < 0) v += m;
        if (v == 0) { unit_ = 0; val_ = 0; return; }
        unsigned long k = mpz_remove(unit_.get_mpz_t(), v.get_mpz_t(),
                                     mpz_class(p_).get_mpz_t());
        val_ = static_cast<long>(k);
        if (val_ >= abs_prec_) { unit_ = 0; val_ = 0; return; }
        unit_ %= pow_p(p_, abs_prec_ - val_);
        if (unit_ == 0) val_ = 0;
    }

    static PadicScalar from_value_scaled(long p, const mpz_class& scaled, long v, long n) {
        // scaled * p^v, reduce mod p^n
        PadicScalar t(p, scaled, n - v);
        if (t.is_zero()) return zero_at(p, n);
        return from_unit(p, t.unit_, t.val_ + v, n);
    }

    void check_same(const PadicScalar& o) const {
        if (p_ != o.p_) throw error("PadicScalar: mixed primes");
    }

    long p_ = 0;
    mpz_class unit_ = 0;
    long val_ = 0;
    long abs_prec_ = 0;
};

}  // namespace rlab
