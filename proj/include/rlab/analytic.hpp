#pragma once

#include "rlab/field.hpp"

namespace rlab {

/// Truncation certificate: the first term_count terms were summed and every
/// discarded term has ord >= tail_bound >= target_prec.
struct SeriesBudget {
    long target_prec = 0;
    long term_count = 0;
    Rat tail_bound;
};

namespace detail {

inline long ord_p_factorial(long p, long k) {
    // (k - s_p(k)) / (p - 1)
    long s = 0, t = k;
    while (t) { s += t % p; t /= p; }
    return (k - s) / (p - 1);
}

inline long ord_p_int(long p, long k) {
    long v = 0;
    while (k % p == 0) { k /= p; ++v; }
    return v;
}

/// Smallest K such that ord(x^k / k) >= target for all k >= K, given ord(x) = lam.
inline long log_term_count(long p, Rat lam, long target) {
    for (long k = 1; k < 100000; ++k) {
        // check all k' >= k: k'*lam - log_p(k') >= target.  The function
        // k*lam - log_p(k) is eventually increasing; use the conservative
        // bound ord_p(k') <= log_p(k') and verify on a tail window.
        bool ok = true;
        for (long kk = k; kk <= 2 * k + p; ++kk) {
            Rat t = Rat(kk) * lam - Rat(ord_p_int(p, kk));
            if (t < Rat(target)) { ok = false; break; }
        }
        // beyond 2k+p: kk*lam - ord_p(kk) >= kk*lam - log_p(kk), and
        // kk*lam/2 >= log_p(kk) once kk >= k (checked via k*lam >= 2*target
        // being eventually true); use a crude sufficient check:
        if (ok && Rat(k) * lam >= Rat(2 * target)) return k;
    }
    throw precision_error("log series: no certified truncation point");
}

inline long exp_term_count(long p, Rat lam, long target) {
    // ord(x^k/k!) = k*lam - (k - s_p(k))/(p-1) >= k*(lam - 1/(p-1)),
    // increasing in k since lam > 1/(p-1).
    Rat margin = lam - Rat(1, p - 1);
    for (long k = 1; k < 100000; ++k) {
        if (Rat(k) * margin >= Rat(target)) return k;
    }
    throw precision_error("exp series: no certified truncation point");
}

}  // namespace detail

/// log(x) for a principal unit, truncated so every discarded term has
/// ord >= target; by default target = scalar precision of the input tower.
inline KElement plog(const KElement& x, long target = -1,
                     SeriesBudget* budget = nullptr) {
    const FieldTower& T = *x.tower();
    KElement t = sub(x, T.one());
    if (is_zero(t)) return T.zero();
    Rat lam = ord(t);
    if (!(lam > Rat(0)))
        throw domain_error("plog: not a principal unit (ord(x - 1) = " + lam.str() + ")");
    if (target < 0) target = T.desc().work_prec + 2 * T.desc().n + 6;
    long K = detail::log_term_count(T.p(), lam, target);
    KElement sum = T.zero();
    KElement pw = T.one();
    for (long k = 1; k <= K; ++k) {
        pw = mul(pw, t);
        KElement term = div_int(pw, k);
        if (k % 2 == 0) term = neg(term);
        sum = add(sum, term);
    }
    if (budget) {
        budget->target_prec = target;
        budget->term_count = K;
        budget->tail_bound = Rat(target);
    }
    return sum;
}

/// exp(x) for ord(x) > 1/(p-1) (strict), truncated with a certified tail.
inline KElement pexp(const KElement& x, long target = -1,
                     SeriesBudget* budget = nullptr) {
    const FieldTower& T = *x.tower();
    if (is_zero(x)) return T.one();
    Rat lam = ord(x);
    if (!(lam > Rat(1, T.p() - 1)))
        throw domain_error("pexp: ord(x) = " + lam.str() + " not > 1/(p-1) = " +
                           Rat(1, T.p() - 1).str());
    if (target < 0) target = T.desc().work_prec + 2 * T.desc().n + 6;
    long K = detail::exp_term_count(T.p(), lam, target);
    KElement sum = T.one();
    KElement term = T.one();
    for (long k = 1; k <= K; ++k) {
        term = div_int(mul(term, x), k);
        sum = add(sum, term);
    }
    if (budget) {
        budget->target_prec = target;
        budget->term_count = K;
        budget->tail_bound = Rat(target);
    }
    return sum;
}

/// exp(eta * a) for a in O_K.  With theorem_guard the stricter bound
/// ord(eta) >= 2/(p-1) is enforced (required when the result feeds the
/// degree-2 exponential map).
inline KElement exp_eta(const KElement& eta, const KElement& a,
                        bool theorem_guard = false) {
    const FieldTower& T = *eta.tower();
    if (!is_integral(a)) throw domain_error("exp_eta: a not integral");
    if (is_zero(eta)) throw domain_error("exp_eta: eta is zero");
    Rat oe = ord(eta);
    if (theorem_guard && !(oe >= Rat(2, T.p() - 1)))
        throw domain_error("exp_eta: ord(eta) = " + oe.str() + " < 2/(p-1) = " +
                           Rat(2, T.p() - 1).str());
    if (!(oe > Rat(1, T.p() - 1)))
        throw domain_error("exp_eta: ord(eta) = " + oe.str() + " not > 1/(p-1)");
    return pexp(mul(eta, a));
}

}  // namespace rlab
