#pragma once

#include "rlab/analytic.hpp"
#include "rlab/field.hpp"

namespace rlab {

/// Element of mu_{p^n} recorded as an exponent class mod p^n with respect to
/// the context's fixed zeta_{p^n}.
struct SymbolValue {
    long c = 0;        // canonical representative in [0, p^n)
    long modulus = 1;  // p^n

    friend SymbolValue operator+(const SymbolValue& a, const SymbolValue& b) {
        if (a.modulus != b.modulus) throw error("SymbolValue: mixed moduli");
        return {((a.c + b.c) % a.modulus + a.modulus) % a.modulus, a.modulus};
    }
    friend SymbolValue operator-(const SymbolValue& a, const SymbolValue& b) {
        if (a.modulus != b.modulus) throw error("SymbolValue: mixed moduli");
        return {((a.c - b.c) % a.modulus + a.modulus) % a.modulus, a.modulus};
    }
    SymbolValue operator-() const { return {(modulus - c) % modulus, modulus}; }
    SymbolValue scaled(long m) const {
        long r = ((m % modulus) * c) % modulus;
        return {(r + modulus) % modulus, modulus};
    }
    friend bool operator==(const SymbolValue& a, const SymbolValue& b) {
        return a.c == b.c && a.modulus == b.modulus;
    }
};

/// Fixes zeta_{p^n}, a prime element pi, and a polynomial lift h with
/// h(pi) = zeta.  All symbol values are exponents with respect to this zeta.
struct CyclotomicContext {
    TowerPtr tower;
    long n = 1;
    KElement zeta;
    KElement pi;
    K0Poly h;

    long pn() const {
        long m = 1;
        for (long i = 0; i < n; ++i) m *= tower->p();
        return m;
    }
};

inline CyclotomicContext make_context(const TowerPtr& tower) {
    CyclotomicContext ctx;
    ctx.tower = tower;
    ctx.n = tower->desc().n;
    if (ctx.n < 1) throw field_error("make_context: field has no zeta level (n = 0)");
    ctx.zeta = tower->zeta();
    ctx.pi = tower->pi();
    ctx.h = canonical_poly_lift(ctx.zeta);
    if (!eq(eval_poly(ctx.h, ctx.pi), ctx.zeta))
        throw error("make_context: h(pi) != zeta");
    return ctx;
}

/// Context with an alternative prime element pi' = pi * unit; h is re-lifted
/// with respect to pi'.
inline CyclotomicContext make_context_with_prime(const TowerPtr& tower,
                                                 const KElement& pi_alt) {
    CyclotomicContext ctx;
    ctx.tower = tower;
    ctx.n = tower->desc().n;
    if (ctx.n < 1) throw field_error("make_context: field has no zeta level (n = 0)");
    ctx.zeta = tower->zeta();
    if (ord(pi_alt) != Rat(1, tower->e()))
        throw domain_error("make_context_with_prime: not a prime element");
    ctx.pi = pi_alt;
    ctx.h = poly_lift_wrt(ctx.zeta, pi_alt);
    if (!eq(eval_poly(ctx.h, ctx.pi), ctx.zeta))
        throw error("make_context: h(pi') != zeta");
    return ctx;
}

namespace detail {

inline void check_alpha_domain(const CyclotomicContext& ctx, const KElement& alpha) {
    const FieldTower& T = *ctx.tower;
    KElement am1 = sub(alpha, T.one());
    if (is_zero(am1)) return;  // alpha = 1 at precision: trivially in domain
    Rat o = ord(am1);
    if (!(o >= Rat(2, T.p() - 1)))
        throw domain_error("symbol: ord(alpha - 1) = " + o.str() + " < 2/(p-1) = " +
                           Rat(2, T.p() - 1).str());
}

/// c = Tr(integrand) / p^n reduced mod p^n.  The trace must be divisible by
/// p^n with enough guard digits; a non-divisible trace signals a bug and is
/// never rounded.
inline SymbolValue trace_to_symbol(const CyclotomicContext& ctx,
                                   const KElement& integrand) {
    long n = ctx.n;
    long pn = ctx.pn();
    PadicScalar t = trace_abs(integrand);
    if (t.is_zero()) {
        if (t.abs_prec() < 2 * n)
            throw precision_error("symbol: trace known to too few digits");
        return {0, pn};
    }
    if (t.valuation() < n)
        throw error("symbol: trace not divisible by p^n (ord = " +
                    std::to_string(t.valuation()) + ", need >= " + std::to_string(n) +
                    "); implementation or precision bug");
    PadicScalar c = t.div_pow_p(n);
    if (c.abs_prec() < n)
        throw precision_error("symbol: fewer than n digits after division by p^n");
    mpz_class r = c.lift() % pn;
    return {static_cast<long>(r.get_si()), pn};
}

}  // namespace detail

/// Sen's explicit formula for the Hilbert symbol (alpha, beta), beta a unit
/// with polynomial lift g: c = (1/p^n) Tr_{K/Q_p}( zeta/h'(pi) * g'(pi)/beta * log alpha ).
inline SymbolValue sen_symbol(const CyclotomicContext& ctx, const KElement& alpha,
                              const KElement& beta, const K0Poly& g) {
    detail::check_alpha_domain(ctx, alpha);
    // beta is usually a unit; integral nonzero beta is accepted so that the
    // g(T) = T specialization is expressible through the same entry point.
    if (is_zero(beta)) throw domain_error("sen_symbol: beta = 0");
    if (!is_integral(beta)) throw domain_error("sen_symbol: beta not in O_K");
    if (!eq(eval_poly(g, ctx.pi), beta))
        throw domain_error("sen_symbol: g(pi) != beta");
    KElement la = plog(alpha);
    KElement hp = eval_deriv(ctx.h, ctx.pi);
    KElement gp = eval_deriv(g, ctx.pi);
    KElement integrand = mul(mul(div(ctx.zeta, hp), div(gp, beta)), la);
    return detail::trace_to_symbol(ctx, integrand);
}

/// (alpha, zeta_{p^n}): c = (1/p^n) Tr(log alpha); the g = h specialization
/// of Sen's formula.
inline SymbolValue artin_hasse(const CyclotomicContext& ctx, const KElement& alpha) {
    detail::check_alpha_domain(ctx, alpha);
    return detail::trace_to_symbol(ctx, plog(alpha));
}

/// (alpha, pi): the g(T) = T specialization,
/// c = (1/p^n) Tr( zeta/(h'(pi) pi) * log alpha ).
inline SymbolValue iwasawa_prime(const CyclotomicContext& ctx, const KElement& alpha) {
    detail::check_alpha_domain(ctx, alpha);
    KElement hp = eval_deriv(ctx.h, ctx.pi);
    KElement integrand = mul(div(ctx.zeta, mul(hp, ctx.pi)), plog(alpha));
    return detail::trace_to_symbol(ctx, integrand);
}

/// General second slot: beta = pi^m * u with u a unit; bilinear extension.
inline SymbolValue hilbert_symbol(const CyclotomicContext& ctx, const KElement& alpha,
                                  const KElement& beta_general) {
    if (is_zero(beta_general)) throw domain_error("hilbert_symbol: beta = 0");
    const FieldTower& T = *ctx.tower;
    Rat o = ord(beta_general);
    long m = o.num * (T.e() / o.den);  // o.den | e since ord takes values in (1/e)Z
    KElement u = mul(beta_general, inv(pow_elem(ctx.pi, m)));
    SymbolValue s = sen_symbol(ctx, alpha, u, poly_lift_wrt(u, ctx.pi));
    if (m == 0) return s;
    return s + iwasawa_prime(ctx, alpha).scaled(m);
}

}  // namespace rlab
