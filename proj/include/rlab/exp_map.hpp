#pragma once

#include <utility>
#include <vector>

#include "rlab/reciprocity.hpp"

namespace rlab {

/// Element of the differential module of O_K presented as O_K dpi / (e'(pi) dpi):
/// a coefficient class reduced mod the ideal (e'(pi)) = (pi^d) by a fixed
/// digit-truncation procedure.
class DifferentialForm {
public:
    DifferentialForm() = default;

    static DifferentialForm from_coeff(const TowerPtr& tower, const KElement& coeff) {
        DifferentialForm w;
        w.tower_ = tower;
        w.torsion_d_ = torsion_exponent(tower);
        w.coeff_ = reduce(tower, coeff, w.torsion_d_);
        return w;
    }

    const TowerPtr& tower() const { return tower_; }
    const KElement& coeff() const { return coeff_; }
    long torsion_exponent_value() const { return torsion_d_; }

    friend DifferentialForm operator+(const DifferentialForm& a, const DifferentialForm& b) {
        return from_coeff(a.tower_, add(a.coeff_, b.coeff_));
    }
    friend bool operator==(const DifferentialForm& a, const DifferentialForm& b) {
        return eq(a.coeff_, b.coeff_);
    }
    bool is_zero_form() const { return is_zero(coeff_); }

    /// d with e'(pi) dpi = 0, so the ideal is pi^d with d = e * ord(e'(pi)).
    static long torsion_exponent(const TowerPtr& tower) {
        K0Poly eis = tower->eisenstein_poly();
        KElement ep = eval_deriv(eis, tower->pi());
        Rat o = ord(ep);
        return o.num * (tower->e() / o.den);
    }

private:
    /// Canonical representative mod pi^d: on the basis {pi^i u^j}, the
    /// coefficient of pi^i is kept mod p^ceil((d - i)/e).
    static KElement reduce(const TowerPtr& tower, const KElement& x, long d) {
        const FieldTower& T = *tower;
        if (!is_zero(x) && !is_integral(x))
            throw domain_error("DifferentialForm: coefficient not integral");
        std::vector<PadicScalar> c = x.coords();
        for (long i = 0; i < T.e(); ++i) {
            long k = d - i;
            long digits = k <= 0 ? 0 : (k + T.e() - 1) / T.e();
            for (long j = 0; j < T.f(); ++j) {
                const PadicScalar& s = c[T.idx(i, j)];
                if (digits == 0 || s.is_zero()) {
                    c[T.idx(i, j)] = PadicScalar::zero_at(T.p(), T.scalar_prec());
                } else {
                    if (s.valuation() < 0)
                        throw domain_error("DifferentialForm: negative coordinate valuation");
                    mpz_class v = s.lift() % pow_p(T.p(), digits);
                    c[T.idx(i, j)] = PadicScalar(T.p(), v, T.scalar_prec());
                }
            }
        }
        return T.from_coord_map(std::move(c));
    }

    TowerPtr tower_;
    KElement coeff_;
    long torsion_d_ = 0;
};

/// db for b in O_K: B'(pi) dpi for the canonical polynomial lift B of b.
inline DifferentialForm d_form(const KElement& b) {
    if (!is_zero(b) && !is_integral(b)) throw domain_error("d: element not integral");
    K0Poly B = canonical_poly_lift(b);
    return DifferentialForm::from_coeff(b.tower(), eval_deriv(B, b.tower()->pi()));
}

/// db/b for a unit b.
inline DifferentialForm dlog(const KElement& b) {
    if (!is_unit(b)) throw domain_error("dlog: not a unit");
    K0Poly B = canonical_poly_lift(b);
    return DifferentialForm::from_coeff(
        b.tower(), mul(inv(b), eval_deriv(B, b.tower()->pi())));
}

/// Sum of a_i db_i/b_i with each b_i a unit of O_K.
struct FormExpression {
    std::vector<std::pair<KElement, KElement>> terms;  // (a_i, b_i)

    DifferentialForm reduce(const TowerPtr& tower) const {
        const FieldTower& T = *tower;
        KElement c = T.zero();
        for (auto& [a, b] : terms) {
            K0Poly B = canonical_poly_lift(b);
            c = add(c, mul(a, mul(inv(b), eval_deriv(B, T.pi()))));
        }
        return DifferentialForm::from_coeff(tower, c);
    }
};

/// exp_eta on O_K with the theorem guard ord(eta) >= 2/(p-1).
inline KElement exp1(const KElement& eta, const KElement& a) {
    return exp_eta(eta, a, /*theorem_guard=*/true);
}

/// Image of exp_eta^(2)(sum a_i db_i/b_i) in mu_{p^n} under the Hilbert
/// pairing: sum_i (exp(eta a_i), b_i).
inline SymbolValue exp2_eval(const CyclotomicContext& ctx, const KElement& eta,
                             const FormExpression& expr) {
    SymbolValue s{0, ctx.pn()};
    for (auto& [a, b] : expr.terms) {
        if (!is_unit(b)) throw domain_error("exp2_eval: b_i not a unit");
        s = s + hilbert_symbol(ctx, exp1(eta, a), b);
    }
    return s;
}

/// exp_p^(2)(p da) = (exp(p^2 a), a) for a unit a; the suite asserts this
/// vanishes in mu_{p^n}.
inline SymbolValue kernel_check(const CyclotomicContext& ctx, const KElement& a) {
    if (!is_unit(a)) throw domain_error("kernel_check: a not a unit");
    const FieldTower& T = *ctx.tower;
    KElement p_elem = T.from_int(T.p());
    KElement alpha = exp_eta(p_elem, mul(p_elem, a), /*theorem_guard=*/true);
    return hilbert_symbol(ctx, alpha, a);
}

/// Trace of a form whose b_i all lie in the embedded subfield:
/// sum Tr_{K/k}(a_i) db_i/b_i over k.
inline FormExpression trace_form(const FormExpression& expr,
                                 const SubfieldEmbedding& emb) {
    FormExpression out;
    for (auto& [a, b] : expr.terms) {
        auto rc = relative_coordinates(b, emb);
        for (std::size_t t = 1; t < rc.size(); ++t)
            if (!is_zero(rc[t]))
                throw domain_error("trace_form: b_i outside the subfield");
        out.terms.emplace_back(relative_trace(a, emb), rc[0]);
    }
    return out;
}

/// Checks the norm/trace diagram on one decomposable input: the Hilbert
/// pairing of (exp(eta a), b) over K equals that of (exp(eta Tr_{K/k} a), b)
/// over k, for eta, b in k.
inline bool norm_diagram_check(const CyclotomicContext& ctx_K,
                               const CyclotomicContext& ctx_k,
                               const SubfieldEmbedding& emb, const KElement& eta_k,
                               const KElement& a, const KElement& b_k) {
    if (!is_unit(b_k)) throw domain_error("norm_diagram_check: b not a unit");
    KElement eta_K = embed(emb, eta_k);
    KElement b_K = embed(emb, b_k);
    SymbolValue top = hilbert_symbol(ctx_K, exp1(eta_K, a), b_K);
    SymbolValue bottom =
        hilbert_symbol(ctx_k, exp1(eta_k, relative_trace(a, emb)), b_k);
    return top == bottom;
}

/// Over k presented with pi = zeta_{p^n} - 1, rewrite sum a_i db_i/b_i as a
/// single coefficient a with the form equal to a dzeta/zeta.
inline KElement rewrite_to_zeta(const CyclotomicContext& ctx, const FormExpression& expr) {
    const FieldTower& T = *ctx.tower;
    if (!eq(ctx.pi, sub(ctx.zeta, T.one())))
        throw domain_error("rewrite_to_zeta: presentation requires pi = zeta - 1");
    KElement c = T.zero();
    for (auto& [a, b] : expr.terms) {
        K0Poly B = canonical_poly_lift(b);
        c = add(c, mul(a, mul(inv(b), eval_deriv(B, ctx.pi))));
    }
    return mul(c, ctx.zeta);  // x dpi = x dzeta = (x zeta) dzeta/zeta
}

}  // namespace rlab
