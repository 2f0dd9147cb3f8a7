#pragma once

#include <map>
#include <variant>
#include <vector>

#include "rlab/exp_map.hpp"

namespace rlab {

/// Doubly-truncated Laurent series over O_K modeling O_{K{{T}}}: coefficients
/// for exponents in [-trunc, trunc], window overflow fails loudly.
struct LaurentElement {
    TowerPtr tower;
    long trunc = 0;
    std::map<long, KElement> coeffs;  // only nonzero entries

    static LaurentElement constant(const TowerPtr& tower, const KElement& c, long trunc) {
        LaurentElement x{tower, trunc, {}};
        x.set(0, c);
        return x;
    }
    static LaurentElement monomial(const TowerPtr& tower, const KElement& c, long k,
                                   long trunc) {
        LaurentElement x{tower, trunc, {}};
        x.set(k, c);
        return x;
    }

    void set(long k, const KElement& c) {
        if (is_zero(c)) { coeffs.erase(k); return; }
        if (!is_integral(c))
            throw domain_error("LaurentElement: coefficient not integral");
        if (k < -trunc || k > trunc)
            throw window_error("LaurentElement: exponent " + std::to_string(k) +
                               " outside window [-" + std::to_string(trunc) + ", " +
                               std::to_string(trunc) + "]");
        coeffs[k] = c;
    }

    KElement at(long k) const {
        auto it = coeffs.find(k);
        return it == coeffs.end() ? tower->zero() : it->second;
    }
};

inline LaurentElement laurent_add(const LaurentElement& x, const LaurentElement& y) {
    LaurentElement r{x.tower, std::max(x.trunc, y.trunc), {}};
    for (auto& [k, c] : x.coeffs) r.set(k, add(r.at(k), c));
    for (auto& [k, c] : y.coeffs) r.set(k, add(r.at(k), c));
    return r;
}

inline LaurentElement laurent_neg(const LaurentElement& x) {
    LaurentElement r{x.tower, x.trunc, {}};
    for (auto& [k, c] : x.coeffs) r.set(k, neg(c));
    return r;
}

/// Convolution; any nonzero product exponent outside the common window raises
/// window_error, never silently truncates.
inline LaurentElement laurent_mul(const LaurentElement& x, const LaurentElement& y) {
    LaurentElement r{x.tower, std::max(x.trunc, y.trunc), {}};
    std::map<long, KElement> acc;
    for (auto& [i, a] : x.coeffs)
        for (auto& [j, b] : y.coeffs) {
            KElement prod = mul(a, b);
            auto it = acc.find(i + j);
            if (it == acc.end()) acc.emplace(i + j, prod);
            else it->second = add(it->second, prod);
        }
    for (auto& [k, c] : acc) r.set(k, c);  // window check happens in set()
    return r;
}

inline bool laurent_is_zero(const LaurentElement& x) {
    for (auto& [k, c] : x.coeffs)
        if (!is_zero(c)) return false;
    return true;
}

/// Form over O_{K{{T}}} in the normal form used here: a dT/T part, a dpi
/// part, and degree-2 wedge pieces a dlog(b) ∧ dT/T with b a T-free unit.
/// Any wedge given with dT/T first is rewritten with dT/T last, negating the
/// coefficient.
struct HLForm {
    std::optional<LaurentElement> dT_part;   // coefficient of dT/T
    std::optional<LaurentElement> dpi_part;  // coefficient of dpi
    struct Wedge {
        LaurentElement a;  // Laurent coefficient
        KElement b;        // T-free unit; term is a dlog(b) ∧ dT/T
    };
    std::vector<Wedge> wedges;

    static HLForm dT_over_T(const LaurentElement& a) {
        HLForm w;
        w.dT_part = a;
        return w;
    }
    /// a dlog(b) ∧ dT/T  (dT_first = false) or a dT/T ∧ dlog(b) (dT_first =
    /// true; stored with the sign folded in).
    static HLForm wedge(const LaurentElement& a, const KElement& b, bool dT_first = false) {
        if (!is_unit(b)) throw domain_error("HLForm::wedge: b not a unit");
        HLForm w;
        w.wedges.push_back({dT_first ? laurent_neg(a) : a, b});
        return w;
    }
};

/// Degree-1 residue: the T^0 coefficient of the dT/T part.
inline KElement residue_form_deg1(const HLForm& w, const TowerPtr& tower) {
    if (!w.wedges.empty())
        throw domain_error("residue_form_deg1: form has degree-2 pieces");
    if (!w.dT_part) return tower->zero();
    return w.dT_part->at(0);
}

/// Degree-2 residue: the T^0 slice of each wedge coefficient, as a form over K.
inline FormExpression residue_form_deg2(const HLForm& w) {
    FormExpression out;
    for (auto& piece : w.wedges) {
        KElement a0 = piece.a.at(0);
        if (!is_zero(a0)) out.terms.emplace_back(a0, piece.b);
    }
    return out;
}

/// Entry of a decomposable Milnor symbol over K{{T}}: a T-free element of K*
/// or the distinguished last entry T.
struct TSlot {};
using SymbolEntry = std::variant<KElement, TSlot>;

/// {x_1, ..., x_q, T} -> {x_1, ..., x_q}.  Anything outside this decomposable
/// shape is out of the modeled domain.
inline std::vector<KElement> residue_symbol(const std::vector<SymbolEntry>& sym) {
    if (sym.empty()) throw domain_error("residue_symbol: empty symbol");
    if (!std::holds_alternative<TSlot>(sym.back()))
        throw domain_error("residue_symbol: out of modeled domain (last entry is not T)");
    std::vector<KElement> out;
    for (std::size_t i = 0; i + 1 < sym.size(); ++i) {
        if (!std::holds_alternative<KElement>(sym[i]))
            throw domain_error(
                "residue_symbol: out of modeled domain (T appears before the last slot)");
        out.push_back(std::get<KElement>(sym[i]));
    }
    return out;
}

/// One decomposable instance of the residue diagram: exp then residue versus
/// residue then exp, for the form a dlog(b) ∧ dT/T (or its sign-permuted
/// ordering when dT_first is set).
inline bool residue_diagram_check(const CyclotomicContext& ctx, const KElement& eta,
                                  const KElement& a, const KElement& b,
                                  bool dT_first = false) {
    const TowerPtr& tw = ctx.tower;
    if (!is_unit(b)) throw domain_error("residue_diagram_check: b not a unit");
    if (!is_integral(a)) throw domain_error("residue_diagram_check: a not integral");

    // Route 1: residue of the form, then the degree-2 exponential pairing.
    LaurentElement la = LaurentElement::constant(tw, a, 4);
    HLForm w = HLForm::wedge(la, b, dT_first);
    SymbolValue c1 = exp2_eval(ctx, eta, residue_form_deg2(w));

    // Route 2: the symbol {exp(eta a), b, T} (the dT_first ordering carries a
    // sign from moving T to the last slot), then the symbol residue.
    KElement alpha = exp1(eta, a);
    std::vector<SymbolEntry> sym = {SymbolEntry{alpha}, SymbolEntry{b}, SymbolEntry{TSlot{}}};
    auto dropped = residue_symbol(sym);
    SymbolValue c2 = hilbert_symbol(ctx, dropped[0], dropped[1]);
    if (dT_first) c2 = -c2;

    return c1 == c2;
}

}  // namespace rlab
