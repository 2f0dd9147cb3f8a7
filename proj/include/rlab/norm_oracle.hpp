#pragma once

#include <map>
#include <vector>

#include "rlab/field.hpp"

namespace rlab {

/// x in (K*)^p, for arbitrary nonzero x: split off the pi-power and test the
/// unit part.
inline bool is_pth_power_general(const KElement& x) {
    if (is_zero(x)) throw domain_error("is_pth_power_general: x = 0");
    const FieldTower& T = *x.tower();
    Rat o = ord(x);
    long m = o.num * (T.e() / o.den);
    if (m % T.p() != 0) return false;
    KElement u = mul(x, inv(pow_elem(T.pi(), m)));
    return pth_power_test(u).is_power;
}

/// L = K(gamma), gamma^p = beta; elements are degree-<p coefficient vectors
/// over K.
struct KummerExtension {
    TowerPtr base;
    KElement beta;
    bool degenerate = false;  // beta already a p-th power in K
};

using LElem = std::vector<KElement>;  // length p, coefficients of gamma^i

inline KummerExtension build_extension(const TowerPtr& tower, const KElement& beta) {
    if (is_zero(beta)) throw domain_error("build_extension: beta = 0");
    KummerExtension ext;
    ext.base = tower;
    ext.beta = beta;
    ext.degenerate = is_pth_power_general(beta);
    return ext;
}

inline LElem l_zero(const KummerExtension& ext) {
    return LElem(static_cast<std::size_t>(ext.base->p()), ext.base->zero());
}

inline LElem l_from_k(const KummerExtension& ext, const KElement& x) {
    LElem r = l_zero(ext);
    r[0] = x;
    return r;
}

inline LElem l_gamma(const KummerExtension& ext) {
    LElem r = l_zero(ext);
    r[1] = ext.base->one();
    return r;
}

inline LElem l_add(const KummerExtension& ext, const LElem& a, const LElem& b) {
    LElem r = l_zero(ext);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = add(a[i], b[i]);
    return r;
}

inline LElem l_mul(const KummerExtension& ext, const LElem& a, const LElem& b) {
    long p = ext.base->p();
    std::vector<KElement> conv(static_cast<std::size_t>(2 * p - 1), ext.base->zero());
    for (long i = 0; i < p; ++i)
        for (long j = 0; j < p; ++j)
            conv[i + j] = add(conv[i + j], mul(a[i], b[j]));
    LElem r(conv.begin(), conv.begin() + p);
    for (long k = p; k < 2 * p - 1; ++k)  // gamma^p = beta
        r[k - p] = add(r[k - p], mul(conv[k], ext.beta));
    return r;
}

/// N_{L/K}(x): determinant of multiplication-by-x on the basis {gamma^i}.
inline KElement norm_L_to_K(const KummerExtension& ext, const LElem& x) {
    long p = ext.base->p();
    // columns: x * gamma^j
    std::vector<LElem> cols;
    LElem cur = x;
    for (long j = 0; j < p; ++j) {
        cols.push_back(cur);
        if (j + 1 < p) cur = l_mul(ext, cur, l_gamma(ext));
    }
    // determinant over K by elimination with minimal-ord pivoting
    std::vector<std::vector<KElement>> A(
        static_cast<std::size_t>(p), std::vector<KElement>(static_cast<std::size_t>(p)));
    for (long r = 0; r < p; ++r)
        for (long c = 0; c < p; ++c) A[r][c] = cols[c][r];
    bool neg_sign = false;
    KElement det = ext.base->one();
    for (long c = 0; c < p; ++c) {
        long best = -1;
        Rat bestv;
        for (long r = c; r < p; ++r) {
            if (is_zero(A[r][c])) continue;
            Rat v = ord(A[r][c]);
            if (best < 0 || v < bestv) { best = r; bestv = v; }
        }
        if (best < 0) throw precision_error("norm_L_to_K: singular at precision");
        if (best != c) { std::swap(A[c], A[best]); neg_sign = !neg_sign; }
        det = mul(det, A[c][c]);
        KElement piv = inv(A[c][c]);
        for (long r = c + 1; r < p; ++r) {
            if (is_zero(A[r][c])) continue;
            KElement m = mul(A[r][c], piv);
            for (long k = c; k < p; ++k) A[r][k] = sub(A[r][k], mul(m, A[c][k]));
        }
    }
    return neg_sign ? neg(det) : det;
}

/// Generators whose classes span V = K*/(K*)^p, with the exhaustive product
/// table used for coordinate search.
class ClassSpace {
public:
    explicit ClassSpace(const TowerPtr& tower) : tower_(tower) {
        const FieldTower& T = *tower;
        long p = T.p();
        long dim_expected = T.degree() + 2;  // mu_p in K is required

        // Candidate ladder: pi, then 1 + pi^i for i up to ceil(e p/(p-1)),
        // then (f > 1) Teichmuller units; keep greedily independent ones.
        std::vector<KElement> candidates = {T.pi()};
        long bound = (T.e() * p + (p - 2)) / (p - 1);  // ceil(e p/(p-1))
        for (long i = 1; i <= bound; ++i)
            candidates.push_back(add(T.one(), pow_elem(T.pi(), i)));
        if (T.f() > 1)
            for (const auto& r : detail::residue_reps(tower, false))
                if (!eq(r, T.one())) candidates.push_back(teichmuller(r));

        for (const auto& cand : candidates) {
            if (static_cast<long>(gens_.size()) == dim_expected) break;
            if (in_span(cand)) continue;
            gens_.push_back(cand);
            rebuild_table();
        }
        if (static_cast<long>(gens_.size()) != dim_expected)
            throw error("ClassSpace: generator ladder reached rank " +
                        std::to_string(gens_.size()) + ", expected " +
                        std::to_string(dim_expected));
        // Independence re-verified: the only product that is a p-th power is
        // the trivial one.
        for (std::size_t idx = 1; idx < inv_products_.size(); ++idx)
            if (is_pth_power_general(inv_products_[idx]))
                throw error("ClassSpace: generators dependent at index " +
                            std::to_string(idx));
    }

    long dim() const { return static_cast<long>(gens_.size()); }
    const std::vector<KElement>& generators() const { return gens_; }
    const TowerPtr& tower() const { return tower_; }

    /// The unique exponent vector of u's class, by exhaustive search over all
    /// p^dim candidate products.
    std::vector<long> coordinates(const KElement& u) const {
        if (is_zero(u)) throw domain_error("class_coordinates: u = 0");
        long p = tower_->p();
        for (std::size_t idx = 0; idx < inv_products_.size(); ++idx) {
            if (is_pth_power_general(mul(u, inv_products_[idx]))) {
                std::vector<long> v(gens_.size());
                std::size_t t = idx;
                for (std::size_t g = 0; g < gens_.size(); ++g) {
                    v[g] = static_cast<long>(t % p);
                    t /= static_cast<std::size_t>(p);
                }
                return v;
            }
        }
        throw error("class_coordinates: exhaustive search failed; "
                    "generator-independence bug");
    }

private:
    bool in_span(const KElement& x) const {
        for (const auto& q : inv_products_)
            if (is_pth_power_general(mul(x, q))) return true;
        return false;
    }

    void rebuild_table() {
        long p = tower_->p();
        std::size_t total = 1;
        for (std::size_t g = 0; g < gens_.size(); ++g) total *= static_cast<std::size_t>(p);
        std::vector<KElement> inv_gens;
        for (const auto& g : gens_) inv_gens.push_back(inv(g));
        inv_products_.assign(total, tower_->one());
        for (std::size_t idx = 1; idx < total; ++idx) {
            std::size_t t = idx;
            std::size_t g = 0;
            while (t % static_cast<std::size_t>(p) == 0) {
                t /= static_cast<std::size_t>(p);
                ++g;
            }
            // idx = prev + p^g  (one more factor of gens_[g]^-1)
            std::size_t prev = idx;
            std::size_t pg = 1;
            for (std::size_t i = 0; i < g; ++i) pg *= static_cast<std::size_t>(p);
            prev -= pg;
            inv_products_[idx] = mul(inv_products_[prev], inv_gens[g]);
        }
    }

    TowerPtr tower_;
    std::vector<KElement> gens_;
    std::vector<KElement> inv_products_;  // product of gens^-exponents, mixed radix p
};

/// Span of class coordinates of a deterministic norm sample set; must have
/// rank dim - 1 (local CFT index p).
struct NormSubgroup {
    std::vector<std::vector<long>> basis;  // row-echelon basis over Z/p
    long rank() const { return static_cast<long>(basis.size()); }
};

namespace detail {

/// Reduce v against echelon rows mod p; returns the reduced vector.
inline std::vector<long> fp_reduce(const std::vector<std::vector<long>>& rows,
                                   std::vector<long> v, long p) {
    for (const auto& r : rows) {
        std::size_t lead = 0;
        while (lead < r.size() && r[lead] == 0) ++lead;
        if (lead == r.size()) continue;
        if (v[lead] == 0) continue;
        // r[lead] == 1 (rows are normalized)
        long m = v[lead];
        for (std::size_t i = 0; i < v.size(); ++i)
            v[i] = ((v[i] - m * r[i]) % p + p) % p;
    }
    return v;
}

inline bool fp_insert(std::vector<std::vector<long>>& rows, std::vector<long> v, long p) {
    v = fp_reduce(rows, std::move(v), p);
    std::size_t lead = 0;
    while (lead < v.size() && v[lead] == 0) ++lead;
    if (lead == v.size()) return false;
    // normalize leading coefficient to 1
    long linv = 1;
    for (long c = 1; c < p; ++c)
        if ((c * v[lead]) % p == 1) { linv = c; break; }
    for (auto& x : v) x = (x * linv) % p;
    rows.push_back(std::move(v));
    // keep rows sorted by leading index for deterministic reduction
    std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
        std::size_t la = 0, lb = 0;
        while (la < a.size() && a[la] == 0) ++la;
        while (lb < b.size() && b[lb] == 0) ++lb;
        return la < lb;
    });
    return true;
}

}  // namespace detail

inline NormSubgroup norm_subgroup(const KummerExtension& ext, const ClassSpace& space) {
    if (ext.degenerate)
        throw domain_error("norm_subgroup: degenerate extension (full space)");
    const TowerPtr& tw = ext.base;
    const FieldTower& T = *tw;
    long p = T.p();
    long dim = space.dim();

    std::vector<LElem> samples;
    samples.push_back(l_gamma(ext));  // N(gamma) = beta (p odd)
    for (long i = 1; i < p; ++i) {    // 1 + gamma^i
        LElem s = l_zero(ext);
        s[0] = T.one();
        s[static_cast<std::size_t>(i)] = add(s[static_cast<std::size_t>(i)], T.one());
        samples.push_back(s);
    }
    {
        LElem s = l_gamma(ext);  // gamma + pi, a pi_L-analogue
        s[0] = T.pi();
        samples.push_back(s);
        LElem s2 = l_gamma(ext);  // gamma - 1
        s2[0] = neg(T.one());
        samples.push_back(s2);
    }
    // Deterministic extra samples with small integral coordinates.
    std::mt19937_64 rng(0x6e6f726d);  // fixed oracle seed
    for (int k = 0; k < 48; ++k) {
        LElem s = l_zero(ext);
        for (long i = 0; i < p; ++i)
            s[static_cast<std::size_t>(i)] = random_element(tw, SampleKind::Integral, rng);
        samples.push_back(s);
    }

    NormSubgroup sub;
    for (const auto& s : samples) {
        KElement nx = norm_L_to_K(ext, s);
        if (is_zero(nx)) continue;
        detail::fp_insert(sub.basis, space.coordinates(nx), p);
        if (sub.rank() == dim - 1) break;
        if (sub.rank() >= dim)
            throw error("norm_subgroup: rank exceeded dim - 1; oracle bug");
    }
    if (sub.rank() != dim - 1)
        throw error("norm_subgroup: rank " + std::to_string(sub.rank()) +
                    " != dim - 1 = " + std::to_string(dim - 1) +
                    " within the sample budget");
    return sub;
}

/// Same element in another tower over the identical field description
/// (typically at a different working precision).
inline KElement transfer_element(const TowerPtr& dst, const KElement& x) {
    std::vector<PadicScalar> c;
    c.reserve(x.coords().size());
    for (const auto& s : x.coords()) {
        if (s.is_zero()) {
            c.push_back(PadicScalar::zero_at(dst->p(), dst->scalar_prec()));
        } else {
            if (s.valuation() < 0)
                throw domain_error("transfer_element: non-integral coordinate");
            c.push_back(PadicScalar(dst->p(), s.lift(),
                                    std::min(dst->scalar_prec(), s.abs_prec())));
        }
    }
    return dst->from_coord_map(std::move(c));
}

/// Brute-force oracle with per-tower caches for the class space and the norm
/// subgroups of previously seen beta.  Classes in K*/(K*)^p are decided by
/// the digits up to the principal-unit depth e p/(p-1), so the oracle runs
/// internally at a small working precision regardless of the caller's.
class NormOracle {
public:
    explicit NormOracle(const TowerPtr& tower) : tower_(tower) {
        if (tower->p() != 3 && tower->p() != 5)
            throw domain_error("norm oracle: p must be 3 or 5");
        if (tower->desc().n != 1)
            throw domain_error("norm oracle: only level n = 1 is supported");
        constexpr long oracle_prec = 8;
        if (tower->desc().work_prec > oracle_prec) {
            FieldDesc d = tower->desc();
            d.work_prec = oracle_prec;
            work_tower_ = make_field(d);
        } else {
            work_tower_ = tower;
        }
    }

    const ClassSpace& space() {
        if (!space_) space_.emplace(work_tower_);
        return *space_;
    }

    /// alpha in N_{L/K}(L*) for L = K(beta^{1/p})?
    bool is_norm(const KElement& alpha, const KElement& beta) {
        if (is_zero(alpha) || is_zero(beta))
            throw domain_error("is_norm: zero argument");
        KElement b = transfer_element(work_tower_, beta);
        KummerExtension ext = build_extension(work_tower_, b);
        if (ext.degenerate) return true;  // L = K, every alpha is a norm
        const NormSubgroup& sub = subgroup_for(b, ext);
        auto v = space().coordinates(transfer_element(work_tower_, alpha));
        auto r = detail::fp_reduce(sub.basis, v, work_tower_->p());
        for (long x : r)
            if (x) return false;
        return true;
    }

    const NormSubgroup& subgroup_for(const KElement& beta, const KummerExtension& ext) {
        KElement b = transfer_element(work_tower_, beta);
        std::string key = to_string(b);
        auto it = cache_.find(key);
        if (it == cache_.end()) {
            KummerExtension e = ext.base == work_tower_ ? ext
                                                        : build_extension(work_tower_, b);
            it = cache_.emplace(key, norm_subgroup(e, space())).first;
        }
        return it->second;
    }

private:
    TowerPtr tower_;
    TowerPtr work_tower_;
    std::optional<ClassSpace> space_;
    std::map<std::string, NormSubgroup> cache_;
};

}  // namespace rlab
