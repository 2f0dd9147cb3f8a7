#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "rlab/padic.hpp"

namespace rlab {

/// Describes K = K_0(pi): K_0/Q_p unramified cut out by unram_poly,
/// K/K_0 totally ramified cut out by an Eisenstein polynomial.
struct FieldDesc {
    long p = 0;
    long n = 0;  // zeta_{p^n} required in K; n = 0 places no requirement
    std::vector<mpz_class> unram_poly;  // little-endian, monic over Z_p
    std::vector<mpz_class> eisenstein;  // little-endian, monic over O_{K_0}∩Z_p
    long work_prec = 40;

    std::string fingerprint_text() const {
        std::ostringstream os;
        os << "p=" << p << ";n=" << n << ";u=[";
        for (auto& c : unram_poly) os << c << ",";
        os << "];e=[";
        for (auto& c : eisenstein) os << c << ",";
        os << "];N=" << work_prec;
        return os.str();
    }
};

class FieldTower;
using TowerPtr = std::shared_ptr<const FieldTower>;

/// Element of K on the basis {pi^i u^j : 0 <= i < e, 0 <= j < f},
/// coordinates in Q_p with tracked precision.
class KElement {
public:
    KElement() = default;
    KElement(TowerPtr tower, std::vector<PadicScalar> coords)
        : tower_(std::move(tower)), coords_(std::move(coords)) {}

    const TowerPtr& tower() const { return tower_; }
    const std::vector<PadicScalar>& coords() const { return coords_; }
    std::vector<PadicScalar>& coords() { return coords_; }
    const PadicScalar& coord(std::size_t i, std::size_t j) const;

    long abs_prec() const {
        long n = coords_.empty() ? 0 : coords_[0].abs_prec();
        for (auto& c : coords_) n = std::min(n, c.abs_prec());
        return n;
    }

private:
    TowerPtr tower_;
    std::vector<PadicScalar> coords_;
};

/// Element of K_0 as a u-coordinate vector (length f).
using K0Elem = std::vector<PadicScalar>;
/// Polynomial over O_{K_0}, little-endian.
using K0Poly = std::vector<K0Elem>;
/// Polynomial over O_K, little-endian.
using KPoly = std::vector<KElement>;

struct SubfieldEmbedding {
    TowerPtr sub;
    KElement image_pi;  // image of the subfield's pi in K
    KElement image_u;   // image of the subfield's u in K
};

struct PthPowerResult {
    bool is_power = false;
    std::optional<KElement> witness;  // witness^p = u when is_power
};

class FieldTower : public std::enable_shared_from_this<FieldTower> {
public:
    static TowerPtr make(const FieldDesc& desc);

    const FieldDesc& desc() const { return desc_; }
    long p() const { return desc_.p; }
    long e() const { return e_; }
    long f() const { return f_; }
    long degree() const { return e_ * f_; }
    /// Internal scalar precision; carries headroom over desc().work_prec for
    /// series truncation and trace guard digits.
    long scalar_prec() const { return scalar_prec_; }

    // -- construction of elements ------------------------------------------
    PadicScalar scalar(const mpz_class& v) const {
        return PadicScalar(desc_.p, v, scalar_prec_);
    }
    KElement zero() const { return from_coord_map({}); }
    KElement one() const { return from_int(1); }
    KElement from_int(const mpz_class& v) const;
    KElement from_scalar(const PadicScalar& s) const;
    KElement pi() const;
    KElement u_gen() const;
    KElement zeta() const {
        if (!zeta_) throw field_error("tower has no cached zeta (n = 0)");
        return *zeta_;
    }
    KElement from_k0(const K0Elem& c) const;

    KElement from_coord_map(std::vector<PadicScalar> coords) const;

    std::size_t idx(std::size_t i, std::size_t j) const { return i * f_ + j; }

    // -- K_0 arithmetic -----------------------------------------------------
    K0Elem k0_zero() const { return K0Elem(f_, PadicScalar::zero_at(desc_.p, scalar_prec_)); }
    K0Elem k0_add(const K0Elem& a, const K0Elem& b) const;
    K0Elem k0_mul(const K0Elem& a, const K0Elem& b) const;

    const K0Poly& eisenstein_poly() const { return eis_; }
    const K0Poly& unram_reduction() const { return u_top_; }

private:
    friend TowerPtr make_field(const FieldDesc&);
    FieldTower() = default;

    FieldDesc desc_;
    long e_ = 1, f_ = 1, scalar_prec_ = 0;
    K0Poly eis_;                       // eisenstein as K0Poly
    K0Poly u_top_;                     // unused marker; kept empty
    std::vector<K0Elem> u_pow_red_;    // u^(f+k), k = 0..f-2, as K0 vectors
    std::vector<std::vector<K0Elem>> pi_pow_red_;  // pi^(e+k), k = 0..e-2, as pi-coeff vectors
    std::optional<KElement> zeta_;

    void build_tables();
    friend KElement mul(const KElement&, const KElement&);
};

// ---------------------------------------------------------------------------
// free operations on KElement
// ---------------------------------------------------------------------------

KElement add(const KElement& x, const KElement& y);
KElement sub(const KElement& x, const KElement& y);
KElement neg(const KElement& x);
KElement mul(const KElement& x, const KElement& y);
KElement mul_scalar(const KElement& x, const PadicScalar& s);
KElement inv(const KElement& x);
KElement div(const KElement& x, const KElement& y);
KElement pow_elem(const KElement& x, long k);
KElement div_pow_p(const KElement& x, long k);
/// Exact division by an integer (splits into p-power and unit part).
KElement div_int(const KElement& x, const mpz_class& k);

bool is_zero(const KElement& x);
bool eq(const KElement& x, const KElement& y);
Rat ord(const KElement& x);
bool is_integral(const KElement& x);
bool is_unit(const KElement& x);

PadicScalar trace_abs(const KElement& x);
PadicScalar norm_abs(const KElement& x);

KElement eval_poly(const K0Poly& g, const KElement& x);
KElement eval_deriv(const K0Poly& g, const KElement& x);
KElement eval_kpoly(const KPoly& g, const KElement& x);
KElement eval_kpoly_deriv(const KPoly& g, const KElement& x);

K0Poly canonical_poly_lift(const KElement& x);
K0Poly poly_lift_wrt(const KElement& x, const KElement& pi_alt);

KElement embed(const SubfieldEmbedding& emb, const KElement& x_sub);
std::vector<KElement> relative_coordinates(const KElement& x, const SubfieldEmbedding& emb);
KElement relative_trace(const KElement& x, const SubfieldEmbedding& emb);

KElement hensel_root(const KPoly& f, const KElement& x0);
std::optional<KElement> find_zeta(const TowerPtr& tower, long n);
KElement teichmuller(const KElement& x);
PthPowerResult pth_power_test(const KElement& u);

enum class SampleKind { Integral, Unit, PrincipalUnit };
KElement random_element(const TowerPtr& tower, SampleKind kind, std::mt19937_64& rng,
                        Rat principal_min_ord = Rat(1));

K0Poly k0poly_from_ints(const TowerPtr& tower, const std::vector<mpz_class>& coeffs);
std::string to_string(const KElement& x);

// ---------------------------------------------------------------------------
// implementation
// ---------------------------------------------------------------------------

inline const PadicScalar& KElement::coord(std::size_t i, std::size_t j) const {
    return coords_[tower_->idx(i, j)];
}

inline KElement FieldTower::from_coord_map(std::vector<PadicScalar> coords) const {
    coords.resize(static_cast<std::size_t>(e_ * f_),
                  PadicScalar::zero_at(desc_.p, scalar_prec_));
    return KElement(shared_from_this(), std::move(coords));
}

inline KElement FieldTower::from_int(const mpz_class& v) const {
    auto c = std::vector<PadicScalar>{scalar(v)};
    return from_coord_map(std::move(c));
}

inline KElement FieldTower::from_scalar(const PadicScalar& s) const {
    return from_coord_map({s});
}

inline KElement FieldTower::pi() const {
    if (e_ == 1) {
        // pi is determined by the degree-1 Eisenstein polynomial: pi = -e_0
        return neg(from_k0(eis_[0]));
    }
    std::vector<PadicScalar> c(static_cast<std::size_t>(e_ * f_),
                               PadicScalar::zero_at(desc_.p, scalar_prec_));
    c[idx(1, 0)] = scalar(1);
    return from_coord_map(std::move(c));
}

inline KElement FieldTower::u_gen() const {
    if (f_ == 1) {
        return neg(from_scalar(PadicScalar(desc_.p, desc_.unram_poly[0], scalar_prec_)));
    }
    std::vector<PadicScalar> c(static_cast<std::size_t>(e_ * f_),
                               PadicScalar::zero_at(desc_.p, scalar_prec_));
    c[idx(0, 1)] = scalar(1);
    return from_coord_map(std::move(c));
}

inline KElement FieldTower::from_k0(const K0Elem& c) const {
    std::vector<PadicScalar> v(static_cast<std::size_t>(e_ * f_),
                               PadicScalar::zero_at(desc_.p, scalar_prec_));
    for (long j = 0; j < f_ && j < static_cast<long>(c.size()); ++j)
        v[idx(0, j)] = c[j];
    return from_coord_map(std::move(v));
}

inline K0Elem FieldTower::k0_add(const K0Elem& a, const K0Elem& b) const {
    K0Elem r = k0_zero();
    for (long j = 0; j < f_; ++j) r[j] = a[j] + b[j];
    return r;
}

inline K0Elem FieldTower::k0_mul(const K0Elem& a, const K0Elem& b) const {
    // convolve, then reduce u^(f+k) via cached tables
    std::vector<PadicScalar> conv(static_cast<std::size_t>(2 * f_ - 1),
                                  PadicScalar::zero_at(desc_.p, scalar_prec_));
    for (long i = 0; i < f_; ++i)
        for (long j = 0; j < f_; ++j) conv[i + j] = conv[i + j] + a[i] * b[j];
    K0Elem r(conv.begin(), conv.begin() + f_);
    for (long k = f_; k < 2 * f_ - 1; ++k) {
        const K0Elem& red = u_pow_red_[static_cast<std::size_t>(k - f_)];
        for (long j = 0; j < f_; ++j) r[j] = r[j] + conv[k] * red[j];
    }
    return r;
}

inline void FieldTower::build_tables() {
    long p = desc_.p;
    f_ = static_cast<long>(desc_.unram_poly.size()) - 1;
    e_ = static_cast<long>(desc_.eisenstein.size()) - 1;
    scalar_prec_ = 3 * desc_.work_prec + 16;

    if (f_ < 1 || desc_.unram_poly.back() != 1)
        throw field_error("unram_poly must be monic of degree >= 1");
    if (e_ < 1 || desc_.eisenstein.back() != 1)
        throw field_error("eisenstein must be monic of degree >= 1");

    // Eisenstein invariants: ord_p(coeff_i) >= 1 for i < e, ord_p(coeff_0) == 1.
    for (long i = 0; i < e_; ++i) {
        if (!mpz_divisible_ui_p(desc_.eisenstein[i].get_mpz_t(),
                                static_cast<unsigned long>(p)))
            throw field_error("not Eisenstein: coefficient of X^" + std::to_string(i) +
                              " has ord_p = 0");
    }
    mpz_class c0 = desc_.eisenstein[0] / p;
    if (c0 == 0 || mpz_divisible_ui_p(c0.get_mpz_t(), static_cast<unsigned long>(p)))
        throw field_error("not Eisenstein: constant term has ord_p != 1");

    // unram_poly must be irreducible mod p: check gcd(X^(p^d) - X, poly) over F_p
    // has no factor for d < f by testing for roots of the iterated Frobenius.
    if (f_ > 1) {
        // X^(p^f) == X mod (poly, p) and X^(p^d) != X for d | f, d < f.
        auto mulmod = [&](const std::vector<long>& a, const std::vector<long>& b) {
            std::vector<long> conv(static_cast<std::size_t>(2 * f_ - 1), 0);
            for (long i = 0; i < f_; ++i)
                for (long j = 0; j < f_; ++j)
                    conv[i + j] = (conv[i + j] + a[i] * b[j]) % p;
            for (long k = 2 * f_ - 2; k >= f_; --k) {
                long top = conv[k];
                if (!top) continue;
                conv[k] = 0;
                for (long i = 0; i < f_; ++i) {
                    long ci = mpz_class(desc_.unram_poly[i] % p).get_si();
                    ci = ((ci % p) + p) % p;
                    conv[k - f_ + i] = ((conv[k - f_ + i] - top * ci) % p + p) % p;
                }
            }
            conv.resize(static_cast<std::size_t>(f_));
            return conv;
        };
        auto frob = [&](std::vector<long> a) {
            // a -> a^p
            std::vector<long> r(static_cast<std::size_t>(f_), 0);
            r[0] = 1;
            std::vector<long> base = a;
            long k = p;
            while (k) {
                if (k & 1) r = mulmod(r, base);
                base = mulmod(base, base);
                k >>= 1;
            }
            return r;
        };
        std::vector<long> x(static_cast<std::size_t>(f_), 0);
        if (f_ >= 2) x[1] = 1;
        std::vector<long> cur = x;
        for (long d = 1; d < f_; ++d) {
            cur = frob(cur);
            if (cur == x)
                throw field_error("unram_poly reducible mod p (fixed by Frobenius^" +
                                  std::to_string(d) + ")");
        }
        cur = frob(cur);
        if (cur != x) throw field_error("unram_poly reducible mod p");
    }

    // u-power reduction: u^f = -(lower coefficients)
    auto k0_from_int_vec = [&](const std::vector<mpz_class>& v) {
        K0Elem r(static_cast<std::size_t>(f_), PadicScalar::zero_at(p, scalar_prec_));
        for (std::size_t j = 0; j < v.size() && j < static_cast<std::size_t>(f_); ++j)
            r[j] = PadicScalar(p, v[j], scalar_prec_);
        return r;
    };
    if (f_ > 1) {
        K0Elem top(static_cast<std::size_t>(f_), PadicScalar::zero_at(p, scalar_prec_));
        for (long j = 0; j < f_; ++j)
            top[j] = -PadicScalar(p, desc_.unram_poly[j], scalar_prec_);
        u_pow_red_.push_back(top);
        for (long k = 1; k < f_ - 1; ++k) {
            // u^(f+k) = u * u^(f+k-1)
            const K0Elem& prev = u_pow_red_.back();
            K0Elem nxt(static_cast<std::size_t>(f_), PadicScalar::zero_at(p, scalar_prec_));
            // shift by one u-power
            for (long j = 0; j + 1 < f_; ++j) nxt[j + 1] = prev[j];
            // overflow term prev[f-1] * u^f
            for (long j = 0; j < f_; ++j)
                nxt[j] = nxt[j] + prev[f_ - 1] * u_pow_red_[0][j];
            u_pow_red_.push_back(nxt);
        }
    }

    // eisenstein as K0Poly (integer coefficients)
    eis_.clear();
    for (auto& c : desc_.eisenstein) eis_.push_back(k0_from_int_vec({c}));

    // pi-power reduction: pi^e = -(lower coefficients), then iterate.
    if (e_ > 1) {
        std::vector<K0Elem> top;
        for (long i = 0; i < e_; ++i) {
            K0Elem c = eis_[static_cast<std::size_t>(i)];
            for (long j = 0; j < f_; ++j) c[j] = -c[j];
            top.push_back(c);
        }
        pi_pow_red_.push_back(top);
        for (long k = 1; k < e_ - 1; ++k) {
            const auto& prev = pi_pow_red_.back();
            std::vector<K0Elem> nxt(static_cast<std::size_t>(e_), k0_zero());
            for (long i = 0; i + 1 < e_; ++i) nxt[i + 1] = prev[i];
            for (long i = 0; i < e_; ++i)
                nxt[i] = k0_add(nxt[i], k0_mul(prev[e_ - 1], pi_pow_red_[0][i]));
            pi_pow_red_.push_back(nxt);
        }
    }
}

inline TowerPtr make_field(const FieldDesc& desc) {
    auto t = std::shared_ptr<FieldTower>(new FieldTower());
    t->desc_ = desc;
    t->build_tables();
    if (desc.n >= 1) {
        auto z = find_zeta(t, desc.n);
        if (!z)
            throw field_error("zeta_{p^" + std::to_string(desc.n) +
                              "} not present in the described field");
        t->zeta_ = *z;
    }
    return t;
}

inline TowerPtr FieldTower::make(const FieldDesc& desc) { return make_field(desc); }

inline void check_same_tower(const KElement& x, const KElement& y) {
    if (x.tower() != y.tower()) throw error("KElement: mixed towers");
}

inline KElement add(const KElement& x, const KElement& y) {
    check_same_tower(x, y);
    std::vector<PadicScalar> c(x.coords().size());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = x.coords()[i] + y.coords()[i];
    return KElement(x.tower(), std::move(c));
}

inline KElement neg(const KElement& x) {
    std::vector<PadicScalar> c(x.coords().size());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = -x.coords()[i];
    return KElement(x.tower(), std::move(c));
}

inline KElement sub(const KElement& x, const KElement& y) { return add(x, neg(y)); }

inline KElement mul_scalar(const KElement& x, const PadicScalar& s) {
    std::vector<PadicScalar> c(x.coords().size());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = x.coords()[i] * s;
    return KElement(x.tower(), std::move(c));
}

inline KElement mul(const KElement& x, const KElement& y) {
    check_same_tower(x, y);
    const FieldTower& T = *x.tower();
    long e = T.e(), f = T.f();
    // pi-coefficient views
    auto coeff = [&](const KElement& z, long i) {
        K0Elem c(static_cast<std::size_t>(f));
        for (long j = 0; j < f; ++j) c[j] = z.coords()[T.idx(i, j)];
        return c;
    };
    std::vector<K0Elem> conv(static_cast<std::size_t>(2 * e - 1), T.k0_zero());
    for (long i = 0; i < e; ++i) {
        K0Elem xi = coeff(x, i);
        for (long j = 0; j < e; ++j)
            conv[i + j] = T.k0_add(conv[i + j], T.k0_mul(xi, coeff(y, j)));
    }
    std::vector<K0Elem> res(conv.begin(), conv.begin() + e);
    for (long k = e; k < 2 * e - 1; ++k) {
        const auto& red = T.pi_pow_red_[static_cast<std::size_t>(k - e)];
        for (long i = 0; i < e; ++i)
            res[i] = T.k0_add(res[i], T.k0_mul(conv[k], red[i]));
    }
    std::vector<PadicScalar> out(static_cast<std::size_t>(e * f));
    for (long i = 0; i < e; ++i)
        for (long j = 0; j < f; ++j) out[T.idx(i, j)] = res[i][j];
    return KElement(x.tower(), std::move(out));
}

inline bool is_zero(const KElement& x) {
    for (auto& c : x.coords())
        if (!c.is_zero()) return false;
    return true;
}

inline bool eq(const KElement& x, const KElement& y) { return is_zero(sub(x, y)); }

inline Rat ord(const KElement& x) {
    const FieldTower& T = *x.tower();
    long e = T.e();
    bool found = false;
    long best = 0;          // numerator over e
    long zero_floor = -1;   // smallest e*prec + i over zero coords
    for (long i = 0; i < e; ++i)
        for (long j = 0; j < T.f(); ++j) {
            const PadicScalar& c = x.coord(i, j);
            if (c.is_zero()) {
                long zb = e * c.abs_prec() + i;
                if (zero_floor < 0 || zb < zero_floor) zero_floor = zb;
                continue;
            }
            long v = e * c.valuation() + i;
            if (!found || v < best) { best = v; found = true; }
        }
    if (!found)
        throw precision_error("ord indeterminate: all coordinates vanish at precision");
    if (zero_floor >= 0 && zero_floor <= best)
        throw precision_error("ord indeterminate: zero coordinate could dominate");
    return Rat(best, e);
}

inline bool is_integral(const KElement& x) {
    if (is_zero(x)) return true;
    return ord(x) >= Rat(0);
}

inline bool is_unit(const KElement& x) {
    if (is_zero(x)) return false;
    return ord(x) == Rat(0) && is_integral(x);
}

// -- linear algebra over Q_p ------------------------------------------------

/// Solve A x = b by elimination with maximal-|.|_p (minimal valuation) pivoting.
inline std::vector<PadicScalar> solve_linear(std::vector<std::vector<PadicScalar>> A,
                                             std::vector<PadicScalar> b) {
    std::size_t n = A.size();
    std::vector<std::size_t> perm(n);
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t best = n;
        long bestv = 0;
        for (std::size_t r = c; r < n; ++r) {
            if (A[r][c].is_zero()) continue;
            long v = A[r][c].valuation();
            if (best == n || v < bestv) { best = r; bestv = v; }
        }
        if (best == n)
            throw precision_error("singular system beyond precision");
        std::swap(A[c], A[best]);
        std::swap(b[c], b[best]);
        PadicScalar piv = A[c][c].inv();
        for (std::size_t r = c + 1; r < n; ++r) {
            if (A[r][c].is_zero()) continue;
            PadicScalar m = A[r][c] * piv;
            for (std::size_t k = c; k < n; ++k) A[r][k] = A[r][k] - m * A[c][k];
            b[r] = b[r] - m * b[c];
        }
    }
    std::vector<PadicScalar> x(n);
    for (std::size_t c = n; c-- > 0;) {
        PadicScalar s = b[c];
        for (std::size_t k = c + 1; k < n; ++k) s = s - A[c][k] * x[k];
        x[c] = s / A[c][c];
    }
    return x;
}

inline PadicScalar det_linear(std::vector<std::vector<PadicScalar>> A) {
    std::size_t n = A.size();
    if (n == 0) throw error("det of empty matrix");
    bool neg_sign = false;
    PadicScalar det = A[0][0];  // placeholder, overwritten below
    long p = A[0][0].p();
    long prec = A[0][0].abs_prec();
    det = PadicScalar(p, 1, prec);
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t best = n;
        long bestv = 0;
        for (std::size_t r = c; r < n; ++r) {
            if (A[r][c].is_zero()) continue;
            long v = A[r][c].valuation();
            if (best == n || v < bestv) { best = r; bestv = v; }
        }
        if (best == n) throw precision_error("determinant indistinguishable from 0");
        if (best != c) { std::swap(A[c], A[best]); neg_sign = !neg_sign; }
        det = det * A[c][c];
        PadicScalar piv = A[c][c].inv();
        for (std::size_t r = c + 1; r < n; ++r) {
            if (A[r][c].is_zero()) continue;
            PadicScalar m = A[r][c] * piv;
            for (std::size_t k = c; k < n; ++k) A[r][k] = A[r][k] - m * A[c][k];
        }
    }
    return neg_sign ? -det : det;
}

/// Multiplication-by-x matrix on the Q_p-basis {pi^i u^j}; column k holds the
/// coordinates of x * basis_k.
inline std::vector<std::vector<PadicScalar>> mult_matrix(const KElement& x) {
    const FieldTower& T = *x.tower();
    long d = T.degree();
    std::vector<std::vector<PadicScalar>> M(
        static_cast<std::size_t>(d),
        std::vector<PadicScalar>(static_cast<std::size_t>(d)));
    for (long i = 0; i < T.e(); ++i)
        for (long j = 0; j < T.f(); ++j) {
            std::vector<PadicScalar> bc(static_cast<std::size_t>(d),
                                        PadicScalar::zero_at(T.p(), T.scalar_prec()));
            bc[T.idx(i, j)] = T.scalar(1);
            KElement prod = mul(x, T.from_coord_map(std::move(bc)));
            for (long r = 0; r < d; ++r)
                M[static_cast<std::size_t>(r)][T.idx(i, j)] =
                    prod.coords()[static_cast<std::size_t>(r)];
        }
    return M;
}

inline PadicScalar trace_abs(const KElement& x) {
    auto M = mult_matrix(x);
    PadicScalar t = PadicScalar::zero_at(x.tower()->p(), x.tower()->scalar_prec());
    for (std::size_t i = 0; i < M.size(); ++i) t = t + M[i][i];
    return t;
}

inline PadicScalar norm_abs(const KElement& x) { return det_linear(mult_matrix(x)); }

inline KElement inv(const KElement& x) {
    const FieldTower& T = *x.tower();
    auto M = mult_matrix(x);
    std::vector<PadicScalar> b(static_cast<std::size_t>(T.degree()),
                               PadicScalar::zero_at(T.p(), T.scalar_prec()));
    b[0] = T.scalar(1);
    try {
        return KElement(x.tower(), solve_linear(std::move(M), std::move(b)));
    } catch (const precision_error&) {
        throw domain_error("inv: element indistinguishable from 0 at current precision");
    }
}

inline KElement div(const KElement& x, const KElement& y) { return mul(x, inv(y)); }

inline KElement pow_elem(const KElement& x, long k) {
    if (k < 0) return inv(pow_elem(x, -k));
    KElement r = x.tower()->one();
    KElement base = x;
    while (k) {
        if (k & 1) r = mul(r, base);
        base = mul(base, base);
        k >>= 1;
    }
    return r;
}

inline KElement div_pow_p(const KElement& x, long k) {
    std::vector<PadicScalar> c(x.coords().size());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = x.coords()[i].div_pow_p(k);
    return KElement(x.tower(), std::move(c));
}

inline KElement div_int(const KElement& x, const mpz_class& k) {
    if (k == 0) throw domain_error("div_int by zero");
    mpz_class u;
    unsigned long v = mpz_remove(u.get_mpz_t(), mpz_class(abs(k)).get_mpz_t(),
                                 mpz_class(x.tower()->p()).get_mpz_t());
    if (k < 0) u = -u;
    KElement r = mul_scalar(x, x.tower()->scalar(u).inv());
    return div_pow_p(r, static_cast<long>(v));
}

// -- polynomials ------------------------------------------------------------

inline KElement eval_poly(const K0Poly& g, const KElement& x) {
    const FieldTower& T = *x.tower();
    KElement r = T.zero();
    for (std::size_t i = g.size(); i-- > 0;) r = add(mul(r, x), T.from_k0(g[i]));
    return r;
}

inline KElement eval_deriv(const K0Poly& g, const KElement& x) {
    const FieldTower& T = *x.tower();
    KElement r = T.zero();
    for (std::size_t i = g.size(); i-- > 1;) {
        KElement c = mul_scalar(T.from_k0(g[i]), T.scalar(static_cast<long>(i)));
        r = add(mul(r, x), c);
    }
    return r;
}

inline KElement eval_kpoly(const KPoly& g, const KElement& x) {
    KElement r = x.tower()->zero();
    for (std::size_t i = g.size(); i-- > 0;) r = add(mul(r, x), g[i]);
    return r;
}

inline KElement eval_kpoly_deriv(const KPoly& g, const KElement& x) {
    KElement r = x.tower()->zero();
    for (std::size_t i = g.size(); i-- > 1;)
        r = add(mul(r, x), mul_scalar(g[i], x.tower()->scalar(static_cast<long>(i))));
    return r;
}

inline K0Poly canonical_poly_lift(const KElement& x) {
    if (!is_integral(x) && !is_zero(x))
        throw domain_error("canonical_poly_lift: element not integral");
    const FieldTower& T = *x.tower();
    K0Poly g;
    for (long i = 0; i < T.e(); ++i) {
        K0Elem c(static_cast<std::size_t>(T.f()));
        for (long j = 0; j < T.f(); ++j) c[j] = x.coord(i, j);
        g.push_back(std::move(c));
    }
    while (g.size() > 1) {
        bool z = true;
        for (auto& s : g.back())
            if (!s.is_zero()) z = false;
        if (!z) break;
        g.pop_back();
    }
    return g;
}

/// Q_p-coordinates of x on an arbitrary basis of K.
inline std::vector<PadicScalar> solve_in_basis(const KElement& x,
                                               const std::vector<KElement>& basis) {
    const FieldTower& T = *x.tower();
    long d = T.degree();
    if (static_cast<long>(basis.size()) != d)
        throw error("solve_in_basis: basis size mismatch");
    std::vector<std::vector<PadicScalar>> A(
        static_cast<std::size_t>(d),
        std::vector<PadicScalar>(static_cast<std::size_t>(d)));
    for (long c = 0; c < d; ++c)
        for (long r = 0; r < d; ++r)
            A[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] =
                basis[static_cast<std::size_t>(c)].coords()[static_cast<std::size_t>(r)];
    return solve_linear(std::move(A), x.coords());
}

inline K0Poly poly_lift_wrt(const KElement& x, const KElement& pi_alt) {
    const FieldTower& T = *x.tower();
    std::vector<KElement> basis;
    KElement pk = T.one();
    KElement ug = T.u_gen();
    for (long i = 0; i < T.e(); ++i) {
        KElement uj = pk;
        for (long j = 0; j < T.f(); ++j) {
            basis.push_back(uj);
            if (j + 1 < T.f()) uj = mul(uj, ug);
        }
        if (i + 1 < T.e()) pk = mul(pk, pi_alt);
    }
    auto coords = solve_in_basis(x, basis);
    K0Poly g;
    for (long i = 0; i < T.e(); ++i) {
        K0Elem c(static_cast<std::size_t>(T.f()));
        for (long j = 0; j < T.f(); ++j)
            c[static_cast<std::size_t>(j)] = coords[static_cast<std::size_t>(i * T.f() + j)];
        g.push_back(std::move(c));
    }
    return g;
}

// -- subfields --------------------------------------------------------------

inline KElement embed(const SubfieldEmbedding& emb, const KElement& x_sub) {
    const FieldTower& S = *emb.sub;
    const FieldTower& T = *emb.image_pi.tower();
    KElement r = T.zero();
    KElement pi_pow = T.one();
    for (long i = 0; i < S.e(); ++i) {
        KElement u_pow = pi_pow;
        for (long j = 0; j < S.f(); ++j) {
            r = add(r, mul_scalar(u_pow, x_sub.coord(i, j)));
            if (j + 1 < S.f()) u_pow = mul(u_pow, emb.image_u);
        }
        if (i + 1 < S.e()) pi_pow = mul(pi_pow, emb.image_pi);
    }
    return r;
}

inline std::vector<KElement> sub_basis_in_K(const SubfieldEmbedding& emb) {
    const FieldTower& S = *emb.sub;
    const FieldTower& T = *emb.image_pi.tower();
    long m = T.degree() / S.degree();
    if (m * S.degree() != T.degree())
        throw error("relative degree not integral");
    std::vector<KElement> basis;
    KElement piK = T.pi();
    KElement piK_pow = T.one();
    for (long t = 0; t < m; ++t) {
        KElement sp = piK_pow;
        for (long i = 0; i < S.e(); ++i) {
            KElement su = sp;
            for (long j = 0; j < S.f(); ++j) {
                basis.push_back(su);
                if (j + 1 < S.f()) su = mul(su, emb.image_u);
            }
            if (i + 1 < S.e()) sp = mul(sp, emb.image_pi);
        }
        if (t + 1 < m) piK_pow = mul(piK_pow, piK);
    }
    return basis;
}

/// Coordinates of x on the k-basis {pi_K^t}: returns m subfield elements.
inline std::vector<KElement> relative_coordinates(const KElement& x,
                                                  const SubfieldEmbedding& emb) {
    const FieldTower& S = *emb.sub;
    long m = x.tower()->degree() / S.degree();
    auto coords = solve_in_basis(x, sub_basis_in_K(emb));
    std::vector<KElement> out;
    std::size_t pos = 0;
    for (long t = 0; t < m; ++t) {
        std::vector<PadicScalar> c;
        for (long i = 0; i < S.degree(); ++i) c.push_back(coords[pos++]);
        out.push_back(S.from_coord_map(std::move(c)));
    }
    return out;
}

inline KElement relative_trace(const KElement& x, const SubfieldEmbedding& emb) {
    const FieldTower& S = *emb.sub;
    const FieldTower& T = *x.tower();
    long m = T.degree() / S.degree();
    KElement piK = T.pi();
    KElement tr = S.zero();
    KElement pw = T.one();
    for (long t = 0; t < m; ++t) {
        auto rc = relative_coordinates(mul(x, pw), emb);
        tr = add(tr, rc[static_cast<std::size_t>(t)]);
        if (t + 1 < m) pw = mul(pw, piK);
    }
    return tr;
}

// -- Hensel / roots of unity -----------------------------------------------

inline KElement hensel_root(const KPoly& f, const KElement& x0) {
    const FieldTower& T = *x0.tower();
    KElement fx = eval_kpoly(f, x0);
    KElement dfx = eval_kpoly_deriv(f, x0);
    if (is_zero(dfx))
        throw domain_error("hensel_root: derivative vanishes at starting point");
    Rat odf = ord(dfx);
    if (!is_zero(fx) && !(ord(fx) > Rat(2) * odf))
        throw domain_error("hensel_root: no quadratic convergence (ord f(x0) = " +
                           ord(fx).str() + ", ord f'(x0) = " + odf.str() + ")");
    KElement x = x0;
    Rat target(T.scalar_prec() - 2);
    for (int it = 0; it < 200; ++it) {
        fx = eval_kpoly(f, x);
        if (is_zero(fx) || ord(fx) >= target) return x;
        dfx = eval_kpoly_deriv(f, x);
        x = sub(x, div(fx, dfx));
    }
    throw precision_error("hensel_root: failed to converge");
}

namespace detail {
/// Enumerate residue-field representatives sum d_j u^j, d_j in [0, p).
inline std::vector<KElement> residue_reps(const TowerPtr& tower, bool include_zero) {
    const FieldTower& T = *tower;
    long p = T.p(), f = T.f();
    long count = 1;
    for (long j = 0; j < f; ++j) count *= p;
    std::vector<KElement> out;
    KElement ug = T.u_gen();
    std::vector<KElement> upow;
    KElement c = T.one();
    for (long j = 0; j < f; ++j) {
        upow.push_back(c);
        if (j + 1 < f) c = mul(c, ug);
    }
    for (long v = include_zero ? 0 : 1; v < count; ++v) {
        long t = v;
        KElement x = T.zero();
        for (long j = 0; j < f; ++j) {
            long d = t % p;
            t /= p;
            if (d) x = add(x, mul_scalar(upow[static_cast<std::size_t>(j)], T.scalar(d)));
        }
        out.push_back(x);
    }
    return out;
}
}  // namespace detail

inline std::optional<KElement> find_zeta(const TowerPtr& tower, long n) {
    const FieldTower& T = *tower;
    long p = T.p();
    // cyclotomic polynomial Phi_{p^n}(X) = sum_{i<p} X^(i*p^(n-1)) as KPoly
    long step = 1;
    for (long i = 1; i < n; ++i) step *= p;
    KPoly phi(static_cast<std::size_t>(step * (p - 1) + 1), T.zero());
    for (long i = 0; i < p; ++i) phi[static_cast<std::size_t>(i * step)] = T.one();

    // zeta == 1 mod pi; enumerate candidates 1 + sum_{m<=M} c_m pi^m and
    // Hensel-lift the first one meeting the quadratic convergence criterion.
    long cap = T.e() * n + 1;
    KElement piK = T.pi();
    auto digits = detail::residue_reps(tower, true);
    std::vector<KElement> cands = {T.one()};
    for (long M = 1; M <= cap; ++M) {
        KElement pim = pow_elem(piK, M);
        std::vector<KElement> next;
        next.reserve(cands.size() * digits.size());
        for (const auto& base : cands)
            for (const auto& d : digits) next.push_back(add(base, mul(d, pim)));
        for (const auto& x0 : next) {
            KElement fv = eval_kpoly(phi, x0);
            KElement dv = eval_kpoly_deriv(phi, x0);
            if (is_zero(dv)) continue;
            if (is_zero(fv) || ord(fv) > Rat(2) * ord(dv)) {
                KElement z = hensel_root(phi, x0);
                // reject zeta that is not primitive (z == 1 would be a root of
                // X^(p^n) - 1 but not of Phi unless ...); Phi(1) = p != 0, so
                // any root of Phi is primitive.
                return z;
            }
        }
        cands = std::move(next);
    }
    return std::nullopt;
}

inline KElement teichmuller(const KElement& x) {
    if (!is_unit(x)) throw domain_error("teichmuller: not a unit");
    const FieldTower& T = *x.tower();
    long q = 1;
    for (long j = 0; j < T.f(); ++j) q *= T.p();
    KElement y = x;
    KElement prev = y;
    for (long it = 0; it < T.scalar_prec() * T.e() + 4; ++it) {
        KElement nxt = pow_elem(y, q);
        if (eq(nxt, y)) return y;
        y = nxt;
    }
    throw precision_error("teichmuller: no convergence");
}

inline PthPowerResult pth_power_test(const KElement& u0) {
    if (!is_unit(u0)) throw domain_error("pth_power_test: not a unit");
    const TowerPtr& tw = u0.tower();
    const FieldTower& T = *tw;
    long p = T.p(), e = T.e();
    long q = 1;
    for (long j = 0; j < T.f(); ++j) q *= p;

    // Teichmuller part is always a p-th power since gcd(p, q-1) = 1.
    KElement omega = teichmuller(u0);
    long pinv = 1;
    {
        long qm1 = q - 1;
        long a = p % qm1;
        // p * pinv == 1 mod q-1
        for (long c = 1; c < qm1 + 1; ++c)
            if ((a * c) % qm1 == 1 % qm1) { pinv = c; break; }
    }
    KElement witness = pow_elem(omega, pinv);
    KElement v = div(u0, omega);  // principal unit

    auto digits = detail::residue_reps(tw, false);
    KElement piK = T.pi();

    for (long guard = 0; guard < 4 * e + 8; ++guard) {
        KElement t = sub(v, T.one());
        if (is_zero(t)) return {true, witness};
        Rat lam = ord(t);
        if (lam > Rat(2)) {
            // X^p - v from x0 = 1: ord f(1) = ord(1 - v) > 2 = 2 ord(p)
            KPoly f(static_cast<std::size_t>(p + 1), T.zero());
            f[0] = neg(v);
            f[static_cast<std::size_t>(p)] = T.one();
            KElement r = hensel_root(f, T.one());
            return {true, mul(witness, r)};
        }
        long m = lam.num * (e / lam.den);  // lam = m/e exactly
        std::vector<long> exps;
        if (m * (p - 1) >= e * p && m > e) exps.push_back(m - e);
        if (m % p == 0) {
            long j = m / p;
            if (exps.empty() || exps[0] != j) exps.push_back(j);
        }
        if (m * (p - 1) < e * p && m % p != 0) return {false, std::nullopt};
        bool advanced = false;
        for (long j : exps) {
            KElement pij = pow_elem(piK, j);
            for (const auto& d : digits) {
                KElement w = add(T.one(), mul(d, pij));
                KElement v2 = div(v, pow_elem(w, p));
                KElement t2 = sub(v2, T.one());
                if (is_zero(t2) || ord(t2) > lam) {
                    v = v2;
                    witness = mul(witness, w);
                    advanced = true;
                    break;
                }
            }
            if (advanced) break;
        }
        if (!advanced) return {false, std::nullopt};
    }
    throw precision_error("pth_power_test: digit stripping did not terminate");
}

// -- sampling ---------------------------------------------------------------

inline KElement random_element(const TowerPtr& tower, SampleKind kind,
                               std::mt19937_64& rng, Rat principal_min_ord) {
    const FieldTower& T = *tower;
    long p = T.p();
    std::uniform_int_distribution<long> digit(0, p - 1);
    auto random_integral = [&](long ndig) {
        std::vector<PadicScalar> c;
        for (long i = 0; i < T.degree(); ++i) {
            mpz_class v = 0, pk = 1;
            for (long k = 0; k < ndig; ++k) {
                v += digit(rng) * pk;
                pk *= p;
            }
            c.push_back(T.scalar(v));
        }
        return T.from_coord_map(std::move(c));
    };
    switch (kind) {
        case SampleKind::Integral:
            return random_integral(12);
        case SampleKind::Unit: {
            for (int tries = 0; tries < 200; ++tries) {
                KElement x = random_integral(12);
                if (!is_zero(x) && ord(x) == Rat(0)) return x;
            }
            throw error("random_element: unit sampling failed");
        }
        case SampleKind::PrincipalUnit: {
            // 1 + pi^r0 * integral with r0/e >= principal_min_ord
            long r0 = principal_min_ord.num * T.e() / principal_min_ord.den;
            if (Rat(r0, T.e()) < principal_min_ord) ++r0;
            KElement x = random_integral(12);
            return add(T.one(), mul(pow_elem(T.pi(), r0), x));
        }
    }
    throw error("random_element: bad kind");
}

inline K0Poly k0poly_from_ints(const TowerPtr& tower, const std::vector<mpz_class>& coeffs) {
    K0Poly g;
    for (auto& c : coeffs) {
        K0Elem k0 = tower->k0_zero();
        k0[0] = tower->scalar(c);
        g.push_back(std::move(k0));
    }
    return g;
}

inline std::string to_string(const KElement& x) {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < x.coords().size(); ++i) {
        if (i) os << ", ";
        const auto& c = x.coords()[i];
        if (c.is_zero()) {
            os << "0";
        } else if (c.valuation() >= 0) {
            os << c.lift().get_str();
        } else {
            os << c.unit().get_str() << "*p^" << c.valuation();
        }
    }
    os << "]";
    return os.str();
}

}  // namespace rlab
