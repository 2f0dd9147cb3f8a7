#pragma once

#include <random>

#include "rlab/field.hpp"

namespace rlab_test {

using namespace rlab;

// F0: p = 3, K = k = Q_3(zeta_3), pi = zeta_3 - 1, e(X) = X^2 + 3X + 3.
inline FieldDesc f0_desc() {
    FieldDesc d;
    d.p = 3;
    d.n = 1;
    d.unram_poly = {0, 1};
    d.eisenstein = {3, 3, 1};
    d.work_prec = 40;
    return d;
}

// Degree-6 tower K = Q_3(zeta_3, pi_k^{1/3}): e(X) = e_k(X^3).
inline FieldDesc k6_desc() {
    FieldDesc d = f0_desc();
    d.eisenstein = {3, 0, 0, 3, 0, 0, 1};
    return d;
}

// Q_5(zeta_5): e(X) = Phi_5(X + 1) = X^4 + 5X^3 + 10X^2 + 10X + 5.
inline FieldDesc q5_desc() {
    FieldDesc d;
    d.p = 5;
    d.n = 1;
    d.unram_poly = {0, 1};
    d.eisenstein = {5, 10, 10, 5, 1};
    d.work_prec = 40;
    return d;
}

inline TowerPtr f0() {
    static TowerPtr t = make_field(f0_desc());
    return t;
}

inline TowerPtr k6() {
    static TowerPtr t = make_field(k6_desc());
    return t;
}

inline TowerPtr q5() {
    static TowerPtr t = make_field(q5_desc());
    return t;
}

inline SubfieldEmbedding k6_embedding() {
    SubfieldEmbedding emb;
    emb.sub = f0();
    emb.image_pi = pow_elem(k6()->pi(), 3);
    emb.image_u = k6()->zero();
    return emb;
}

/// Principal unit in the domain of Sen's formula: ord(x - 1) >= 2/(p-1).
inline KElement sen_alpha(const TowerPtr& t, std::mt19937_64& rng) {
    return random_element(t, SampleKind::PrincipalUnit, rng, Rat(2, t->p() - 1));
}

}  // namespace rlab_test
