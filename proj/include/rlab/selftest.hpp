#pragma once

#include <string>
#include <vector>

#include "rlab/higher_local.hpp"
#include "rlab/norm_oracle.hpp"

namespace rlab {

struct PropertyResult {
    std::string name;
    bool passed = true;
    long samples = 0;
    std::string counterexample;  // first failing input, empty when passed

    void fail(const std::string& repro) {
        if (passed) counterexample = repro;
        passed = false;
    }
};

struct SuiteResult {
    std::string suite;
    std::vector<PropertyResult> properties;

    bool passed() const {
        for (auto& p : properties)
            if (!p.passed) return false;
        return true;
    }
};

inline const std::vector<std::string>& selftest_suites() {
    static const std::vector<std::string> names = {
        "arith",         "analytic",       "bilinearity",
        "lifts",         "kernel",         "norm-diagram",
        "residue-diagram", "oracle-concordance"};
    return names;
}

namespace detail {

inline std::uint64_t suite_seed(std::uint64_t seed, const std::string& suite) {
    std::uint64_t h = 1469598103934665603ull;  // FNV-1a over the suite name
    for (char c : suite) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ull;
    }
    return seed ^ h;
}

inline CyclotomicContext suite_context(const TowerPtr& tower) {
    if (tower->desc().n < 1)
        throw domain_error("selftest: suite requires a field with n >= 1");
    return make_context(tower);
}

/// K = k(pi_k^{1/p}) with e_K(X) = e_k(X^p), plus the embedding pi_k -> pi_K^p.
inline std::pair<TowerPtr, SubfieldEmbedding> pth_root_tower(const TowerPtr& k) {
    const FieldDesc& dk = k->desc();
    FieldDesc dK = dk;
    dK.eisenstein.assign(dk.eisenstein.size() * static_cast<std::size_t>(dk.p) -
                             static_cast<std::size_t>(dk.p) + 1,
                         0);
    for (std::size_t i = 0; i < dk.eisenstein.size(); ++i)
        dK.eisenstein[i * static_cast<std::size_t>(dk.p)] = dk.eisenstein[i];
    TowerPtr K = make_field(dK);
    SubfieldEmbedding emb;
    emb.sub = k;
    emb.image_pi = pow_elem(K->pi(), dk.p);
    emb.image_u = K->zero();
    return {K, emb};
}

inline bool close_mod_target(const KElement& x, const KElement& y) {
    KElement d = sub(x, y);
    return is_zero(d) || ord(d) >= Rat(x.tower()->desc().work_prec);
}

}  // namespace detail

inline SuiteResult run_suite(const TowerPtr& tower, const std::string& suite,
                             std::uint64_t seed, long samples) {
    const FieldTower& T = *tower;
    std::mt19937_64 rng(detail::suite_seed(seed, suite));
    SuiteResult out;
    out.suite = suite;

    auto sen_alpha = [&]() {
        return random_element(tower, SampleKind::PrincipalUnit, rng,
                              Rat(2, T.p() - 1));
    };

    if (suite == "arith") {
        PropertyResult ring{"ring-axioms"}, ordp{"ord-laws"}, invp{"inverses"},
            pth{"pth-power-witness"};
        for (long i = 0; i < samples; ++i) {
            KElement a = random_element(tower, SampleKind::Integral, rng);
            KElement b = random_element(tower, SampleKind::Integral, rng);
            KElement c = random_element(tower, SampleKind::Integral, rng);
            ring.samples++;
            if (!detail::close_mod_target(mul(a, add(b, c)), add(mul(a, b), mul(a, c))))
                ring.fail("a=" + to_string(a) + " b=" + to_string(b) + " c=" + to_string(c));
            ordp.samples++;
            if (!is_zero(a) && !is_zero(b) && ord(mul(a, b)) != ord(a) + ord(b))
                ordp.fail("a=" + to_string(a) + " b=" + to_string(b));
            KElement u = random_element(tower, SampleKind::Unit, rng);
            invp.samples++;
            if (!detail::close_mod_target(mul(u, inv(u)), T.one()))
                invp.fail("u=" + to_string(u));
            pth.samples++;
            PthPowerResult r = pth_power_test(pow_elem(u, T.p()));
            if (!r.is_power || !r.witness ||
                !detail::close_mod_target(pow_elem(*r.witness, T.p()),
                                          pow_elem(u, T.p())))
                pth.fail("u=" + to_string(u));
        }
        out.properties = {ring, ordp, invp, pth};
        return out;
    }

    if (suite == "analytic") {
        PropertyResult rt{"exp-log-round-trip"}, hom{"log-homomorphism"},
            bound{"boundary-rejection"};
        for (long i = 0; i < samples; ++i) {
            KElement x = sen_alpha();
            rt.samples++;
            if (!detail::close_mod_target(pexp(plog(x)), x))
                rt.fail("x=" + to_string(x));
            KElement y = sen_alpha();
            hom.samples++;
            if (!detail::close_mod_target(plog(mul(x, y)), add(plog(x), plog(y))))
                hom.fail("x=" + to_string(x) + " y=" + to_string(y));
        }
        if (T.e() % (T.p() - 1) == 0) {
            bound.samples = 1;
            KElement edge = pow_elem(T.pi(), T.e() / (T.p() - 1));
            try {
                pexp(edge);
                bound.fail("pexp accepted ord = 1/(p-1) input " + to_string(edge));
            } catch (const domain_error&) {
            }
        }
        out.properties = {rt, hom, bound};
        return out;
    }

    if (suite == "bilinearity") {
        CyclotomicContext ctx = detail::suite_context(tower);
        PropertyResult first{"first-slot"}, second{"second-slot"}, invl{"inverse-law"};
        for (long i = 0; i < samples; ++i) {
            KElement a1 = sen_alpha(), a2 = sen_alpha();
            KElement b1 = random_element(tower, SampleKind::Unit, rng);
            KElement b2 = mul(random_element(tower, SampleKind::Unit, rng),
                              pow_elem(ctx.pi, static_cast<long>(rng() % 3)));
            first.samples++;
            if (!(hilbert_symbol(ctx, mul(a1, a2), b1) ==
                  hilbert_symbol(ctx, a1, b1) + hilbert_symbol(ctx, a2, b1)))
                first.fail("a1=" + to_string(a1) + " a2=" + to_string(a2) +
                           " b=" + to_string(b1));
            second.samples++;
            if (!(hilbert_symbol(ctx, a1, mul(b1, b2)) ==
                  hilbert_symbol(ctx, a1, b1) + hilbert_symbol(ctx, a1, b2)))
                second.fail("a=" + to_string(a1) + " b1=" + to_string(b1) +
                            " b2=" + to_string(b2));
            invl.samples++;
            if (!(hilbert_symbol(ctx, a1, inv(b1)) == -hilbert_symbol(ctx, a1, b1)))
                invl.fail("a=" + to_string(a1) + " b=" + to_string(b1));
        }
        out.properties = {first, second, invl};
        return out;
    }

    if (suite == "lifts") {
        CyclotomicContext ctx = detail::suite_context(tower);
        PropertyResult lift{"lift-independence"}, prime{"prime-independence"};
        K0Poly e = tower->eisenstein_poly();
        for (long i = 0; i < samples; ++i) {
            KElement alpha = sen_alpha();
            KElement beta = random_element(tower, SampleKind::Unit, rng);
            K0Poly g = poly_lift_wrt(beta, ctx.pi);
            // g2 = g + q*e with a random linear q
            K0Poly q;
            for (int j = 0; j < 2; ++j) {
                K0Elem c = tower->k0_zero();
                c[0] = PadicScalar(T.p(), static_cast<long>(rng() % 17) - 8,
                                   T.scalar_prec());
                q.push_back(c);
            }
            K0Poly g2(g.size() + e.size(), tower->k0_zero());
            for (std::size_t a = 0; a < g.size(); ++a) g2[a] = tower->k0_add(g2[a], g[a]);
            for (std::size_t a = 0; a < q.size(); ++a)
                for (std::size_t b = 0; b < e.size(); ++b)
                    g2[a + b] = tower->k0_add(g2[a + b], tower->k0_mul(q[a], e[b]));
            lift.samples++;
            if (!(sen_symbol(ctx, alpha, beta, g) == sen_symbol(ctx, alpha, beta, g2)))
                lift.fail("alpha=" + to_string(alpha) + " beta=" + to_string(beta));

            KElement unit = random_element(tower, SampleKind::Unit, rng);
            CyclotomicContext alt = make_context_with_prime(tower, mul(ctx.pi, unit));
            prime.samples++;
            if (!(sen_symbol(ctx, alpha, beta, g) ==
                  sen_symbol(alt, alpha, beta, poly_lift_wrt(beta, alt.pi))))
                prime.fail("alpha=" + to_string(alpha) + " beta=" + to_string(beta) +
                           " unit=" + to_string(unit));
        }
        out.properties = {lift, prime};
        return out;
    }

    if (suite == "kernel") {
        CyclotomicContext ctx = detail::suite_context(tower);
        PropertyResult k{"p-da-kernel"};
        for (long i = 0; i < samples; ++i) {
            KElement a = random_element(tower, SampleKind::Unit, rng);
            k.samples++;
            if (kernel_check(ctx, a).c != 0) k.fail("a=" + to_string(a));
        }
        out.properties = {k};
        return out;
    }

    if (suite == "norm-diagram") {
        CyclotomicContext ctx_k = detail::suite_context(tower);
        auto [K, emb] = detail::pth_root_tower(tower);
        // Contexts must share one zeta: present K with the embedded root.
        CyclotomicContext ctx_K;
        ctx_K.tower = K;
        ctx_K.n = ctx_k.n;
        ctx_K.zeta = embed(emb, ctx_k.zeta);
        ctx_K.pi = K->pi();
        ctx_K.h = canonical_poly_lift(ctx_K.zeta);
        KElement eta_k = tower->from_int(T.p());
        PropertyResult d{"trace-norm-diagram"};
        for (long i = 0; i < samples; ++i) {
            KElement a = random_element(K, SampleKind::Integral, rng);
            KElement b_k = random_element(tower, SampleKind::Unit, rng);
            d.samples++;
            if (!norm_diagram_check(ctx_K, ctx_k, emb, eta_k, a, b_k))
                d.fail("a=" + to_string(a) + " b=" + to_string(b_k));
        }
        out.properties = {d};
        return out;
    }

    if (suite == "residue-diagram") {
        CyclotomicContext ctx = detail::suite_context(tower);
        KElement eta = tower->from_int(T.p());
        PropertyResult d{"residue-diagram"}, s{"residue-diagram-signed"};
        for (long i = 0; i < samples; ++i) {
            KElement a = random_element(tower, SampleKind::Integral, rng);
            KElement b = random_element(tower, SampleKind::Unit, rng);
            d.samples++;
            if (!residue_diagram_check(ctx, eta, a, b))
                d.fail("a=" + to_string(a) + " b=" + to_string(b));
            s.samples++;
            if (!residue_diagram_check(ctx, eta, a, b, /*dT_first=*/true))
                s.fail("a=" + to_string(a) + " b=" + to_string(b));
        }
        out.properties = {d, s};
        return out;
    }

    if (suite == "oracle-concordance") {
        CyclotomicContext ctx = detail::suite_context(tower);
        NormOracle oracle(tower);
        PropertyResult conc{"symbol-vs-norm"}, rank{"subgroup-rank"};
        std::vector<KElement> betas = {ctx.zeta, mul(ctx.zeta, ctx.zeta), neg(ctx.zeta)};
        for (long i = 0; i < samples; ++i) {
            KElement alpha = sen_alpha();
            KElement beta = i < static_cast<long>(betas.size())
                                ? betas[static_cast<std::size_t>(i)]
                                : random_element(tower, SampleKind::Unit, rng);
            conc.samples++;
            bool trivial = hilbert_symbol(ctx, alpha, beta).c == 0;
            if (trivial != oracle.is_norm(alpha, beta))
                conc.fail("alpha=" + to_string(alpha) + " beta=" + to_string(beta));
            rank.samples++;
            KummerExtension ext = build_extension(tower, beta);
            if (!ext.degenerate &&
                oracle.subgroup_for(beta, ext).rank() != oracle.space().dim() - 1)
                rank.fail("beta=" + to_string(beta));
        }
        out.properties = {conc, rank};
        return out;
    }

    throw domain_error("selftest: unknown suite '" + suite + "'");
}

inline std::vector<SuiteResult> run_suites(const TowerPtr& tower,
                                           const std::string& suite,
                                           std::uint64_t seed, long samples) {
    std::vector<SuiteResult> results;
    if (suite == "all") {
        for (const auto& s : selftest_suites())
            results.push_back(run_suite(tower, s, seed, samples));
    } else {
        results.push_back(run_suite(tower, suite, seed, samples));
    }
    return results;
}

}  // namespace rlab
