// Acceptance gate: one pass/fail line per criterion, nonzero exit on failure.
#include <chrono>
#include <functional>
#include <iostream>
#include <vector>

#include "fixtures.hpp"
#include "rlab/higher_local.hpp"
#include "rlab/norm_oracle.hpp"
#include "rlab/selftest.hpp"

using namespace rlab;
using namespace rlab_test;

namespace {

struct Criterion {
    int number;
    std::string name;
    std::function<bool(std::string&)> run;
};

bool check(bool cond, std::string& msg, const std::string& detail) {
    if (!cond && msg.empty()) msg = detail;
    return cond;
}

// -- criterion bodies -------------------------------------------------------

bool fixture_values(std::string& msg) {
    bool ok = true;
    for (long extra : {0L, 10L}) {
        FieldDesc d = f0_desc();
        d.work_prec += extra;
        TowerPtr t = make_field(d);
        CyclotomicContext ctx = make_context(t);
        KElement alpha = t->from_int(4);
        ok &= check(hilbert_symbol(ctx, alpha, ctx.zeta).c == 2, msg,
                    "(1+p, zeta) != 2 at precision " + std::to_string(d.work_prec));
        ok &= check(hilbert_symbol(ctx, alpha, ctx.pi).c == 1, msg,
                    "(1+p, pi) != 1 at precision " + std::to_string(d.work_prec));
    }
    return ok;
}

bool specializations(const TowerPtr& t, std::string& msg) {
    CyclotomicContext ctx = make_context(t);
    std::mt19937_64 rng(0xacc2);
    K0Poly g_t = k0poly_from_ints(t, {0, 1});
    bool ok = true;
    for (int i = 0; i < 100; ++i) {
        KElement alpha = sen_alpha(t, rng);
        ok &= check(sen_symbol(ctx, alpha, ctx.zeta, ctx.h) == artin_hasse(ctx, alpha),
                    msg, "zeta specialization, sample " + std::to_string(i));
        ok &= check(sen_symbol(ctx, alpha, ctx.pi, g_t) == iwasawa_prime(ctx, alpha),
                    msg, "prime specialization, sample " + std::to_string(i));
    }
    return ok;
}

bool bilinearity(std::string& msg) {
    bool ok = true;
    for (const TowerPtr& t : {f0(), k6()}) {
        CyclotomicContext ctx = make_context(t);
        std::mt19937_64 rng(0xacc3);
        for (int i = 0; i < 100; ++i) {
            KElement a1 = sen_alpha(t, rng), a2 = sen_alpha(t, rng);
            KElement b1 = random_element(t, SampleKind::Unit, rng);
            KElement b2 = mul(random_element(t, SampleKind::Unit, rng),
                              pow_elem(ctx.pi, static_cast<long>(rng() % 3)));
            ok &= check(hilbert_symbol(ctx, mul(a1, a2), b1) ==
                            hilbert_symbol(ctx, a1, b1) + hilbert_symbol(ctx, a2, b1),
                        msg, "first slot, sample " + std::to_string(i));
            ok &= check(hilbert_symbol(ctx, a1, mul(b1, b2)) ==
                            hilbert_symbol(ctx, a1, b1) + hilbert_symbol(ctx, a1, b2),
                        msg, "second slot, sample " + std::to_string(i));
            ok &= check(hilbert_symbol(ctx, a1, inv(b1)) == -hilbert_symbol(ctx, a1, b1),
                        msg, "inverse law, sample " + std::to_string(i));
        }
    }
    return ok;
}

bool independence(std::string& msg) {
    TowerPtr t = f0();
    CyclotomicContext ctx = make_context(t);
    CyclotomicContext alt =
        make_context_with_prime(t, mul(t->pi(), add(t->one(), t->pi())));
    std::mt19937_64 rng(0xacc4);
    const K0Poly& e = t->eisenstein_poly();
    bool ok = true;
    for (int i = 0; i < 50; ++i) {
        KElement alpha = sen_alpha(t, rng);
        KElement beta = random_element(t, SampleKind::Unit, rng);
        K0Poly g = poly_lift_wrt(beta, ctx.pi);
        std::vector<mpz_class> qc;
        for (int j = 0; j < 2; ++j) qc.emplace_back(static_cast<long>(rng() % 19) - 9);
        K0Poly q = k0poly_from_ints(t, qc);
        K0Poly g2(g.size() + e.size(), t->k0_zero());
        for (std::size_t a = 0; a < g.size(); ++a) g2[a] = t->k0_add(g2[a], g[a]);
        for (std::size_t a = 0; a < q.size(); ++a)
            for (std::size_t b = 0; b < e.size(); ++b)
                g2[a + b] = t->k0_add(g2[a + b], t->k0_mul(q[a], e[b]));
        SymbolValue ref = sen_symbol(ctx, alpha, beta, g);
        ok &= check(ref == sen_symbol(ctx, alpha, beta, g2), msg,
                    "lift perturbation, sample " + std::to_string(i));
        ok &= check(ref == sen_symbol(alt, alpha, beta, poly_lift_wrt(beta, alt.pi)),
                    msg, "alternative prime, sample " + std::to_string(i));
    }
    return ok;
}

bool oracle_concordance(const TowerPtr& t, int pairs, std::string& msg) {
    CyclotomicContext ctx = make_context(t);
    NormOracle oracle(t);
    std::mt19937_64 rng(0xacc5);
    std::vector<KElement> pool = {ctx.zeta, mul(ctx.zeta, ctx.zeta), neg(ctx.zeta)};
    for (int j = 0; j < 2; ++j)
        pool.push_back(random_element(t, SampleKind::Unit, rng));
    long expected_rank = t->degree() + 1;  // dim - 1
    bool ok = true;
    for (std::size_t j = 0; j < pool.size(); ++j) {
        KummerExtension ext = build_extension(t, pool[j]);
        if (!ext.degenerate)
            ok &= check(oracle.subgroup_for(pool[j], ext).rank() == expected_rank, msg,
                        "rank, pool element " + std::to_string(j));
    }
    for (int i = 0; i < pairs; ++i) {
        KElement alpha = sen_alpha(t, rng);
        const KElement& beta = pool[static_cast<std::size_t>(i) % pool.size()];
        bool trivial = hilbert_symbol(ctx, alpha, beta).c == 0;
        ok &= check(trivial == oracle.is_norm(alpha, beta), msg,
                    "concordance, sample " + std::to_string(i));
    }
    return ok;
}

bool kernel_inclusion(const TowerPtr& t, int samples, std::string& msg) {
    CyclotomicContext ctx = make_context(t);
    std::mt19937_64 rng(0xacc6);
    bool ok = true;
    for (int i = 0; i < samples; ++i) {
        KElement a = random_element(t, SampleKind::Unit, rng);
        ok &= check(kernel_check(ctx, a).c == 0, msg, "sample " + std::to_string(i));
    }
    return ok;
}

bool norm_diagram(std::string& msg) {
    CyclotomicContext ctx_K = make_context(k6());
    CyclotomicContext ctx_k = make_context(f0());
    SubfieldEmbedding emb = k6_embedding();
    KElement eta_k = f0()->from_int(3);
    std::mt19937_64 rng(0xacc7);
    bool ok = true;
    for (int i = 0; i < 50; ++i) {
        KElement a = random_element(k6(), SampleKind::Integral, rng);
        KElement b_k = random_element(f0(), SampleKind::Unit, rng);
        ok &= check(norm_diagram_check(ctx_K, ctx_k, emb, eta_k, a, b_k), msg,
                    "sample " + std::to_string(i));
    }
    return ok;
}

bool residue_diagram(std::string& msg) {
    TowerPtr t = f0();
    CyclotomicContext ctx = make_context(t);
    KElement eta = t->from_int(3);
    std::mt19937_64 rng(0xacc8);
    bool ok = true;
    for (int i = 0; i < 50; ++i) {
        KElement a = random_element(t, SampleKind::Integral, rng);
        KElement b = random_element(t, SampleKind::Unit, rng);
        ok &= check(residue_diagram_check(ctx, eta, a, b), msg,
                    "sample " + std::to_string(i));
        ok &= check(residue_diagram_check(ctx, eta, a, b, /*dT_first=*/true), msg,
                    "signed sample " + std::to_string(i));
    }
    return ok;
}

bool analytic_layer(std::string& msg) {
    bool ok = true;
    for (const TowerPtr& t : {f0(), k6(), q5()}) {
        std::mt19937_64 rng(0xacc9);
        long target = t->desc().work_prec;
        for (int i = 0; i < 100; ++i) {
            KElement x = sen_alpha(t, rng), y = sen_alpha(t, rng);
            KElement d1 = sub(pexp(plog(x)), x);
            ok &= check(is_zero(d1) || ord(d1) >= Rat(target), msg,
                        "round trip, sample " + std::to_string(i));
            KElement d2 = sub(plog(mul(x, y)), add(plog(x), plog(y)));
            ok &= check(is_zero(d2) || ord(d2) >= Rat(target), msg,
                        "homomorphism, sample " + std::to_string(i));
        }
        if (t->e() % (t->p() - 1) == 0) {
            bool rejected = false;
            try {
                pexp(pow_elem(t->pi(), t->e() / (t->p() - 1)));
            } catch (const domain_error&) {
                rejected = true;
            }
            ok &= check(rejected, msg, "boundary input accepted");
        }
    }
    return ok;
}

bool well_definedness(std::string& msg) {
    TowerPtr t = f0();
    CyclotomicContext ctx = make_context(t);
    KElement eta = t->from_int(3);
    std::mt19937_64 rng(0xacca);
    bool ok = true;
    for (int i = 0; i < 50; ++i) {
        KElement a = random_element(t, SampleKind::Integral, rng);
        KElement b1 = random_element(t, SampleKind::Unit, rng);
        KElement b2 = random_element(t, SampleKind::Unit, rng);
        FormExpression joined, split;
        joined.terms.emplace_back(a, mul(b1, b2));
        split.terms.emplace_back(a, b1);
        split.terms.emplace_back(a, b2);
        ok &= check(exp2_eval(ctx, eta, joined) == exp2_eval(ctx, eta, split), msg,
                    "sample " + std::to_string(i));
    }
    return ok;
}

bool p5_scale(std::string& msg) {
    return specializations(q5(), msg) && oracle_concordance(q5(), 30, msg) &&
           kernel_inclusion(q5(), 50, msg);
}

}  // namespace

int main() {
    std::vector<Criterion> criteria = {
        {1, "fixture values at N_w and N_w+10", fixture_values},
        {2, "specialization identities (100 samples)",
         [](std::string& m) { return specializations(f0(), m); }},
        {3, "bilinearity and inverse laws (100 triples, two towers)", bilinearity},
        {4, "lift- and prime-independence (50 pairs)", independence},
        {5, "oracle concordance (30 pairs, rank checks)",
         [](std::string& m) { return oracle_concordance(f0(), 30, m); }},
        {6, "kernel inclusion (50 + 25 samples)",
         [](std::string& m) {
             return kernel_inclusion(f0(), 50, m) && kernel_inclusion(k6(), 25, m);
         }},
        {7, "norm/trace diagram (50 samples)", norm_diagram},
        {8, "residue diagram with signs (50 samples)", residue_diagram},
        {9, "analytic round trips and boundary (100 per field)", analytic_layer},
        {10, "exp2 well-definedness (50 re-decompositions)", well_definedness},
        {11, "p = 5 scale rerun of 2, 5, 6", p5_scale},
    };

    bool all = true;
    for (auto& c : criteria) {
        auto t0 = std::chrono::steady_clock::now();
        std::string msg;
        bool ok = false;
        try {
            ok = c.run(msg);
        } catch (const std::exception& e) {
            msg = std::string("exception: ") + e.what();
        }
        auto dt = std::chrono::duration_cast<std::chrono::milliseconds>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
        std::cout << "criterion " << c.number << " (" << c.name << "): "
                  << (ok ? "PASS" : "FAIL") << " [" << dt / 1000.0 << " s]";
        if (!ok) std::cout << " -- " << msg;
        std::cout << "\n" << std::flush;
        all &= ok;
    }
    std::cout << (all ? "ACCEPTANCE: PASS" : "ACCEPTANCE: FAIL") << "\n";
    return all ? 0 : 1;
}
