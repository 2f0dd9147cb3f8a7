#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "rlab/analytic.hpp"

using namespace rlab;
using namespace rlab_test;

// Oracle for the frozen values below: partial sums of the defining series,
// keeping only terms of ord < 3, reduced mod 27.
// log(4) = 3 - 9/2 + 27/3 - ...: terms mod 27 are 3, 9 (since -9/2 = -9*14),
// and 27/3 = 9; every later term has ord >= 3.  Total: 21 mod 27.
// exp(9) = 1 + 9 + 81/2 + ...: the k = 2 term already has ord 4.  Total: 10.

TEST(PLog, FrozenValueLog4) {
    TowerPtr t = f0();
    KElement l = plog(t->from_int(4));
    // compare mod 3^3
    PadicScalar got = l.coords()[0].reduced(3);
    EXPECT_EQ(got.lift(), 21);
    for (std::size_t i = 1; i < l.coords().size(); ++i)
        EXPECT_TRUE(l.coords()[i].reduced(3).is_zero());
}

TEST(PLog, LogOfOneIsZero) {
    EXPECT_TRUE(is_zero(plog(f0()->one())));
}

TEST(PLog, RejectsNonPrincipalUnit) {
    EXPECT_THROW(plog(f0()->pi()), domain_error);
    EXPECT_THROW(plog(f0()->from_int(2)), domain_error);
}

TEST(PLog, Homomorphism) {
    TowerPtr t = f0();
    std::mt19937_64 rng(21);
    for (int i = 0; i < 40; ++i) {
        KElement x = random_element(t, SampleKind::PrincipalUnit, rng, Rat(1, 2));
        KElement y = random_element(t, SampleKind::PrincipalUnit, rng, Rat(1, 2));
        KElement lhs = plog(mul(x, y));
        KElement rhs = add(plog(x), plog(y));
        // exact mod the certified target precision
        long target = t->desc().work_prec;
        KElement diff = sub(lhs, rhs);
        EXPECT_TRUE(is_zero(diff) || ord(diff) >= Rat(target)) << "sample " << i;
    }
}

TEST(PExp, FrozenValueExp9) {
    TowerPtr t = f0();
    KElement e = pexp(t->from_int(9));
    EXPECT_EQ(e.coords()[0].reduced(3).lift(), 10);
}

TEST(PExp, ExpOfZeroIsOne) {
    EXPECT_TRUE(eq(pexp(f0()->zero()), f0()->one()));
}

TEST(PExp, RejectsBoundaryValuation) {
    // ord(pi) = 1/2 = 1/(p-1), not strictly greater
    try {
        pexp(f0()->pi());
        FAIL() << "expected domain_error";
    } catch (const domain_error& e) {
        EXPECT_NE(std::string(e.what()).find("1/2"), std::string::npos);
    }
}

TEST(PExp, RoundTripsWithPLog) {
    for (const TowerPtr& t : {f0(), k6()}) {
        std::mt19937_64 rng(22);
        long target = t->desc().work_prec;
        for (int i = 0; i < 100; ++i) {
            // common domain ord > 1/(p-1): use ord >= 2/(p-1)
            KElement x = sen_alpha(t, rng);
            KElement back = pexp(plog(x));
            KElement diff = sub(back, x);
            EXPECT_TRUE(is_zero(diff) || ord(diff) >= Rat(target));

            KElement y = mul(t->from_int(t->p()), random_element(t, SampleKind::Integral, rng));
            if (is_zero(y)) continue;
            KElement back2 = plog(pexp(y));
            KElement diff2 = sub(back2, y);
            EXPECT_TRUE(is_zero(diff2) || ord(diff2) >= Rat(target));
        }
    }
}

TEST(PExp, TailBoundsAreCertified) {
    // recomputing with term_count + 10 never changes a digit below the target
    TowerPtr t = f0();
    std::mt19937_64 rng(23);
    for (int i = 0; i < 10; ++i) {
        KElement x = mul(t->from_int(3), random_element(t, SampleKind::Unit, rng));
        SeriesBudget budget;
        KElement a = pexp(x, -1, &budget);
        // re-sum with extra terms
        KElement sum = t->one(), term = t->one();
        for (long k = 1; k <= budget.term_count + 10; ++k) {
            term = div_int(mul(term, x), k);
            sum = add(sum, term);
        }
        KElement diff = sub(a, sum);
        EXPECT_TRUE(is_zero(diff) || ord(diff) >= budget.tail_bound);

        KElement u = add(t->one(), x);
        SeriesBudget lb;
        KElement l = plog(u, -1, &lb);
        KElement tt = sub(u, t->one());
        KElement lsum = t->zero(), pw = t->one();
        for (long k = 1; k <= lb.term_count + 10; ++k) {
            pw = mul(pw, tt);
            KElement trm = div_int(pw, k);
            lsum = add(lsum, k % 2 == 0 ? neg(trm) : trm);
        }
        KElement ldiff = sub(l, lsum);
        EXPECT_TRUE(is_zero(ldiff) || ord(ldiff) >= lb.tail_bound);
    }
}

TEST(ExpEta, DelegatesAndGuards) {
    TowerPtr t = f0();
    KElement eta = t->from_int(3);
    EXPECT_TRUE(eq(exp_eta(eta, t->one()), pexp(t->from_int(3))));
    // theorem guard: ord(pi) = 1/2 < 2/(p-1) = 1
    EXPECT_THROW(exp_eta(t->pi(), t->one(), /*theorem_guard=*/true), domain_error);
    // without the guard, ord(pi) = 1/2 still fails the strict exp bound
    EXPECT_THROW(exp_eta(t->pi(), t->one(), /*theorem_guard=*/false), domain_error);
}

TEST(ExpEta, HomomorphismProperty) {
    TowerPtr t = f0();
    KElement eta = t->from_int(3);
    std::mt19937_64 rng(24);
    long target = t->desc().work_prec;
    for (int i = 0; i < 40; ++i) {
        KElement a = random_element(t, SampleKind::Integral, rng);
        KElement b = random_element(t, SampleKind::Integral, rng);
        KElement lhs = exp_eta(eta, add(a, b));
        KElement rhs = mul(exp_eta(eta, a), exp_eta(eta, b));
        KElement diff = sub(lhs, rhs);
        EXPECT_TRUE(is_zero(diff) || ord(diff) >= Rat(target));
    }
}
