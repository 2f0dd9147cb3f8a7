#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "rlab/expr.hpp"

using namespace rlab;
using namespace rlab_test;

TEST(Expr, Evaluation) {
    TowerPtr t = f0();
    EXPECT_TRUE(eq(eval_expr(*parse_expr("1+p"), t), t->from_int(4)));
    EXPECT_TRUE(eq(eval_expr(*parse_expr("zeta^2*pi"), t),
                   mul(mul(t->zeta(), t->zeta()), t->pi())));
    EXPECT_TRUE(eq(eval_expr(*parse_expr("(1+pi)^3"), t), pow_elem(t->zeta(), 3)));
    EXPECT_TRUE(eq(eval_expr(*parse_expr("pi^-2 * pi^2"), t), t->one()));
    EXPECT_TRUE(eq(eval_expr(*parse_expr("0-1"), t), t->from_int(-1)));
    EXPECT_TRUE(eq(eval_expr(*parse_expr("10/2"), t), t->from_int(5)));
}

TEST(Expr, SyntaxErrors) {
    try {
        parse_expr("1+*p");
        FAIL() << "expected parse_error";
    } catch (const parse_error& e) {
        EXPECT_EQ(e.column, 3u);
    }
    EXPECT_THROW(parse_expr("(1+p"), parse_error);
    EXPECT_THROW(parse_expr("1+p)"), parse_error);
    EXPECT_THROW(parse_expr("foo"), parse_error);
    EXPECT_THROW(parse_expr("2^pi"), parse_error);
    EXPECT_THROW(parse_expr(""), parse_error);
}

TEST(Expr, PrintReparseRoundTrip) {
    for (const char* src :
         {"1+p", "zeta^2*pi", "(1+pi)^3", "pi^-2", "1+2*3-4/5", "((zeta))", "p^0"}) {
        ExprPtr a = parse_expr(src);
        ExprPtr b = parse_expr(print_expr(*a));
        EXPECT_TRUE(expr_equal(*a, *b)) << src;
    }
}

TEST(Expr, PrecedenceShape) {
    // 1+2*3 = 7, (1+2)*3 = 9
    TowerPtr t = f0();
    EXPECT_TRUE(eq(eval_expr(*parse_expr("1+2*3"), t), t->from_int(7)));
    EXPECT_TRUE(eq(eval_expr(*parse_expr("(1+2)*3"), t), t->from_int(9)));
    // power binds tighter than *
    EXPECT_TRUE(eq(eval_expr(*parse_expr("2*2^2"), t), t->from_int(8)));
}
