#include "mars/core/errors.hpp"
#include "mars/core/expression.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using mars::Expression;

TEST(Expression, ArithmeticAndPrecedence) {
    EXPECT_DOUBLE_EQ(Expression::parse("1 + 2 * 3")(0), 7);
    EXPECT_DOUBLE_EQ(Expression::parse("(1 + 2) * 3")(0), 9);
    EXPECT_DOUBLE_EQ(Expression::parse("2 ^ 3 ^ 2")(0), 512);
    EXPECT_DOUBLE_EQ(Expression::parse("-2 ^ 2")(0), -4);
    EXPECT_DOUBLE_EQ(Expression::parse("x / 4 - 1")(8), 1);
    EXPECT_DOUBLE_EQ(Expression::parse("1e-3 * x")(2), 2e-3);
}

TEST(Expression, Functions) {
    const double x = 0.3;
    EXPECT_NEAR(Expression::parse("gauss(x, 0.5, 0.1)")(x),
                std::exp(-2.0) / (0.1 * std::sqrt(2 * std::numbers::pi)), 1e-14);
    EXPECT_DOUBLE_EQ(Expression::parse("uniform(x, 0, 0.5)")(x), 2);
    EXPECT_DOUBLE_EQ(Expression::parse("uniform(x, 0, 0.5)")(0.5), 0);
    EXPECT_DOUBLE_EQ(Expression::parse("box(x, 0.2, 0.4)")(x), 1);
    EXPECT_DOUBLE_EQ(Expression::parse("step(x, 0.3)")(x), 1);
    EXPECT_DOUBLE_EQ(Expression::parse("step(x, 0.31)")(x), 0);
    EXPECT_DOUBLE_EQ(Expression::parse("poly(x, 1, 2, 3)")(2), 17);
    EXPECT_DOUBLE_EQ(Expression::parse("min(x, 0.1) + max(x, 0.1)")(x), 0.4);
    EXPECT_DOUBLE_EQ(Expression::parse("cos(pi)")(0), -1);
    EXPECT_DOUBLE_EQ(Expression::parse("sqrt(abs(-4)) * exp(log(3))")(0), 6);
}

TEST(Expression, BreakpointsOnlyForConstantEdges) {
    auto b = Expression::parse("box(x, 0.25, 0.75) + step(x, 0.5) + box(2 * x, 0.1, 0.2)").breakpoints();
    std::sort(b.begin(), b.end());
    EXPECT_EQ(b, (std::vector<double>{0.25, 0.5, 0.75}));
}

TEST(Expression, MalformedInputIsSchemaError) {
    for (const char *bad : {"", "1 +", "foo(x)", "gauss(x, 1)", "(x", "x x", "2 $ 3"})
        EXPECT_THROW(Expression::parse(bad), mars::SchemaError) << bad;
}
