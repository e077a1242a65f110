#include "helpers.hpp"
#include "oracles/oracles.hpp"

#include "mars/core/errors.hpp"
#include "mars/efficiency/gradient.hpp"

#include <gtest/gtest.h>

using namespace mars;

namespace {

double oracleComponent(const MisProblem &p, const BudgetVector &beta, std::size_t t, bool aware, int side) {
    auto g = [&](double x) {
        std::vector<double> b = beta.vector();
        b[t] = x;
        return oracle::simplified_inverse_efficiency(p, b, aware);
    };
    if (side == 0)
        return oracle::richardson(g, beta[t], 1e-3 * beta[t]);
    return oracle::one_sided(g, beta[t], 1e-3 * beta[t], side);
}

} // namespace

TEST(TrueGradient, UnawareEqualsProxy) {
    const auto p = test::corpus("bimodal");
    for (const BudgetVector &beta : {BudgetVector{0.3, 0.6}, BudgetVector{4.0, 0.2}, BudgetVector{1.7, 2.9}}) {
        const auto fd = true_gradient_fd(p, beta, WeightMode::BudgetUnaware, VarianceModel::Simplified);
        const auto proxy = proxy_gradient_at(p, beta, WeightMode::BudgetUnaware);
        for (std::size_t t = 0; t < 2; ++t)
            EXPECT_NEAR(fd[t], proxy[t], 1e-5 * std::abs(proxy[t])) << t;
    }
}

TEST(TrueGradient, SymmetricProblemHasEqualComponents) {
    const auto p = test::corpus("symmetric");
    for (auto mode : {WeightMode::BudgetUnaware, WeightMode::BudgetAware}) {
        const auto g = true_gradient_fd(p, {0.6, 0.6}, mode, VarianceModel::Simplified);
        EXPECT_NEAR(g[0], g[1], 1e-6 * std::abs(g[0]));
    }
}

TEST(TrueGradient, AwareMatchesRichardsonOracle) {
    const auto p = test::corpus("fig2");
    const BudgetVector beta{0.7, 0.15};
    const auto fd = true_gradient_fd(p, beta, WeightMode::BudgetAware, VarianceModel::Simplified);
    for (std::size_t t = 0; t < 2; ++t) {
        const double ref = oracleComponent(p, beta, t, true, 0);
        EXPECT_NEAR(fd[t], ref, 1e-5 * std::abs(ref)) << t;
    }
}

TEST(TrueGradient, RefusesToStraddleTheKink) {
    const auto p = test::corpus("fig2");
    EXPECT_THROW(true_gradient_fd(p, {1.0, 0.5}, WeightMode::BudgetAware, VarianceModel::Simplified),
                 ContractViolation);
    EXPECT_THROW(true_gradient_fd(p, {0.5, 1.0 + 1e-7}, WeightMode::BudgetAware, VarianceModel::Simplified),
                 ContractViolation);
}

TEST(OneSidedGradient, Fig2AtUnitBudgetsMatchesOracleOnBothSides) {
    const auto p = test::corpus("fig2");
    const BudgetVector beta{1, 1};
    const auto g = one_sided_gradient(p, beta, WeightMode::BudgetAware, VarianceModel::Simplified);
    for (std::size_t t = 0; t < 2; ++t) {
        const double left = oracleComponent(p, beta, t, true, -1);
        const double right = oracleComponent(p, beta, t, true, +1);
        EXPECT_NEAR(g.left[t], left, 1e-5 * std::abs(left)) << t;
        EXPECT_NEAR(g.right[t], right, 1e-5 * std::abs(right)) << t;
    }
    // the kink is real: the two branch derivatives differ
    EXPECT_GT(std::abs(g.left[0] - g.right[0]), 1e-3 * std::abs(g.left[0]));
}

TEST(OneSidedGradient, KinkEntriesAreBranchLimits) {
    // at β_t = 1 the map uses the left derivative, which is the limit of the
    // central difference approaching from below
    const auto p = test::corpus("perfect");
    const auto at = one_sided_gradient(p, {1.0, 0.4}, WeightMode::BudgetAware, VarianceModel::Simplified);
    const auto below = true_gradient_fd(p, {1.0 - 1e-4, 0.4}, WeightMode::BudgetAware, VarianceModel::Simplified);
    const auto above = true_gradient_fd(p, {1.0 + 1e-4, 0.4}, WeightMode::BudgetAware, VarianceModel::Simplified);
    EXPECT_NEAR(at.left[0], below[0], 1e-3 * std::abs(below[0]));
    EXPECT_NEAR(at.right[0], above[0], 1e-3 * std::abs(above[0]));
}

TEST(NormalizedDot, EdgeCases) {
    EXPECT_DOUBLE_EQ(normalized_dot({1, 0}, {2, 0}), 1);
    EXPECT_DOUBLE_EQ(normalized_dot({1, 0}, {-3, 0}), -1);
    EXPECT_DOUBLE_EQ(normalized_dot({1, 0}, {0, 5}), 0);
    EXPECT_DOUBLE_EQ(normalized_dot({0, 0}, {0, 0}), 1);
    EXPECT_DOUBLE_EQ(normalized_dot({0, 0}, {1, 0}), 0);
}

TEST(GradientMap, UnawareIsIdenticallyOne) {
    const auto p = test::corpus("fig2");
    const auto map = gradient_agreement_map(p, WeightMode::BudgetUnaware, {.lo = 0.05, .hi = 20, .resolution = 9});
    ASSERT_EQ(map.dot.size(), 81u);
    for (double d : map.dot)
        EXPECT_NEAR(d, 1.0, 1e-6);
}

TEST(GradientMap, AwareIsMajorityPositiveOnFig2) {
    const auto p = test::corpus("fig2");
    const auto map = gradient_agreement_map(p, WeightMode::BudgetAware, {.lo = 0.05, .hi = 20, .resolution = 12});
    EXPECT_GT(map.positive_fraction(), 0.5);
    for (double d : map.dot) {
        EXPECT_GE(d, -1 - 1e-12);
        EXPECT_LE(d, 1 + 1e-12);
    }
}
