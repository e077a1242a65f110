#include "helpers.hpp"

#include "mars/core/errors.hpp"
#include "mars/core/estimator.hpp"
#include "mars/oracle/monte_carlo.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace mars;

namespace {

MisProblem twoEqualTechniques() {
    return test::parse(R"j({
        "domain": [0, 1], "subintegrands": ["1 + x"],
        "techniques": [{"name": "a", "density": {"type": "uniform"}, "cost": 1},
                       {"name": "b", "density": {"type": "uniform"}, "cost": 1}],
        "overhead_cost": 0, "overhead_variance": 0})j");
}

} // namespace

TEST(Weights, SymmetricTechniquesSplitEvenly) {
    const auto p = twoEqualTechniques();
    const auto w = balance_weights(p, 0.3, WeightMode::BudgetUnaware, {1, 1});
    EXPECT_DOUBLE_EQ(w(0, 0), 0.5);
    EXPECT_DOUBLE_EQ(w(0, 1), 0.5);
    const auto aware = balance_weights(p, 0.3, WeightMode::BudgetAware, {2, 1});
    EXPECT_NEAR(aware(0, 0), 2.0 / 3, 1e-15);
    EXPECT_NEAR(aware(0, 1), 1.0 / 3, 1e-15);
}

TEST(Weights, IndicatorForcesZero) {
    const auto p = test::corpus("disjoint");
    for (double x : {0.1, 0.5, 0.8}) {
        const auto w = balance_weights(p, x, WeightMode::BudgetAware, {0.4, 3});
        for (std::size_t i = 0; i < p.num_subintegrands(); ++i)
            for (std::size_t t = 0; t < p.num_techniques(); ++t)
                if (!p.estimates(i, t)) {
                    EXPECT_EQ(w(i, t), 0.0);
                }
    }
}

TEST(Weights, PartitionOfUnityOnCorpus) {
    std::mt19937_64 gen(3);
    for (const auto &name : test::corpus_names()) {
        const auto p = test::corpus(name);
        const BudgetVector beta = BudgetVector::filled(p.num_techniques(), 1.0);
        BudgetVector skew = beta;
        skew.set(0, 0.2);
        std::uniform_real_distribution<double> x(p.domain().lo, p.domain().hi);
        for (int k = 0; k < 1000; ++k) {
            const double at = x(gen);
            for (auto mode : {WeightMode::BudgetUnaware, WeightMode::BudgetAware}) {
                const auto w = balance_weights(p, at, mode, skew);
                for (std::size_t i = 0; i < p.num_subintegrands(); ++i) {
                    double sum = 0;
                    for (std::size_t t = 0; t < p.num_techniques(); ++t)
                        sum += w(i, t);
                    ASSERT_NEAR(sum, 1.0, 1e-12) << name << " x=" << at;
                }
            }
            // equal budgets: aware and unaware coincide
            const auto wa = balance_weights(p, at, WeightMode::BudgetAware, BudgetVector::filled(p.num_techniques(), 3.0));
            const auto wu = balance_weights(p, at, WeightMode::BudgetUnaware, beta);
            for (std::size_t k = 0; k < wa.data.size(); ++k)
                ASSERT_NEAR(wa.data[k], wu.data[k], 1e-15) << name;
        }
    }
}

TEST(Weights, NoAdmissibleDensityIsDomainError) {
    const auto p = test::parse(R"j({
        "domain": [0, 1], "subintegrands": ["box(x, 0, 0.5)", "box(x, 0.5, 1)"],
        "techniques": [{"name": "left", "density": {"type": "uniform", "lo": 0, "hi": 0.5}, "cost": 1},
                       {"name": "right", "density": {"type": "uniform", "lo": 0.5, "hi": 1}, "cost": 1}],
        "indicator": [[1, 0], [0, 1]],
        "overhead_cost": 0, "overhead_variance": 0})j");
    EXPECT_THROW(balance_weights(p, 0.75, WeightMode::BudgetUnaware, {1, 1}), DomainError);
}

TEST(PrimaryEstimate, Examples) {
    const auto perfect = test::parse(R"j({
        "domain": [0, 1], "subintegrands": ["gauss(x, 0.5, 0.2)"],
        "techniques": [{"name": "p", "density": {"type": "gaussian", "mean": 0.5, "sigma": 0.2}, "cost": 1}],
        "overhead_cost": 0, "overhead_variance": 0})j");
    const double mass = perfect.reference_integral();
    for (double x : {0.05, 0.5, 0.93}) {
        const auto w = balance_weights(perfect, x, WeightMode::BudgetUnaware, {1});
        EXPECT_NEAR(primary_estimate(perfect, 0, x, w), mass, 1e-12);
    }

    const auto constant = test::parse(R"j({
        "domain": [0, 1], "subintegrands": ["2"],
        "techniques": [{"name": "u", "density": {"type": "tabulated", "shape": "0.5 + 0 * x"}, "cost": 1}],
        "overhead_cost": 0, "overhead_variance": 0})j");
    WeightMatrix w{1, 1, {1.0}};
    EXPECT_DOUBLE_EQ(primary_estimate(constant, 0, 0.4, w), 2.0);
    WeightMatrix zero{1, 1, {0.0}};
    EXPECT_EQ(primary_estimate(constant, 0, 0.4, zero), 0.0);

    const auto half = test::parse(R"j({
        "domain": [0, 2], "subintegrands": ["2"],
        "techniques": [{"name": "u", "density": {"type": "uniform"}, "cost": 1}],
        "overhead_cost": 0, "overhead_variance": 0})j");
    EXPECT_DOUBLE_EQ(primary_estimate(half, 0, 1.0, w), 4.0);
}

TEST(PrimaryEstimate, ZeroDensityIsSamplingError) {
    const auto p = test::parse(R"j({
        "domain": [0, 1], "subintegrands": ["box(x, 0, 0.5)"],
        "techniques": [{"name": "a", "density": {"type": "uniform", "lo": 0, "hi": 0.5}, "cost": 1},
                       {"name": "b", "density": {"type": "uniform"}, "cost": 1}],
        "overhead_cost": 0, "overhead_variance": 0})j");
    const auto w = balance_weights(p, 0.75, WeightMode::BudgetUnaware, {1, 1});
    EXPECT_THROW(primary_estimate(p, 0, 0.75, w), SamplingError);
    EXPECT_NO_THROW(primary_estimate(p, 1, 0.75, w));
}

TEST(RunEstimator, ZeroVarianceAndConstantCases) {
    const auto perfect = test::parse(R"j({
        "domain": [0, 1], "subintegrands": ["gauss(x, 0.5, 0.2)"],
        "techniques": [{"name": "p", "density": {"type": "gaussian", "mean": 0.5, "sigma": 0.2}, "cost": 1}],
        "overhead_cost": 0, "overhead_variance": 0})j");
    const double mass = perfect.reference_integral();
    Rng rng(1);
    for (int i = 0; i < 100; ++i)
        EXPECT_NEAR(run_estimator(perfect, {1}, {}, rng), mass, 1e-12);

    const auto constant = test::parse(R"j({
        "domain": [1, 3], "subintegrands": ["0.75"],
        "techniques": [{"name": "u", "density": {"type": "uniform"}, "cost": 1}],
        "overhead_cost": 0, "overhead_variance": 0})j");
    for (int i = 0; i < 100; ++i)
        EXPECT_NEAR(run_estimator(constant, {2.0}, {}, rng), 1.5, 1e-15);
}

TEST(RunEstimator, SameSeedIsBitIdentical) {
    const auto p = test::corpus("fig2");
    Rng a(99, 4), b(99, 4);
    for (int i = 0; i < 1000; ++i)
        ASSERT_EQ(run_estimator(p, {0.7, 0.15}, {}, a), run_estimator(p, {0.7, 0.15}, {}, b));
    EstimatorRunner runner(p, {0.7, 0.15}, {});
    Rng c(99, 4), d(99, 4);
    for (int i = 0; i < 1000; ++i)
        ASSERT_EQ(runner(c), run_estimator(p, {0.7, 0.15}, {}, d));
}

TEST(RunEstimator, Fig2MeanWithinThreeStandardErrors) {
    const auto p = test::corpus("fig2");
    // independent high-precision quadrature of the integrand
    const double truth = 0.99999891999963921;
    const auto stats = estimate_many(p, {0.7, 0.15}, {}, 1000000, 2024, 0);
    EXPECT_LT(std::abs(stats.mean - truth), 3 * stats.standard_error());
}

TEST(BudgetVector, RejectsNonPositiveEntries) {
    EXPECT_THROW(BudgetVector({1.0, 0.0}), ContractViolation);
    EXPECT_THROW(BudgetVector({-1.0}), ContractViolation);
    BudgetVector b{1.0, 2.0};
    EXPECT_THROW(b.set(0, 0.0), ContractViolation);
    EXPECT_THROW(b.check_bounds(0.05, 1.5), ContractViolation);
    EXPECT_NO_THROW(b.check_bounds(0.05, 20));
}
