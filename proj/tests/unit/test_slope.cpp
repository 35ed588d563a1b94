#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "copolymer/slope.hpp"

using namespace copolymer;

TEST(SlopeConstants, Table)
{
    struct Row { double alpha, B, K; };
    for (const Row r : {Row{1.2, 1.00018048328, 0.833484}, Row{1.5, 1.08015781796, 0.720105},
                        Row{1.9, 1.40066611337, 0.737193}}) {
        const auto s = slope_constants(r.alpha);
        EXPECT_NEAR(s.B_alpha, r.B, 1e-9) << r.alpha;
        EXPECT_NEAR(s.K_c_star, r.K, 1e-6) << r.alpha;
        EXPECT_LT(s.quadrature_error, 1e-9);
        EXPECT_LT(std::abs(s.root_residual), 1e-9);
    }
}

TEST(SlopeConstants, FiniteMeanRegime)
{
    EXPECT_DOUBLE_EQ(kc_star(2.0), 0.75);
    EXPECT_DOUBLE_EQ(kc_star(3.0), 2.0 / 3.0);
    EXPECT_TRUE(std::isnan(slope_constants(2.5).B_alpha));
}

TEST(SlopeConstants, IntegralChangesSign)
{
    const double B = slope_constants(1.5).B_alpha;
    EXPECT_GT(integral_I(B - 0.01, 1.5).value, 0.0);
    EXPECT_LT(integral_I(B + 0.01, 1.5).value, 0.0);
}

TEST(Expansion, ThreeHalvesRemainder)
{
    const std::vector<double> ys = {1e-4, 1e-3, 1e-2, 0.05};
    for (double alpha : {1.5, 3.0}) {
        const double B = 0.9;
        const double K = expansion_constant(ys, B, alpha);
        EXPECT_TRUE(std::isfinite(K));
        for (double y : ys) EXPECT_LE(std::abs(expansion_residual(y, B, alpha)), K * std::pow(y, 1.5) * (1 + 1e-12));
        EXPECT_LT(std::abs(expansion_residual(1e-6, B, alpha)), 10.0 * K * 1e-9);
    }
}

TEST(WeakCoupling, FiniteMeanLimit)
{
    const auto law = ExcursionLaw::power_law(3.0);
    const double B = 1.8;  // below 1 the series diverges
    const double limit = weak_coupling_limit(law, B, 3.0);
    EXPECT_GT(limit, 0.0);
    const double beta = 0.02;
    EXPECT_NEAR(weak_coupling_excess(law, beta, B, 3.0) / (beta * beta), limit, 0.05 * limit);
}

TEST(WeakCoupling, SignFlipsAtB)
{
    const auto law = ExcursionLaw::power_law(1.5);
    const double B = slope_constants(1.5).B_alpha;
    EXPECT_GT(weak_coupling_excess(law, 0.05, B - 0.1, 1.5), 0.0);
    EXPECT_LT(weak_coupling_excess(law, 0.05, B + 0.1, 1.5), 0.0);
}

TEST(TailCondition, Regimes)
{
    EXPECT_TRUE(tail_condition(ExcursionLaw::power_law(3.0)).vanishing);
    EXPECT_FALSE(tail_condition(ExcursionLaw::power_law(1.5)).vanishing);
}
