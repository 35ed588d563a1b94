#include <gtest/gtest.h>

#include <cmath>

#include "copolymer/annealed.hpp"
#include "copolymer/bounds.hpp"

using namespace copolymer;

TEST(FractionalMoment, Example)
{
    const auto law = ExcursionLaw::power_law(1.5);
    EXPECT_NEAR(fractional_moment_bound(1.0, 0.8, 0.0, law), 1.36460480665371, 1e-9);
}

TEST(FractionalMoment, TIsOneGivesLogN)
{
    const auto law = ExcursionLaw::simple_random_walk();
    for (double g : {0.0, 0.1, 0.5}) EXPECT_NEAR(fractional_moment_bound(1.0, 1.0, g, law), law.log_normalizer(g), 1e-12);
}

TEST(FractionalMoment, DivergesForSmallT)
{
    const auto law = ExcursionLaw::power_law(1.5);
    EXPECT_EQ(fractional_moment_bound(1.0, 0.6, 0.0, law), kPosInf);
    EXPECT_LT(fractional_moment_bound(1.0, 0.6, 0.2, law), kPosInf);
    EXPECT_THROW(fractional_moment_bound(1.0, 0.0, 0.0, law), std::domain_error);
    EXPECT_THROW(fractional_moment_bound(1.0, 1.5, 0.0, law), std::domain_error);
}

TEST(FractionalMoment, DecreasingInG)
{
    const auto law = ExcursionLaw::power_law(1.3);
    double prev = kPosInf;
    for (double g = 0.0; g <= 1.0; g += 0.1) {
        const double v = fractional_moment_bound(1.0, 0.9, g, law);
        EXPECT_LT(v, prev);
        prev = v;
    }
}

TEST(TiltedStrategy, BinaryRateAtZero)
{
    const auto r = tilted_strategy_rate(1.0, 0.0, DisorderModel::binary(), 1.5);
    EXPECT_NEAR(r.rate, 1.06104289322479902, 1e-13);
    EXPECT_NEAR(r.identity_residual, 0.0, 1e-12);
    EXPECT_GT(r.entropy_to_tilted, 0.0);
    EXPECT_GT(r.entropy_to_base, 0.0);
}

TEST(TiltedStrategy, VanishesAtTiltedAnnealedPoint)
{
    for (const auto& model : {DisorderModel::binary(), DisorderModel::gaussian()}) {
        for (double alpha : {1.2, 1.5, 3.0}) {
            const double h = annealed_critical_h(1.0 / alpha, model);
            const auto r = tilted_strategy_rate(1.0, h, model, alpha);
            EXPECT_EQ(r.rate, 0.0);
            EXPECT_NEAR(r.identity_residual, 0.0, 1e-9);
        }
    }
    EXPECT_THROW(tilted_strategy_rate(1.0, 0.0, DisorderModel::binary(), 1.0), std::domain_error);
}

TEST(TiltRelativeEntropy, GaussianClosedForm)
{
    // nu_l = N(-l, 1): h(nu_a | nu_b) = (a - b)^2 / 2.
    const auto model = DisorderModel::gaussian();
    EXPECT_NEAR(tilt_relative_entropy(model, 0.5, 2.0), 1.125, 1e-10);
    EXPECT_NEAR(tilt_relative_entropy(model, 1.0, 0.0), 0.5, 1e-10);
    EXPECT_EQ(tilt_relative_entropy(DisorderModel::binary(), 0.7, 0.7), 0.0);
}

TEST(FAlphaBound, InfiniteBelowTiltedPointThenDecreasing)
{
    const auto law = ExcursionLaw::simple_random_walk();
    for (const auto& model : {DisorderModel::binary(), DisorderModel::gaussian()}) {
        const double lo = annealed_critical_h(1.0 / 1.5, model), hi = annealed_critical_h(1.0, model);
        EXPECT_EQ(falpha_lower_functional(1.0, lo - 0.01, model, law, 1.5).bound, kPosInf);
        double prev = kPosInf;
        for (double h : {lo + 1e-3, lo + 0.02, 0.5 * (lo + hi), hi}) {
            const auto f = falpha_lower_functional(1.0, h, model, law, 1.5);
            EXPECT_LT(f.bound, prev);
            EXPECT_NEAR(f.bound, 1.5 * std::log(f.N_hat), 1e-12);
            prev = f.bound;
        }
        EXPECT_GT(falpha_lower_functional(1.0, lo + 1e-3, model, law, 1.5).bound, 0.0);
    }
}

TEST(FAlphaBound, NonPositiveAtAnnealedCriticalPoint)
{
    const auto law = ExcursionLaw::simple_random_walk();
    const auto model = DisorderModel::binary();
    EXPECT_LE(falpha_lower_functional(1.0, annealed_critical_h(1.0, model), model, law, 1.5).bound, 1e-12);
    EXPECT_THROW(falpha_lower_functional(1.0, 0.0, DisorderModel::discrete({-1.0, 2.0}, {2.0 / 3, 1.0 / 3}), law, 1.5),
                 std::invalid_argument);
}

TEST(FAlphaBound, CurveBetweenTiltedAndAnnealed)
{
    const auto law = ExcursionLaw::simple_random_walk();
    const auto model = DisorderModel::binary();
    const double lo = annealed_critical_h(1.0 / 1.5, model), hi = annealed_critical_h(1.0, model);
    const double h = falpha_curve_point(1.0, model, law, 1.5, lo, hi, 1e-2);
    EXPECT_GT(h, lo);
    EXPECT_LT(h, hi);
}

TEST(EntropyGap, BoundedByReference)
{
    const auto law = ExcursionLaw::simple_random_walk();
    const auto gap = entropy_reduction_gap(1.0, DisorderModel::binary(), law, 8, 20, 3);
    EXPECT_GT(gap.at_reference, 0.0);
    EXPECT_LE(gap.best, gap.at_reference + 1e-12);
    EXPECT_GT(gap.best, 0.0);
    EXPECT_LE(gap.best, gap.worst_restart + 1e-12);
}
