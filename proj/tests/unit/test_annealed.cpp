#include <gtest/gtest.h>

#include <cmath>

#include "copolymer/annealed.hpp"
#include "copolymer/partition.hpp"

using namespace copolymer;

TEST(AnnealedClosedForm, BinaryExamples)
{
    const auto model = DisorderModel::binary();
    EXPECT_NEAR(annealed_excess_free_energy(1.0, 0.0, model), 1.32500274735786443, 1e-14);
    EXPECT_NEAR(annealed_critical_h(1.0, model), 0.662501373678932215, 1e-14);
    EXPECT_NEAR(annealed_critical_h(2.0 / 3.0, model), 0.530521446612399510, 1e-14);
    EXPECT_EQ(annealed_critical_h(0.0, model), 0.0);
    EXPECT_EQ(annealed_excess_free_energy(1.0, 1.0, model), 0.0);
}

TEST(AnnealedClosedForm, GaussianCurveIsLinear)
{
    const auto model = DisorderModel::gaussian();
    for (double b : {0.1, 0.5, 1.0, 2.0}) EXPECT_NEAR(annealed_critical_h(b, model), b, 1e-13);
    EXPECT_NEAR(annealed_excess_free_energy(1.0, 0.25, model), 1.5, 1e-13);
}

TEST(AnnealedClosedForm, CriticalCurveIncreasing)
{
    const auto model = DisorderModel::binary();
    double prev = 0.0;
    for (double b = 0.1; b <= 3.0; b += 0.1) {
        const double h = annealed_critical_h(b, model);
        EXPECT_GT(h, prev);
        EXPECT_LT(h, 1.0);
        prev = h;
    }
}

TEST(AnnealedClosedForm, MatchesDynamicProgramme)
{
    const auto model = DisorderModel::binary();
    const auto law = ExcursionLaw::simple_random_walk();
    const long n = 20000;
    for (double h : {0.0, 0.2, 0.4}) {
        const double dp = annealed_logZ({1.0, h, 0.0}, model, law, n) / n;
        EXPECT_NEAR(dp, annealed_excess_free_energy(1.0, h, model), 1e-3) << h;
    }
}

TEST(AnnealedS, CurlyN)
{
    const auto model = DisorderModel::binary();
    const auto law = ExcursionLaw::simple_random_walk();
    const double hc = annealed_critical_h(1.0, model);
    EXPECT_NEAR(annealed_curly_N(1.0, hc, 0.1, law, model), 0.574242737088352008, 1e-12);
    EXPECT_EQ(annealed_curly_N(1.0, 0.0, 0.5, law, model), kPosInf);
    EXPECT_EQ(annealed_S(1.0, 0.0, 1.0, law, model), kPosInf);
    EXPECT_NEAR(annealed_S(1.0, hc, 0.0, law, model), 0.0, 1e-12);
}

TEST(AnnealedS, RootMatchesExcessFreeEnergy)
{
    const auto model = DisorderModel::binary();
    for (const auto& law : {ExcursionLaw::simple_random_walk(), ExcursionLaw::power_law(1.5)}) {
        for (double h : {0.0, 0.3, 0.6}) {
            const double f = annealed_excess_free_energy(1.0, h, model);
            EXPECT_NEAR(annealed_S_root(1.0, h, law, model), f, 1e-10) << h;
        }
        EXPECT_EQ(annealed_S_root(1.0, 0.9, law, model), 0.0);
    }
}

TEST(WordSpace, EnumeratesWords)
{
    const auto law = ExcursionLaw::simple_random_walk();
    const auto space = WordSpace::enumerate(DisorderModel::binary(), law, 4);
    EXPECT_EQ(space->size(), 4u + 16u);
    const auto ref = reference_law(space, false);
    EXPECT_NEAR(ref.total(), law.prob(2) + law.prob(4), 1e-15);
    EXPECT_THROW(WordSpace::enumerate(DisorderModel::gaussian(), law, 4), std::invalid_argument);
}

TEST(Variational, GibbsIsMaximiser)
{
    const auto model = DisorderModel::binary();
    const auto law = ExcursionLaw::power_law(1.5);
    const auto space = WordSpace::enumerate(model, law, 8);
    const auto ref = reference_law(space, false);
    const double beta = 0.8, h = 0.3, g = 0.6;
    const auto q = gibbs_maximizer(ref, beta, h, g);
    const double top = truncated_log_normalizer(ref, beta, h, g);
    EXPECT_NEAR(q.total(), 1.0, 1e-12);
    EXPECT_NEAR(variational_functional(q, ref, beta, h, g), top, 1e-12);
    EXPECT_NEAR(top, truncated_log_normalizer(law, model, beta, h, g, 8), 1e-12);
    for (std::uint64_t s = 1; s <= 20; ++s) {
        const auto r = random_word_law(ref, s, s % 2 ? 1.0 : 0.3);
        EXPECT_LT(variational_functional(r, ref, beta, h, g), top);
    }
    const auto climbed = maximize_functional(random_word_law(ref, 5), ref, beta, h, g, 1.0, 1);
    EXPECT_NEAR(variational_functional(climbed, ref, beta, h, g), top, 1e-12);
}

TEST(Variational, NotAbsolutelyContinuous)
{
    const auto law = ExcursionLaw::simple_random_walk();
    const auto space = WordSpace::enumerate(DisorderModel::binary(), law, 4);
    auto ref = reference_law(space, false);
    auto q = random_word_law(ref, 2);
    ref.probs[0] = 0.0;
    q.probs[0] = 1.0;
    q.normalize();
    EXPECT_EQ(variational_functional(q, ref, 1.0, 0.0, 0.1), kNegInf);
}

TEST(Variational, TiltingIdentity)
{
    const auto space = WordSpace::enumerate(DisorderModel::binary(), ExcursionLaw::power_law(1.5), 6);
    const auto law = ExcursionLaw::power_law(1.5);
    const auto ref = reference_law(space, false);
    for (double g : {0.05, 0.3, 1.0})
        for (std::uint64_t s = 1; s <= 5; ++s)
            EXPECT_NEAR(tilting_identity_residual(random_word_law(ref, s), law, g), 0.0, 1e-12);
}
