#include <gtest/gtest.h>

#include <cmath>

#include "copolymer/excursions.hpp"
#include "copolymer/numeric.hpp"

using namespace copolymer;

TEST(SrwLaw, FirstReturnProbabilities)
{
    const auto law = ExcursionLaw::simple_random_walk();
    EXPECT_NEAR(law.prob(2), 0.5, 1e-15);
    EXPECT_NEAR(law.prob(4), 0.125, 1e-15);
    EXPECT_EQ(law.prob(3), 0.0);
    EXPECT_EQ(law.period(), 2);
    EXPECT_DOUBLE_EQ(law.alpha(), 1.5);
}

TEST(SrwLaw, Asymptotics)
{
    const auto law = ExcursionLaw::simple_random_walk();
    const double m = 1000.0;
    EXPECT_NEAR(law.prob(2000) * 2.0 * std::sqrt(M_PI) * std::pow(m, 1.5), 1.0, 0.02);
}

TEST(SrwLaw, TotalMassAndTail)
{
    const auto law = ExcursionLaw::simple_random_walk(20000);
    double s = 0.0;
    for (long m = 1; m <= law.m_max(); ++m) s += law.prob(m);
    EXPECT_NEAR(s + law.tail_mass(), 1.0, 1e-12);
    EXPECT_NEAR(law.tail(0), 1.0, 1e-12);
}

TEST(PowerLaw, RatioAndNormalization)
{
    const auto two = ExcursionLaw::power_law(2.0);
    EXPECT_NEAR(two.prob(1) / two.prob(2), 4.0, 1e-12);
    const auto law = ExcursionLaw::power_law(1.5, 1000000);
    double s = 0.0;
    for (long m = 1; m <= law.m_max(); ++m) s += law.prob(m);
    EXPECT_NEAR(s + law.tail_mass(), 1.0, 1e-12);
    EXPECT_THROW(ExcursionLaw::power_law(1.0), std::invalid_argument);
}

TEST(PowerLaw, TailExponent)
{
    for (const auto& law : {ExcursionLaw::power_law(1.5), ExcursionLaw::power_law(3.0),
                            ExcursionLaw::simple_random_walk()}) {
        const long a = law.m_max() / 10 / law.period() * law.period(), b = law.m_max();
        const double slope = (law.log_prob(b) - law.log_prob(a)) / (std::log(b) - std::log(a));
        EXPECT_NEAR(slope / -law.alpha(), 1.0, 0.05);
    }
}

TEST(PowerLaw, MeanLength)
{
    EXPECT_NEAR(ExcursionLaw::power_law(3.0).mean_length(), 1.36843277762020588, 1e-9);
    EXPECT_EQ(ExcursionLaw::power_law(1.5).mean_length(), kPosInf);
    EXPECT_EQ(ExcursionLaw::power_law(2.0).mean_length(), kPosInf);
}

TEST(PowerLaw, Period)
{
    const auto law = ExcursionLaw::power_law(2.5, 1000, 3);
    EXPECT_EQ(law.prob(4), 0.0);
    EXPECT_GT(law.prob(6), 0.0);
    const auto t = law.tilt(0.3);
    for (long m = 1; m <= 30; ++m)
        if (m % 3 != 0) {
            EXPECT_EQ(t.probabilities[m], 0.0);
        }
}

TEST(Tilt, ZeroIsIdentity)
{
    const auto law = ExcursionLaw::power_law(1.5);
    const auto t = law.tilt(0.0);
    EXPECT_NEAR(t.log_normalizer, 0.0, 1e-12);
    EXPECT_NEAR(t.probabilities[7], law.prob(7), 1e-15);
}

TEST(Tilt, LargeGConcentrates)
{
    EXPECT_GT(ExcursionLaw::simple_random_walk().tilt(50.0).probabilities[2], 1.0 - 1e-12);
    EXPECT_GT(ExcursionLaw::power_law(3.0).tilt(50.0).probabilities[1], 1.0 - 1e-12);
}

TEST(Tilt, SrwGeneratingFunction)
{
    const auto law = ExcursionLaw::simple_random_walk();
    const double closed = 1.0 - std::sqrt(1.0 - std::exp(-0.2));
    EXPECT_NEAR(std::exp(law.log_normalizer(0.1)), closed, 1e-12);
    EXPECT_NEAR(closed, 0.574242737088352008, 1e-15);
}

TEST(Tilt, NormalizerDecreasingAndLogConvex)
{
    const auto law = ExcursionLaw::power_law(1.5);
    double prev = law.log_normalizer(0.0);
    for (double g = 0.05; g <= 2.0; g += 0.05) {
        const double cur = law.log_normalizer(g);
        EXPECT_LT(cur, prev);
        prev = cur;
        EXPECT_LE(law.log_normalizer(g), 0.5 * (law.log_normalizer(g - 0.05) + law.log_normalizer(g + 0.05)) + 1e-14);
    }
    EXPECT_THROW(law.log_normalizer(-0.1), std::domain_error);
}

TEST(Tilt, TruncationBound)
{
    const auto law = ExcursionLaw::power_law(1.5, 1000);
    const double g = 0.01;
    const auto t = law.tilt(g);
    EXPECT_LE(t.truncation_bound, std::exp(-g * 1000) / (1.0 - std::exp(-g)));
    double s = 0.0;
    for (double p : t.probabilities) s += p;
    EXPECT_NEAR(s + t.truncation_bound, 1.0, 1e-12);
}

TEST(PowerSum, DivergenceAndValue)
{
    const auto law = ExcursionLaw::power_law(1.5);
    EXPECT_EQ(law.power_sum(1.0 / 1.5, 0.0), kPosInf);
    // rho(m) = m^-1.5 / zeta(1.5): sum rho^0.8 = zeta(1.2) / zeta(1.5)^0.8.
    EXPECT_NEAR(law.power_sum(0.8, 0.0), riemann_zeta(1.2) / std::pow(riemann_zeta(1.5), 0.8), 1e-8);
}

TEST(Custom, JsonRoundTrip)
{
    const auto law = ExcursionLaw::custom({0.0, 0.5, 0.0, 0.25, 0.0, 0.25}, 2.0, 2);
    const auto back = ExcursionLaw::from_json(law.to_json());
    for (long m = 1; m <= 6; ++m) EXPECT_DOUBLE_EQ(back.prob(m), law.prob(m));
    EXPECT_EQ(back.period(), 2);
}
