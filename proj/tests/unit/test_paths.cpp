#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <numeric>

#include "copolymer/paths.hpp"

using namespace copolymer;

TEST(Enumeration, FourStepsSrw)
{
    const auto law = ExcursionLaw::simple_random_walk();
    const std::vector<double> omega = {1.0, -1.0, -1.0, -1.0};
    const auto t = constrained_logZ({0.9, 0.2, 0.0}, omega, law, 4);
    const auto exact = enumerate_decompositions(t, law);
    EXPECT_EQ(exact.size(), 6u);  // {+4, -4} and four sign pairs on 2+2
    double total = 0.0;
    for (const auto& [k, p] : exact) total += p;
    EXPECT_NEAR(total, 1.0, 1e-13);
    // Above and below a single excursion weigh 1 : e^{-2 beta S_4}.
    const double S4 = -2.0 + 0.8;
    EXPECT_NEAR(exact.at({-4}) / exact.at({4}), std::exp(-2.0 * 0.9 * S4), 1e-12);
}

TEST(Sampler, ConstrainedMatchesEnumeration)
{
    const auto law = ExcursionLaw::power_law(1.5);
    const auto omega = DisorderModel::binary().sample(8, 4);
    const auto t = constrained_logZ({1.0, 0.3, 0.0}, omega, law, 8);
    const auto exact = enumerate_decompositions(t, law);
    Rng rng(17);
    std::map<std::vector<long>, long> counts;
    const long samples = 200000;
    for (long i = 0; i < samples; ++i) ++counts[sample_path(t, law, rng, false).signature()];
    // Expected TV for a multinomial is about sqrt(K / (2 pi N)).
    const double scale = std::sqrt(static_cast<double>(exact.size()) / (2.0 * 3.14159265 * samples));
    EXPECT_LT(total_variation(exact, counts, samples), 3.0 * scale);
}

TEST(Sampler, PathStructure)
{
    const auto law = ExcursionLaw::simple_random_walk();
    const long n = 500;
    const auto omega = DisorderModel::gaussian().sample(n, 9);
    const auto t = constrained_logZ({1.0, 0.2, 0.0}, omega, law, n);
    Rng rng(3);
    for (bool free_end : {false, true}) {
        for (int i = 0; i < 50; ++i) {
            const auto p = sample_path(t, law, rng, free_end);
            const auto sig = p.signature();
            long total = 0;
            for (long s : sig) total += std::abs(s);
            EXPECT_EQ(total, n);
            EXPECT_EQ(p.return_points.front(), 0);
            EXPECT_EQ(p.M_n, static_cast<long>(p.return_points.size()) - 1);
            for (long k : p.return_points) EXPECT_EQ(k % 2, 0);
            if (!free_end) {
                EXPECT_EQ(p.return_points.back(), n);
            }
        }
    }
}

TEST(Sampler, RejectsEmptyConstrainedTable)
{
    const auto law = ExcursionLaw::simple_random_walk();
    const auto t = constrained_logZ({1.0, 0.0, 0.0}, std::vector<double>(5, 1.0), law, 5);
    Rng rng(1);
    EXPECT_THROW(sample_path(t, law, rng, false), std::domain_error);
    EXPECT_NO_THROW(sample_path(t, law, rng, true));
}

TEST(TotalVariation, Basics)
{
    const std::map<std::vector<long>, double> exact = {{{2}, 0.5}, {{-2}, 0.5}};
    EXPECT_NEAR(total_variation(exact, {{{2}, 5}, {{-2}, 5}}, 10), 0.0, 1e-15);
    EXPECT_NEAR(total_variation(exact, {{{2}, 10}}, 10), 0.5, 1e-15);
    EXPECT_NEAR(total_variation(exact, {{{1, 1}, 10}}, 10), 1.0, 1e-15);
}

TEST(ReturnCounts, ThreadInvariantAndScaled)
{
    const auto law = ExcursionLaw::simple_random_walk();
    const auto model = DisorderModel::binary();
    const auto a = return_counts({1.0, 0.0, 0.0}, model, law, 4000, 4, 5, 11, 1);
    const auto b = return_counts({1.0, 0.0, 0.0}, model, law, 4000, 4, 5, 11, 2);
    ASSERT_EQ(a.samples.size(), 20u);
    for (std::size_t i = 0; i < a.samples.size(); ++i) EXPECT_EQ(a.samples[i].M_n, b.samples[i].M_n);
    EXPECT_GT(a.mean_fraction, 0.1);
    EXPECT_LT(a.mean_fraction, 0.5);
    const auto far = return_counts({1.0, 1.3, 0.0}, model, law, 4000, 4, 5, 11, 1);
    EXPECT_LT(far.mean_fraction, 0.01);
}

TEST(PhaseDiagnostic, RegimesAtExtremes)
{
    const auto law = ExcursionLaw::simple_random_walk();
    const auto model = DisorderModel::binary();
    PhaseOptions opt;
    opt.n = 5000;
    opt.replicas = 4;
    opt.paths_per_replica = 5;
    opt.slope_replicas = 4;
    opt.generating.n_max = 100;
    const auto loc = return_count_statistics({1.0, 0.0, 0.0}, model, law, opt);
    EXPECT_EQ(loc.regime, Regime::Localized);
    EXPECT_EQ(to_string(loc.regime), "localized");
    const auto del = return_count_statistics({1.0, 1.325, 0.0}, model, law, opt);
    EXPECT_EQ(del.regime, Regime::Delocalized);
    EXPECT_GT(del.log_bound_c, 0.0);
    EXPECT_THROW(return_count_statistics({1.0, 0.0, 0.0}, model, law, [] {
        PhaseOptions o;
        o.n = 10;
        return o;
    }()), std::invalid_argument);
}
