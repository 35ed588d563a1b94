#include <gtest/gtest.h>

#include <cmath>
#include <functional>

#include "copolymer/annealed.hpp"
#include "copolymer/partition.hpp"

using namespace copolymer;

namespace {

double log_psi(double beta, double sum) { return std::log(0.5 * (1.0 + std::exp(-2.0 * beta * sum))); }

// Sum over all excursion decompositions of [0, n], by recursion on the first return.
double enumerate_Z(double beta, double h, const std::vector<double>& omega, const ExcursionLaw& law, long n)
{
    std::function<double(long)> from = [&](long a) -> double {
        if (a == n) return 1.0;
        double total = 0.0, s = 0.0;
        for (long b = a + 1; b <= n; ++b) {
            s += omega[b - 1] + h;
            if (law.prob(b - a) > 0.0) total += law.prob(b - a) * std::exp(log_psi(beta, s)) * from(b);
        }
        return total;
    };
    return from(0);
}

}  // namespace

TEST(ExcursionWeight, Examples)
{
    const std::vector<double> omega = {1.0, -1.0, -1.0, -1.0};
    const auto s0 = prefix_sums(omega, 0.0, 4);
    EXPECT_EQ(excursion_weight(s0, 0, 4, 0.0), 0.0);
    EXPECT_NEAR(excursion_weight(s0, 0, 2, 1.0), 0.0, 1e-15);  // sum over (0,2] is 0
    EXPECT_NEAR(excursion_weight(s0, 1, 4, 1.0), std::log(0.5 * (1.0 + std::exp(6.0))), 1e-12);
    EXPECT_NEAR(excursion_weight(s0, 1, 4, 1.0), 5.30933, 1e-5);
    EXPECT_THROW(excursion_weight(s0, 2, 2, 1.0), std::out_of_range);
}

TEST(ExcursionWeight, StableForLargeArguments)
{
    const std::vector<double> s = {0.0, -1000.0, 1000.0};
    EXPECT_NEAR(excursion_weight(s, 0, 1, 1.0), 2000.0 + std::log(0.5), 1e-9);
    EXPECT_NEAR(excursion_weight(s, 1, 2, 1.0), std::log(0.5), 1e-15);
}

TEST(ConstrainedLogZ, SingleExcursion)
{
    const auto law = ExcursionLaw::simple_random_walk();
    const std::vector<double> omega = {-1.0, -1.0};
    const auto t = constrained_logZ({0.7, 0.1, 0.0}, omega, law, 2);
    EXPECT_EQ(t.logZ[0], 0.0);
    EXPECT_EQ(t.logZ[1], kNegInf);
    EXPECT_NEAR(t.logZ[2], std::log(0.5) + log_psi(0.7, -1.8), 1e-13);
}

TEST(ConstrainedLogZ, FourStepsSrw)
{
    const auto law = ExcursionLaw::simple_random_walk();
    const std::vector<double> omega = {1.0, -1.0, -1.0, -1.0};
    const double beta = 0.9, h = 0.2;
    const auto t = constrained_logZ({beta, h, 0.0}, omega, law, 4);
    const double one = std::log(0.125) + log_psi(beta, -2.0 + 4 * h);
    const double two = 2.0 * std::log(0.5) + log_psi(beta, 2 * h) + log_psi(beta, -2.0 + 2 * h);
    EXPECT_NEAR(t.logZ[4], log_add_exp(one, two), 1e-13);
}

TEST(ConstrainedLogZ, BetaZeroIsRenewalMass)
{
    const auto law = ExcursionLaw::power_law(1.5);
    const long n = 30;
    const auto omega = DisorderModel::gaussian().sample(n, 3);
    const auto t = constrained_logZ({0.0, 0.5, 0.0}, omega, law, n);
    std::vector<double> u(n + 1, 0.0);
    u[0] = 1.0;
    for (long j = 1; j <= n; ++j)
        for (long m = 1; m <= j; ++m) u[j] += u[j - m] * law.prob(m);
    for (long j = 1; j <= n; ++j) EXPECT_NEAR(t.logZ[j], std::log(u[j]), 1e-12);
}

TEST(ConstrainedLogZ, BruteForce)
{
    for (int i = 0; i < 50; ++i) {
        Rng rng(stream_seed(99, i));
        const long n = 6 + i % 9;  // up to 14
        const double beta = 2.0 * uniform01(rng), h = uniform01(rng);
        const auto law = i % 3 == 0 ? ExcursionLaw::simple_random_walk(n) : ExcursionLaw::power_law(1.2 + 0.1 * (i % 7), n);
        const auto omega = DisorderModel::binary().sample(n, rng());
        const auto t = constrained_logZ({beta, h, 0.0}, omega, law, n);
        const double z = enumerate_Z(beta, h, omega, law, n);
        if (z == 0.0) {
            EXPECT_EQ(t.logZ[n], kNegInf);
        } else {
            EXPECT_NEAR(t.logZ[n], std::log(z), 1e-9) << "case " << i;
        }
    }
}

TEST(FreeLogZ, ThreeStepsSrw)
{
    const auto law = ExcursionLaw::simple_random_walk();
    const std::vector<double> omega = {0.3, -1.2, 0.4};
    const double beta = 0.8, h = 0.1;
    const auto t = constrained_logZ({beta, h, 0.0}, omega, law, 3);
    const double S2 = 0.3 - 1.2 + 2 * h, S3 = S2 + 0.4 + h;
    const double expect = std::log(0.5 * law.tail(3) * (1.0 + std::exp(-2.0 * beta * S3)) +
                                   std::exp(t.logZ[2]) * 0.5 * law.tail(1) * (1.0 + std::exp(-2.0 * beta * (S3 - S2))));
    EXPECT_NEAR(free_logZ(t, law), expect, 1e-13);
}

TEST(FreeLogZ, BetaZeroIsZero)
{
    const auto law = ExcursionLaw::simple_random_walk();
    const auto omega = DisorderModel::binary().sample(500, 1);
    EXPECT_NEAR(free_logZ({0.0, 0.3, 0.0}, omega, law, 500), 0.0, 1e-12);
}

TEST(FreeLogZ, EndOnSupportKeepsConstrainedTerm)
{
    const auto law = ExcursionLaw::simple_random_walk();
    const auto omega = DisorderModel::binary().sample(40, 2);
    const auto t = constrained_logZ({1.0, 0.0, 0.0}, omega, law, 40);
    EXPECT_GE(free_logZ(t, law), t.logZ[40]);
}

TEST(QuenchedFreeEnergy, BetaZeroExact)
{
    QuenchedOptions q;
    q.n = 2000;
    q.replicas = 3;
    const auto e = quenched_free_energy({0.0, 0.4, 0.0}, DisorderModel::binary(), ExcursionLaw::simple_random_walk(), q);
    for (double v : e.per_replica) EXPECT_NEAR(v, 0.0, 1e-13);
}

TEST(QuenchedFreeEnergy, DeepDelocalizedIsZero)
{
    QuenchedOptions q;
    q.n = 20000;
    q.replicas = 8;
    const auto model = DisorderModel::binary();
    const auto e = quenched_free_energy({1.0, 2.0 * annealed_critical_h(1.0, model), 0.0}, model,
                                        ExcursionLaw::simple_random_walk(), q);
    EXPECT_LE(e.value, 3.0 * e.stderr + 1e-3);  // boundary cost is O(log n / n)
    EXPECT_LE(std::abs(e.value), 1e-3);
}

TEST(QuenchedFreeEnergy, InsideAnnealedAtHZero)
{
    QuenchedOptions q;
    q.n = 20000;
    q.replicas = 8;
    const auto e = quenched_free_energy({1.0, 0.0, 0.0}, DisorderModel::binary(), ExcursionLaw::simple_random_walk(), q);
    EXPECT_GT(e.value, 5.0 * e.stderr);
    EXPECT_GT(std::log(std::cosh(2.0)) - e.value, 5.0 * e.stderr);
}

TEST(QuenchedFreeEnergy, JensenPerSeed)
{
    const auto law = ExcursionLaw::simple_random_walk();
    const auto model = DisorderModel::gaussian();
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        QuenchedOptions q;
        q.n = 3000;
        q.replicas = 4;
        q.seed = seed;
        const auto e = quenched_free_energy({0.8, 0.2, 0.0}, model, law, q);
        EXPECT_LE(e.value, annealed_free_logZ({0.8, 0.2, 0.0}, model, law, q.n) / q.n);
    }
}

TEST(QuenchedFreeEnergy, IndependentOfThreads)
{
    QuenchedOptions q;
    q.n = 3000;
    q.replicas = 6;
    const auto a = quenched_free_energy({1.0, 0.2, 0.0}, DisorderModel::binary(), ExcursionLaw::simple_random_walk(), q);
    q.threads = 3;
    const auto b = quenched_free_energy({1.0, 0.2, 0.0}, DisorderModel::binary(), ExcursionLaw::simple_random_walk(), q);
    EXPECT_EQ(a.per_replica, b.per_replica);
    EXPECT_EQ(a.value, b.value);
}

TEST(AnnealedLogZ, Limits)
{
    const auto law = ExcursionLaw::simple_random_walk();
    const auto model = DisorderModel::binary();
    const std::vector<double> zeros(1000, 0.0);
    EXPECT_NEAR(annealed_logZ({0.0, 0.3, 0.0}, model, law, 1000),
                constrained_logZ({0.0, 0.0, 0.0}, zeros, law, 1000).logZ[1000], 1e-12);
    const long n = 20000;
    EXPECT_NEAR(annealed_logZ({1.0, 0.0, 0.0}, model, law, n) / n, std::log(std::cosh(2.0)), 2e-3);
    EXPECT_NEAR(annealed_logZ({1.0, 1.0, 0.0}, model, law, n) / n, 0.0, 2e-3);
}

TEST(GeneratingFunction, SingleExcursion)
{
    const auto law = ExcursionLaw::simple_random_walk();
    const ModelParams p{1.0, 0.3, 0.5};
    const auto omega = DisorderModel::binary().sample(4096, 7);
    GeneratingOptions opt;
    opt.n_max = 2;
    const auto gf = excursion_generating_function(p, law, opt, [](long len) {
        return DisorderModel::binary().sample(static_cast<std::size_t>(len), 7);
    });
    double direct = 0.0, s = 0.0;
    for (long k = 1; k <= 4000; ++k) {
        s += omega[k - 1] + p.h;
        if (law.prob(k) > 0.0) direct += std::exp(-p.g * k) * law.prob(k) * std::exp(log_psi(p.beta, s));
    }
    EXPECT_NEAR(gf.logF[0], std::log(direct), 1e-10);
}

TEST(GeneratingFunction, BetaZero)
{
    const auto law = ExcursionLaw::power_law(1.5);
    const ModelParams p{0.0, 0.3, 0.2};
    GeneratingOptions opt;
    opt.n_max = 50;
    const auto gf = excursion_generating_function(p, law, opt, [](long len) {
        return DisorderModel::binary().sample(static_cast<std::size_t>(len), 1);
    });
    for (std::size_t N = 1; N <= gf.logF.size(); ++N)
        EXPECT_NEAR(gf.logF[N - 1], static_cast<double>(N) * law.log_normalizer(p.g), 1e-9 * N);
    EXPECT_NEAR(generating_slope(gf), law.log_normalizer(p.g), 1e-9);
    EXPECT_LT(generating_slope(gf), 0.0);
}

TEST(GeneratingFunction, RejectsNonPositiveG)
{
    GeneratingOptions opt;
    auto dis = [](long len) { return std::vector<double>(static_cast<std::size_t>(len), 0.0); };
    EXPECT_THROW(excursion_generating_function({1.0, 0.0, 0.0}, ExcursionLaw::simple_random_walk(), opt, dis),
                 std::domain_error);
    EXPECT_THROW(excursion_generating_function({1.0, 0.0, -0.1}, ExcursionLaw::simple_random_walk(), opt, dis),
                 std::exception);
}

TEST(GeneratingFunction, LowerBoundAndMonotoneSlope)
{
    const auto law = ExcursionLaw::simple_random_walk();
    const auto model = DisorderModel::binary();
    GeneratingOptions opt;
    opt.n_max = 100;
    double prev = kPosInf;
    for (double g : {0.1, 0.2, 0.3, 0.4}) {
        const auto s = quenched_slope({1.0, 0.3, g}, model, law, opt, 4, 11, 1);
        EXPECT_LE(s.value, prev + 3.0 * s.stderr);
        prev = s.value;
        const auto gf = excursion_generating_function({1.0, 0.3, g}, law, opt, [&](long len) {
            return replica_disorder(model, static_cast<std::size_t>(len), 11, 0);
        });
        for (std::size_t N = 1; N <= gf.logF.size(); ++N)
            EXPECT_GE(gf.logF[N - 1], N * (std::log(0.5) + law.log_normalizer(g)) - 1e-9 * N);
    }
}

TEST(CriticalPoint, ValidatesBracket)
{
    QuenchedOptions q;
    q.n = 2000;
    q.replicas = 4;
    const auto model = DisorderModel::binary();
    const auto law = ExcursionLaw::simple_random_walk();
    EXPECT_THROW(critical_point(1.0, model, law, q, 1.2, 1.3, 0.01), std::runtime_error);
    EXPECT_THROW(critical_point(1.0, model, law, q, 0.5, 0.4, 0.01), std::invalid_argument);
}
