#ifndef COPOLYMER_PATHS_HPP
#define COPOLYMER_PATHS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "copolymer/annealed.hpp"
#include "copolymer/excursions.hpp"
#include "copolymer/numeric.hpp"
#include "copolymer/parallel.hpp"
#include "copolymer/partition.hpp"
#include "copolymer/random.hpp"

namespace copolymer {

/// Excursion decomposition of one path. signs[i] = +1 above, -1 below the
/// interface for the stretch (return_points[i], return_points[i+1]]; a free
/// final stretch adds one sign without a closing return.
struct PathSample
{
    std::vector<long> return_points;  // 0 = k_0 < ... < k_T <= n
    std::vector<int> signs;
    long n = 0;
    long M_n = 0;  // returns in 1..n
    bool free_end = false;

    /// Signed stretch lengths, + above and - below.
    std::vector<long> signature() const
    {
        std::vector<long> out;
        for (std::size_t i = 0; i < signs.size(); ++i) {
            const long end = i + 1 < return_points.size() ? return_points[i + 1] : n;
            out.push_back(signs[i] * (end - return_points[i]));
        }
        return out;
    }
};

namespace detail {

// Draws (k, side) for the excursion ending at j from the split weights
// 1/2 Z_k rho(j-k) (above) and 1/2 Z_k rho(j-k) e^{u_j - u_k} (below); they sum to Z_j.
inline std::pair<long, int> draw_previous(const LogDpTable& t, const ExcursionLaw& law, long j, Rng& rng)
{
    const long p = t.period;
    const long lowest = std::max(0L, j - t.max_excursion);
    const double target = uniform01(rng);
    double acc = 0.0;
    std::pair<long, int> fallback{-1, 1};
    for (long k = j - p; k >= lowest; k -= p) {
        if (t.logZ[k] == kNegInf) continue;
        const double base = t.logZ[k] + law.log_prob(j - k) + kLogHalf - t.logZ[j];
        if (base == kNegInf) continue;
        const double above = std::exp(base);
        const double below = std::exp(base + t.potential[j] - t.potential[k]);
        if (acc + above > target) return {k, +1};
        acc += above;
        if (acc + below > target) return {k, -1};
        acc += below;
        fallback = {k, below > above ? -1 : +1};
    }
    // Rounding left target just above the accumulated mass.
    if (fallback.first < 0) throw std::runtime_error("sample_path: no admissible predecessor");
    return fallback;
}

inline std::pair<long, int> draw_final_stretch(const LogDpTable& t, const ExcursionLaw& law, double log_free,
                                               Rng& rng)
{
    const long n = t.n();
    const double target = uniform01(rng);
    double acc = 0.0;
    std::pair<long, int> fallback{-1, 1};
    for (long k = n; k >= 0; --k) {
        if (t.logZ[k] == kNegInf) continue;
        const double tail = law.tail(n - k);
        if (tail <= 0.0) continue;
        const double base = t.logZ[k] + std::log(tail) + kLogHalf - log_free;
        const double above = std::exp(base);
        const double below = std::exp(base + t.potential[n] - t.potential[k]);
        if (acc + above > target) return {k, +1};
        acc += above;
        if (acc + below > target) return {k, -1};
        acc += below;
        fallback = {k, below > above ? -1 : +1};
    }
    if (fallback.first < 0) throw std::runtime_error("sample_path: empty free-end sum");
    return fallback;
}

}  // namespace detail

/// Exact backward sample of the excursion decomposition under the path measure
/// encoded by `table` (constrained at n, or free endpoint).
inline PathSample sample_path(const LogDpTable& table, const ExcursionLaw& law, Rng& rng, bool free_end)
{
    const long n = table.n();
    PathSample path;
    path.n = n;
    path.free_end = free_end;
    std::vector<long> points;
    std::vector<int> signs;
    long j = n;
    if (free_end) {
        const double log_free = detail::free_end_sum(table.logZ, table.potential, law, n);
        const auto [k, side] = detail::draw_final_stretch(table, law, log_free, rng);
        if (k < n) signs.push_back(side);
        j = k;
    } else if (table.logZ[n] == kNegInf) {
        throw std::domain_error("sample_path: constrained sum vanishes at n");
    }
    while (j > 0) {
        points.push_back(j);
        const auto [k, side] = detail::draw_previous(table, law, j, rng);
        signs.push_back(side);
        j = k;
    }
    points.push_back(0);
    std::reverse(points.begin(), points.end());
    std::reverse(signs.begin(), signs.end());
    path.M_n = static_cast<long>(points.size()) - 1;
    path.return_points = std::move(points);
    path.signs = std::move(signs);
    return path;
}

/// Exact law of signed decompositions of a constrained path of length n
/// (feasible only for small n). Keys are PathSample::signature().
inline std::map<std::vector<long>, double> enumerate_decompositions(const LogDpTable& table, const ExcursionLaw& law)
{
    const long n = table.n();
    if (n > 40) throw std::invalid_argument("enumerate_decompositions: n too large");
    if (table.logZ[n] == kNegInf) throw std::domain_error("enumerate_decompositions: empty support");
    std::map<std::vector<long>, double> out;
    std::vector<long> current;
    auto recurse = [&](auto& self, long start, double logw) -> void {
        if (start == n) {
            out[current] += std::exp(logw - table.logZ[n]);
            return;
        }
        for (long m = table.period; start + m <= n && m <= table.max_excursion; m += table.period) {
            const double lr = law.log_prob(m);
            if (lr == kNegInf) continue;
            const long end = start + m;
            const double du = table.potential[end] - table.potential[start];
            for (int side : {+1, -1}) {
                current.push_back(side * m);
                self(self, end, logw + lr + kLogHalf + (side < 0 ? du : 0.0));
                current.pop_back();
            }
        }
    };
    recurse(recurse, 0, 0.0);
    return out;
}

/// Total variation between enumerated probabilities and sampled frequencies.
inline double total_variation(const std::map<std::vector<long>, double>& exact,
                              const std::map<std::vector<long>, long>& counts, long samples)
{
    double tv = 0.0;
    for (const auto& [key, p] : exact) {
        const auto it = counts.find(key);
        const double q = it == counts.end() ? 0.0 : static_cast<double>(it->second) / samples;
        tv += std::abs(p - q);
    }
    for (const auto& [key, c] : counts)
        if (!exact.count(key)) tv += static_cast<double>(c) / samples;
    return 0.5 * tv;
}

enum class Regime { Delocalized, Localized, NearCritical };

inline std::string to_string(Regime r)
{
    switch (r) {
    case Regime::Delocalized: return "delocalized";
    case Regime::Localized: return "localized";
    case Regime::NearCritical: return "near-critical";
    }
    return "unknown";
}

struct ReturnSample
{
    long replica = 0;
    long path = 0;
    long M_n = 0;
};

struct ReturnCounts
{
    std::vector<ReturnSample> samples;
    FreeEnergyEstimate free_energy;  // from the same tables
    double mean_fraction = 0.0;      // mean M_n / n, replica-level stderr below
    double fraction_stderr = 0.0;
};

/// Free-endpoint paths for each replica; one DP table per replica.
inline ReturnCounts return_counts(const ModelParams& params, const DisorderModel& model, const ExcursionLaw& law,
                                  long n, long replicas, long paths_per_replica, std::uint64_t seed,
                                  unsigned threads = 1)
{
    if (replicas < 1 || paths_per_replica < 1) throw std::invalid_argument("return_counts: empty sample");
    struct PerReplica
    {
        double fe = 0.0;
        std::vector<long> counts;
    };
    const auto rows = parallel_map<PerReplica>(static_cast<std::size_t>(replicas), threads, [&](std::size_t r) {
        const auto omega = replica_disorder(model, n, seed, static_cast<long>(r));
        const auto table = constrained_logZ(params, omega, law, n);
        PerReplica out;
        out.fe = free_logZ(table, law) / static_cast<double>(n);
        Rng rng(stream_seed(seed, r, 0x7061746873ULL));
        for (long i = 0; i < paths_per_replica; ++i) out.counts.push_back(sample_path(table, law, rng, true).M_n);
        return out;
    });
    ReturnCounts rc;
    std::vector<double> fe, frac;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        fe.push_back(rows[r].fe);
        double s = 0.0;
        for (std::size_t i = 0; i < rows[r].counts.size(); ++i) {
            rc.samples.push_back({static_cast<long>(r), static_cast<long>(i), rows[r].counts[i]});
            s += static_cast<double>(rows[r].counts[i]);
        }
        frac.push_back(s / static_cast<double>(rows[r].counts.size()) / static_cast<double>(n));
    }
    rc.free_energy.n = n;
    rc.free_energy.replicas = replicas;
    rc.free_energy.per_replica = fe;
    std::tie(rc.free_energy.value, rc.free_energy.stderr) = mean_stderr(fe);
    std::tie(rc.mean_fraction, rc.fraction_stderr) = mean_stderr(frac);
    return rc;
}

struct DerivativeEstimate
{
    double central = 0.0;   // dS/dg, step delta
    double stderr = 0.0;
    double left = 0.0;
    double right = 0.0;
    double richardson = 0.0;  // (4 D(delta/2) - D(delta)) / 3
    double delta = 0.0;
    double C = 0.0;           // -1 / central
    double C_stderr = 0.0;
};

/// Finite differences of the replica-mean F_N slope around g0, common random numbers.
inline DerivativeEstimate slope_derivative(const ModelParams& params, const DisorderModel& model,
                                           const ExcursionLaw& law, double g0, double rel_step,
                                           const GeneratingOptions& gopt, long replicas, std::uint64_t seed,
                                           unsigned threads = 1)
{
    if (!(g0 > 0.0)) throw std::domain_error("slope_derivative: g must be > 0");
    const double d = rel_step * g0;
    auto at = [&](double g) {
        ModelParams p = params;
        p.g = g;
        return quenched_slope(p, model, law, gopt, replicas, seed, threads);
    };
    const auto minus = at(g0 - d), plus = at(g0 + d), mid = at(g0);
    const auto minus2 = at(g0 - 0.5 * d), plus2 = at(g0 + 0.5 * d);
    DerivativeEstimate out;
    out.delta = d;
    std::vector<double> per(minus.per_replica.size());
    for (std::size_t r = 0; r < per.size(); ++r) per[r] = (plus.per_replica[r] - minus.per_replica[r]) / (2.0 * d);
    std::tie(out.central, out.stderr) = mean_stderr(per);
    out.left = (mid.value - minus.value) / d;
    out.right = (plus.value - mid.value) / d;
    const double half = (plus2.value - minus2.value) / d;
    out.richardson = (4.0 * half - out.central) / 3.0;
    out.C = -1.0 / out.central;
    out.C_stderr = out.stderr / (out.central * out.central);
    return out;
}

struct PhaseDiagnostic
{
    Regime regime = Regime::NearCritical;
    double g_hat = 0.0;
    double g_stderr = 0.0;
    double Mn_over_n = 0.0;
    double Mn_over_n_stderr = 0.0;
    DerivativeEstimate derivative;     // localized only
    double median_over_log_n = 0.0;    // M_n / log n quantiles
    double q95_over_log_n = 0.0;
    double log_bound_c = 0.0;          // 10 alpha / |S^ann(beta, h; 0)|
    double log_bound_exceed = 0.0;     // fraction with M_n > c log n
    std::vector<ReturnSample> samples;
};

struct PhaseOptions
{
    long n = 100000;
    long replicas = 16;
    long paths_per_replica = 20;
    std::uint64_t seed = 1;
    unsigned threads = 1;
    double rel_step = 0.02;
    GeneratingOptions generating;
    long slope_replicas = 16;
};

/// M_n diagnostics. Localized iff g_hat > 10 stderr; delocalized iff g_hat is within
/// 3 stderr of zero or below, otherwise near-critical.
inline PhaseDiagnostic return_count_statistics(const ModelParams& params, const DisorderModel& model,
                                               const ExcursionLaw& law, const PhaseOptions& opt)
{
    if (opt.n < 1000) throw std::invalid_argument("return_count_statistics: n must be >= 1000");
    PhaseDiagnostic out;
    auto rc = return_counts(params, model, law, opt.n, opt.replicas, opt.paths_per_replica, opt.seed, opt.threads);
    out.g_hat = rc.free_energy.value;
    out.g_stderr = rc.free_energy.stderr;
    out.Mn_over_n = rc.mean_fraction;
    out.Mn_over_n_stderr = rc.fraction_stderr;
    if (out.g_hat > 10.0 * out.g_stderr && out.g_hat > 0.0) {
        out.regime = Regime::Localized;
    } else if (out.g_hat <= 3.0 * out.g_stderr) {
        out.regime = Regime::Delocalized;
    }
    std::vector<double> scaled;
    const double log_n = std::log(static_cast<double>(opt.n));
    for (const auto& s : rc.samples) scaled.push_back(static_cast<double>(s.M_n) / log_n);
    std::sort(scaled.begin(), scaled.end());
    auto quantile = [&](double q) {
        const std::size_t i = std::min(scaled.size() - 1, static_cast<std::size_t>(q * (scaled.size() - 1) + 0.5));
        return scaled[i];
    };
    out.median_over_log_n = quantile(0.5);
    out.q95_over_log_n = quantile(0.95);
    // S^que(beta, h; 0) <= S^ann(beta, h; 0) < 0 above the annealed curve, so
    // alpha / |S^ann| is a valid (larger) choice of the constant c.
    const double s_ann = annealed_S(params.beta, params.h, 0.0, law, model);
    if (s_ann < 0.0) {
        out.log_bound_c = 10.0 * law.alpha() / std::abs(s_ann);
        long exceed = 0;
        for (double v : scaled)
            if (v > out.log_bound_c) ++exceed;
        out.log_bound_exceed = static_cast<double>(exceed) / static_cast<double>(scaled.size());
    }
    if (out.regime == Regime::Localized)
        out.derivative = slope_derivative(params, model, law, out.g_hat, opt.rel_step, opt.generating,
                                          opt.slope_replicas, opt.seed, opt.threads);
    out.samples = std::move(rc.samples);
    return out;
}

}  // namespace copolymer

#endif  // COPOLYMER_PATHS_HPP
