#ifndef COPOLYMER_PARTITION_HPP
#define COPOLYMER_PARTITION_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "copolymer/disorder.hpp"
#include "copolymer/excursions.hpp"
#include "copolymer/numeric.hpp"
#include "copolymer/parallel.hpp"
#include "copolymer/random.hpp"

namespace copolymer {

struct ModelParams
{
    double beta = 0.0;
    double h = 0.0;
    double g = 0.0;

    void validate() const
    {
        if (!std::isfinite(beta) || !std::isfinite(h) || !std::isfinite(g))
            throw std::invalid_argument("model params must be finite");
        if (beta < 0.0) throw std::invalid_argument("beta must be >= 0");
        if (h < 0.0) throw std::invalid_argument("h must be >= 0");
    }
};

/// S_j = sum_{k <= j} (w_k + h), S_0 = 0.
inline std::vector<double> prefix_sums(std::span<const double> omega, double h, long n)
{
    if (static_cast<long>(omega.size()) < n) throw std::invalid_argument("disorder sequence shorter than n");
    std::vector<double> s(n + 1, 0.0);
    for (long j = 1; j <= n; ++j) s[j] = s[j - 1] + omega[j - 1] + h;
    return s;
}

/// log psi for an excursion over (a, b]: log(1/2 (1 + e^{-2 beta (S_b - S_a)})).
inline double excursion_weight(std::span<const double> prefix, long a, long b, double beta)
{
    if (a < 0 || b <= a || b >= static_cast<long>(prefix.size()))
        throw std::out_of_range("excursion_weight: need 0 <= a < b <= n");
    return kLogHalf + log1p_exp(-2.0 * beta * (prefix[b] - prefix[a]));
}

/// Constrained partition sums on 0..n.
///
/// Excursion weights are psi((a, b]) = 1/2 (1 + exp(u_b - u_a)) for a potential u;
/// the quenched model has u_j = -2 beta S_j, the annealed one u_j = j [M(2 beta) - 2 beta h].
struct LogDpTable
{
    std::vector<double> logZ;          // -inf off the support lattice
    std::vector<double> prefix_sums;   // empty for the annealed table
    std::vector<double> potential;
    long period = 1;
    long max_excursion = 0;            // longest interior excursion allowed

    long n() const { return static_cast<long>(logZ.size()) - 1; }

    double log_weight(long a, long b) const
    {
        return kLogHalf + log1p_exp(potential[b] - potential[a]);
    }
};

namespace detail {

// Monotone deque tracking the max of a sliding window of log values.
class WindowMax
{
public:
    void push(long index, double value)
    {
        if (value == kNegInf) return;
        while (!items_.empty() && items_.back().second <= value) items_.pop_back();
        items_.emplace_back(index, value);
    }
    void expire_before(long first)
    {
        while (!items_.empty() && items_.front().first < first) items_.pop_front();
    }
    double max() const { return items_.empty() ? kNegInf : items_.front().second; }

private:
    std::deque<std::pair<long, double>> items_;
};

// Linear-domain array with one shared log offset, kept within +-300 nats of
// the window max so neither overflow nor relevant underflow can occur.
struct ScaledWindow
{
    std::vector<double> values;
    double offset = 0.0;
    WindowMax window;

    // `first` is the oldest index the next convolution will read.
    void store(long index, long first, double log_value)
    {
        window.expire_before(first);
        window.push(index, log_value);
        const double top = window.max();
        if (top != kNegInf && std::abs(top - offset) > 300.0) {
            const double factor = std::exp(offset - top);
            // Flush what would turn subnormal; those entries are > 400 nats below the max.
            for (long i = std::max(first, 0L); i < index; ++i) {
                const double v = values[i] * factor;
                values[i] = v < 1e-290 ? 0.0 : v;
            }
            offset = top;
        }
        values[index] = log_value == kNegInf ? 0.0 : std::exp(log_value - offset);
    }
};

// sum_i x[i] y[i] and sum_i z[i] y[i] in one pass. The simd pragma lets the
// compiler reorder the reduction (enabled by -fopenmp-simd).
inline void dual_dot(const double* x, const double* z, const double* y, long len, double& sx, double& sz)
{
    double a = 0.0, b = 0.0;
#pragma omp simd reduction(+ : a, b)
    for (long i = 0; i < len; ++i) {
        a += x[i] * y[i];
        b += z[i] * y[i];
    }
    sx = a;
    sz = b;
}

inline long resolve_cutoff(const ExcursionLaw& law, long n, long max_excursion)
{
    long cut = max_excursion > 0 ? std::min(max_excursion, law.m_max()) : law.m_max();
    cut = std::min(cut, n);
    return cut - cut % law.period();
}

// Renewal recursion on the period lattice, split into two convolutions:
//   Z_j = 1/2 sum_m Z_{j-m} rho(m) + 1/2 e^{u_j} sum_m Z_{j-m} e^{-u_{j-m}} rho(m).
inline std::vector<double> renewal_log_sums(std::span<const double> potential, const ExcursionLaw& law,
                                            long n, long cutoff)
{
    const long p = law.period();
    const long L = n / p;
    const long Kc = cutoff / p;
    std::vector<double> logZ(n + 1, kNegInf);
    logZ[0] = 0.0;
    if (Kc < 1) return logZ;
    // rev[t] = rho(p (Kc - t)), t = 0..Kc-1
    std::vector<double> rev(Kc);
    for (long t = 0; t < Kc; ++t) rev[t] = law.prob(p * (Kc - t));
    ScaledWindow a, b;
    a.values.assign(L + 1, 0.0);
    b.values.assign(L + 1, 0.0);
    a.store(0, 0, 0.0);
    b.store(0, 0, -potential[0]);
    for (long J = 1; J <= L; ++J) {
        const long first = std::max(0L, J - Kc);
        double sa = 0.0, sb = 0.0;
        dual_dot(a.values.data() + first, b.values.data() + first, rev.data() + (Kc - J + first), J - first,
                 sa, sb);
        const double u = potential[J * p];
        double lz = kNegInf;
        if (sa > 0.0 || sb > 0.0) {
            const double la = sa > 0.0 ? std::log(sa) + a.offset : kNegInf;
            const double lb = sb > 0.0 ? std::log(sb) + b.offset + u : kNegInf;
            lz = kLogHalf + log_add_exp(la, lb);
        }
        logZ[J * p] = lz;
        const long next_first = std::max(0L, J + 1 - Kc);
        a.store(J, next_first, lz);
        b.store(J, next_first, lz == kNegInf ? kNegInf : lz - u);
    }
    return logZ;
}

// log sum_k Z_k 1/2 rho-bar(n-k) (1 + e^{u_n - u_k}).
inline double free_end_sum(const std::vector<double>& logZ, std::span<const double> potential,
                           const ExcursionLaw& law, long n)
{
    LogAccumulator acc;
    for (long k = 0; k <= n; ++k) {
        if (logZ[k] == kNegInf) continue;
        const double tail = law.tail(n - k);
        if (tail <= 0.0) continue;
        acc.add(logZ[k] + std::log(tail) + kLogHalf + log1p_exp(potential[n] - potential[k]));
    }
    return acc.value();
}

}  // namespace detail

/// Constrained quenched table. `max_excursion` <= 0 means the full tabulated law.
inline LogDpTable constrained_logZ(const ModelParams& params, std::span<const double> omega,
                                   const ExcursionLaw& law, long n, long max_excursion = 0)
{
    params.validate();
    if (n < 1) throw std::invalid_argument("constrained_logZ: n must be >= 1");
    LogDpTable table;
    table.prefix_sums = prefix_sums(omega, params.h, n);
    table.potential.resize(n + 1);
    for (long j = 0; j <= n; ++j) table.potential[j] = -2.0 * params.beta * table.prefix_sums[j];
    table.period = law.period();
    table.max_excursion = detail::resolve_cutoff(law, n, max_excursion);
    table.logZ = detail::renewal_log_sums(table.potential, law, n, table.max_excursion);
    return table;
}

/// Free-endpoint sum: the final stretch keeps one sign, weight 1/2 per side,
/// with the full tail rho-bar of the law.
inline double free_logZ(const LogDpTable& table, const ExcursionLaw& law)
{
    return detail::free_end_sum(table.logZ, table.potential, law, table.n());
}

inline double free_logZ(const ModelParams& params, std::span<const double> omega, const ExcursionLaw& law,
                        long n, long max_excursion = 0)
{
    return free_logZ(constrained_logZ(params, omega, law, n, max_excursion), law);
}

/// Table with psi replaced by its disorder average 1/2 (1 + e^{m [M(2b) - 2bh]}).
inline LogDpTable annealed_table(const ModelParams& params, const DisorderModel& model, const ExcursionLaw& law,
                                 long n, long max_excursion = 0)
{
    params.validate();
    if (n < 1) throw std::invalid_argument("annealed_logZ: n must be >= 1");
    const double delta = model.cumulant(2.0 * params.beta) - 2.0 * params.beta * params.h;
    LogDpTable table;
    table.potential.resize(n + 1);
    for (long j = 0; j <= n; ++j) table.potential[j] = delta * static_cast<double>(j);
    table.period = law.period();
    table.max_excursion = detail::resolve_cutoff(law, n, max_excursion);
    table.logZ = detail::renewal_log_sums(table.potential, law, n, table.max_excursion);
    return table;
}

/// Constrained annealed log partition sum at n (-inf off the lattice).
inline double annealed_logZ(const ModelParams& params, const DisorderModel& model, const ExcursionLaw& law, long n)
{
    return annealed_table(params, model, law, n).logZ[n];
}

inline double annealed_free_logZ(const ModelParams& params, const DisorderModel& model, const ExcursionLaw& law,
                                 long n)
{
    const auto table = annealed_table(params, model, law, n);
    return detail::free_end_sum(table.logZ, table.potential, law, n);
}

struct FreeEnergyEstimate
{
    double value = 0.0;
    double stderr = 0.0;
    long n = 0;
    long replicas = 0;
    std::vector<double> per_replica;
};

/// Mean and standard error of a sample (stderr 0 for a single value).
inline std::pair<double, double> mean_stderr(std::span<const double> xs)
{
    if (xs.empty()) throw std::invalid_argument("mean_stderr: empty sample");
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(xs.size());
    if (xs.size() < 2) return {mean, 0.0};
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    const double var = ss / static_cast<double>(xs.size() - 1);
    return {mean, std::sqrt(var / static_cast<double>(xs.size()))};
}

struct QuenchedOptions
{
    long n = 100000;
    long replicas = 32;
    std::uint64_t seed = 1;
    unsigned threads = 1;
    long max_excursion = 0;
};

/// Per-replica trace row.
struct ReplicaTrace
{
    long replica = 0;
    long n = 0;
    double logZ = 0.0;
    double fe = 0.0;
};

/// Disorder for replica r; the same across parameter values (common random numbers).
inline std::vector<double> replica_disorder(const DisorderModel& model, std::size_t length, std::uint64_t seed,
                                            long replica)
{
    return model.sample(length, stream_seed(seed, static_cast<std::uint64_t>(replica)));
}

/// Replica mean of (1/n) log Z-tilde_n.
inline FreeEnergyEstimate quenched_free_energy(const ModelParams& params, const DisorderModel& model,
                                               const ExcursionLaw& law, const QuenchedOptions& opt,
                                               const std::function<void(const ReplicaTrace&)>& trace = {})
{
    if (opt.replicas < 1) throw std::invalid_argument("quenched_free_energy: replicas must be >= 1");
    if (opt.n < 1) throw std::invalid_argument("quenched_free_energy: n must be >= 1");
    const auto logs = parallel_map<double>(static_cast<std::size_t>(opt.replicas), opt.threads, [&](std::size_t r) {
        const auto omega = replica_disorder(model, opt.n, opt.seed, static_cast<long>(r));
        return free_logZ(params, omega, law, opt.n, opt.max_excursion);
    });
    FreeEnergyEstimate est;
    est.n = opt.n;
    est.replicas = opt.replicas;
    est.per_replica.resize(logs.size());
    for (std::size_t r = 0; r < logs.size(); ++r) {
        est.per_replica[r] = logs[r] / static_cast<double>(opt.n);
        if (trace) trace({static_cast<long>(r), opt.n, logs[r], est.per_replica[r]});
    }
    std::tie(est.value, est.stderr) = mean_stderr(est.per_replica);
    return est;
}

/// One free-energy evaluation along an h scan.
struct FreeEnergyPoint
{
    double h = 0.0;
    double g = 0.0;
    double stderr = 0.0;
    bool localized = false;
};

struct CriticalPoint
{
    double h = 0.0;            // midpoint of the final bracket
    double stderr = 0.0;
    double h_localized = 0.0;  // last h declared localized
    double h_delocalized = 0.0;
    double dg_dh = 0.0;        // secant around h, common random numbers
    std::vector<FreeEnergyPoint> evaluations;
};

/// Bisection in h of the replica-mean free energy against the noise floor
/// eps_fe * stderr. The bracket ends are evaluated and must straddle the floor.
/// Error bar: half the final bracket, stderr / |dg/dh| and the sampling error
/// of the floor itself (relative sd of a stderr estimate is 1/sqrt(2(R-1))),
/// added in quadrature. The slope comes from two extra evaluations at h -+ slope_step.
inline CriticalPoint critical_point(double beta, const DisorderModel& model, const ExcursionLaw& law,
                                    const QuenchedOptions& opt, double h_lo, double h_hi, double h_tol,
                                    double eps_fe = 10.0, double slope_step = 0.01)
{
    if (!(h_hi > h_lo) || !(h_tol > 0.0)) throw std::invalid_argument("critical_point: need h_lo < h_hi, h_tol > 0");
    CriticalPoint out;
    auto eval = [&](double h) {
        const auto e = quenched_free_energy({beta, h, 0.0}, model, law, opt);
        FreeEnergyPoint pt{h, e.value, e.stderr, e.value > eps_fe * e.stderr && e.value > 0.0};
        out.evaluations.push_back(pt);
        return pt;
    };
    if (!eval(h_lo).localized) throw std::runtime_error("critical_point: lower end of the h bracket is not localized");
    if (eval(h_hi).localized) throw std::runtime_error("critical_point: upper end of the h bracket is localized");
    while (h_hi - h_lo > h_tol) {
        const double mid = 0.5 * (h_lo + h_hi);
        (eval(mid).localized ? h_lo : h_hi) = mid;
    }
    out.h = 0.5 * (h_lo + h_hi);
    out.h_localized = h_lo;
    out.h_delocalized = h_hi;
    const auto left = eval(out.h - slope_step), right = eval(out.h + slope_step);
    out.dg_dh = (right.g - left.g) / (2.0 * slope_step);
    const double sg = 0.5 * (left.stderr + right.stderr);
    const double floor_sd = opt.replicas > 1 ? eps_fe * sg / std::sqrt(2.0 * static_cast<double>(opt.replicas - 1))
                                             : kPosInf;
    const double stat = out.dg_dh < 0.0 ? std::hypot(sg, floor_sd) / -out.dg_dh : kPosInf;
    out.stderr = std::hypot(0.5 * (h_hi - h_lo), stat);
    return out;
}

/// log F_N for N = 1..N_max, one disorder realisation.
struct GeneratingFunction
{
    std::vector<double> logF;   // index N - 1
    long k_max = 0;
    long m_cut = 0;
    double boundary_mass = 0.0; // final-layer mass fraction in the top tenth of 0..k_max
};

struct GeneratingOptions
{
    long n_max = 400;
    long k_max = 0;         // 0: adaptive
    double eps_tail = 1e-14;
};

namespace detail {

// Potential u_J = -2 beta S_{pJ} on the lattice.
inline std::vector<double> lattice_potential(const ModelParams& params, std::span<const double> omega, long p,
                                             long L)
{
    std::vector<double> u(L + 1, 0.0);
    double s = 0.0;
    long pos = 0;
    for (long J = 1; J <= L; ++J) {
        for (long t = 0; t < p; ++t) s += omega[pos++] + params.h;
        u[J] = -2.0 * params.beta * s;
    }
    return u;
}

// Largest u_J - u_I over 0 < J - I <= K, via a sliding minimum.
inline double max_drawup(const std::vector<double>& u, long K)
{
    std::deque<long> mins;
    double best = kNegInf;
    for (long J = 1; J < static_cast<long>(u.size()); ++J) {
        while (!mins.empty() && u[mins.back()] >= u[J - 1]) mins.pop_back();
        mins.push_back(J - 1);
        while (mins.front() < J - K) mins.pop_front();
        best = std::max(best, u[J] - u[mins.front()]);
    }
    return best;
}

// Excursion cutoff for F_N: the tilted tail times the largest psi any longer
// excursion can collect on this sequence must stay below eps times the
// weight of the shortest excursion. Lengths are tested on a doubling ladder.
inline long data_excursion_cut(const std::vector<double>& u, const ExcursionLaw& law, double g, double eps)
{
    const long p = law.period();
    const long L = static_cast<long>(u.size()) - 1;
    const double reference = kLogHalf + law.log_prob(p) - g * static_cast<double>(p);
    std::vector<long> ladder;
    for (long K = std::max(1L, law.tilted_cutoff(g, eps) / p); K < L; K *= 2) ladder.push_back(K);
    ladder.push_back(L);
    std::vector<double> drawup(ladder.size());
    for (std::size_t j = 0; j < ladder.size(); ++j) drawup[j] = max_drawup(u, ladder[j]);
    std::size_t chosen = ladder.size() - 1;
    for (std::size_t j = ladder.size() - 1; j-- > 0;) {
        const double m = static_cast<double>(p * ladder[j]);
        const double tail = law.tail(p * ladder[j]);
        const double bound = tail > 0.0 ? std::log(tail) - g * m + kLogHalf + log1p_exp(drawup[j + 1]) : kNegInf;
        if (bound >= reference + std::log(eps)) break;
        chosen = j;
    }
    return std::min(p * ladder[chosen], law.m_max());
}

// Layer recursion W_N(k) = sum_m W_{N-1}(k-m) e^{-g m} rho(m) psi((k-m, k]) in
// the split form used by the renewal sums; e^{-g m} is folded into the arrays
// as W(i) e^{g i} so the kernel is rho alone.
inline GeneratingFunction generating_function_fixed(const ModelParams& params, std::span<const double> omega,
                                                    const ExcursionLaw& law, long n_max, long k_max, long m_cut)
{
    const long p = law.period();
    const long L = k_max / p;
    const long Kc = std::min(m_cut / p, L);
    const auto u = lattice_potential(params, omega, p, L);
    const double gp = params.g * static_cast<double>(p);
    std::vector<double> rev(Kc);
    for (long t = 0; t < Kc; ++t) rev[t] = law.prob(p * (Kc - t));
    GeneratingFunction out;
    out.k_max = L * p;
    out.m_cut = Kc * p;
    out.logF.assign(n_max, kNegInf);
    std::vector<double> prev(L + 1, kNegInf), next(L + 1, kNegInf);
    prev[0] = 0.0;
    for (long N = 1; N <= n_max; ++N) {
        ScaledWindow a, b;
        a.values.assign(L + 1, 0.0);
        b.values.assign(L + 1, 0.0);
        LogAccumulator total, upper;
        const long upper_start = L - L / 10;
        next[0] = kNegInf;
        for (long J = 1; J <= L; ++J) {
            const long first = std::max(0L, J - Kc);
            const double lp = prev[J - 1] == kNegInf ? kNegInf : prev[J - 1] + gp * static_cast<double>(J - 1);
            a.store(J - 1, first, lp);
            b.store(J - 1, first, lp == kNegInf ? kNegInf : lp - u[J - 1]);
            double sa = 0.0, sb = 0.0;
            dual_dot(a.values.data() + first, b.values.data() + first, rev.data() + (Kc - J + first), J - first,
                     sa, sb);
            double lz = kNegInf;
            if (sa > 0.0 || sb > 0.0) {
                const double shift = -gp * static_cast<double>(J);
                const double la = sa > 0.0 ? std::log(sa) + a.offset : kNegInf;
                const double lb = sb > 0.0 ? std::log(sb) + b.offset + u[J] : kNegInf;
                lz = kLogHalf + shift + log_add_exp(la, lb);
            }
            next[J] = lz;
            total.add(lz);
            if (J >= upper_start) upper.add(lz);
        }
        out.logF[N - 1] = total.value();
        if (N == n_max) out.boundary_mass = std::exp(upper.value() - total.value());
        std::swap(prev, next);
    }
    return out;
}

}  // namespace detail

/// F_N(g) = sum_k e^{-g k} sum over N-excursion decompositions of [0, k], one
/// disorder sequence, obtained through `disorder_of_length(len)` which must
/// return prefix-consistent sequences. k_max and the excursion cutoff adapt
/// to the data unless k_max is given.
inline GeneratingFunction excursion_generating_function(
    const ModelParams& params, const ExcursionLaw& law, const GeneratingOptions& opt,
    const std::function<std::vector<double>(long)>& disorder_of_length)
{
    params.validate();
    if (!(params.g > 0.0)) throw std::domain_error("excursion_generating_function: requires g > 0");
    if (opt.n_max < 2) throw std::invalid_argument("excursion_generating_function: N_max must be >= 2");
    auto run = [&](long k_max) {
        const auto omega = disorder_of_length(k_max);
        const long p = law.period();
        const auto u = detail::lattice_potential(params, omega, p, k_max / p);
        const long m_cut = detail::data_excursion_cut(u, law, params.g, opt.eps_tail);
        return detail::generating_function_fixed(params, omega, law, opt.n_max, k_max, m_cut);
    };
    if (opt.k_max > 0) return run(opt.k_max);
    const auto tilted = law.tilt(params.g);
    double mean = 0.0;
    for (long m = 1; m <= law.m_max(); ++m) mean += static_cast<double>(m) * tilted.probabilities[m];
    long k_max = std::max<long>(64, static_cast<long>(2.0 * mean * static_cast<double>(opt.n_max)));
    for (;;) {
        auto out = run(k_max);
        if (out.boundary_mass <= 1e-10 || k_max > (1L << 24)) return out;
        k_max *= 2;
    }
}

/// OLS slope of log F_N over N in [N_max/2, N_max].
inline double generating_slope(const GeneratingFunction& gf)
{
    const long n_max = static_cast<long>(gf.logF.size());
    const long lo = n_max / 2;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    long count = 0;
    for (long N = lo; N <= n_max; ++N) {
        const double x = static_cast<double>(N);
        const double y = gf.logF[N - 1];
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++count;
    }
    const double c = static_cast<double>(count);
    return (c * sxy - sx * sy) / (c * sxx - sx * sx);
}

struct SlopeEstimate
{
    double value = 0.0;
    double stderr = 0.0;
    std::vector<double> per_replica;
};

/// Replica average of the F_N slope at fixed g.
inline SlopeEstimate quenched_slope(const ModelParams& params, const DisorderModel& model, const ExcursionLaw& law,
                                    const GeneratingOptions& gopt, long replicas, std::uint64_t seed, unsigned threads)
{
    if (replicas < 1) throw std::invalid_argument("quenched_slope: replicas must be >= 1");
    SlopeEstimate est;
    est.per_replica = parallel_map<double>(static_cast<std::size_t>(replicas), threads, [&](std::size_t r) {
        auto grow = [&](long length) { return replica_disorder(model, length, seed, static_cast<long>(r)); };
        return generating_slope(excursion_generating_function(params, law, gopt, grow));
    });
    std::tie(est.value, est.stderr) = mean_stderr(est.per_replica);
    return est;
}

struct SlopeRoot
{
    double g = 0.0;
    double stderr = 0.0;
    double derivative = 0.0;  // secant dS/dg over the final bracket
    int evaluations = 0;
};

/// Zero of the replica-mean slope in g by Illinois regula falsi on [g_lo, g_hi].
/// Every evaluation reuses the same disorder streams, so the mean is a smooth
/// decreasing function of g. Error bar: stderr of S at the bracket end nearer
/// the root, divided by |dS/dg|.
inline SlopeRoot slope_root(const ModelParams& params, const DisorderModel& model, const ExcursionLaw& law,
                            const GeneratingOptions& gopt, long replicas, std::uint64_t seed, unsigned threads,
                            double g_lo, double g_hi, double tol = 1e-3, int max_evaluations = 16)
{
    if (!(g_lo > 0.0 && g_hi > g_lo)) throw std::invalid_argument("slope_root: need 0 < g_lo < g_hi");
    SlopeRoot out;
    auto eval = [&](double g) {
        ModelParams p = params;
        p.g = g;
        ++out.evaluations;
        return quenched_slope(p, model, law, gopt, replicas, seed, threads);
    };
    SlopeEstimate lo = eval(g_lo), hi = eval(g_hi);
    while (lo.value <= 0.0 && out.evaluations < max_evaluations) {
        g_hi = g_lo, hi = lo;
        g_lo *= 0.5;
        lo = eval(g_lo);
    }
    while (hi.value >= 0.0 && out.evaluations < max_evaluations) {
        g_lo = g_hi, lo = hi;
        g_hi *= 2.0;
        hi = eval(g_hi);
    }
    if (!(lo.value > 0.0 && hi.value < 0.0)) throw std::runtime_error("slope_root: no sign change found");
    double flo = lo.value, fhi = hi.value;
    int side = 0;
    while (g_hi - g_lo > tol && out.evaluations < max_evaluations) {
        const double g = (g_lo * fhi - g_hi * flo) / (fhi - flo);
        const SlopeEstimate mid = eval(g);
        if (mid.value > 0.0) {
            g_lo = g, lo = mid, flo = mid.value;
            if (side == 1) fhi *= 0.5;
            side = 1;
        } else {
            g_hi = g, hi = mid, fhi = mid.value;
            if (side == -1) flo *= 0.5;
            side = -1;
        }
    }
    out.derivative = (hi.value - lo.value) / (g_hi - g_lo);
    out.g = g_lo - lo.value / out.derivative;
    const double s = std::abs(lo.value) < std::abs(hi.value) ? lo.stderr : hi.stderr;
    out.stderr = s / std::abs(out.derivative);
    return out;
}

}  // namespace copolymer

#endif  // COPOLYMER_PARTITION_HPP
