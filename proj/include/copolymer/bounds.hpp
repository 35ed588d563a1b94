#ifndef COPOLYMER_BOUNDS_HPP
#define COPOLYMER_BOUNDS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "copolymer/annealed.hpp"
#include "copolymer/disorder.hpp"
#include "copolymer/excursions.hpp"
#include "copolymer/falpha.hpp"
#include "copolymer/numeric.hpp"
#include "copolymer/quadrature.hpp"
#include "copolymer/random.hpp"

namespace copolymer {

/// ((1-t)/t) log 2 + (1/t) log sum_m e^{-g t m} rho(m)^t: upper bound on
/// S^que(beta, h_c^ann(beta t); g). +inf when the series diverges.
inline double fractional_moment_bound(double beta, double t, double g, const ExcursionLaw& law)
{
    if (beta < 0.0) throw std::domain_error("fractional_moment_bound: beta must be >= 0");
    if (!(t > 0.0 && t <= 1.0)) throw std::domain_error("fractional_moment_bound: t must lie in (0, 1]");
    const double s = law.power_sum(t, g);
    if (s == kPosInf) return kPosInf;
    return (1.0 - t) / t * std::numbers::ln2 + std::log(s) / t;
}

/// h(nu_a | nu_b) for exponential tilts nu_l(dx) = e^{-l x - M(l)} nu(dx) (nu_0 = nu),
/// by direct summation (finite support) or Hermite quadrature of the log density ratio.
inline double tilt_relative_entropy(const DisorderModel& model, double a, double b)
{
    const double Ma = model.cumulant(a), Mb = model.cumulant(b);
    auto log_ratio = [&](double x) { return -(a - b) * x - Ma + Mb; };
    if (model.is_discrete()) {
        double h = 0.0;
        const auto& xs = model.support();
        const auto& ws = model.weights();
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const double pa = ws[i] * std::exp(-a * xs[i] - Ma);
            if (pa > 0.0) h += pa * log_ratio(xs[i]);
        }
        return h;
    }
    // Gaussian: nu_a = N(-a, 1).
    return GaussHermite::cached(64).expectation(-a, 1.0, log_ratio);
}

struct TiltedStrategy
{
    double rate = 0.0;              // alpha M(2 beta/alpha) - 2 beta h
    double entropy_to_tilted = 0.0; // h(nu_{beta/alpha} | nu_beta)
    double entropy_to_base = 0.0;   // h(nu_{beta/alpha} | nu)
    double identity_residual = 0.0; // lhs - [M(2 beta) - alpha M(2 beta/alpha)]
};

/// Growth rate of the rare-stretch strategy; zero exactly at h = h_c^ann(beta/alpha).
inline TiltedStrategy tilted_strategy_rate(double beta, double h, const DisorderModel& model, double alpha)
{
    if (!(beta > 0.0)) throw std::domain_error("tilted_strategy_rate: beta must be > 0");
    if (!(alpha > 1.0)) throw std::domain_error("tilted_strategy_rate: alpha must be > 1");
    TiltedStrategy out;
    const double a = 2.0 * beta / alpha, b = 2.0 * beta;
    // alpha M(mu) - 2 beta h = 2 beta (M(mu)/mu - h): written this way it vanishes
    // exactly when h is the annealed critical point at beta/alpha.
    out.rate = 2.0 * beta * (annealed_critical_h(beta / alpha, model) - h);
    out.entropy_to_tilted = tilt_relative_entropy(model, a, b);
    out.entropy_to_base = tilt_relative_entropy(model, a, 0.0);
    out.identity_residual = out.entropy_to_tilted + (alpha - 1.0) * out.entropy_to_base -
                            (model.cumulant(b) - alpha * model.cumulant(a));
    return out;
}

struct FAlphaOptions
{
    long m_exact = 4096;     // lengths summed one by one
    double block_ratio = 1.01;
    long m_block_max = 1'000'000;  // Binary; Gaussian continues to tail_eps
    double tail_eps = 1e-12;
    ExpectationOptions quadrature;
};

struct FAlphaFunctional
{
    double N_hat = 1.0;
    double bound = 0.0;        // alpha log N_hat
    long m_last = 0;           // last length evaluated
    double tail_mass = 0.0;    // mass completed with the last per-length value
};

namespace detail {

/// E f_alpha(exp(-mu (h m + S_m))) for S_m a sum of m fair +-1 letters. Both bounded
/// parts are summed over +-12 sd windows of the plain and size-biased binomials.
inline double binary_falpha_term(const FAlpha& f, double mu, double h, long m)
{
    const double md = static_cast<double>(m);
    const double log_mean_z = md * (std::log(std::cosh(mu)) - mu * h);
    const double p_tilt = 1.0 / (1.0 + std::exp(2.0 * mu));  // P(+1) under e^{-mu x}
    auto window = [&](double p, auto&& body) {
        const double mean = md * p, sd = std::sqrt(md * p * (1.0 - p));
        const long lo = std::max(0L, static_cast<long>(std::floor(mean - 12.0 * sd - 1.0)));
        const long hi = std::min(m, static_cast<long>(std::ceil(mean + 12.0 * sd + 1.0)));
        double s = 0.0;
        for (long k = lo; k <= hi; ++k) s += body(k);
        return s;
    };
    auto t_of = [&](long k) { return -mu * (h * md + static_cast<double>(2 * k - m)); };
    const double lower = window(0.5, [&](long k) {
        return std::exp(log_binomial(md, static_cast<double>(k)) - md * std::numbers::ln2) * f.lower_part(t_of(k));
    });
    const double lp = std::log(p_tilt), lq = std::log1p(-p_tilt);
    const double upper = window(p_tilt, [&](long k) {
        const double kd = static_cast<double>(k);
        return std::exp(log_binomial(md, kd) + kd * lp + (md - kd) * lq) * f.upper_part(t_of(k));
    });
    return lower + std::exp(log_mean_z) * upper;
}

}  // namespace detail

/// N_hat(beta, h) = sum_m rho(m) E f_alpha(exp(-mu (h m + x_1 + ... + x_m))), mu = 2 beta/alpha,
/// and the lower bound alpha log N_hat on S*^que(beta, h). Binary and Gaussian disorder.
inline FAlphaFunctional falpha_lower_functional(double beta, double h, const DisorderModel& model,
                                                const ExcursionLaw& law, double alpha,
                                                const FAlphaOptions& opt = {})
{
    if (beta < 0.0 || h < 0.0) throw std::domain_error("falpha_lower_functional: beta, h must be >= 0");
    if (model.kind() == DisorderKind::DiscreteCustom)
        throw std::invalid_argument("falpha_lower_functional: Binary or Gaussian disorder only");
    const FAlpha f(alpha);
    FAlphaFunctional out;
    if (beta == 0.0) return out;
    const double mu = 2.0 * beta / alpha;
    const bool gaussian = model.kind() == DisorderKind::Gaussian;
    auto term = [&](long m) {
        if (gaussian) {
            const double s = beta / alpha;
            return 1.0 + gaussian_falpha_excess(f, s * s * static_cast<double>(m), alpha * h / beta, opt.quadrature);
        }
        return detail::binary_falpha_term(f, mu, h, m);
    };
    const long p = law.period();
    double sum = 0.0, last = 1.0;
    long m = p;
    for (; m <= opt.m_exact; m += p) {
        const double r = law.prob(m);
        if (r > 0.0) sum += r * (last = term(m));
    }
    long a = m - p;
    const long cap_m = gaussian ? 1'000'000'000'000'000L : opt.m_block_max;
    while (law.tail(a) * f.jensen_cap() > opt.tail_eps && a < cap_m) {
        const long b = std::max(a + p, static_cast<long>(static_cast<double>(a) * opt.block_ratio) / p * p);
        const double mass = law.tail(a) - law.tail(b);
        const long lo = a + p, hi = b;
        const long mid = std::clamp(static_cast<long>(std::sqrt(static_cast<double>(lo) * hi)) / p * p, lo, hi);
        last = term(hi);
        sum += mass * (term(lo) + 4.0 * term(mid) + last) / 6.0;
        a = b;
    }
    out.m_last = a;
    out.tail_mass = law.tail(a);
    sum += out.tail_mass * last;
    out.N_hat = sum;
    out.bound = alpha * std::log(sum);
    return out;
}

/// Smallest h on [lo, hi] where the f_alpha bound is still positive, by bisection
/// (the bound decreases in h). Returns lo if already non-positive there.
inline double falpha_curve_point(double beta, const DisorderModel& model, const ExcursionLaw& law, double alpha,
                                 double lo, double hi, double tol = 1e-6, const FAlphaOptions& opt = {})
{
    auto positive = [&](double h) { return falpha_lower_functional(beta, h, model, law, alpha, opt).bound > 0.0; };
    if (!positive(lo)) return lo;
    if (positive(hi)) return hi;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (positive(mid)) lo = mid; else hi = mid;
    }
    return lo;
}

struct EntropyGap
{
    double at_reference = 0.0;  // U(q*) = (alpha - 1) m_{q*} h(1/2 nu + 1/2 nu_beta | nu)
    double best = 0.0;          // min over the family and restarts
    double theta_length = 0.0;  // minimiser
    double theta_sum = 0.0;
    int restarts = 0;
    double worst_restart = 0.0;  // largest local minimum found
    long L = 0;
};

/// Per-length mixture description of q_theta proportional to q* e^{t1 tau + t2 sigma},
/// q* the annealed Gibbs law at g = 0, h = h_c^ann(beta), truncated to lengths <= L.
class EntropyGapFamily
{
public:
    EntropyGapFamily(double beta, const DisorderModel& model, const ExcursionLaw& law, long L)
        : beta_(beta), model_(model)
    {
        if (!(beta > 0.0)) throw std::domain_error("entropy_reduction_gap: beta must be > 0");
        if (!(law.alpha() > 1.0)) throw std::domain_error("entropy_reduction_gap: alpha must be > 1");
        alpha_ = law.alpha();
        for (long m = law.period(); m <= L; m += law.period()) {
            const double lr = law.log_prob(m);
            if (lr == kNegInf) continue;
            lengths_.push_back(static_cast<double>(m));
            log_rho_.push_back(lr);
        }
        if (lengths_.empty()) throw std::invalid_argument("entropy_reduction_gap: empty truncation");
        log_ref_mass_ = log_sum_exp(log_rho_);
    }

    /// U(q_theta) = h(q_theta | q*) + (alpha - 1) m_q h(marginal | nu).
    double objective(double t1, double t2) const
    {
        const double b2 = 2.0 * beta_;
        const double la = model_.cumulant(-t2);
        const double lb = model_.cumulant(b2 - t2) - model_.cumulant(b2);
        if (!std::isfinite(la) || !std::isfinite(lb)) return kPosInf;
        const std::size_t n = lengths_.size();
        std::vector<double> log_a(n), log_b(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double m = lengths_[i];
            log_a[i] = kLogHalf + log_rho_[i] + m * (t1 + la);
            log_b[i] = kLogHalf + log_rho_[i] + m * (t1 + lb);
        }
        const double log_z = log_add_exp(log_sum_exp(log_a), log_sum_exp(log_b));
        double mean_len = 0.0, len_a = 0.0, len_b = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double wa = std::exp(log_a[i] - log_z), wb = std::exp(log_b[i] - log_z);
            mean_len += lengths_[i] * (wa + wb);
            len_a += lengths_[i] * wa;
            len_b += lengths_[i] * wb;
        }
        const double mean_sum = -len_a * model_.slope(-t2) - len_b * model_.slope(b2 - t2);
        const double rel_to_ref = t1 * mean_len + t2 * mean_sum - (log_z - log_ref_mass_);
        const double c = len_a / mean_len;
        return std::max(0.0, rel_to_ref) + (alpha_ - 1.0) * mean_len * mixture_entropy(c, -t2, b2 - t2);
    }

    double alpha() const { return alpha_; }

    /// h(c nu_a + (1 - c) nu_b | nu).
    double mixture_entropy(double c, double a, double b) const
    {
        const double Ma = model_.cumulant(a), Mb = model_.cumulant(b);
        auto log_r = [&](double x) {
            return log_add_exp(std::log(c) - a * x - Ma, std::log1p(-c) - b * x - Mb);
        };
        if (model_.is_discrete()) {
            double h = 0.0;
            const auto& xs = model_.support();
            const auto& ws = model_.weights();
            for (std::size_t i = 0; i < xs.size(); ++i) {
                const double lr = log_r(xs[i]);
                h += ws[i] * std::exp(lr) * lr;
            }
            return h;
        }
        const auto& gh = GaussHermite::cached(64);
        double h = 0.0;
        if (c > 0.0) h += c * gh.expectation(-a, 1.0, log_r);
        if (c < 1.0) h += (1.0 - c) * gh.expectation(-b, 1.0, log_r);
        return h;
    }

private:
    double beta_;
    const DisorderModel& model_;
    double alpha_ = 0.0;
    std::vector<double> lengths_;
    std::vector<double> log_rho_;
    double log_ref_mass_ = 0.0;
};

/// Upper bound on -S*^que(beta, h_c^ann(beta)): minimum of U over the two-parameter
/// tilt family, by compass search from `restarts` random starts. Never the exact inf.
inline EntropyGap entropy_reduction_gap(double beta, const DisorderModel& model, const ExcursionLaw& law,
                                        long L = 12, int restarts = 1000, std::uint64_t seed = 1)
{
    const EntropyGapFamily family(beta, model, law, L);
    EntropyGap out;
    out.L = L;
    out.restarts = restarts;
    out.at_reference = family.objective(0.0, 0.0);
    out.best = out.at_reference;
    Rng rng(mix_seed(seed));
    std::uniform_real_distribution<double> start(-2.0, 2.0);
    for (int r = 0; r < restarts; ++r) {
        double x[2] = {start(rng), start(rng) * std::max(1.0, 2.0 * beta)};
        if (r == 0) x[0] = x[1] = 0.0;
        double fx = family.objective(x[0], x[1]);
        double step = 0.5;
        while (step > 1e-9) {
            bool moved = false;
            for (int d = 0; d < 2; ++d)
                for (double sgn : {1.0, -1.0}) {
                    double y[2] = {x[0], x[1]};
                    y[d] += sgn * step;
                    const double fy = family.objective(y[0], y[1]);
                    if (fy < fx) {
                        x[0] = y[0], x[1] = y[1], fx = fy;
                        moved = true;
                    }
                }
            if (!moved) step *= 0.5;
        }
        out.worst_restart = std::max(out.worst_restart, fx);
        if (fx < out.best) {
            out.best = fx;
            out.theta_length = x[0];
            out.theta_sum = x[1];
        }
    }
    return out;
}

}  // namespace copolymer

#endif  // COPOLYMER_BOUNDS_HPP
