#ifndef COPOLYMER_EXCURSIONS_HPP
#define COPOLYMER_EXCURSIONS_HPP

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "copolymer/numeric.hpp"
#include "copolymer/series.hpp"

namespace copolymer {

enum class ExcursionKind { PowerLaw, SimpleRandomWalk, Custom };

inline std::string to_string(ExcursionKind kind)
{
    switch (kind) {
    case ExcursionKind::PowerLaw: return "power";
    case ExcursionKind::SimpleRandomWalk: return "srw";
    case ExcursionKind::Custom: return "custom";
    }
    return "unknown";
}

/// Excursion-length law after tilting by e^{-g m}.
struct TiltedLaw
{
    double g = 0.0;
    double log_normalizer = 0.0;       // log N(g), full series
    std::vector<double> probabilities; // rho_g(m) for m = 0..m_max, entry 0 unused
    double truncation_bound = 0.0;     // mass of rho_g beyond m_max
};

/// Excursion-length law rho on period * N.
///
/// Lengths up to m_max are tabulated. Beyond m_max the PowerLaw and SRW kinds
/// use the lattice expansion rho(p k) = A k^{-alpha} (1 + d1/k + d2/k^2), which
/// is exact for PowerLaw and accurate to O(k^{-3}) for SRW; series over the
/// full support (tails, N(g), sums of rho^t, the mean) use it for completion.
/// Custom laws are the table itself: any missing mass is never realised
/// (a transient renewal).
class ExcursionLaw
{
public:
    static constexpr long kDefaultMMax = 200000;

    static ExcursionLaw simple_random_walk(long m_max = kDefaultMMax)
    {
        if (m_max < 2) throw std::invalid_argument("srw law: m_max must be >= 2");
        ExcursionLaw law;
        law.kind_ = ExcursionKind::SimpleRandomWalk;
        law.alpha_ = 1.5;
        law.period_ = 2;
        law.m_max_ = m_max - (m_max % 2);
        law.amp_ = 0.5 / std::sqrt(std::numbers::pi);
        law.d1_ = 0.375;
        law.d2_ = 25.0 / 128.0;
        law.tabulate();
        return law;
    }

    static ExcursionLaw power_law(double alpha, long m_max = kDefaultMMax, long period = 1)
    {
        if (!(alpha > 1.0)) throw std::invalid_argument("power law: alpha must be > 1");
        if (period < 1) throw std::invalid_argument("power law: period must be >= 1");
        if (m_max < period) throw std::invalid_argument("power law: m_max must be >= period");
        ExcursionLaw law;
        law.kind_ = ExcursionKind::PowerLaw;
        law.alpha_ = alpha;
        law.period_ = period;
        law.m_max_ = m_max - (m_max % period);
        law.amp_ = 1.0 / riemann_zeta(alpha);
        law.tabulate();
        return law;
    }

    /// probabilities[i] is rho(i + 1).
    static ExcursionLaw custom(std::vector<double> probabilities, double alpha, long period = 1)
    {
        if (probabilities.empty()) throw std::invalid_argument("custom law: empty table");
        if (period < 1) throw std::invalid_argument("custom law: period must be >= 1");
        ExcursionLaw law;
        law.kind_ = ExcursionKind::Custom;
        law.alpha_ = alpha;
        law.period_ = period;
        law.m_max_ = static_cast<long>(probabilities.size());
        law.prob_.assign(probabilities.size() + 1, 0.0);
        double total = 0.0;
        for (std::size_t i = 0; i < probabilities.size(); ++i) {
            const double p = probabilities[i];
            if (!(p >= 0.0)) throw std::invalid_argument("custom law: negative probability");
            if (p > 0.0 && static_cast<long>(i + 1) % period != 0)
                throw std::invalid_argument("custom law: mass off the period lattice");
            law.prob_[i + 1] = p;
            total += p;
        }
        if (total > 1.0 + 1e-12) throw std::invalid_argument("custom law: mass exceeds 1");
        law.finish_table();
        return law;
    }

    ExcursionKind kind() const { return kind_; }
    double alpha() const { return alpha_; }
    long period() const { return period_; }
    long m_max() const { return m_max_; }
    double tail_mass() const { return tail_[m_max_]; }
    const std::vector<double>& probabilities() const { return prob_; }
    const std::vector<double>& log_probabilities() const { return log_prob_; }

    /// rho(m) for any m >= 1, beyond the table for the analytic kinds.
    double prob(long m) const
    {
        if (m < 1) return 0.0;
        if (m <= m_max_) return prob_[m];
        return std::exp(log_prob(m));
    }

    double log_prob(long m) const
    {
        if (m < 1) return kNegInf;
        if (m <= m_max_) return log_prob_[m];
        if (m % period_ != 0) return kNegInf;
        switch (kind_) {
        case ExcursionKind::PowerLaw:
            return std::log(amp_) - alpha_ * std::log(static_cast<double>(m / period_));
        case ExcursionKind::SimpleRandomWalk: return srw_log_prob(m);
        case ExcursionKind::Custom: return kNegInf;
        }
        return kNegInf;
    }

    /// rho-bar(l) = sum_{m > l} rho(m); rho-bar(0) = total mass.
    double tail(long l) const
    {
        if (l < 0) l = 0;
        if (l <= m_max_) return tail_[l];
        if (kind_ == ExcursionKind::Custom) return 0.0;
        return lattice_series(1.0, 0.0, l / period_ + 1);
    }

    /// log N(g) = log sum_m e^{-g m} rho(m) over the full support.
    double log_normalizer(double g) const
    {
        if (g < 0.0) throw std::domain_error("log_normalizer: g must be >= 0 (series diverges)");
        if (g == 0.0) return std::log(tail_[0]);
        double head = 0.0;
        for (long m = m_max_; m >= period_; m -= period_)
            if (prob_[m] > 0.0) head += std::exp(-g * static_cast<double>(m)) * prob_[m];
        double rest = 0.0;
        if (kind_ != ExcursionKind::Custom) rest = power_sum(1.0, g, m_max_ / period_ + 1);
        return std::log(head + rest);
    }

    /// sum_m e^{-g t m} rho(m)^t with analytic completion; +inf when divergent.
    double power_sum(double t, double g) const
    {
        if (!(t > 0.0)) throw std::domain_error("power_sum: t must be > 0");
        if (g < 0.0) throw std::domain_error("power_sum: g must be >= 0");
        if (kind_ != ExcursionKind::Custom && g == 0.0 && !(alpha_ * t > 1.0)) return kPosInf;
        double head = 0.0;
        for (long m = m_max_; m >= period_; m -= period_)
            if (prob_[m] > 0.0) head += std::exp(t * (log_prob_[m] - g * static_cast<double>(m)));
        if (kind_ == ExcursionKind::Custom) return head;
        return head + power_sum(t, g, m_max_ / period_ + 1);
    }

    /// Mean excursion length; +inf when the series diverges.
    double mean_length() const
    {
        double head = 0.0;
        for (long m = m_max_; m >= 1; --m) head += static_cast<double>(m) * prob_[m];
        if (kind_ == ExcursionKind::Custom) return head;
        if (!(alpha_ > 2.0)) return kPosInf;
        const long k0 = m_max_ / period_ + 1;
        // sum_k p k * A k^{-a} (1 + d1/k + d2/k^2)
        const double p = static_cast<double>(period_);
        return head + p * amp_ *
                          (power_exp_tail(alpha_ - 1.0, 0.0, k0) + d1_ * power_exp_tail(alpha_, 0.0, k0) +
                           d2_ * power_exp_tail(alpha_ + 1.0, 0.0, k0));
    }

    TiltedLaw tilt(double g) const
    {
        if (g < 0.0) throw std::domain_error("tilt: g must be >= 0");
        TiltedLaw out;
        out.g = g;
        out.log_normalizer = log_normalizer(g);
        out.probabilities.assign(prob_.size(), 0.0);
        double kept = 0.0;
        for (long m = 1; m <= m_max_; ++m) {
            if (prob_[m] <= 0.0) continue;
            out.probabilities[m] = std::exp(log_prob_[m] - g * static_cast<double>(m) - out.log_normalizer);
            kept += out.probabilities[m];
        }
        out.truncation_bound = std::max(0.0, 1.0 - kept);
        return out;
    }

    /// Smallest truncation length leaving at most eps of tilted mass behind.
    long tilted_cutoff(double g, double eps) const
    {
        if (!(g > 0.0)) throw std::domain_error("tilted_cutoff: g must be > 0");
        const double log_norm = log_normalizer(g);
        // Tail of rho_g beyond L is at most e^{-gL} rho-bar(L) / N(g).
        long L = period_;
        while (std::log(std::max(tail(L), 1e-300)) - g * static_cast<double>(L) - log_norm > std::log(eps)) {
            L *= 2;
            if (L > (1L << 40)) break;
        }
        long lo = L / 2, hi = L;
        while (hi - lo > 1) {
            const long mid = (lo + hi) / 2;
            if (std::log(std::max(tail(mid), 1e-300)) - g * static_cast<double>(mid) - log_norm > std::log(eps))
                lo = mid;
            else
                hi = mid;
        }
        return hi + (period_ - hi % period_) % period_;
    }

    nlohmann::json to_json() const
    {
        nlohmann::json j;
        j["kind"] = to_string(kind_);
        j["alpha"] = alpha_;
        j["period"] = period_;
        j["m_max"] = m_max_;
        if (kind_ == ExcursionKind::Custom)
            j["probabilities"] = std::vector<double>(prob_.begin() + 1, prob_.end());
        return j;
    }

    static ExcursionLaw from_json(const nlohmann::json& j)
    {
        const std::string kind = j.at("kind").get<std::string>();
        const long m_max = j.value("m_max", kDefaultMMax);
        if (kind == "srw") return simple_random_walk(m_max);
        if (kind == "power") return power_law(j.at("alpha").get<double>(), m_max, j.value("period", 1L));
        if (kind == "custom")
            return custom(j.at("probabilities").get<std::vector<double>>(), j.value("alpha", 0.0),
                          j.value("period", 1L));
        throw std::invalid_argument("excursion law: unknown kind '" + kind + "'");
    }

private:
    ExcursionLaw() = default;

    // log C(2k, k) 4^{-k}: exact product for small k, Stirling-type series
    // beyond (lgamma differences lose ~1e-10 at k ~ 1e5).
    static double log_central_binomial(long k)
    {
        if (k < 32) {
            double u = 1.0;
            for (long i = 1; i <= k; ++i) u *= (2.0 * i - 1.0) / (2.0 * i);
            return std::log(u);
        }
        const double x = static_cast<double>(k);
        const double r = 1.0 / x, r2 = r * r;
        return -0.5 * std::log(std::numbers::pi * x) +
               r * (-1.0 / 8.0 + r2 * (1.0 / 192.0 + r2 * (-1.0 / 640.0 + r2 * (17.0 / 14336.0))));
    }

    static double srw_log_prob(long m)
    {
        const long k = m / 2;
        return log_central_binomial(k) - std::log(2.0 * static_cast<double>(k) - 1.0);
    }

    void tabulate()
    {
        prob_.assign(m_max_ + 1, 0.0);
        for (long m = period_; m <= m_max_; m += period_) {
            prob_[m] = kind_ == ExcursionKind::SimpleRandomWalk
                           ? std::exp(srw_log_prob(m))
                           : amp_ * std::pow(static_cast<double>(m / period_), -alpha_);
        }
        finish_table();
        // The tail beyond the table comes from the expansion, not from 1 - sum.
        const double beyond = lattice_series(1.0, 0.0, m_max_ / period_ + 1);
        for (auto& t : tail_) t += beyond;
        if (kind_ == ExcursionKind::SimpleRandomWalk) {
            // Exact P(T > 2K) = C(2K, K) 4^{-K}.
            const double exact = std::exp(log_central_binomial(m_max_ / 2));
            const double shift = exact - tail_[m_max_];
            for (auto& t : tail_) t += shift;
        }
    }

    // log table and suffix sums over the tabulated range, tail_[m_max] = 0.
    void finish_table()
    {
        log_prob_.assign(prob_.size(), kNegInf);
        for (std::size_t m = 1; m < prob_.size(); ++m)
            if (prob_[m] > 0.0) log_prob_[m] = std::log(prob_[m]);
        tail_.assign(prob_.size(), 0.0);
        double acc = 0.0;
        for (long m = m_max_; m >= 1; --m) {
            tail_[m] = acc;
            acc += prob_[m];
        }
        tail_[0] = acc;
    }

    // sum_{k >= k0} (A k^{-a}(1 + d1/k + d2/k^2))^t e^{-g t p k}.
    double power_sum(double t, double g, long k0) const
    {
        const double c = g * t * static_cast<double>(period_);
        const double s = alpha_ * t;
        const double e1 = t * d1_;
        const double e2 = t * d2_ + 0.5 * t * (t - 1.0) * d1_ * d1_;
        double sum = power_exp_tail(s, c, k0);
        if (e1 != 0.0) sum += e1 * power_exp_tail(s + 1.0, c, k0);
        if (e2 != 0.0) sum += e2 * power_exp_tail(s + 2.0, c, k0);
        return std::pow(amp_, t) * sum;
    }

    double lattice_series(double t, double g, long k0) const { return power_sum(t, g, k0); }

    ExcursionKind kind_ = ExcursionKind::Custom;
    double alpha_ = 0.0;
    long period_ = 1;
    long m_max_ = 0;
    double amp_ = 0.0;
    double d1_ = 0.0;
    double d2_ = 0.0;
    std::vector<double> prob_;
    std::vector<double> log_prob_;
    std::vector<double> tail_;
};

}  // namespace copolymer

#endif  // COPOLYMER_EXCURSIONS_HPP
