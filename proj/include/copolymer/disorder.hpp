#ifndef COPOLYMER_DISORDER_HPP
#define COPOLYMER_DISORDER_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "copolymer/numeric.hpp"
#include "copolymer/quadrature.hpp"
#include "copolymer/random.hpp"

namespace copolymer {

enum class DisorderKind { Binary, Gaussian, DiscreteCustom };

inline std::string to_string(DisorderKind kind)
{
    switch (kind) {
    case DisorderKind::Binary: return "binary";
    case DisorderKind::Gaussian: return "gaussian";
    case DisorderKind::DiscreteCustom: return "discrete";
    }
    return "unknown";
}

/// Log-probability bound of the lower-tail concentration inequality.
/// `impossible` means the event is empty (threshold beyond the support).
struct TailBound
{
    bool impossible = false;
    double log_bound = 0.0;
};

/// Letter law nu with zero mean and unit variance.
///
/// Sign convention: M(l) = log E exp(-l x), so G = M' is the mean of -x under
/// the tilted law and chi = lim G = -(lowest support point).
class DisorderModel
{
public:
    static constexpr std::size_t kMaxAtoms = 1000;

    static DisorderModel binary()
    {
        DisorderModel m;
        m.kind_ = DisorderKind::Binary;
        m.support_ = {-1.0, 1.0};
        m.weights_ = {0.5, 0.5};
        return m;
    }

    static DisorderModel gaussian()
    {
        DisorderModel m;
        m.kind_ = DisorderKind::Gaussian;
        return m;
    }

    static DisorderModel discrete(std::vector<double> support, std::vector<double> weights)
    {
        if (support.empty() || support.size() != weights.size())
            throw std::invalid_argument("discrete disorder: support and weights must match and be nonempty");
        if (support.size() > kMaxAtoms)
            throw std::invalid_argument("discrete disorder: at most 1000 atoms");
        double total = 0.0, mean = 0.0, second = 0.0;
        for (std::size_t i = 0; i < support.size(); ++i) {
            if (!(weights[i] >= 0.0) || !std::isfinite(support[i]))
                throw std::invalid_argument("discrete disorder: weights must be >= 0, atoms finite");
            total += weights[i];
            mean += weights[i] * support[i];
            second += weights[i] * support[i] * support[i];
        }
        if (std::abs(total - 1.0) > 1e-12)
            throw std::invalid_argument("discrete disorder: weights must sum to 1");
        if (std::abs(mean) > 1e-12) throw std::invalid_argument("discrete disorder: mean must be 0");
        if (std::abs(second - 1.0) > 1e-12)
            throw std::invalid_argument("discrete disorder: variance must be 1");
        DisorderModel m;
        m.kind_ = DisorderKind::DiscreteCustom;
        // Drop null atoms; they never matter and would spoil chi.
        for (std::size_t i = 0; i < support.size(); ++i) {
            if (weights[i] > 0.0) {
                m.support_.push_back(support[i]);
                m.weights_.push_back(weights[i]);
            }
        }
        return m;
    }

    DisorderKind kind() const { return kind_; }
    bool is_discrete() const { return kind_ != DisorderKind::Gaussian; }
    const std::vector<double>& support() const { return support_; }
    const std::vector<double>& weights() const { return weights_; }

    /// M(l) = log E e^{-l x}.
    double cumulant(double lambda) const
    {
        if (lambda == 0.0) return 0.0;  // exact even when the weights sum to 1 only up to rounding
        switch (kind_) {
        case DisorderKind::Binary: {
            const double a = std::abs(lambda);
            return a + std::log1p(std::exp(-2.0 * a)) - std::numbers::ln2;
        }
        case DisorderKind::Gaussian: return 0.5 * lambda * lambda;
        case DisorderKind::DiscreteCustom: {
            LogAccumulator acc;
            for (std::size_t i = 0; i < support_.size(); ++i)
                acc.add(std::log(weights_[i]) - lambda * support_[i]);
            return acc.value();
        }
        }
        return 0.0;
    }

    /// G = M'.
    double slope(double lambda) const
    {
        switch (kind_) {
        case DisorderKind::Binary: return std::tanh(lambda);
        case DisorderKind::Gaussian: return lambda;
        case DisorderKind::DiscreteCustom: {
            const auto [mean, var] = tilted_moments(lambda);
            (void)var;
            return -mean;
        }
        }
        return 0.0;
    }

    /// G' = variance of the tilted law.
    double curvature(double lambda) const
    {
        switch (kind_) {
        case DisorderKind::Binary: {
            const double t = std::tanh(lambda);
            return 1.0 - t * t;
        }
        case DisorderKind::Gaussian: return 1.0;
        case DisorderKind::DiscreteCustom: return tilted_moments(lambda).second;
        }
        return 0.0;
    }

    /// F(l) = l G(l) - M(l).
    double legendre(double lambda) const { return lambda * slope(lambda) - cumulant(lambda); }

    double chi() const
    {
        if (kind_ == DisorderKind::Gaussian) return kPosInf;
        return -*std::min_element(support_.begin(), support_.end());
    }

    /// lim F(l) as l -> inf: -log nu(lowest atom), +inf for Gaussian.
    double legendre_at_infinity() const
    {
        if (kind_ == DisorderKind::Gaussian) return kPosInf;
        const double lo = *std::min_element(support_.begin(), support_.end());
        double w = 0.0;
        for (std::size_t i = 0; i < support_.size(); ++i)
            if (support_[i] == lo) w += weights_[i];
        return -std::log(w);
    }

    /// H = G^{-1} on [0, chi). Bracket grows until G(hi) >= y, then safeguarded Newton.
    double inverse_slope(double y) const
    {
        if (!(y >= 0.0) || !(y < chi()))
            throw std::domain_error("inverse_slope: requires 0 <= y < chi, got y=" + std::to_string(y));
        if (y == 0.0) return 0.0;
        if (kind_ == DisorderKind::Gaussian) return y;
        double lo = 0.0, hi = 1.0;
        while (slope(hi) < y) {
            lo = hi;
            hi *= 2.0;
            if (hi > 1e6) throw std::domain_error("inverse_slope: bracket did not close");
        }
        double x = 0.5 * (lo + hi);
        for (int iter = 0; iter < 300; ++iter) {
            const double r = slope(x) - y;
            if (r == 0.0) return x;
            if (r > 0.0) hi = x; else lo = x;
            const double d = curvature(x);
            double next = (d > 0.0) ? x - r / d : 0.5 * (lo + hi);
            if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
            if (std::abs(next - x) <= 1e-12 * std::max(1.0, x) || hi - lo <= 1e-12 * std::max(1.0, x))
                return next;
            x = next;
        }
        return x;
    }

    /// F(H(y)) for 0 <= y <= chi; at y = chi the limiting value.
    double rate(double y) const
    {
        if (!(y >= 0.0)) throw std::domain_error("rate: requires y >= 0");
        if (y > chi()) return kPosInf;
        if (y == chi()) return legendre_at_infinity();
        return legendre(inverse_slope(y));
    }

    /// Lower-tail bound P(sum_{k<=n} w_k <= -A - nB) <= exp(-n F(H(A/n + B))).
    /// At the support edge the bound is the exact atom probability nu(lowest)^n.
    TailBound tail_bound(long n, double A, double B) const
    {
        if (n < 1) throw std::invalid_argument("tail_bound: n must be >= 1");
        const double y = A / static_cast<double>(n) + B;
        if (y > chi()) return {true, kNegInf};
        return {false, -static_cast<double>(n) * rate(y)};
    }

    /// C = 1/2 [F(H(B)) min F(H(1))].
    double concentration_constant(double B) const
    {
        return 0.5 * std::min(rate(B), rate(std::min(1.0, chi())));
    }

    std::vector<double> sample(std::size_t n, std::uint64_t seed) const
    {
        std::vector<double> out(n);
        Rng rng(seed);
        switch (kind_) {
        case DisorderKind::Binary:
            for (std::size_t i = 0; i < n; ++i) out[i] = (rng() >> 63) ? 1.0 : -1.0;
            break;
        case DisorderKind::Gaussian: {
            std::normal_distribution<double> normal;
            for (auto& x : out) x = normal(rng);
            break;
        }
        case DisorderKind::DiscreteCustom: {
            std::discrete_distribution<std::size_t> pick(weights_.begin(), weights_.end());
            for (auto& x : out) x = support_[pick(rng)];
            break;
        }
        }
        return out;
    }

    /// Finite alphabet stand-in. Gaussian maps to the Gauss-Hermite grid of the
    /// given order, which matches mean and variance exactly; discrete laws are returned as is.
    DisorderModel quantized(std::size_t points = 21) const
    {
        if (is_discrete()) return *this;
        const auto& rule = GaussHermite::cached(points);
        std::vector<double> x = rule.nodes(), w = rule.weights();
        // Symmetrize and renormalise so the moment checks hold to rounding.
        double total = 0.0, second = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) total += w[i];
        for (auto& wi : w) wi /= total;
        for (std::size_t i = 0; i < x.size(); ++i) second += w[i] * x[i] * x[i];
        const double scale = 1.0 / std::sqrt(second);
        for (auto& xi : x) xi *= scale;
        for (std::size_t i = 0; i < x.size() / 2; ++i) x[x.size() - 1 - i] = -x[i];
        if (x.size() % 2 == 1) x[x.size() / 2] = 0.0;
        DisorderModel m;
        m.kind_ = DisorderKind::DiscreteCustom;
        m.support_ = std::move(x);
        m.weights_ = std::move(w);
        return m;
    }

private:
    DisorderModel() = default;

    // Mean and variance of x under nu_l(dx) = e^{-l x - M(l)} nu(dx).
    std::pair<double, double> tilted_moments(double lambda) const
    {
        double top = kNegInf;
        for (double s : support_) top = std::max(top, -lambda * s);
        double z = 0.0, m1 = 0.0, m2 = 0.0;
        for (std::size_t i = 0; i < support_.size(); ++i) {
            const double w = weights_[i] * std::exp(-lambda * support_[i] - top);
            z += w;
            m1 += w * support_[i];
            m2 += w * support_[i] * support_[i];
        }
        m1 /= z;
        m2 /= z;
        return {m1, std::max(0.0, m2 - m1 * m1)};
    }

    DisorderKind kind_ = DisorderKind::Gaussian;
    std::vector<double> support_;
    std::vector<double> weights_;
};

}  // namespace copolymer

#endif  // COPOLYMER_DISORDER_HPP
