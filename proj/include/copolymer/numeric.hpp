#ifndef COPOLYMER_NUMERIC_HPP
#define COPOLYMER_NUMERIC_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>

namespace copolymer {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();
inline constexpr double kPosInf = std::numeric_limits<double>::infinity();
inline constexpr double kLogHalf = -std::numbers::ln2;

/// log(e^a + e^b) without overflow; either argument may be -inf.
inline double log_add_exp(double a, double b)
{
    if (a < b) std::swap(a, b);
    if (b == kNegInf) return a;
    return a + std::log1p(std::exp(b - a));
}

/// log(1 + e^u), stable for large |u|.
inline double log1p_exp(double u)
{
    if (u > 0.0) return u + std::log1p(std::exp(-u));
    return std::log1p(std::exp(u));
}

inline double log_sum_exp(std::span<const double> args)
{
    if (args.empty()) return kNegInf;
    const double top = *std::max_element(args.begin(), args.end());
    if (top == kNegInf || !std::isfinite(top)) return top;
    double sum = 0.0;
    for (double a : args) sum += std::exp(a - top);
    return top + std::log(sum);
}

// Streaming log-sum-exp with a running maximum, single pass.
class LogAccumulator
{
public:
    void add(double log_term)
    {
        if (log_term == kNegInf) return;
        if (log_term <= max_) {
            sum_ += std::exp(log_term - max_);
        } else {
            sum_ = sum_ * std::exp(max_ - log_term) + 1.0;
            max_ = log_term;
        }
    }

    double value() const { return max_ == kNegInf ? kNegInf : max_ + std::log(sum_); }

private:
    double max_ = kNegInf;
    double sum_ = 0.0;
};

inline double log_binomial(double n, double k)
{
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

/// Relative entropy sum p log(p/q) over matched arrays, 0 log 0 = 0.
/// Returns +inf when p puts mass where q does not.
inline double relative_entropy(std::span<const double> p, std::span<const double> q)
{
    if (p.size() != q.size()) throw std::invalid_argument("relative_entropy: size mismatch");
    double h = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] <= 0.0) continue;
        if (q[i] <= 0.0) return kPosInf;
        h += p[i] * std::log(p[i] / q[i]);
    }
    return h;
}

namespace detail {

// Bernoulli numbers B_2, B_4, ..., B_16 for Euler-Maclaurin corrections.
inline constexpr double kBernoulli2k[] = {
    1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0,
    5.0 / 66.0, -691.0 / 2730.0, 7.0 / 6.0, -3617.0 / 510.0};

}  // namespace detail

/// Hurwitz zeta  sum_{k>=0} (a+k)^{-s}  for s > 1, a > 0.
inline double hurwitz_zeta(double s, double a)
{
    if (!(s > 1.0)) throw std::domain_error("hurwitz_zeta: requires s > 1");
    if (!(a > 0.0)) throw std::domain_error("hurwitz_zeta: requires a > 0");
    constexpr int kDirect = 24;
    double sum = 0.0;
    for (int k = 0; k < kDirect; ++k) sum += std::pow(a + k, -s);
    const double x = a + kDirect;
    sum += std::pow(x, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(x, -s);
    // Euler-Maclaurin: + sum_j B_2j/(2j)! * s(s+1)...(s+2j-2) x^{-s-2j+1}
    double rising = s;            // s (s+1) ... (s+2j-2)
    double factorial = 2.0;       // (2j)!
    double xpow = std::pow(x, -s - 1.0);
    for (int j = 1; j <= 8; ++j) {
        const double term = detail::kBernoulli2k[j - 1] / factorial * rising * xpow;
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum)) break;
        rising *= (s + 2.0 * j - 1.0) * (s + 2.0 * j);
        factorial *= (2.0 * j + 1.0) * (2.0 * j + 2.0);
        xpow /= x * x;
    }
    return sum;
}

inline double riemann_zeta(double s) { return hurwitz_zeta(s, 1.0); }

}  // namespace copolymer

#endif  // COPOLYMER_NUMERIC_HPP
