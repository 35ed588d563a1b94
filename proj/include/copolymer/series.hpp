#ifndef COPOLYMER_SERIES_HPP
#define COPOLYMER_SERIES_HPP

#include <cmath>
#include <stdexcept>

#include "copolymer/numeric.hpp"
#include "copolymer/quadrature.hpp"

namespace copolymer {

namespace detail {

// j-th derivative of x^{-s} e^{-c x} at x.
inline double power_exp_derivative(double s, double c, double x, int j)
{
    double total = 0.0;
    double binom = 1.0;
    for (int i = 0; i <= j; ++i) {
        // (x^{-s})^{(i)} = (-1)^i s (s+1) ... (s+i-1) x^{-s-i}
        double rising = 1.0;
        for (int r = 0; r < i; ++r) rising *= s + r;
        const double dpow = ((i % 2) ? -1.0 : 1.0) * rising * std::pow(x, -s - i);
        const double dexp = std::pow(-c, j - i);
        total += binom * dpow * dexp;
        binom = binom * (j - i) / (i + 1);
    }
    return total * std::exp(-c * x);
}

// int_K^inf x^{-s} e^{-c x} dx for c > 0, on the log scale x = K e^t.
// The factor e^{-cK} is pulled out so the integrand is O(1) at t = 0 and the
// relative tolerance never sinks into denormals.
inline double power_exp_integral(double s, double c, double K)
{
    const double cK = c * K;
    const double upper = std::log1p(745.0 / cK) + 1.0;
    auto integrand = [&](double t) { return std::exp((1.0 - s) * t - cK * std::expm1(t)); };
    const double rough = adaptive_simpson(integrand, 0.0, upper, 1e-6).value;
    const double value = adaptive_simpson(integrand, 0.0, upper, 1e-14 * std::max(rough, 1e-300), 40).value;
    return std::pow(K, 1.0 - s) * std::exp(-cK) * value;
}

}  // namespace detail

/// sum_{k >= k0} k^{-s} e^{-c k} for integer k0 >= 1.
/// c = 0 needs s > 1 (Hurwitz zeta). For small c the sum is split into a
/// direct head and an Euler-Maclaurin tail; for larger c it converges directly.
inline double power_exp_tail(double s, double c, long k0)
{
    if (k0 < 1) throw std::domain_error("power_exp_tail: k0 must be >= 1");
    if (c < 0.0) throw std::domain_error("power_exp_tail: negative damping diverges");
    if (c == 0.0) {
        if (!(s > 1.0)) return kPosInf;
        return hurwitz_zeta(s, static_cast<double>(k0));
    }
    double sum = 0.0;
    long k = k0;
    if (c >= 0.1) {
        for (;; ++k) {
            const double term = std::pow(static_cast<double>(k), -s) * std::exp(-c * static_cast<double>(k));
            sum += term;
            if (term <= 1e-18 * sum || term == 0.0) break;
        }
        return sum;
    }
    constexpr long kHead = 64;
    for (; k < k0 + kHead; ++k)
        sum += std::pow(static_cast<double>(k), -s) * std::exp(-c * static_cast<double>(k));
    const double K = static_cast<double>(k);
    // Euler-Maclaurin: sum_{k>=K} f = int_K^inf f + f/2 - f'/12 + f'''/720 - f^(5)/30240
    sum += detail::power_exp_integral(s, c, K);
    sum += 0.5 * detail::power_exp_derivative(s, c, K, 0);
    sum -= detail::power_exp_derivative(s, c, K, 1) / 12.0;
    sum += detail::power_exp_derivative(s, c, K, 3) / 720.0;
    sum -= detail::power_exp_derivative(s, c, K, 5) / 30240.0;
    return sum;
}

}  // namespace copolymer

#endif  // COPOLYMER_SERIES_HPP
