#ifndef COPOLYMER_FALPHA_HPP
#define COPOLYMER_FALPHA_HPP

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "copolymer/numeric.hpp"
#include "copolymer/quadrature.hpp"

namespace copolymer {

/// f_alpha(z) = {1/2 (1 + z^alpha)}^{1/alpha}, z >= 0, alpha > 1.
class FAlpha
{
public:
    explicit FAlpha(double alpha) : alpha_(alpha)
    {
        if (!(alpha > 1.0)) throw std::domain_error("FAlpha: alpha must be > 1");
    }

    double alpha() const { return alpha_; }

    double operator()(double z) const
    {
        if (z < 0.0) throw std::domain_error("FAlpha: z must be >= 0");
        if (z == 0.0) return std::pow(0.5, 1.0 / alpha_);
        return std::exp(log_at_log(std::log(z)));
    }

    /// log f(e^t), safe for any t.
    double log_at_log(double t) const { return (log1p_exp(alpha_ * t) - std::numbers::ln2) / alpha_; }

    double derivative(double z) const
    {
        if (z <= 0.0) return 0.0;
        const double u = 0.5 * (1.0 + std::pow(z, alpha_));
        return 0.5 * std::pow(z, alpha_ - 1.0) * std::pow(u, 1.0 / alpha_ - 1.0);
    }

    double second_derivative(double z) const
    {
        if (z <= 0.0) return alpha_ > 2.0 ? 0.0 : (alpha_ == 2.0 ? 0.25 * std::pow(0.5, -1.5) : kPosInf);
        const double u = 0.5 * (1.0 + std::pow(z, alpha_));
        return 0.25 * (alpha_ - 1.0) * std::pow(z, alpha_ - 2.0) * std::pow(u, 1.0 / alpha_ - 2.0);
    }

    /// f(e^t) - 1 - (e^t - 1)/2, accurate for small |t|.
    double excess_at_log(double t) const
    {
        // With s = t/2 + log cosh(alpha t/2)/alpha the linear parts cancel exactly:
        // e^s - 1 - (e^t - 1)/2 = (s - t/2) + [e^s - 1 - s] - [e^t - 1 - t]/2.
        const double lc = log_cosh(0.5 * alpha_ * t) / alpha_;
        const double s = 0.5 * t + lc;
        return lc + expm1_minus_x(s) - 0.5 * expm1_minus_x(t);
    }

    /// Split f(e^t) = A(t) + e^t C(t) with A and C bounded by 2^{-1/alpha}.
    double lower_part(double t) const
    {
        return std::exp((1.0 / alpha_ - 1.0) * log1p_exp(alpha_ * t) - std::numbers::ln2 / alpha_);
    }
    double upper_part(double t) const
    {
        return std::exp((1.0 / alpha_ - 1.0) * log1p_exp(-alpha_ * t) - std::numbers::ln2 / alpha_);
    }

    /// 2^{1 - 1/alpha}: sup of E f(Z) over laws with E Z = 1.
    double jensen_cap() const { return std::pow(2.0, 1.0 - 1.0 / alpha_); }

private:
    static double expm1_minus_x(double x)
    {
        if (std::abs(x) < 1e-3) return x * x * (0.5 + x * (1.0 / 6.0 + x * (1.0 / 24.0 + x * (1.0 / 120.0))));
        return std::expm1(x) - x;
    }

    static double log_cosh(double v)
    {
        const double a = std::abs(v);
        if (a < 1e-2) {
            const double v2 = v * v;
            return v2 * (0.5 + v2 * (-1.0 / 12.0 + v2 * (1.0 / 45.0 - v2 * 17.0 / 2520.0)));
        }
        return a + std::log1p(std::exp(-2.0 * a)) - std::numbers::ln2;
    }

    double alpha_;
};

struct ExpectationOptions
{
    std::size_t gh_order = 96;
    double tol = 1e-13;          // adaptive branch, absolute for y >= 1, relative to y below
    double smooth_limit = 0.02;  // alpha^2 y below this uses Gauss-Hermite
};

/// E_alpha(y, B) - 1 where E_alpha(y, B) = E f_alpha(exp(-2 B y - 2 sqrt(y) X)), X ~ N(0, 1).
/// Small y: Gauss-Hermite on the second-order remainder plus the exact mean term,
/// so the O(y) value keeps full relative precision. Otherwise the integrand is split
/// into its bounded parts and integrated adaptively around the transition at Z = 1.
inline double gaussian_falpha_excess(const FAlpha& f, double y, double B, const ExpectationOptions& opt = {})
{
    if (!(y >= 0.0)) throw std::domain_error("gaussian_falpha_excess: y must be >= 0");
    if (y == 0.0) return 0.0;
    const double sy = std::sqrt(y);
    const double alpha = f.alpha();
    const double mean_term = 0.5 * std::expm1(2.0 * y * (1.0 - B));
    if (alpha * alpha * y <= opt.smooth_limit) {
        const auto& gh = GaussHermite::cached(opt.gh_order);
        const double rem = gh.integrate([&](double x) { return f.excess_at_log(-2.0 * B * y - 2.0 * sy * x); });
        return rem + mean_term;
    }
    constexpr double kEdge = 39.0;
    const double norm = 1.0 / std::sqrt(2.0 * std::numbers::pi);
    const double tol = opt.tol * std::min(1.0, y);
    auto integrate_split = [&](auto&& fn, double cut) {
        if (cut <= -kEdge || cut >= kEdge) return gauss_kronrod(fn, -kEdge, kEdge, tol).value;
        return gauss_kronrod(fn, -kEdge, cut, 0.5 * tol).value + gauss_kronrod(fn, cut, kEdge, 0.5 * tol).value;
    };
    // E A(Z): transition where t = 0, i.e. x = -B sqrt(y).
    const double lower = integrate_split(
        [&](double x) { return norm * std::exp(-0.5 * x * x) * f.lower_part(-2.0 * B * y - 2.0 * sy * x); }, -B * sy);
    // E Z C(Z) = E Z * E' C(Z') with Z' the size-biased variable, t' = (4 - 2B) y - 2 sqrt(y) x.
    const double upper = integrate_split(
        [&](double x) { return norm * std::exp(-0.5 * x * x) * f.upper_part((4.0 - 2.0 * B) * y - 2.0 * sy * x); },
        (2.0 - B) * sy);
    return lower + std::exp(2.0 * y * (1.0 - B)) * upper - 1.0;
}

inline double gaussian_falpha_expectation(const FAlpha& f, double y, double B, const ExpectationOptions& opt = {})
{
    return 1.0 + gaussian_falpha_excess(f, y, B, opt);
}

}  // namespace copolymer

#endif  // COPOLYMER_FALPHA_HPP
