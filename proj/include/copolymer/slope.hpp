#ifndef COPOLYMER_SLOPE_HPP
#define COPOLYMER_SLOPE_HPP

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "copolymer/excursions.hpp"
#include "copolymer/falpha.hpp"
#include "copolymer/quadrature.hpp"
#include "copolymer/roots.hpp"

namespace copolymer {

/// E_alpha(y, B) for the standard Gaussian.
inline double expectation_E(double y, double B, double alpha, const ExpectationOptions& opt = {})
{
    if (!(y > 0.0)) throw std::domain_error("expectation_E: y must be > 0");
    return gaussian_falpha_expectation(FAlpha(alpha), y, B, opt);
}

struct SlopeQuadrature
{
    ExpectationOptions inner;
    double outer_tol = 1e-11;

    /// Same scheme with twice the Hermite order and tighter tolerances.
    SlopeQuadrature refined() const
    {
        SlopeQuadrature q = *this;
        q.inner.gh_order *= 2;
        q.inner.tol *= 0.1;
        q.outer_tol *= 0.1;
        return q;
    }
};

/// I_alpha(B) = int_0^inf y^{-alpha} [E_alpha(y, B) - 1] dy, 1 < alpha < 2.
/// Both halves are mapped to (0, 1] by power substitutions whose exponents make
/// the transformed integrand vanish linearly at u = 0: y = u^k on (0, 1] and
/// y = u^{-k'} on [1, inf).
inline IntegralResult integral_I(double B, double alpha, const SlopeQuadrature& q = {})
{
    if (!(alpha > 1.0 && alpha < 2.0)) throw std::domain_error("integral_I: alpha must lie in (1, 2)");
    if (!(B >= 1.0)) throw std::domain_error("integral_I: B must be >= 1");
    const FAlpha f(alpha);
    const double k_low = std::max(2.0, std::ceil(2.0 / (2.0 - alpha)));
    const double k_high = std::max(2.0, std::ceil(2.0 / (alpha - 1.0)));
    auto low = [&](double u) {
        if (u <= 0.0) return 0.0;
        // k u^{k-1} y^{-alpha} (E - 1) = k u^{k(2-alpha)-1} (E - 1)/y
        const double y = std::pow(u, k_low);
        const double ratio = y < 1e-200 ? 0.5 * (1.0 + alpha) - B : gaussian_falpha_excess(f, y, B, q.inner) / y;
        return k_low * std::pow(u, k_low * (2.0 - alpha) - 1.0) * ratio;
    };
    auto high = [&](double u) {
        if (u <= 0.0) return 0.0;
        const double y = std::pow(u, -k_high);
        return k_high * std::pow(u, k_high * (alpha - 1.0) - 1.0) * gaussian_falpha_excess(f, y, B, q.inner);
    };
    const auto a = gauss_kronrod(low, 0.0, 1.0, 0.5 * q.outer_tol);
    const auto b = gauss_kronrod(high, 0.0, 1.0, 0.5 * q.outer_tol);
    return {a.value + b.value, a.error + b.error, a.evaluations + b.evaluations};
}

struct SlopeResult
{
    double alpha = 0.0;
    double B_alpha = 0.0;  // NaN outside (1, 2)
    double K_c_star = 0.0;
    double quadrature_error = 0.0;  // |B(q) - B(refined q)|
    double root_residual = 0.0;     // I_alpha(B)
};

/// Root of the decreasing map B -> I_alpha(B) on [1, B_hi], B_hi doubled up to 64.
inline RootResult solve_B(double alpha, const SlopeQuadrature& q = {}, double b_tol = 1e-12)
{
    if (!(alpha > 1.0 && alpha < 2.0)) throw std::domain_error("solve_B: alpha must lie in (1, 2)");
    auto I = [&](double B) { return integral_I(B, alpha, q).value; };
    if (!(I(1.0) > 0.0)) throw std::runtime_error("solve_B: I_alpha(1) is not positive");
    double hi = 2.0;
    while (I(hi) >= 0.0) {
        hi *= 2.0;
        if (hi > 64.0) throw std::runtime_error("solve_B: no sign change below B = 64");
    }
    return bisect(I, 1.0, hi, b_tol);
}

/// K_c^*(alpha): B(alpha)/alpha for 1 < alpha < 2, (1 + alpha)/(2 alpha) for alpha >= 2.
inline double kc_star(double alpha, const SlopeQuadrature& q = {})
{
    if (!(alpha > 1.0)) throw std::domain_error("kc_star: alpha must be > 1");
    if (alpha >= 2.0) return (1.0 + alpha) / (2.0 * alpha);
    return solve_B(alpha, q).root / alpha;
}

/// Full table row: root, residual, and stability under quadrature refinement.
inline SlopeResult slope_constants(double alpha, const SlopeQuadrature& q = {})
{
    SlopeResult r;
    r.alpha = alpha;
    if (alpha >= 2.0) {
        r.B_alpha = std::nan("");
        r.K_c_star = kc_star(alpha);
        return r;
    }
    const auto coarse = solve_B(alpha, q);
    const auto fine = solve_B(alpha, q.refined());
    r.B_alpha = coarse.root;
    r.K_c_star = coarse.root / alpha;
    r.root_residual = integral_I(coarse.root, alpha, q).value;
    r.quadrature_error = std::abs(coarse.root - fine.root);
    return r;
}

/// E_alpha(y, B) - 1 - y [(1 + alpha)/2 - B].
inline double expansion_residual(double y, double B, double alpha, const ExpectationOptions& opt = {})
{
    return gaussian_falpha_excess(FAlpha(alpha), y, B, opt) - y * (0.5 * (1.0 + alpha) - B);
}

/// Smallest K with |residual(y)| <= K y^{3/2} over the given y's.
inline double expansion_constant(std::span<const double> ys, double B, double alpha)
{
    double K = 0.0;
    for (double y : ys) K = std::max(K, std::abs(expansion_residual(y, B, alpha)) / std::pow(y, 1.5));
    return K;
}

/// Weak-coupling series N(beta, B beta / alpha) = sum_m rho(m) E_alpha((beta/alpha)^2 m, B)
/// for Gaussian disorder. Returns N - 1. Exact terms up to m_exact, then geometric
/// blocks carrying their exact rho-mass with a three-point rule in log m, up to m where
/// the remaining mass times the Jensen cap is below tail_eps.
inline double weak_coupling_excess(const ExcursionLaw& law, double beta, double B, double alpha,
                                   long m_exact = 4096, double tail_eps = 1e-14)
{
    const FAlpha f(alpha);
    const double scale = (beta / alpha) * (beta / alpha);
    auto term = [&](double m) { return gaussian_falpha_excess(f, scale * m, B); };
    const long p = law.period();
    double sum = 0.0;
    long m = p;
    for (; m <= m_exact; m += p) sum += law.prob(m) * term(static_cast<double>(m));
    // Blocks (a, b] on the lattice.
    long a = m - p;
    const double cap = std::abs(f.jensen_cap() - 1.0) + 1.0;
    while (law.tail(a) * cap > tail_eps && a < 4'000'000'000'000L) {
        long b = std::max(a + p, static_cast<long>(static_cast<double>(a) * 1.01) / p * p);
        const double mass = law.tail(a) - law.tail(b);
        const double lo = static_cast<double>(a + p), hi = static_cast<double>(b);
        const double mid = std::sqrt(lo * hi);
        sum += mass * (term(lo) + 4.0 * term(mid) + term(hi)) / 6.0;
        a = b;
    }
    return sum;
}

/// Limit of (1/beta^2)[N(beta, B beta / alpha) - 1] for alpha >= 2 with finite mean excursion.
inline double weak_coupling_limit(const ExcursionLaw& law, double B, double alpha)
{
    return (0.5 * (1.0 + alpha) - B) * law.mean_length() / (alpha * alpha);
}

struct TailCondition
{
    std::vector<long> M;
    std::vector<double> ratio;  // M rho_bar(M) / sum_{m <= M} m rho(m)
    bool vanishing = false;
};

/// Diagnostic for M sum_{m > M} rho(m) = o(partial first moment): the ratio must
/// decrease along the grid and lose at least a quarter of its value.
inline TailCondition tail_condition(const ExcursionLaw& law, long m_top = 1'000'000)
{
    TailCondition out;
    double partial = 0.0;
    long m = 0;
    for (long M = 1000; M <= m_top; M *= 10) {
        for (; m < M;) {
            ++m;
            partial += static_cast<double>(m) * law.prob(m);
        }
        out.M.push_back(M);
        out.ratio.push_back(static_cast<double>(M) * law.tail(M) / partial);
    }
    out.vanishing = out.ratio.size() >= 2 && out.ratio.back() < 0.75 * out.ratio.front();
    for (std::size_t i = 1; i < out.ratio.size(); ++i)
        if (out.ratio[i] > out.ratio[i - 1]) out.vanishing = false;
    return out;
}

}  // namespace copolymer

#endif  // COPOLYMER_SLOPE_HPP
