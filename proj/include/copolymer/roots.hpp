#ifndef COPOLYMER_ROOTS_HPP
#define COPOLYMER_ROOTS_HPP

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace copolymer {

struct RootResult
{
    double root = 0.0;
    double residual = 0.0;
    int iterations = 0;
};

/// Bisection for a sign change of fn on [lo, hi]. fn(lo) and fn(hi) must
/// have opposite signs (zero counts as either).
template <class Fn>
RootResult bisect(Fn&& fn, double lo, double hi, double x_tol, int max_iter = 200)
{
    double flo = fn(lo);
    double fhi = fn(hi);
    if (flo == 0.0) return {lo, 0.0, 0};
    if (fhi == 0.0) return {hi, 0.0, 0};
    if ((flo > 0.0) == (fhi > 0.0)) throw std::domain_error("bisect: no sign change on bracket");
    RootResult out;
    for (out.iterations = 0; out.iterations < max_iter; ++out.iterations) {
        const double mid = 0.5 * (lo + hi);
        const double fmid = fn(mid);
        if (fmid == 0.0) return {mid, 0.0, out.iterations};
        if ((fmid > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
            fhi = fmid;
        }
        if (hi - lo <= x_tol) break;
    }
    const bool take_lo = std::abs(flo) < std::abs(fhi);
    out.root = take_lo ? lo : hi;
    out.residual = take_lo ? flo : fhi;
    return out;
}

/// Solves increasing(x) = target for a strictly increasing function with
/// derivative, on [0, inf): the upper bracket doubles until it passes the
/// target, then Newton steps are taken when they stay inside the bracket.
template <class Fn, class Deriv>
RootResult solve_increasing(Fn&& fn, Deriv&& deriv, double target, double x_tol,
                            double bracket_start = 1.0, double bracket_cap = 1e300)
{
    double lo = 0.0;
    double hi = bracket_start;
    while (fn(hi) < target) {
        lo = hi;
        hi *= 2.0;
        if (hi > bracket_cap) throw std::domain_error("solve_increasing: target not reachable");
    }
    double x = 0.5 * (lo + hi);
    RootResult out;
    for (out.iterations = 0; out.iterations < 400; ++out.iterations) {
        const double fx = fn(x) - target;
        if (fx == 0.0) {
            lo = hi = x;
            break;
        }
        if (fx < 0.0) lo = x; else hi = x;
        const double d = deriv(x);
        double next = (d > 0.0) ? x - fx / d : lo - 1.0;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        const double step = std::abs(next - x);
        x = next;
        if (step <= x_tol * std::max(1.0, std::abs(x)) || hi - lo <= x_tol) break;
    }
    out.root = x;
    out.residual = fn(x) - target;
    return out;
}

}  // namespace copolymer

#endif  // COPOLYMER_ROOTS_HPP
