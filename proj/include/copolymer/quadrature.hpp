#ifndef COPOLYMER_QUADRATURE_HPP
#define COPOLYMER_QUADRATURE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace copolymer {

/// Gauss-Hermite rule normalised against the standard Gaussian density:
///   integrate(f) ~ int phi(x) f(x) dx,   phi(x) = e^{-x^2/2} / sqrt(2 pi).
/// Nodes come from Newton iteration on the orthonormal Hermite recurrence.
class GaussHermite
{
public:
    explicit GaussHermite(std::size_t order) : nodes_(order), weights_(order)
    {
        if (order < 1) throw std::invalid_argument("GaussHermite: order must be >= 1");
        build(order);
    }

    std::size_t order() const { return nodes_.size(); }
    const std::vector<double>& nodes() const { return nodes_; }
    const std::vector<double>& weights() const { return weights_; }

    template <class Fn>
    double integrate(Fn&& fn) const
    {
        double sum = 0.0;
        for (std::size_t i = 0; i < nodes_.size(); ++i) sum += weights_[i] * fn(nodes_[i]);
        return sum;
    }

    /// E f(mean + sd X) for X standard Gaussian.
    template <class Fn>
    double expectation(double mean, double sd, Fn&& fn) const
    {
        return integrate([&](double x) { return fn(mean + sd * x); });
    }

    /// Shared immutable rule per order.
    static const GaussHermite& cached(std::size_t order)
    {
        static std::mutex mutex;
        static std::map<std::size_t, std::unique_ptr<GaussHermite>> rules;
        std::lock_guard lock(mutex);
        auto& slot = rules[order];
        if (!slot) slot = std::make_unique<GaussHermite>(order);
        return *slot;
    }

private:
    // Physicists' rule (weight e^{-t^2}) then rescaled: x = sqrt(2) t, w / sqrt(pi).
    void build(std::size_t n)
    {
        const double pim4 = std::pow(std::numbers::pi, -0.25);
        const std::size_t m = (n + 1) / 2;
        std::vector<double> t(n), w(n);
        double z = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            const double nn = static_cast<double>(n);
            if (i == 0) {
                z = std::sqrt(2.0 * nn + 1.0) - 1.85575 * std::pow(2.0 * nn + 1.0, -0.16667);
            } else if (i == 1) {
                z -= 1.14 * std::pow(nn, 0.426) / z;
            } else if (i == 2) {
                z = 1.86 * z - 0.86 * t[0];
            } else if (i == 3) {
                z = 1.91 * z - 0.91 * t[1];
            } else {
                z = 2.0 * z - t[i - 2];
            }
            double pp = 0.0;
            for (int iter = 0; iter < 200; ++iter) {
                double p1 = pim4, p2 = 0.0;
                for (std::size_t j = 0; j < n; ++j) {
                    const double p3 = p2;
                    p2 = p1;
                    const double jj = static_cast<double>(j);
                    p1 = z * std::sqrt(2.0 / (jj + 1.0)) * p2 - std::sqrt(jj / (jj + 1.0)) * p3;
                }
                pp = std::sqrt(2.0 * nn) * p2;
                const double z1 = z;
                z = z1 - p1 / pp;
                if (std::abs(z - z1) <= 1e-15 * std::max(1.0, std::abs(z))) break;
            }
            t[i] = z;
            t[n - 1 - i] = -z;
            w[i] = 2.0 / (pp * pp);
            w[n - 1 - i] = w[i];
        }
        const double inv_sqrt_pi = 1.0 / std::sqrt(std::numbers::pi);
        for (std::size_t i = 0; i < n; ++i) {
            nodes_[i] = std::numbers::sqrt2 * t[n - 1 - i];
            weights_[i] = w[n - 1 - i] * inv_sqrt_pi;
        }
    }

    std::vector<double> nodes_;
    std::vector<double> weights_;
};

struct IntegralResult
{
    double value = 0.0;
    double error = 0.0;
    std::size_t evaluations = 0;
};

namespace detail {

template <class Fn>
double adaptive_simpson_step(Fn& fn, double a, double b, double fa, double fm, double fb,
                             double whole, double tol, int depth, IntegralResult& out)
{
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = fn(lm);
    const double frm = fn(rm);
    out.evaluations += 2;
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
        out.error += std::abs(delta) / 15.0;
        return left + right + delta / 15.0;
    }
    return adaptive_simpson_step(fn, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, out) +
           adaptive_simpson_step(fn, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, out);
}

}  // namespace detail

/// Adaptive Simpson on [a, b] with Richardson correction; error is the
/// accumulated local estimate.
template <class Fn>
IntegralResult adaptive_simpson(Fn&& fn, double a, double b, double tol, int max_depth = 32)
{
    IntegralResult out;
    // Seed with a uniform split so narrow features are not missed.
    constexpr int kPanels = 16;
    const double h = (b - a) / kPanels;
    for (int p = 0; p < kPanels; ++p) {
        const double lo = a + p * h;
        const double hi = (p + 1 == kPanels) ? b : lo + h;
        const double flo = fn(lo);
        const double fhi = fn(hi);
        const double fmid = fn(0.5 * (lo + hi));
        out.evaluations += 3;
        const double whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
        out.value += detail::adaptive_simpson_step(fn, lo, hi, flo, fmid, fhi, whole,
                                                   tol / kPanels, max_depth, out);
    }
    return out;
}

namespace detail {

struct KronrodPanel
{
    double a, b, value, error;
    bool operator<(const KronrodPanel& o) const { return error < o.error; }
};

template <class Fn>
KronrodPanel kronrod15(Fn& fn, double a, double b)
{
    static constexpr double xk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                                     0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                                     0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                                     0.207784955007898467600689403773245, 0.0};
    static constexpr double wk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                                     0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                                     0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                                     0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
    static constexpr double wg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                     0.381830050505118944950369775488975, 0.417959183673469387755102040816327};
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    const double fc = fn(c);
    double k = wk[7] * fc, g = wg[3] * fc;
    for (int j = 0; j < 7; ++j) {
        const double f1 = fn(c - h * xk[j]), f2 = fn(c + h * xk[j]);
        k += wk[j] * (f1 + f2);
        if (j % 2 == 1) g += wg[j / 2] * (f1 + f2);
    }
    return {a, b, k * h, std::abs((k - g) * h)};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod (7/15): bisects the panel with the largest
/// error estimate until the summed estimate drops below tol.
template <class Fn>
IntegralResult gauss_kronrod(Fn&& fn, double a, double b, double tol, int initial_panels = 8,
                             std::size_t max_panels = 4000)
{
    std::vector<detail::KronrodPanel> heap;
    IntegralResult out;
    const double h = (b - a) / initial_panels;
    for (int p = 0; p < initial_panels; ++p)
        heap.push_back(detail::kronrod15(fn, a + p * h, p + 1 == initial_panels ? b : a + (p + 1) * h));
    std::make_heap(heap.begin(), heap.end());
    out.evaluations = 15 * heap.size();
    auto total_error = [&] {
        double e = 0.0;
        for (const auto& panel : heap) e += panel.error;
        return e;
    };
    double err = total_error();
    while (err > tol && heap.size() < max_panels) {
        std::pop_heap(heap.begin(), heap.end());
        const auto worst = heap.back();
        heap.pop_back();
        const double m = 0.5 * (worst.a + worst.b);
        auto left = detail::kronrod15(fn, worst.a, m);
        auto right = detail::kronrod15(fn, m, worst.b);
        out.evaluations += 30;
        err += left.error + right.error - worst.error;
        heap.push_back(left);
        std::push_heap(heap.begin(), heap.end());
        heap.push_back(right);
        std::push_heap(heap.begin(), heap.end());
        if (heap.size() % 64 == 0) err = total_error();  // wash out drift
    }
    for (const auto& panel : heap) {
        out.value += panel.value;
        out.error += panel.error;
    }
    return out;
}

}  // namespace copolymer

#endif  // COPOLYMER_QUADRATURE_HPP
