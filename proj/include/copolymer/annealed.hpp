#ifndef COPOLYMER_ANNEALED_HPP
#define COPOLYMER_ANNEALED_HPP

#include <cmath>
#include <cstdint>
#include <memory>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include "copolymer/disorder.hpp"
#include "copolymer/excursions.hpp"
#include "copolymer/numeric.hpp"
#include "copolymer/random.hpp"

namespace copolymer {

/// 0 v [M(2 beta) - 2 beta h].
inline double annealed_excess_free_energy(double beta, double h, const DisorderModel& model)
{
    if (beta < 0.0 || h < 0.0) throw std::domain_error("annealed free energy: beta, h must be >= 0");
    return std::max(0.0, model.cumulant(2.0 * beta) - 2.0 * beta * h);
}

/// M(2 beta) / (2 beta); beta = 0 returns the limit 0.
inline double annealed_critical_h(double beta, const DisorderModel& model)
{
    if (beta < 0.0) throw std::domain_error("annealed critical h: beta must be >= 0");
    if (beta == 0.0) return 0.0;
    return model.cumulant(2.0 * beta) / (2.0 * beta);
}

/// N(beta, h; g) = 1/2 N(g) + 1/2 N(g - [M(2 beta) - 2 beta h]); +inf below g^ann.
inline double annealed_curly_N(double beta, double h, double g, const ExcursionLaw& law,
                               const DisorderModel& model)
{
    const double delta = model.cumulant(2.0 * beta) - 2.0 * beta * h;
    if (g < 0.0 || g - delta < 0.0) return kPosInf;
    return 0.5 * std::exp(law.log_normalizer(g)) + 0.5 * std::exp(law.log_normalizer(g - delta));
}

/// S^ann = log N(beta, h; g).
inline double annealed_S(double beta, double h, double g, const ExcursionLaw& law, const DisorderModel& model)
{
    const double n = annealed_curly_N(beta, h, g, law, model);
    return n == kPosInf ? kPosInf : std::log(n);
}

/// inf{g : S^ann(beta, h; g) < 0} by bisection on the sign (S^ann jumps from
/// +inf to a finite value at g^ann, so this is a sign change, not a smooth root).
inline double annealed_S_root(double beta, double h, const ExcursionLaw& law, const DisorderModel& model,
                              double tol = 1e-12)
{
    double lo = 0.0, hi = 1.0;
    auto negative = [&](double g) { return annealed_S(beta, h, g, law, model) < 0.0; };
    if (negative(0.0)) return 0.0;
    while (!negative(hi)) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e6) throw std::domain_error("annealed_S_root: no sign change");
    }
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (negative(mid)) hi = mid; else lo = mid;
    }
    // At h = h_c^ann the sign change sits at 0 where S^ann = 0 exactly.
    if (annealed_S(beta, h, lo, law, model) == 0.0) return lo;
    return hi;
}

/// Enumerated words y = (x_1..x_m), m <= L on the law's period lattice, over
/// a finite alphabet. Each word carries length, letter sum and the log of its
/// reference weight rho(m) prod nu(x_i).
class WordSpace
{
public:
    static constexpr std::size_t kMaxWords = 5'000'000;

    static std::shared_ptr<const WordSpace> enumerate(const DisorderModel& model, const ExcursionLaw& law, long L)
    {
        if (!model.is_discrete())
            throw std::invalid_argument("WordSpace: alphabet must be finite (quantize Gaussian disorder first)");
        if (L < 1) throw std::invalid_argument("WordSpace: L must be >= 1");
        auto space = std::shared_ptr<WordSpace>(new WordSpace);
        space->letters_ = model.support();
        space->letter_weights_ = model.weights();
        space->max_length_ = L;
        const std::size_t A = space->letters_.size();
        double count = 0.0;
        for (long m = law.period(); m <= L; m += law.period())
            if (law.prob(m) > 0.0) count += std::pow(static_cast<double>(A), static_cast<double>(m));
        if (count > static_cast<double>(kMaxWords)) throw std::invalid_argument("WordSpace: too many words");
        std::vector<double> log_nu(A);
        for (std::size_t a = 0; a < A; ++a) log_nu[a] = std::log(space->letter_weights_[a]);
        for (long m = law.period(); m <= L; m += law.period()) {
            const double lr = law.log_prob(m);
            if (lr == kNegInf) continue;
            std::vector<std::uint16_t> idx(m, 0);
            for (;;) {
                double sum = 0.0, lw = lr;
                for (long i = 0; i < m; ++i) {
                    sum += space->letters_[idx[i]];
                    lw += log_nu[idx[i]];
                }
                space->offsets_.push_back(space->letter_index_.size());
                space->letter_index_.insert(space->letter_index_.end(), idx.begin(), idx.end());
                space->length_.push_back(m);
                space->sum_.push_back(sum);
                space->log_ref_.push_back(lw);
                long pos = m - 1;
                while (pos >= 0 && ++idx[pos] == A) idx[pos--] = 0;
                if (pos < 0) break;
            }
        }
        space->offsets_.push_back(space->letter_index_.size());
        return space;
    }

    std::size_t size() const { return length_.size(); }
    long length(std::size_t w) const { return length_[w]; }
    double letter_sum(std::size_t w) const { return sum_[w]; }
    double log_ref(std::size_t w) const { return log_ref_[w]; }
    long max_length() const { return max_length_; }
    const std::vector<double>& letters() const { return letters_; }
    const std::vector<double>& letter_weights() const { return letter_weights_; }
    std::span<const std::uint16_t> word(std::size_t w) const
    {
        return {letter_index_.data() + offsets_[w], letter_index_.data() + offsets_[w + 1]};
    }

    /// log phi(y) = log(1/2 (1 + e^{-2 beta (sigma(y) + h tau(y))})).
    double log_phi(std::size_t w, double beta, double h) const
    {
        return kLogHalf + log1p_exp(-2.0 * beta * (sum_[w] + h * static_cast<double>(length_[w])));
    }

private:
    WordSpace() = default;

    std::vector<double> letters_;
    std::vector<double> letter_weights_;
    long max_length_ = 0;
    std::vector<long> length_;
    std::vector<double> sum_;
    std::vector<double> log_ref_;
    std::vector<std::size_t> offsets_;
    std::vector<std::uint16_t> letter_index_;
};

/// Law on a word space; probabilities need not sum to one for reference laws.
struct WordDistribution
{
    std::shared_ptr<const WordSpace> space;
    std::vector<double> probs;

    double total() const
    {
        double t = 0.0;
        for (double p : probs) t += p;
        return t;
    }

    double mean_length() const
    {
        double m = 0.0;
        for (std::size_t w = 0; w < probs.size(); ++w) m += probs[w] * static_cast<double>(space->length(w));
        return m;
    }

    void normalize()
    {
        const double t = total();
        if (!(t > 0.0)) throw std::domain_error("WordDistribution: zero mass");
        for (auto& p : probs) p /= t;
    }
};

/// q_{rho,nu}(y) = rho(m) prod nu(x_i) on the truncated space, optionally renormalised.
inline WordDistribution reference_law(std::shared_ptr<const WordSpace> space, bool renormalize)
{
    WordDistribution ref{space, std::vector<double>(space->size())};
    for (std::size_t w = 0; w < space->size(); ++w) ref.probs[w] = std::exp(space->log_ref(w));
    if (renormalize) ref.normalize();
    return ref;
}

/// Reference law built from the tilted excursion law rho_g (exact log weights).
inline WordDistribution tilted_reference_law(std::shared_ptr<const WordSpace> space, const ExcursionLaw& law,
                                             double g)
{
    const double log_norm = law.log_normalizer(g);
    WordDistribution ref{space, std::vector<double>(space->size())};
    for (std::size_t w = 0; w < space->size(); ++w)
        ref.probs[w] = std::exp(space->log_ref(w) - g * static_cast<double>(space->length(w)) - log_norm);
    return ref;
}

/// h(q | ref) = sum q log(q / ref); +inf without absolute continuity.
inline double word_relative_entropy(const WordDistribution& q, const WordDistribution& ref)
{
    if (q.space != ref.space) throw std::invalid_argument("word_relative_entropy: different word spaces");
    return relative_entropy(q.probs, ref.probs);
}

/// int q(dy) [-g tau(y) + log phi(y)] - h(q | ref); -inf when q is not << ref.
inline double variational_functional(const WordDistribution& q, const WordDistribution& ref, double beta, double h,
                                     double g)
{
    const double ent = word_relative_entropy(q, ref);
    if (ent == kPosInf) return kNegInf;
    double score = 0.0;
    for (std::size_t w = 0; w < q.probs.size(); ++w) {
        if (q.probs[w] <= 0.0) continue;
        score += q.probs[w] * (-g * static_cast<double>(q.space->length(w)) + q.space->log_phi(w, beta, h));
    }
    return score - ent;
}

/// log sum_y ref(y) e^{-g tau(y)} phi(y): the maximum of the functional.
inline double truncated_log_normalizer(const WordDistribution& ref, double beta, double h, double g)
{
    LogAccumulator acc;
    for (std::size_t w = 0; w < ref.probs.size(); ++w) {
        if (ref.probs[w] <= 0.0) continue;
        acc.add(std::log(ref.probs[w]) - g * static_cast<double>(ref.space->length(w)) +
                ref.space->log_phi(w, beta, h));
    }
    return acc.value();
}

/// Same quantity without enumerating words: E_{nu^m} phi = 1/2 (1 + e^{m [M(2b) - 2bh]}),
/// so only lengths matter. Valid for any disorder law and any L.
inline double truncated_log_normalizer(const ExcursionLaw& law, const DisorderModel& model, double beta, double h,
                                       double g, long L)
{
    const double delta = model.cumulant(2.0 * beta) - 2.0 * beta * h;
    LogAccumulator acc;
    for (long m = law.period(); m <= L; m += law.period()) {
        const double lr = law.log_prob(m);
        if (lr == kNegInf) continue;
        acc.add(lr - g * static_cast<double>(m) + kLogHalf + log1p_exp(delta * static_cast<double>(m)));
    }
    return acc.value();
}

/// q_{beta,h;g} proportional to ref e^{-g tau} phi, normalised.
inline WordDistribution gibbs_maximizer(const WordDistribution& ref, double beta, double h, double g)
{
    const double log_norm = truncated_log_normalizer(ref, beta, h, g);
    if (log_norm == kNegInf) throw std::domain_error("gibbs_maximizer: empty truncated space");
    WordDistribution q{ref.space, std::vector<double>(ref.probs.size(), 0.0)};
    for (std::size_t w = 0; w < q.probs.size(); ++w) {
        if (ref.probs[w] <= 0.0) continue;
        q.probs[w] = std::exp(std::log(ref.probs[w]) - g * static_cast<double>(ref.space->length(w)) +
                              ref.space->log_phi(w, beta, h) - log_norm);
    }
    return q;
}

/// Exponentiated-gradient ascent on the functional from q0:
///   log q <- (1 - step) log q + step (log ref + score) + const.
/// With step = 1 it lands on the maximiser in one update.
inline WordDistribution maximize_functional(const WordDistribution& q0, const WordDistribution& ref, double beta,
                                            double h, double g, double step, int iterations)
{
    if (!(step > 0.0 && step <= 1.0)) throw std::invalid_argument("maximize_functional: step in (0, 1]");
    const std::size_t W = ref.probs.size();
    std::vector<double> target(W, kNegInf), logq(W, kNegInf);
    for (std::size_t w = 0; w < W; ++w) {
        if (ref.probs[w] <= 0.0) continue;
        target[w] = std::log(ref.probs[w]) - g * static_cast<double>(ref.space->length(w)) +
                    ref.space->log_phi(w, beta, h);
        // Start from q0 where it has mass; elsewhere from ref so the iteration can reach every word.
        logq[w] = q0.probs[w] > 0.0 ? std::log(q0.probs[w]) : std::log(ref.probs[w]);
    }
    for (int it = 0; it < iterations; ++it) {
        for (std::size_t w = 0; w < W; ++w)
            if (target[w] != kNegInf) logq[w] = (1.0 - step) * logq[w] + step * target[w];
        const double z = log_sum_exp(logq);
        for (auto& l : logq)
            if (l != kNegInf) l -= z;
    }
    WordDistribution q{ref.space, std::vector<double>(W, 0.0)};
    for (std::size_t w = 0; w < W; ++w) q.probs[w] = logq[w] == kNegInf ? 0.0 : std::exp(logq[w]);
    return q;
}

/// h(q | q_{rho_g,nu}) - h(q | q_{rho,nu}) - log N(g) - g m_q, both references unnormalised.
inline double tilting_identity_residual(const WordDistribution& q, const ExcursionLaw& law, double g)
{
    const auto ref = reference_law(q.space, false);
    const auto tilted = tilted_reference_law(q.space, law, g);
    return word_relative_entropy(q, tilted) - word_relative_entropy(q, ref) - law.log_normalizer(g) -
           g * q.mean_length();
}

/// Random law on the support of `ref`: Dirichlet(1) weights, optionally sparse.
inline WordDistribution random_word_law(const WordDistribution& ref, std::uint64_t seed, double keep = 1.0)
{
    Rng rng(seed);
    std::exponential_distribution<double> expo(1.0);
    WordDistribution q{ref.space, std::vector<double>(ref.probs.size(), 0.0)};
    for (std::size_t w = 0; w < q.probs.size(); ++w) {
        if (ref.probs[w] <= 0.0) continue;
        if (keep < 1.0 && uniform01(rng) > keep) continue;
        q.probs[w] = expo(rng);
    }
    if (q.total() == 0.0) q.probs[0] = 1.0;
    q.normalize();
    return q;
}

}  // namespace copolymer

#endif  // COPOLYMER_ANNEALED_HPP
