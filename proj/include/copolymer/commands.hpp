#ifndef COPOLYMER_COMMANDS_HPP
#define COPOLYMER_COMMANDS_HPP

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "copolymer/annealed.hpp"
#include "copolymer/bounds.hpp"
#include "copolymer/config.hpp"
#include "copolymer/output.hpp"
#include "copolymer/partition.hpp"
#include "copolymer/paths.hpp"
#include "copolymer/selftest.hpp"
#include "copolymer/slope.hpp"

namespace copolymer {

/// Result of a command: named tables (file stems) and an exit status.
struct CommandOutput
{
    std::vector<std::pair<std::string, Table>> tables;
    int status = 0;
};

namespace detail {

// Leading columns shared by every row: the model and the seed.
inline std::vector<std::string> with_prefix(std::vector<std::string> cols)
{
    std::vector<std::string> out = {"disorder", "excursion", "excursion_alpha", "seed"};
    out.insert(out.end(), cols.begin(), cols.end());
    return out;
}

inline std::vector<Cell> row_prefix(const RunConfig& cfg, std::vector<Cell> cells)
{
    std::vector<Cell> out = {cfg.disorder_kind, cfg.excursion_kind, cfg.excursion().alpha(),
                             static_cast<long long>(cfg.require_seed())};
    out.insert(out.end(), cells.begin(), cells.end());
    return out;
}

inline QuenchedOptions quenched_options(const RunConfig& cfg)
{
    QuenchedOptions q;
    q.n = cfg.n;
    q.replicas = cfg.replicas;
    q.seed = cfg.require_seed();
    q.threads = cfg.threads;
    q.max_excursion = cfg.max_excursion;
    return q;
}

inline GeneratingOptions generating_options(const RunConfig& cfg)
{
    GeneratingOptions g;
    g.n_max = cfg.n_max;
    g.eps_tail = cfg.eps_tail;
    return g;
}

inline long long as_int(long v) { return static_cast<long long>(v); }

}  // namespace detail

/// Closed-form annealed quantities over the (beta, h, g) grid.
inline CommandOutput run_annealed(const RunConfig& cfg)
{
    const auto model = cfg.disorder();
    const auto law = cfg.excursion();
    Table t(detail::with_prefix({"beta", "h", "g", "M_2beta", "g_ann", "h_c_ann", "curly_N_ann", "S_ann"}));
    for (double beta : cfg.beta)
        for (double h : cfg.h)
            for (double g : cfg.g)
                t.add(detail::row_prefix(cfg, {beta, h, g, model.cumulant(2.0 * beta),
                                               annealed_excess_free_energy(beta, h, model),
                                               annealed_critical_h(beta, model),
                                               annealed_curly_N(beta, h, g, law, model),
                                               annealed_S(beta, h, g, law, model)}));
    return {{{"annealed", std::move(t)}}, 0};
}

/// Replica-averaged free energy by the renewal DP.
inline CommandOutput run_quenched_fe(const RunConfig& cfg)
{
    const auto model = cfg.disorder();
    const auto law = cfg.excursion();
    const auto q = detail::quenched_options(cfg);
    Table t(detail::with_prefix({"beta", "h", "n", "replicas", "g_que", "stderr", "g_ann", "localized"}));
    for (double beta : cfg.beta)
        for (double h : cfg.h) {
            const auto e = quenched_free_energy({beta, h, 0.0}, model, law, q);
            const bool loc = e.value > 0.0 && e.value > cfg.eps_fe * e.stderr;
            t.add(detail::row_prefix(cfg, {beta, h, detail::as_int(cfg.n), detail::as_int(cfg.replicas), e.value,
                                           e.stderr, annealed_excess_free_energy(beta, h, model),
                                           detail::as_int(loc ? 1 : 0)}));
        }
    return {{{"quenched-fe", std::move(t)}}, 0};
}

/// F_N slope estimate over the g grid.
inline CommandOutput run_s_of_g(const RunConfig& cfg)
{
    const auto model = cfg.disorder();
    const auto law = cfg.excursion();
    const auto gopt = detail::generating_options(cfg);
    Table t(detail::with_prefix({"beta", "h", "g", "n_max", "replicas", "S_que", "stderr", "S_ann"}));
    for (double beta : cfg.beta)
        for (double h : cfg.h)
            for (double g : cfg.g) {
                const auto s = quenched_slope({beta, h, g}, model, law, gopt, cfg.replicas, cfg.require_seed(),
                                              cfg.threads);
                t.add(detail::row_prefix(cfg, {beta, h, g, detail::as_int(cfg.n_max), detail::as_int(cfg.replicas),
                                               s.value, s.stderr, annealed_S(beta, h, g, law, model)}));
            }
    return {{{"s-of-g", std::move(t)}}, 0};
}

/// Bisection for h_c(beta) with the annealed bounds alongside.
inline CommandOutput run_critical_curve(const RunConfig& cfg)
{
    const auto model = cfg.disorder();
    const auto law = cfg.excursion();
    const auto q = detail::quenched_options(cfg);
    Table t(detail::with_prefix({"beta", "n", "replicas", "eps_fe", "h_c", "stderr", "h_localized", "h_delocalized",
                                 "dg_dh", "h_c_ann_lower", "h_c_ann_upper", "sigma_above_lower", "sigma_below_upper",
                                 "evaluations"}));
    for (double beta : cfg.beta) {
        if (!(beta > 0.0)) throw ConfigError("critical-curve: grid.beta entries must be > 0");
        const double lower = annealed_critical_h(beta / law.alpha(), model);
        const double upper = annealed_critical_h(beta, model);
        const auto c = critical_point(beta, model, law, q, 0.0, 2.0 * upper, cfg.h_res, cfg.eps_fe);
        t.add(detail::row_prefix(cfg, {beta, detail::as_int(cfg.n), detail::as_int(cfg.replicas), cfg.eps_fe, c.h,
                                       c.stderr, c.h_localized, c.h_delocalized, c.dg_dh, lower, upper,
                                       (c.h - lower) / c.stderr, (upper - c.h) / c.stderr,
                                       detail::as_int(static_cast<long>(c.evaluations.size()))}));
    }
    return {{{"critical-curve", std::move(t)}}, 0};
}

/// Bound functionals in long format: one row per (quantity, parameters).
inline CommandOutput run_bounds(const RunConfig& cfg)
{
    const auto model = cfg.disorder();
    const auto law = cfg.excursion();
    const double alpha = law.alpha();
    Table t(detail::with_prefix({"quantity", "beta", "h", "g", "t", "value", "aux", "aux_name"}));
    for (double beta : cfg.beta) {
        for (double g : cfg.g)
            for (double frac : {0.0, 0.25, 0.5, 0.75, 1.0}) {
                const double tt = 1.0 / alpha + frac * (1.0 - 1.0 / alpha);
                t.add(detail::row_prefix(cfg, {std::string("fractional_moment"), beta,
                                               annealed_critical_h(beta * tt, model), g, tt,
                                               fractional_moment_bound(beta, tt, g, law), 0.0, std::string("")}));
            }
        if (!(beta > 0.0)) continue;
        for (double h : cfg.h) {
            const auto ts = tilted_strategy_rate(beta, h, model, alpha);
            t.add(detail::row_prefix(cfg, {std::string("tilted_rate"), beta, h, 0.0, 1.0, ts.rate,
                                           ts.identity_residual, std::string("identity_residual")}));
        }
        const double h_star = annealed_critical_h(beta / alpha, model);
        if (model.kind() != DisorderKind::DiscreteCustom) {
            const auto fa = falpha_lower_functional(beta, h_star, model, law, alpha);
            t.add(detail::row_prefix(cfg, {std::string("falpha_N"), beta, h_star, 0.0, 1.0, fa.N_hat,
                                           FAlpha(alpha).jensen_cap(), std::string("cap")}));
        }
        const auto gap = entropy_reduction_gap(beta, model, law, 12, 1000, cfg.require_seed());
        t.add(detail::row_prefix(cfg, {std::string("entropy_gap"), beta, annealed_critical_h(beta, model), 0.0, 1.0,
                                       gap.best, gap.at_reference, std::string("at_reference")}));
    }
    return {{{"bounds", std::move(t)}}, 0};
}

/// B(alpha) and K_c*(alpha) over the alpha grid.
inline CommandOutput run_slope(const RunConfig& cfg)
{
    Table t(detail::with_prefix({"alpha", "B_alpha", "K_c_star", "I_at_B", "quadrature_error", "B_over_alpha"}));
    for (double a : cfg.alpha) {
        const auto r = slope_constants(a);
        t.add(detail::row_prefix(cfg, {a, r.B_alpha, r.K_c_star, r.root_residual, r.quadrature_error, r.B_alpha / a}));
    }
    return {{{"slope", std::move(t)}}, 0};
}

/// Return-count diagnostics plus the per-sample M_n table.
inline CommandOutput run_paths(const RunConfig& cfg)
{
    const auto model = cfg.disorder();
    const auto law = cfg.excursion();
    PhaseOptions po;
    po.n = cfg.n;
    po.replicas = cfg.replicas;
    po.slope_replicas = cfg.replicas;
    po.paths_per_replica = cfg.paths_per_replica;
    po.seed = cfg.require_seed();
    po.threads = cfg.threads;
    po.generating = detail::generating_options(cfg);
    Table t(detail::with_prefix({"beta", "h", "n", "replicas", "regime", "g_que", "g_stderr", "Mn_over_n",
                                 "Mn_over_n_stderr", "C", "C_stderr", "C_left", "C_right", "C_richardson",
                                 "median_Mn_over_log_n", "q95_Mn_over_log_n", "log_bound_c", "log_bound_exceed"}));
    Table samples(detail::with_prefix({"beta", "h", "n", "replica", "path_id", "M_n"}));
    const double nan = std::nan("");
    for (double beta : cfg.beta)
        for (double h : cfg.h) {
            const auto d = return_count_statistics({beta, h, 0.0}, model, law, po);
            const bool loc = d.regime == Regime::Localized;
            auto inv = [&](double x) { return loc && x != 0.0 ? -1.0 / x : nan; };
            t.add(detail::row_prefix(
                cfg, {beta, h, detail::as_int(cfg.n), detail::as_int(cfg.replicas), to_string(d.regime), d.g_hat,
                      d.g_stderr, d.Mn_over_n, d.Mn_over_n_stderr, loc ? d.derivative.C : nan,
                      loc ? d.derivative.C_stderr : nan, inv(d.derivative.left), inv(d.derivative.right),
                      inv(d.derivative.richardson), d.median_over_log_n, d.q95_over_log_n, d.log_bound_c,
                      d.log_bound_exceed}));
            for (const auto& s : d.samples)
                samples.add(detail::row_prefix(cfg, {beta, h, detail::as_int(cfg.n), detail::as_int(s.replica),
                                                     detail::as_int(s.path), detail::as_int(s.M_n)}));
        }
    return {{{"paths", std::move(t)}, {"paths-samples", std::move(samples)}}, 0};
}

/// All invariant suites; status 1 iff any check fails.
inline CommandOutput run_selftest(const RunConfig& cfg, Profile profile,
                                  const std::function<void(const std::string&)>& progress = {})
{
    SelfTestOptions opt;
    opt.profile = profile;
    opt.seed = cfg.require_seed();
    opt.threads = cfg.threads;
    opt.progress = progress;
    const auto reports = copolymer::run_selftest(opt);
    Table t({"seed", "profile", "criterion", "suite", "check", "passed", "detail"});
    int status = 0;
    for (const auto& r : reports)
        for (const auto& c : r.checks) {
            t.add({static_cast<long long>(opt.seed), std::string(profile == Profile::Full ? "full" : "quick"),
                   static_cast<long long>(r.criterion), r.title, c.name, static_cast<long long>(c.passed ? 1 : 0),
                   c.detail});
            if (!c.passed) status = 1;
        }
    return {{{"selftest", std::move(t)}}, status};
}

inline const std::vector<std::string>& command_names()
{
    static const std::vector<std::string> names = {"annealed", "quenched-fe", "s-of-g", "critical-curve",
                                                   "bounds",   "slope",       "paths",  "selftest"};
    return names;
}

/// Dispatch by name; validates the config first.
inline CommandOutput run_command(const std::string& command, const RunConfig& cfg, Profile selftest_profile = Profile::Quick,
                                 const std::function<void(const std::string&)>& progress = {})
{
    cfg.validate();
    cfg.require_seed();
    if (command == "annealed") return run_annealed(cfg);
    if (command == "quenched-fe") return run_quenched_fe(cfg);
    if (command == "s-of-g") return run_s_of_g(cfg);
    if (command == "critical-curve") return run_critical_curve(cfg);
    if (command == "bounds") return run_bounds(cfg);
    if (command == "slope") return run_slope(cfg);
    if (command == "paths") return run_paths(cfg);
    if (command == "selftest") return run_selftest(cfg, selftest_profile, progress);
    throw std::invalid_argument("unknown command '" + command + "'");
}

}  // namespace copolymer

#endif  // COPOLYMER_COMMANDS_HPP
