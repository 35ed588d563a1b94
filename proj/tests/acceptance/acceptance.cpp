// Acceptance run: every numbered criterion at full scale, one PASS/FAIL line each.
// Usage: acceptance [path-to-copolymer-cli] [--seed N]
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <string>
#include <sys/wait.h>

#include "copolymer/commands.hpp"

using namespace copolymer;

namespace {

void print(int criterion, const std::string& title, bool passed, double seconds, const std::vector<Check>& checks)
{
    std::printf("criterion %2d: %s  %s  (%.1f s)\n", criterion, passed ? "PASS" : "FAIL", title.c_str(), seconds);
    for (const auto& c : checks)
        std::printf("    %s %s: %s\n", c.passed ? "ok  " : "FAIL", c.name.c_str(), c.detail.c_str());
    std::fflush(stdout);
}

RunConfig determinism_config(std::uint64_t seed)
{
    auto cfg = RunConfig::parse(
        "grid.beta = 0.8, 1\n"
        "grid.h = 0, 0.3\n"
        "grid.g = 0.2\n"
        "grid.alpha = 1.5\n"
        "run.n = 5000\n"
        "run.replicas = 4\n"
        "run.paths_per_replica = 4\n"
        "run.n_max = 80\n"
        "tol.h_res = 0.05\n");
    cfg.seed = seed;
    return cfg;
}

std::vector<Check> determinism_checks(std::uint64_t seed)
{
    std::vector<Check> out;
    for (const auto& name : command_names()) {
        if (name == "selftest") continue;
        auto cfg = determinism_config(seed);
        std::string first, repeat, threaded;
        for (int pass = 0; pass < 3; ++pass) {
            cfg.threads = pass == 2 ? 2 : 1;
            std::string text;
            for (const auto& [stem, table] : run_command(name, cfg).tables) text += table.to_csv() + table.to_json();
            (pass == 0 ? first : pass == 1 ? repeat : threaded) = text;
        }
        const bool same = first == repeat && first == threaded;
        out.push_back({name + " byte-identical", same,
                       detail::fmt("%zu bytes, repeat %s, 2 threads %s", first.size(), first == repeat ? "equal" : "DIFFERENT",
                                   first == threaded ? "equal" : "DIFFERENT")});
    }
    return out;
}

}  // namespace

int main(int argc, char** argv)
{
    std::string cli;
    std::uint64_t seed = 20240601;
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--seed" && i + 1 < argc) seed = std::stoull(argv[++i]);
        else cli = a;
    }

    SelfTestOptions opt;
    opt.profile = Profile::Full;
    opt.seed = seed;
    bool all = true;

    const auto invariants = invariants_suite(opt);
    print(0, invariants.title, invariants.passed(), invariants.seconds, invariants.checks);
    all = all && invariants.passed();

    using Suite = SuiteReport (*)(const SelfTestOptions&);
    const Suite suites[] = {annealed_closed_form_suite, annealed_curve_suite,   quenched_sandwich_suite,
                            variational_consistency_suite, gibbs_principle_suite, tilting_identity_suite,
                            bounds_suite,               slope_constants_suite,  concentration_suite,
                            paths_suite};
    for (auto suite : suites) {
        const auto r = suite(opt);
        print(r.criterion, r.title, r.passed(), r.seconds, r.checks);
        all = all && r.passed();
    }

    const auto t0 = std::chrono::steady_clock::now();
    auto checks = determinism_checks(seed);
    if (cli.empty()) {
        checks.push_back({"selftest timing", false, "no CLI path given"});
    } else {
        const auto s0 = std::chrono::steady_clock::now();
        const std::string cmd = cli + " selftest --quiet --seed " + std::to_string(seed) + " --out /tmp/copolymer_acceptance";
        const int rc = std::system(cmd.c_str());
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - s0).count();
        const int status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
        checks.push_back({"selftest green", status == 0, detail::fmt("exit status %d", status)});
        checks.push_back({"selftest under 10 min", secs < 600.0, detail::fmt("%.1f s", secs)});
    }
    bool det = true;
    for (const auto& c : checks) det = det && c.passed;
    print(11, "determinism and selftest", det,
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(), checks);
    all = all && det;

    std::printf("acceptance: %s\n", all ? "all criteria passed" : "FAILED");
    return all ? 0 : 1;
}
