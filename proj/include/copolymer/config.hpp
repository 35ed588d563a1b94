#ifndef COPOLYMER_CONFIG_HPP
#define COPOLYMER_CONFIG_HPP

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "copolymer/disorder.hpp"
#include "copolymer/excursions.hpp"
#include "json.hpp"

namespace copolymer {

struct ConfigError : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

/// Everything a CLI run needs. Flat text form, one `section.key = value` per
/// line, `#` comments, lists comma separated:
///
///   disorder.kind = binary            # binary | gaussian | discrete
///   disorder.support = -2, 0.5        # discrete only
///   disorder.weights = 0.2, 0.8
///   excursion.kind = srw              # srw | power | custom
///   excursion.alpha = 1.5
///   grid.beta = 0.5, 1
///   run.seed = 7                      # mandatory
///   output.format = csv               # csv | json
struct RunConfig
{
    std::string disorder_kind = "binary";
    std::vector<double> disorder_support;
    std::vector<double> disorder_weights;

    std::string excursion_kind = "srw";
    double excursion_alpha = 1.5;
    long excursion_m_max = ExcursionLaw::kDefaultMMax;
    long excursion_period = 1;
    std::vector<double> excursion_probs;  // custom: rho(1), rho(2), ...

    std::vector<double> beta{1.0};
    std::vector<double> h{0.0};
    std::vector<double> g{0.1};
    std::vector<double> alpha{1.5};

    long n = 100000;
    long replicas = 32;
    long paths_per_replica = 20;
    std::optional<std::uint64_t> seed;
    unsigned threads = 1;
    long n_max = 400;          // F_N range
    long max_excursion = 0;    // 0: full law

    double eps_tail = 1e-14;
    double eps_fe = 10.0;      // noise floor for g, in replica stderr units
    double h_res = 5e-3;       // critical-curve bisection resolution

    std::string output_dir = ".";
    std::string output_format = "csv";

    DisorderModel disorder() const
    {
        if (disorder_kind == "binary") return DisorderModel::binary();
        if (disorder_kind == "gaussian") return DisorderModel::gaussian();
        if (disorder_kind == "discrete") return DisorderModel::discrete(disorder_support, disorder_weights);
        throw ConfigError("disorder.kind must be binary, gaussian or discrete, got '" + disorder_kind + "'");
    }

    ExcursionLaw excursion() const
    {
        if (excursion_kind == "srw") return ExcursionLaw::simple_random_walk(excursion_m_max);
        if (excursion_kind == "power") return ExcursionLaw::power_law(excursion_alpha, excursion_m_max, excursion_period);
        if (excursion_kind == "custom") return ExcursionLaw::custom(excursion_probs, excursion_alpha, excursion_period);
        throw ConfigError("excursion.kind must be srw, power or custom, got '" + excursion_kind + "'");
    }

    std::uint64_t require_seed() const
    {
        if (!seed) throw ConfigError("run.seed is mandatory (set it in the config or pass --seed)");
        return *seed;
    }

    void validate() const
    {
        disorder();
        excursion();
        if (n < 1) throw ConfigError("run.n must be >= 1");
        if (replicas < 1) throw ConfigError("run.replicas must be >= 1");
        if (paths_per_replica < 1) throw ConfigError("run.paths_per_replica must be >= 1");
        if (n_max < 2) throw ConfigError("run.n_max must be >= 2");
        if (!(eps_tail > 0.0) || !(eps_fe > 0.0) || !(h_res > 0.0)) throw ConfigError("tolerances must be > 0");
        if (output_format != "csv" && output_format != "json")
            throw ConfigError("output.format must be csv or json, got '" + output_format + "'");
        for (double b : beta)
            if (b < 0.0) throw ConfigError("grid.beta entries must be >= 0");
        for (double x : h)
            if (x < 0.0) throw ConfigError("grid.h entries must be >= 0");
        for (double a : alpha)
            if (!(a > 1.0)) throw ConfigError("grid.alpha entries must be > 1");
    }

    bool operator==(const RunConfig&) const = default;

    /// Canonical text form; parse(serialize()) reproduces the config exactly.
    std::string serialize() const
    {
        std::ostringstream out;
        auto num = [](double v) {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.17g", v);
            return std::string(buf);
        };
        auto list = [&](const std::vector<double>& xs) {
            std::string s;
            for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? ", " : "") + num(xs[i]);
            return s;
        };
        out << "disorder.kind = " << disorder_kind << "\n";
        out << "disorder.support = " << list(disorder_support) << "\n";
        out << "disorder.weights = " << list(disorder_weights) << "\n";
        out << "excursion.kind = " << excursion_kind << "\n";
        out << "excursion.alpha = " << num(excursion_alpha) << "\n";
        out << "excursion.m_max = " << excursion_m_max << "\n";
        out << "excursion.period = " << excursion_period << "\n";
        out << "excursion.probs = " << list(excursion_probs) << "\n";
        out << "grid.beta = " << list(beta) << "\n";
        out << "grid.h = " << list(h) << "\n";
        out << "grid.g = " << list(g) << "\n";
        out << "grid.alpha = " << list(alpha) << "\n";
        out << "run.n = " << n << "\n";
        out << "run.replicas = " << replicas << "\n";
        out << "run.paths_per_replica = " << paths_per_replica << "\n";
        if (seed) out << "run.seed = " << *seed << "\n";
        out << "run.threads = " << threads << "\n";
        out << "run.n_max = " << n_max << "\n";
        out << "run.max_excursion = " << max_excursion << "\n";
        out << "tol.eps_tail = " << num(eps_tail) << "\n";
        out << "tol.eps_fe = " << num(eps_fe) << "\n";
        out << "tol.h_res = " << num(h_res) << "\n";
        out << "output.dir = " << output_dir << "\n";
        out << "output.format = " << output_format << "\n";
        return out.str();
    }

    nlohmann::json to_json() const
    {
        nlohmann::json j;
        j["disorder"] = {{"kind", disorder_kind}, {"support", disorder_support}, {"weights", disorder_weights}};
        j["excursion"] = {{"kind", excursion_kind},   {"alpha", excursion_alpha}, {"m_max", excursion_m_max},
                          {"period", excursion_period}, {"probs", excursion_probs}};
        j["grid"] = {{"beta", beta}, {"h", h}, {"g", g}, {"alpha", alpha}};
        j["run"] = {{"n", n},         {"replicas", replicas},           {"paths_per_replica", paths_per_replica},
                    {"threads", threads}, {"n_max", n_max}, {"max_excursion", max_excursion}};
        if (seed) j["run"]["seed"] = *seed;
        j["tol"] = {{"eps_tail", eps_tail}, {"eps_fe", eps_fe}, {"h_res", h_res}};
        j["output"] = {{"dir", output_dir}, {"format", output_format}};
        return j;
    }

    static RunConfig parse(const std::string& text)
    {
        const auto first = text.find_first_not_of(" \t\r\n");
        if (first != std::string::npos && text[first] == '{') return from_json(nlohmann::json::parse(text));
        RunConfig cfg;
        std::istringstream in(text);
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            const auto eq = line.find('=');
            if (trim(line).empty()) continue;
            if (eq == std::string::npos)
                throw ConfigError("line " + std::to_string(lineno) + ": expected 'section.key = value'");
            cfg.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)), lineno);
        }
        return cfg;
    }

    static RunConfig load(const std::string& path)
    {
        std::ifstream f(path);
        if (!f) throw ConfigError("cannot open config file '" + path + "'");
        std::stringstream buf;
        buf << f.rdbuf();
        return parse(buf.str());
    }

    static RunConfig from_json(const nlohmann::json& j)
    {
        RunConfig cfg;
        for (const auto& [section, body] : j.items()) {
            if (!body.is_object()) throw ConfigError("json config: section '" + section + "' must be an object");
            for (const auto& [key, value] : body.items()) {
                std::string text;
                if (value.is_array()) {
                    for (std::size_t i = 0; i < value.size(); ++i) {
                        char buf[32];
                        std::snprintf(buf, sizeof buf, "%.17g", value[i].get<double>());
                        text += (i ? "," : "") + std::string(buf);
                    }
                } else if (value.is_string()) {
                    text = value.get<std::string>();
                } else if (value.is_number_integer() || value.is_number_unsigned()) {
                    text = value.dump();
                } else if (value.is_number()) {
                    char buf[32];
                    std::snprintf(buf, sizeof buf, "%.17g", value.get<double>());
                    text = buf;
                } else {
                    throw ConfigError("json config: unsupported value for " + section + "." + key);
                }
                cfg.set(section + "." + key, text, 0);
            }
        }
        return cfg;
    }

private:
    static std::string trim(const std::string& s)
    {
        const auto a = s.find_first_not_of(" \t\r\n");
        if (a == std::string::npos) return "";
        const auto b = s.find_last_not_of(" \t\r\n");
        return s.substr(a, b - a + 1);
    }

    static double to_double(const std::string& key, const std::string& v)
    {
        try {
            std::size_t used = 0;
            const double x = std::stod(v, &used);
            if (trim(v.substr(used)).empty()) return x;
        } catch (const std::exception&) {
        }
        throw ConfigError(key + ": expected a number, got '" + v + "'");
    }

    static long to_long(const std::string& key, const std::string& v)
    {
        try {
            std::size_t used = 0;
            const long x = std::stol(v, &used);
            if (trim(v.substr(used)).empty()) return x;
        } catch (const std::exception&) {
        }
        throw ConfigError(key + ": expected an integer, got '" + v + "'");
    }

    static std::vector<double> to_list(const std::string& key, const std::string& v)
    {
        std::vector<double> out;
        if (trim(v).empty()) return out;
        std::istringstream in(v);
        std::string item;
        while (std::getline(in, item, ',')) out.push_back(to_double(key, trim(item)));
        return out;
    }

    void set(const std::string& key, const std::string& v, int lineno)
    {
        if (key == "disorder.kind") disorder_kind = v;
        else if (key == "disorder.support") disorder_support = to_list(key, v);
        else if (key == "disorder.weights") disorder_weights = to_list(key, v);
        else if (key == "excursion.kind") excursion_kind = v;
        else if (key == "excursion.alpha") excursion_alpha = to_double(key, v);
        else if (key == "excursion.m_max") excursion_m_max = to_long(key, v);
        else if (key == "excursion.period") excursion_period = to_long(key, v);
        else if (key == "excursion.probs") excursion_probs = to_list(key, v);
        else if (key == "grid.beta") beta = to_list(key, v);
        else if (key == "grid.h") h = to_list(key, v);
        else if (key == "grid.g") g = to_list(key, v);
        else if (key == "grid.alpha") alpha = to_list(key, v);
        else if (key == "run.n") n = to_long(key, v);
        else if (key == "run.replicas") replicas = to_long(key, v);
        else if (key == "run.paths_per_replica") paths_per_replica = to_long(key, v);
        else if (key == "run.seed") {
            const long s = to_long(key, v);
            if (s < 0) throw ConfigError("run.seed must be >= 0");
            seed = static_cast<std::uint64_t>(s);
        } else if (key == "run.threads") {
            const long t = to_long(key, v);
            if (t < 0) throw ConfigError("run.threads must be >= 0");
            threads = static_cast<unsigned>(t);
        } else if (key == "run.n_max") n_max = to_long(key, v);
        else if (key == "run.max_excursion") max_excursion = to_long(key, v);
        else if (key == "tol.eps_tail") eps_tail = to_double(key, v);
        else if (key == "tol.eps_fe") eps_fe = to_double(key, v);
        else if (key == "tol.h_res") h_res = to_double(key, v);
        else if (key == "output.dir") output_dir = v;
        else if (key == "output.format") output_format = v;
        else
            throw ConfigError((lineno ? "line " + std::to_string(lineno) + ": " : std::string()) + "unknown key '" +
                              key + "'");
    }
};

}  // namespace copolymer

#endif  // COPOLYMER_CONFIG_HPP
