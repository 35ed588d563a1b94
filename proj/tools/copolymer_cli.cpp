// Batch front end. Usage: copolymer <command> [--config PATH] [--seed N]
// [--out DIR] [--format csv|json] [--threads N]
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "copolymer/commands.hpp"

using namespace copolymer;

int main(int argc, char** argv)
{
    CLI::App app{"copolymer: free energies, bounds and path statistics for the random copolymer model"};
    app.require_subcommand(1);

    std::string config_path, out_dir, format;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> threads;
    bool full = false, quiet = false;

    app.add_option("--config", config_path, "Config file (flat section.key = value, or JSON)")->check(CLI::ExistingFile);
    app.add_option("--seed", seed, "Seed; overrides run.seed");
    app.add_option("--out", out_dir, "Output directory; overrides output.dir");
    app.add_option("--format", format, "csv or json; overrides output.format")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--threads", threads, "Worker threads, 0 = all cores; overrides run.threads");
    app.add_flag("--quiet", quiet, "No progress output on stderr");

    app.fallthrough();  // before the subcommands so they inherit it
    for (const auto& name : command_names()) {
        auto* sub = app.add_subcommand(name);
        if (name == "selftest") sub->add_flag("--full", full, "Acceptance-scale sample sizes");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }
    const std::string command = app.get_subcommands().front()->get_name();

    try {
        RunConfig cfg = config_path.empty() ? RunConfig{} : RunConfig::load(config_path);
        if (seed) cfg.seed = *seed;
        if (!out_dir.empty()) cfg.output_dir = out_dir;
        if (!format.empty()) cfg.output_format = format;
        if (threads) cfg.threads = *threads;

        std::function<void(const std::string&)> progress;
        if (!quiet) progress = [](const std::string& line) { std::cerr << line << "\n"; };
        const auto result = run_command(command, cfg, full ? Profile::Full : Profile::Quick, progress);
        for (const auto& [stem, table] : result.tables) {
            const auto path = write_table(table, cfg.output_dir, stem, cfg.output_format);
            if (!quiet) std::cerr << "wrote " << path << " (" << table.rows().size() << " rows)\n";
        }
        if (command == "selftest") std::cout << (result.status == 0 ? "selftest: all checks passed" : "selftest: FAILED") << "\n";
        return result.status;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
