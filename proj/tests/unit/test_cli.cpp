#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "copolymer/commands.hpp"

using namespace copolymer;

namespace {

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream f(p, std::ios::binary);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

RunConfig small_config()
{
    auto cfg = RunConfig::parse(
        "disorder.kind = binary\n"
        "excursion.kind = srw\n"
        "grid.beta = 1\n"
        "grid.h = 0, 0.3\n"
        "grid.g = 0.2\n"
        "run.n = 3000\n"
        "run.replicas = 4\n"
        "run.paths_per_replica = 3\n"
        "run.n_max = 60\n"
        "run.seed = 5\n");
    return cfg;
}

int run_cli(const std::string& args)
{
    const std::string cmd = std::string(COPOLYMER_CLI) + " " + args + " > /dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

}  // namespace

TEST(Config, RoundTripText)
{
    auto cfg = small_config();
    cfg.disorder_kind = "discrete";
    cfg.disorder_support = {-1.0, 0.1};
    cfg.disorder_weights = {0.3, 0.7};
    cfg.h = {0.1, 1.0 / 3.0};
    EXPECT_EQ(RunConfig::parse(cfg.serialize()), cfg);
    EXPECT_EQ(RunConfig::from_json(cfg.to_json()), cfg);
    EXPECT_EQ(RunConfig::parse(cfg.to_json().dump()), cfg);
}

TEST(Config, Errors)
{
    EXPECT_THROW(RunConfig::parse("bogus.key = 1\n"), ConfigError);
    EXPECT_THROW(RunConfig::parse("run.n = ten\n"), ConfigError);
    EXPECT_THROW(RunConfig::parse("no equals sign\n"), ConfigError);
    EXPECT_THROW(RunConfig::parse("grid.beta = 1\n").require_seed(), ConfigError);
    EXPECT_THROW(run_command("annealed", RunConfig::parse("grid.beta = 1\n")), ConfigError);
    EXPECT_THROW(run_command("nonsense", small_config()), std::exception);
}

TEST(Config, CommentsAndLists)
{
    const auto cfg = RunConfig::parse("# header\ngrid.beta = 0.5, 1   # two\n\nrun.seed = 9\n");
    EXPECT_EQ(cfg.beta, (std::vector<double>{0.5, 1.0}));
    EXPECT_EQ(cfg.seed, 9u);
}

TEST(Output, CsvSchemaAndFormat)
{
    Table t({"a", "b", "c"});
    t.add({1.0 / 3.0, 7LL, std::string("x,y")});
    const auto csv = t.to_csv();
    EXPECT_EQ(csv, "# schema=1\na,b,c\n0.333333333333,7,\"x,y\"\n");
    EXPECT_EQ(format_number(1e-20), "1e-20");
    EXPECT_EQ(format_number(kPosInf), "inf");
    const auto j = nlohmann::json::parse(t.to_json());
    EXPECT_EQ(j["schema"], 1);
    EXPECT_EQ(j["rows"][0]["b"], 7);
    EXPECT_THROW(t.add({1.0}), std::logic_error);
}

TEST(Commands, AnnealedTable)
{
    const auto out = run_command("annealed", small_config());
    ASSERT_EQ(out.tables.size(), 1u);
    const auto& t = out.tables[0].second;
    EXPECT_EQ(t.rows().size(), 2u);
    EXPECT_EQ(t.columns().front(), "disorder");
    EXPECT_NE(t.to_csv().find("1.32500274736"), std::string::npos);
}

TEST(Commands, ByteIdenticalAcrossThreads)
{
    auto cfg = small_config();
    for (const std::string cmd : {"quenched-fe", "s-of-g", "paths"}) {
        cfg.threads = 1;
        const auto a = run_command(cmd, cfg);
        cfg.threads = 3;
        const auto b = run_command(cmd, cfg);
        ASSERT_EQ(a.tables.size(), b.tables.size());
        for (std::size_t i = 0; i < a.tables.size(); ++i) {
            EXPECT_EQ(a.tables[i].second.to_csv(), b.tables[i].second.to_csv()) << cmd;
            EXPECT_EQ(a.tables[i].second.to_json(), b.tables[i].second.to_json()) << cmd;
        }
    }
}

TEST(Cli, EndToEnd)
{
    const auto dir = std::filesystem::temp_directory_path() / "copolymer_cli_test";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    const auto cfg_path = dir / "run.cfg";
    {
        auto cfg = small_config();
        cfg.seed.reset();
        std::ofstream(cfg_path) << cfg.serialize();
    }
    const std::string base = "--config " + cfg_path.string();
    EXPECT_EQ(run_cli("annealed " + base + " --out " + dir.string()), 2);  // no seed anywhere
    EXPECT_EQ(run_cli("annealed " + base + " --seed 4 --out " + (dir / "a").string()), 0);
    EXPECT_EQ(run_cli("quenched-fe " + base + " --seed 4 --threads 1 --out " + (dir / "t1").string()), 0);
    EXPECT_EQ(run_cli("quenched-fe " + base + " --seed 4 --threads 2 --out " + (dir / "t2").string()), 0);
    const auto one = slurp(dir / "t1" / "quenched-fe.csv");
    EXPECT_FALSE(one.empty());
    EXPECT_EQ(one, slurp(dir / "t2" / "quenched-fe.csv"));
    EXPECT_EQ(run_cli("annealed " + base + " --seed 4 --format json --out " + (dir / "j").string()), 0);
    EXPECT_TRUE(nlohmann::json::accept(slurp(dir / "j" / "annealed.json")));
    EXPECT_NE(run_cli("no-such-command"), 0);
    std::filesystem::remove_all(dir);
}
