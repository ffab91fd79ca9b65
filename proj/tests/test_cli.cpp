#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "hml/cache_io.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

int run(const std::string& args, const fs::path& log) {
    const std::string cmd = std::string(HML_CLI_PATH) + " " + args + " >" + log.string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path fresh(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("hml_cli_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) { return hml::read_file(p); }

const std::string kSmallGrid = " --grid-r 4 --grid-n 65";

}  // namespace

TEST(Cli, PartitionsTwoThree) {
    const fs::path d = fresh("partitions");
    ASSERT_EQ(run("partitions --k 2 --n 3 --out " + d.string(), d / "log"), 0);
    const std::string csv = slurp(d / "partitions.csv");
    EXPECT_NE(csv.find("(3,0)"), std::string::npos);
    EXPECT_NE(csv.find("(2,1)"), std::string::npos);
    const json m = json::parse(slurp(d / "partitions.manifest.json"));
    EXPECT_EQ(m["summary"]["classes"], 2);
    EXPECT_EQ(m["summary"]["base_dim"], 1);
    EXPECT_EQ(m["status"], "ok");
    EXPECT_TRUE(m["outputs"].contains("partitions.csv"));
}

TEST(Cli, ConfigErrorsExitTwo) {
    const fs::path d = fresh("config_error");
    EXPECT_EQ(run("solve-small --u banana --out " + d.string(), d / "log"), 2);
    EXPECT_EQ(run("solve-small --u 1 --grid-n 64 --out " + d.string(), d / "log"), 2);
    EXPECT_EQ(run("solve-small --no-such-flag 1", d / "log"), 2);
    std::ofstream(d / "bad.cfg") << "unknown-key = 3\n";
    EXPECT_EQ(run("solve-small --config " + (d / "bad.cfg").string() + " --out " + d.string(), d / "log"), 2);
}

TEST(Cli, NotConvergedExitThree) {
    const fs::path d = fresh("not_converged");
    EXPECT_EQ(run("solve-small --u 1 --max-iter 1 --tol 1e-14 --cache off --out " + d.string() + kSmallGrid, d / "log"), 3);
    const json m = json::parse(slurp(d / "solve-small.manifest.json"));
    EXPECT_EQ(m["items"][0]["status"], "not_converged");
}

TEST(Cli, UnwritableOutputExitFour) {
    const fs::path d = fresh("io_error");
    std::ofstream(d / "blocker") << "x";
    EXPECT_EQ(run("partitions --k 2 --n 3 --out " + (d / "blocker" / "sub").string(), d / "log"), 4);
}

TEST(Cli, CentralFiberHasSingleDisc) {
    const fs::path d = fresh("central");
    ASSERT_EQ(run("solve-small --u 0 --out " + d.string() + kSmallGrid, d / "log"), 0);
    const json m = json::parse(slurp(d / "solve-small.manifest.json"));
    ASSERT_EQ(m["items"].size(), 1u);
    EXPECT_EQ(m["items"][0]["excisions"].size(), 1u);
    EXPECT_EQ(m["items"][0]["excisions"][0]["roots"].size(), 3u);
}

TEST(Cli, CacheHitMatchesMissBytewise) {
    const fs::path d = fresh("cache");
    const std::string args = "mu-sweep --u 0,1 --seedless --out " + d.string() + kSmallGrid;
    ASSERT_EQ(run(args, d / "log1"), 0);
    const std::string first = slurp(d / "mu_sweep.csv");
    const std::string manifest = slurp(d / "mu-sweep.manifest.json");
    ASSERT_EQ(run(args, d / "log2"), 0);
    EXPECT_NE(slurp(d / "log2").find("cache hit"), std::string::npos);
    EXPECT_EQ(slurp(d / "mu_sweep.csv"), first);
    EXPECT_EQ(slurp(d / "mu-sweep.manifest.json"), manifest);
    ASSERT_EQ(run(args + " --cache off", d / "log3"), 0);
    EXPECT_EQ(slurp(d / "mu_sweep.csv"), first);
}

TEST(Cli, SweepSurvivesPartialFailure) {
    const fs::path d = fresh("partial");
    // 30 puts the roots outside |z| < R/2 for R = 4.
    EXPECT_EQ(run("decay --u 1,30 --out " + d.string() + kSmallGrid, d / "log"), 0);
    const std::string csv = slurp(d / "decay.csv");
    EXPECT_NE(csv.find(",ok"), std::string::npos);
    EXPECT_NE(csv.find(",error"), std::string::npos);
    EXPECT_EQ(json::parse(slurp(d / "decay.manifest.json"))["status"], "ok");
}
