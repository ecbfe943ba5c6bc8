#include "app/app.hpp"

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace hyperrate::app;
namespace fs = std::filesystem;

namespace {

const fs::path kData = HYPERRATE_TEST_DATA;

fs::path temp_file(const std::string& name)
{
    return fs::temp_directory_path() / ("hyperrate_cli_" + name);
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

RunConfig make(std::string command, const std::string& graph = "")
{
    RunConfig cfg;
    cfg.command = std::move(command);
    if (!graph.empty())
        cfg.graph = kData / (graph + ".json");
    cfg.out = temp_file(cfg.command + "_" + graph + ".out");
    return cfg;
}

} // namespace

TEST(Cli, LabelingsCount)
{
    auto cfg = make("labelings", "k4r3");
    ASSERT_EQ(dispatch(cfg), 0);
    auto j = nlohmann::json::parse(slurp(cfg.out));
    EXPECT_EQ(j["count"], 6);
}

TEST(Cli, RhoSpecialGraph)
{
    auto cfg = make("rho", "special3");
    cfg.delta = 1.0;
    ASSERT_EQ(dispatch(cfg), 0);
    auto j = nlohmann::json::parse(slurp(cfg.out));
    EXPECT_NEAR(j["rho"].get<double>(), 0.4641016151, 1e-8);
}

TEST(Cli, SweepCsvIsMonotone)
{
    auto cfg = make("rho", "k4r3");
    cfg.sweep = "0.5:4:0.5";
    cfg.format = Format::csv;
    ASSERT_EQ(dispatch(cfg), 0);
    std::istringstream in(slurp(cfg.out));
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line.rfind("delta,rho,method", 0), 0u);
    double prev = -1;
    int rows = 0;
    while (std::getline(in, line)) {
        auto a = line.find(','), b = line.find(',', a + 1);
        const double rho = std::stod(line.substr(a + 1, b - a - 1));
        EXPECT_GE(rho, prev);
        prev = rho;
        ++rows;
    }
    EXPECT_EQ(rows, 8);
}

TEST(Cli, OutputIndependentOfThreads)
{
    auto a = make("simulate", "k4r3");
    a.n = 6;
    a.p = 0.5;
    a.delta = 0.5;
    a.samples = 2000;
    a.threads = 1;
    auto b = a;
    b.threads = 4;
    b.out = temp_file("simulate_threads4.out");
    ASSERT_EQ(dispatch(a), 0);
    ASSERT_EQ(dispatch(b), 0);
    EXPECT_EQ(slurp(a.out), slurp(b.out));
}

TEST(Cli, MissingGraphFile)
{
    auto cfg = make("labelings");
    cfg.graph = "/definitely/missing/graph.json";
    testing::internal::CaptureStderr();
    EXPECT_EQ(dispatch(cfg), 2);
    EXPECT_NE(testing::internal::GetCapturedStderr().find("/definitely/missing/graph.json"), std::string::npos);
}

TEST(Cli, UsageErrors)
{
    testing::internal::CaptureStderr();
    EXPECT_EQ(dispatch(make("bogus")), 2);
    auto cfg = make("rho", "k4r3"); // no delta and no sweep
    cfg.delta = -1;
    EXPECT_EQ(dispatch(cfg), 2);
    cfg = make("plant", "k4r3");
    cfg.format = Format::csv;
    EXPECT_EQ(dispatch(cfg), 2);
    testing::internal::GetCapturedStderr();
}

TEST(Cli, CorruptDataDirectory)
{
    auto dir = temp_file("bad_data");
    fs::create_directories(dir);
    for (const auto& e : fs::directory_iterator(kData))
        fs::copy_file(e.path(), dir / e.path().filename(), fs::copy_options::overwrite_existing);
    std::ofstream(dir / "k4r3.json") << "{ not json";
    auto cfg = make("verify");
    cfg.quick = true;
    cfg.data_dir = dir;
    testing::internal::CaptureStderr();
    EXPECT_EQ(dispatch(cfg), 2);
    testing::internal::GetCapturedStderr();
    fs::remove_all(dir);
}
