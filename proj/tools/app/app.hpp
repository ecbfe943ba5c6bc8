#pragma once

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace hyperrate::app {

inline constexpr std::uint64_t kDefaultSeed = 20240611;

enum class Format { json, csv };

struct RunConfig {
    std::string command;  // info, labelings, rho, plant, varsolve, simulate, analysis, verify
    std::string analysis; // cutnorm, gw, programs, lemmas
    std::filesystem::path graph;
    int n = 0;
    int r = 0;
    int k = 0;
    double p = 0.0;
    double delta = 0.0;
    std::uint64_t samples = 0;
    int restarts = -1;
    std::string sweep;               // a:b:step
    std::vector<std::string> restrict_values;
    std::vector<double> p_grid;
    bool exact = false;
    bool importance = false;
    bool quick = false;
    bool timings = false;
    std::filesystem::path tensor_out;
    std::filesystem::path data_dir;
    std::uint64_t seed = kDefaultSeed;
    int threads = 0; // 0: library default
    std::filesystem::path out;
    Format format = Format::json;
};

// Thrown for invalid parameter combinations; dispatch maps it to exit 2.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void validate(const RunConfig& cfg);

// Runs the configured command and writes its report to cfg.out (stdout when
// empty). 0 on success, 1 when a check fails, 2 on usage or IO errors.
int dispatch(const RunConfig& cfg);

struct Check {
    std::string name;
    nlohmann::ordered_json expected;
    nlohmann::ordered_json observed;
    double tolerance = 0.0;
    bool pass = false;
    double seconds = 0.0;
    std::string note;
};

struct VerifyReport {
    std::string mode;
    std::uint64_t seed = kDefaultSeed;
    std::vector<Check> checks;
    bool pass = true;
};

enum class VerifyMode { quick, full };

VerifyReport verify_all(VerifyMode mode, const std::filesystem::path& data_dir, std::uint64_t seed);

nlohmann::ordered_json to_json(const VerifyReport& report, bool timings);

std::filesystem::path default_data_dir();

} // namespace hyperrate::app
