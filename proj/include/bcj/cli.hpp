#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

namespace bcj::cli {

inline constexpr const char* kVersion = "0.3.0";

enum ExitCode : int {
    kOk = 0,
    kFailure = 1,
    kUsage = 2,
    kCapExceeded = 3,
    kDegenerate = 4,
    kIoError = 5,
};

/// Every parameter a command can take. Serialized as the run manifest; a
/// manifest passed back through --config reproduces the run.
struct RunConfig {
    std::string command;
    std::string kind = "blind";
    int m = 0;  // 0 = not given
    double delta = 0.05;
    std::vector<double> p_grid;
    std::vector<int> q_grid{2, 4, 8, 16, 32};
    int draws = 10;
    std::uint64_t seed = 1;
    int workers = 1;
    std::int64_t samples = 200'000;
    std::int64_t max_trials = 1'000'000;
    std::int64_t min_errors = 100;
    std::string method = "auto";
    std::uint64_t lattice_cap = 10'000'000;
    std::uint64_t mc_cap = 1'000'000;
    std::uint64_t quadrature_cap = 10'000;
    int skip_lowest = 0;
    double sigma1 = 1.0;
    double sigma2 = 1.0;
    std::string out;
    std::vector<std::string> inputs;
};

void to_json(nlohmann::json& j, const RunConfig& cfg);
void from_json(const nlohmann::json& j, RunConfig& cfg);

/// Parses "1e2,1e3,1e4".
std::vector<double> parse_power_list(const std::string& text);
/// Parses "start,stop,points_per_decade" into a log-spaced grid (stop included when on the grid).
std::vector<double> parse_power_range(const std::string& text);

/// Runs one command; diagnostics go to `err`, summaries to `out`. Returns an ExitCode.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bcj::cli
