#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cubecx/analysis.hpp"
#include "cubecx/median_graph.hpp"

namespace cubecx::cli {

enum class Command { Generate, Validate, Verify, Profile, Analyze };

enum ExitCode : int { kSuccess = 0, kVerificationFailed = 1, kInputError = 2 };

struct RunConfig {
    Command command = Command::Validate;
    std::string spec;  // generate: inline JSON or a path to a JSON file
    std::filesystem::path input;
    std::filesystem::path output;
    Vertex basepoint = 0;
    bool all_basepoints = false;
    std::optional<double> eps;  // profile
    std::vector<double> eps_grid{0.1, 0.2, 0.3, 0.4, 0.45};
    std::size_t radii_count = 64;  // 0: every integer radius
    std::optional<std::uint32_t> window_min, window_max;
    std::size_t exhaustive_limit = kDefaultExhaustiveLimit;
    std::size_t median_samples = kDefaultMedianSamples;
    std::size_t vertex_cap = 1'000'000;
    AnalysisOptions analysis;
    std::uint64_t seed = 0;
    bool json_errors = false;
};

/// Parses argv into a config. On --help or a usage error returns nullopt and
/// sets exit_code (0 for help, 2 otherwise) after printing to out/err.
std::optional<RunConfig> parse_command_line(int argc, const char* const* argv, std::ostream& out, std::ostream& err,
                                            int& exit_code);

/// Executes the command: 0 success, 1 a verification failed, 2 input error.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// parse_command_line followed by run.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cubecx::cli
