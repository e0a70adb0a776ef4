// commands.hpp: subcommands of the dwell batch tool

#pragma once

#include "run_config.hpp"

#include "json.hpp"

#include <string>

namespace dwell::cli {

enum ExitCode : int { kOk = 0, kValidation = 1, kTolerance = 2, kNumerical = 3 };

inline constexpr double kRelativeTolerance = 1e-10;
inline constexpr double kNullTolerance = 1e-12;
inline constexpr double kEnsembleSigmas = 3.0;

struct CommandResult {
    ExitCode code = kOk;
    std::vector<std::string> written;
    std::vector<std::string> summary;
};

struct RunContext {
    RunConfig config;
    std::string out_dir;
    std::string build_id;
};

CommandResult run_slope(const RunContext& ctx);
CommandResult run_evolve(const RunContext& ctx);
CommandResult run_unravel(const RunContext& ctx);
CommandResult run_compare(const RunContext& ctx);

// Slope identities and null checks as a JSON block plus an overall flag.
nlohmann::json compare_suite(const RunConfig& config, bool& all_pass);

} // namespace dwell::cli
