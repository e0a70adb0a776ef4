// run_config.hpp: batch run configuration (JSON, unknown keys rejected)

#pragma once

#include "dwell/environment.hpp"
#include "dwell/evolution.hpp"
#include "dwell/model.hpp"

#include "json.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace dwell::cli {

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class Limit { Weak, Singular };

struct NoiseBlock {
    double dt = 0.01;
    int trajectories = 1000;
    std::array<bool, 4> channels{true, true, true, true};
    bool check_convergence = false;
};

struct RunConfig {
    ModelParams model;
    int n_max = 6;
    int N = 2;

    CorrelationKind kind = CorrelationKind::Exponential;
    Matrix4c G = Matrix4c::Identity();
    double mu = 1.0;
    bool lamb_shift = false;

    std::string scenario = "compare-all";
    double t_max = 1.0;
    int points = 11;
    Method method = Method::ExpProp;
    std::uint64_t seed = 0;
    std::optional<NoiseBlock> noise;
    std::string output_dir = ".";

    std::string text;      // file contents as read
    nlohmann::json echo;   // parsed document

    // Limits the scenario refers to; compare-all selects both.
    std::vector<Limit> limits() const;
    // Subcommand implied by the scenario name.
    std::string default_command() const;

    // Exponential(G, mu) or Delta(G), as configured.
    CorrelationModel correlation() const;
    // Delta(G); the singular limit always uses the delta-correlated form of G.
    CorrelationModel singular_correlation() const;
    std::vector<double> grid() const;
};

inline const std::vector<std::string> kScenarios{"slope-weak",      "slope-singular", "evolve-weak",
                                                 "evolve-singular", "unravel",        "compare-all"};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

std::string to_string(Limit limit);

} // namespace dwell::cli
