// dwell: batch front end

#include "commands.hpp"
#include "output.hpp"

#include "dwell/evolution.hpp"

#include "CLI11.hpp"

#include <iostream>
#include <utility>

#ifndef DWELL_BUILD_ID
#define DWELL_BUILD_ID "unknown"
#endif

using namespace dwell;
using namespace dwell::cli;

int main(int argc, char** argv)
{
    CLI::App app{"Double-well open-system simulator"};
    app.set_version_flag("--version", DWELL_BUILD_ID);

    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    bool quiet = false;
    app.add_option("--config", config_path, "Run configuration (JSON)");
    app.add_option("--out", out_dir, "Output directory (overrides output.dir)");
    app.add_option("--seed", seed, "Random seed (overrides seed)");
    app.add_flag("--quiet", quiet, "Suppress the summary on stdout");

    std::string command;
    app.fallthrough();
    const std::pair<const char*, const char*> commands[]{
        {"slope", "Initial current slope, numeric vs closed form"},
        {"evolve", "Lindblad evolution of the current and diagnostics"},
        {"unravel", "Stochastic ensemble against the singular-coupling generator"},
        {"compare", "Slope identities and null results"},
    };
    for (const auto& [name, about] : commands) {
        app.add_subcommand(name, about)->callback([&command, name = name] { command = name; });
    }
    app.require_subcommand(0, 1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kValidation;
    }

    if (config_path.empty()) {
        std::cerr << "dwell: --config is required\n";
        return kValidation;
    }

    try {
        RunContext ctx{load_config(config_path), "", DWELL_BUILD_ID};
        if (seed) ctx.config.seed = *seed;
        ctx.out_dir = out_dir.empty() ? ctx.config.output_dir : out_dir;
        if (command.empty()) command = ctx.config.default_command();

        CommandResult res;
        if (command == "slope") {
            res = run_slope(ctx);
        } else if (command == "evolve") {
            res = run_evolve(ctx);
        } else if (command == "unravel") {
            res = run_unravel(ctx);
        } else {
            res = run_compare(ctx);
        }

        if (!quiet) {
            for (const auto& line : res.summary) std::cout << line << "\n";
            for (const auto& path : res.written) std::cout << "wrote " << path << "\n";
        }
        if (res.code == kTolerance) std::cerr << "dwell: tolerance check failed\n";
        return res.code;
    } catch (const OutputError& e) {
        std::cerr << "dwell: " << e.what() << "\n";
        return kValidation;
    } catch (const NumericalError& e) {
        std::cerr << "dwell: numerical failure: " << e.what() << "\n";
        return kNumerical;
    } catch (const std::invalid_argument& e) {
        std::cerr << "dwell: invalid input: " << e.what() << "\n";
        return kValidation;
    } catch (const std::exception& e) {
        std::cerr << "dwell: numerical failure: " << e.what() << "\n";
        return kNumerical;
    }
}
