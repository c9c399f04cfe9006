#pragma once

#include <filesystem>
#include <string>

#include "linefield/scenario.hpp"

namespace linefield {

// Exit codes shared by all subcommands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitNumericalFailure = 3;
inline constexpr int kExitDegenerateOnly = 4;

struct CommandOptions {
    std::filesystem::path out_dir = ".";
    int grid = 0;          // 0 = use scenario parameters
    std::uint64_t seed = 0;  // 0 = use scenario seed
    std::string format;    // empty = every format the command produces
};

int cmd_classify(const Scenario& sc, const CommandOptions& opt);
int cmd_portrait(const Scenario& sc, const CommandOptions& opt);
int cmd_scan(const Scenario& sc, const CommandOptions& opt);
int cmd_index(const Scenario& sc, const CommandOptions& opt);
int cmd_blowup(const Scenario& sc, const CommandOptions& opt);
int cmd_metric(const Scenario& sc, const CommandOptions& opt);
int cmd_torus_check(const Scenario& sc, const CommandOptions& opt);

// Dispatches by name and maps exceptions to exit codes (2 on configuration
// errors, 3 on numerical failures). Prints a one-line diagnostic on stderr.
int run_command(const std::string& name, const Scenario& sc, const CommandOptions& opt);

}  // namespace linefield
