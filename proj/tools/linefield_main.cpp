// Command-line entry point: scenario-driven classification, portraits,
// parameter scans, index computations, blow-ups, metric construction and
// the flat-torus index-sum check.

#include <CLI11.hpp>

#include <iostream>
#include <string>

#include "linefield/commands.hpp"
#include "linefield/errors.hpp"

int main(int argc, char** argv) {
    CLI::App app{"line-field singularity toolkit"};
    app.require_subcommand(1);

    std::string config;
    linefield::CommandOptions opt;

    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config, "scenario JSON file")->required();
        sub->add_option("--out", opt.out_dir, "output directory (default: .)");
        sub->add_option("--grid", opt.grid, "override grid / seed resolution");
        sub->add_option("--seed", opt.seed, "override the scenario RNG seed");
        sub->add_option("--format", opt.format, "restrict outputs: svg, csv or json")
            ->check(CLI::IsMember({"svg", "csv", "json"}));
    };

    const char* names[] = {"classify", "portrait", "scan",       "index",
                           "blowup",   "metric",   "torus-check"};
    const char* descriptions[] = {
        "locate, classify and index all singularities",
        "render integral manifolds and the separatrix skeleton",
        "classify along a one-parameter family",
        "winding indices on a circle and the index identity",
        "blow-up field zeros and the pi/2 jump",
        "build the bracket-generated metric and sample it",
        "sum line-field indices on the flat torus"};
    for (int i = 0; i < 7; ++i) add_common(app.add_subcommand(names[i], descriptions[i]));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : linefield::kExitConfigError;
    }

    const std::string sub = app.get_subcommands().front()->get_name();
    try {
        const linefield::Scenario sc = linefield::load_scenario(config);
        return linefield::run_command(sub, sc, opt);
    } catch (const linefield::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return linefield::kExitConfigError;
    }
}
