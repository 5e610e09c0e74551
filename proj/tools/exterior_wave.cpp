// exterior-wave <subcommand> --config <path> [--output-dir <path>] [--threads <k>]

#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "exwave/runner.hpp"

int main(int argc, char** argv) {
    namespace rn = exwave::runner;
    CLI::App app{"Radial waves outside the unit ball: transform checks, probes and solvers"};
    app.require_subcommand(1);

    const std::map<std::string, std::string> about{
        {"selftest", "transform round-trip and Parseval residuals on random fields"},
        {"dispersive", "sup-norm decay of single dyadic blocks under the half-wave group"},
        {"strichartz", "space-time norms of the half-wave evolution for admissible pairs"},
        {"endpoint", "ratio of the L^2 L^q norm to the H^{1/2} norm at two horizons"},
        {"solve", "cubic defocusing NLW with energy history and final state"},
        {"ftm", "high/low frequency splitting run with energy and norm tracking"},
        {"sweep", "ftm over several cutoffs J with fitted growth slopes"}};

    std::string config;
    std::string output_dir;
    int threads = 0;
    for (const auto& name : rn::subcommands()) {
        auto* sub = app.add_subcommand(name, about.at(name));
        sub->add_option("--config", config, "JSON config file")->required();
        sub->add_option("--output-dir", output_dir, "directory for CSV and manifest output");
        sub->add_option("--threads", threads, "worker threads for sweeps")->check(CLI::PositiveNumber);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : rn::kExitConfig;
    }

    rn::RunOptions opts;
    opts.subcommand = app.get_subcommands().front()->get_name();
    opts.config_path = config;
    if (!output_dir.empty()) opts.output_dir = output_dir;
    if (threads > 0) opts.threads = threads;
    return rn::run(opts, std::cout, std::cerr);
}
