#include <omp.h>

#include <CLI11.hpp>
#include <algorithm>
#include <cstdlib>
#include <iostream>
#include <string>

#include "commands.hpp"

int main(int argc, char** argv) {
    using cogra::cli::Options;
    Options opt;
    CLI::App app{"Energy-efficient power control and frame design for a cognitive link"};
    app.add_option("command", opt.command, "optimize-ee | optimize-rate-min-ee | feasibility | validate | sweep")
        ->required()
        ->check(CLI::IsMember(
            {"optimize-ee", "optimize-rate-min-ee", "feasibility", "validate", "sweep"}));
    app.add_option("--scenario", opt.scenario, "scenario JSON file")->required();
    app.add_option("--out", opt.out, "output CSV path")->required();
    app.add_option("--seed", opt.seed, "Monte Carlo seed");
    app.add_option("--grid-order", opt.grid_order, "Gauss-Laguerre nodes per dimension")
        ->check(CLI::Range(2, 512));
    app.add_option("--trials", opt.trials, "Monte Carlo trials")->check(CLI::Range(1000, 100000000));
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? cogra::cli::kExitOk : cogra::cli::kExitError;
    }

    if (const char* env = std::getenv("COGRA_THREADS")) {
        char* end = nullptr;
        const long n = std::strtol(env, &end, 10);
        if (end == env || *end != '\0' || n < 1) {
            std::cerr << "COGRA_THREADS must be a positive integer, got '" << env << "'\n";
            return cogra::cli::kExitError;
        }
        omp_set_num_threads(static_cast<int>(std::min<long>(n, omp_get_max_threads())));
    }
    return cogra::cli::run(opt, std::cerr);
}
