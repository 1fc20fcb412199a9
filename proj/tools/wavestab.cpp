#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "wavestab/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Finite-parameter feedback stabilization of damped wave equations"};
    app.require_subcommand(1);

    std::string config, out_dir = ".", param, values;
    int jobs = 1, samples = 1000;
    std::uint64_t seed = 42;

    auto* check = app.add_subcommand("check", "evaluate the gain conditions of a config");
    check->add_option("--config", config, "INI config")->required();

    auto* run = app.add_subcommand("run", "simulate and write trajectory.csv and report.json");
    run->add_option("--config", config, "INI config")->required();
    run->add_option("--out", out_dir, "output directory");

    auto* sweep = app.add_subcommand("sweep", "run a config over a list of mu or N values");
    sweep->add_option("--config", config, "INI config")->required();
    sweep->add_option("--param", param, "mu or N")->required();
    sweep->add_option("--values", values, "comma separated values")->required();
    sweep->add_option("--out", out_dir, "output directory");
    sweep->add_option("--jobs", jobs, "parallel runs");

    auto* lemmas = app.add_subcommand("lemmas", "sample the interpolation inequalities");
    lemmas->add_option("--seed", seed, "RNG seed");
    lemmas->add_option("--samples", samples, "number of random functions");
    lemmas->add_option("--out", out_dir, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : wavestab::cli::kUsage;
    }

    using namespace wavestab::cli;
    if (check->parsed()) return cmd_check(config, std::cout, std::cerr);
    if (run->parsed()) return cmd_run(config, out_dir, std::cout, std::cerr);
    if (sweep->parsed()) return cmd_sweep(config, param, values, out_dir, jobs, std::cout, std::cerr);
    return cmd_lemmas(seed, samples, out_dir, std::cout, std::cerr);
}
