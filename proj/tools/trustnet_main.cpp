#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "trustnet/cli.hpp"
#include "trustnet/errors.hpp"

int main(int argc, char** argv)
{
    CLI::App app{"deterministic simulator for a self-securing agent hierarchy"};
    app.require_subcommand(1);

    CLI::App* run = app.add_subcommand("run", "run one scenario and dump its trace");
    std::string run_config;
    std::optional<std::uint64_t> run_seed;
    std::string run_out;
    std::string run_format = "json";
    run->add_option("config", run_config, "scenario config JSON")->required();
    run->add_option("--seed", run_seed, "override the scenario seed");
    run->add_option("--out", run_out, "trace output path (csv: bundle base name)");
    run->add_option("--format", run_format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));

    CLI::App* sweep = app.add_subcommand("sweep", "run a (n_agents, m) robustness sweep");
    std::string sweep_config;
    int sweep_jobs = 0;
    std::string sweep_out;
    std::string sweep_format = "json";
    sweep->add_option("config", sweep_config, "sweep config JSON")->required();
    sweep->add_option("--jobs", sweep_jobs, "worker threads (default: OpenMP)");
    sweep->add_option("--out", sweep_out, "result table output path");
    sweep->add_option("--format", sweep_format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));

    CLI::App* dyn = app.add_subcommand("dynamics",
                                       "evaluate the trust drift field or iterates");
    std::string dyn_config;
    std::optional<std::uint64_t> dyn_seed;
    std::string dyn_out;
    std::string dyn_format = "json";
    dyn->add_option("config", dyn_config, "dynamics config JSON")->required();
    dyn->add_option("--seed", dyn_seed, "override the config seed");
    dyn->add_option("--out", dyn_out, "report output path");
    dyn->add_option("--format", dyn_format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));

    CLI::App* validate =
        app.add_subcommand("validate", "check a config or grid case file");
    std::string validate_config;
    validate->add_option("config", validate_config, "config JSON")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (run->parsed()) {
            return trustnet::cmd_run(run_config, run_seed, run_out, run_format);
        }
        if (sweep->parsed()) {
            return trustnet::cmd_sweep(sweep_config, sweep_jobs, sweep_out, sweep_format);
        }
        if (dyn->parsed()) {
            return trustnet::cmd_dynamics(dyn_config, dyn_seed, dyn_out, dyn_format);
        }
        if (validate->parsed()) {
            return trustnet::cmd_validate(validate_config);
        }
    } catch (const trustnet::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
