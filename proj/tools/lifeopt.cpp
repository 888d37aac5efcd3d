// Command-line front end: solve, sweep-theta, indifference, validate.

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "lifeopt/commands.hpp"
#include "lifeopt/config.hpp"

int main(int argc, char** argv) {
    using namespace lifeopt;

    CLI::App app{"Optimal consumption, investment and life insurance under exponential utility"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> paths;
    std::optional<double> dt;
    std::optional<std::string> thetas;
    std::optional<unsigned> workers;

    for (const char* name : {"solve", "sweep-theta", "indifference", "validate"}) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "JSON configuration file")->required();
        sub->add_option("--out", out_dir, "output directory (default ./out)");
        sub->add_option("--seed", seed, "Monte Carlo seed (overrides mc.seed)");
        sub->add_option("--paths", paths, "Monte Carlo path count (overrides mc.paths)");
        sub->add_option("--dt", dt, "simulation step for the utility check (overrides mc.dt)");
        sub->add_option("--theta", thetas, "comma-separated premium amounts (overrides sweep.thetas)");
        sub->add_option("--workers", workers, "worker threads, 0 = all cores (overrides mc.workers)");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }
    const std::string command = app.get_subcommands().front()->get_name();

    RunConfig config;
    try {
        config = load_config(config_path);
        if (!out_dir.empty()) config.output_dir = out_dir;
        if (seed) config.mc.seed = *seed;
        if (paths) config.mc.paths = *paths;
        if (dt) config.mc.dt = *dt;
        if (workers) config.mc.workers = *workers;
        if (thetas) config.sweep.thetas = parse_theta_list(*thetas);
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    }
    return run_command(command, config, std::cout, std::cerr);
}
