#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "nzsdg/config.hpp"
#include "nzsdg/parallel.hpp"
#include "nzsdg/run.hpp"

int main(int argc, char** argv) {
    CLI::App app{"nzsdg: bang-bang Nash equilibria of two-player stochastic differential games"};
    std::string command;
    std::string config_path;
    std::optional<std::string> out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> threads;
    app.add_option("command", command, "validate | solve | refine | simulate | verify | oracle")->required();
    app.add_option("--config", config_path, "run configuration (JSON)")->required();
    app.add_option("--out", out_dir, "output directory, overrides output_dir");
    app.add_option("--seed", seed, "simulation seed, overrides sim.seed");
    app.add_option("--threads", threads, "worker threads (0 = auto)");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    const auto cmd = nzsdg::parse_command(command);
    if (!cmd) {
        std::cerr << "error: unknown command '" << command << "'\n";
        return 2;
    }
    if (threads) nzsdg::set_thread_count(*threads);

    nzsdg::RunConfig config;
    try {
        config = nzsdg::parse_config(config_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    if (out_dir) config.output_dir = *out_dir;
    if (seed) config.sim.seed = *seed;
    return nzsdg::run(*cmd, config, std::cerr);
}
