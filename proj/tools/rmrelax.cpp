#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include "rmrelax/cli.hpp"

using namespace rmrelax;

int main(int argc, char** argv) {
    CLI::App app{"Two-level system relaxing in a random-matrix reservoir"};
    std::string subcommand;
    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    std::vector<std::string> sets;
    bool plot = false;
    app.add_option("subcommand", subcommand, "spectrum | evolve | vanhove | montecarlo | compare | equilibrium")
        ->required()
        ->check(CLI::IsMember(cli::subcommands()));
    app.add_option("--config", config_path, "JSON config file")->required();
    auto* out_opt = app.add_option("--out", out_dir, "output directory");
    auto* seed_opt = app.add_option("--seed", seed, "base seed for Monte Carlo sampling");
    app.add_option("--set", sets, "dotted-path override key=value (repeatable)");
    app.add_flag("--plot", plot, "also write SVG plots");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        nlohmann::json doc = cli::read_json(config_path);
        for (const auto& s : sets) cli::apply_override(doc, s);
        if (*out_opt) doc["output"] = out_dir;
        if (*seed_opt) doc["seed"] = seed;
        const cli::ExperimentConfig config = cli::parse_config(doc);
        const cli::RunResult r = cli::run(subcommand, config, plot);
        if (r.exit_code == 4)
            std::cerr << "compare: max deviation " << r.manifest["diagnostics"]["max_deviation"]
                      << " exceeds threshold " << config.options.threshold << '\n';
        std::cout << config.output << "/manifest.json\n";
        return r.exit_code;
    } catch (const Error& e) {
        std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
        return cli::exit_code(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
