#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "rmrelax/dynamics_limit.hpp"
#include "rmrelax/error.hpp"
#include "rmrelax/selfconsistent.hpp"

namespace rmrelax::cli {

struct Grid {
    double start = 0.0;
    double stop = 0.0;
    int points = 1;

    std::vector<double> values() const;
    bool operator==(const Grid&) const = default;
};

struct ContourOverrides {
    double eta1 = 0.0;  // zero: automatic
    double eta2 = 0.0;
    double X = 0.0;
    double tol = 1e-6;

    bool operator==(const ContourOverrides&) const = default;
};

struct Options {
    double beta = 1.0;        // equilibrium: canonical inverse temperature
    double epsilon = 0.0;     // equilibrium: window half-width, zero = 5% of the support
    int bins = 50;            // spectrum: histogram bins of the finite-n measure (0 = off)
    double spacing = 0.01;    // spectrum / equilibrium: lambda spacing
    double eta = 1e-3;        // spectrum: inversion offset
    double threshold = 0.05;  // compare: acceptance threshold
    Grid lambda{0.0, 0.0, 0}; // equilibrium: window centres, zero points = automatic

    bool operator==(const Options&) const = default;
};

struct ExperimentConfig {
    nlohmann::json measure;
    double s = 0.0;
    double v = 0.0;
    double E = 0.0;
    Eigen::Matrix2cd rho0 = TwoLevelState().matrix();
    std::size_t n = 100;
    std::size_t samples = 50;
    std::uint64_t seed = 0;
    Grid time{0.0, 10.0, 51};
    Grid tau{0.0, 1.0, 21};
    ContourOverrides contour;
    std::string output = "out";
    Options options;

    ModelParams model() const;
    TwoLevelState initial_state() const;
    ContourSpec contour_spec() const;

    bool operator==(const ExperimentConfig&) const = default;
};

/// Fills defaults and validates; errors name the offending key.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::filesystem::path& path);
nlohmann::json to_json(const ExperimentConfig& c);

/// Applies "a.b.c=value" to a config document; value is read as JSON when it
/// parses, as a string otherwise.
void apply_override(nlohmann::json& doc, const std::string& assignment);

nlohmann::json read_json(const std::filesystem::path& path);

inline const std::vector<std::string>& subcommands() {
    static const std::vector<std::string> names{"spectrum",   "evolve",  "vanhove",
                                                "montecarlo", "compare", "equilibrium"};
    return names;
}

struct RunResult {
    nlohmann::json manifest;
    int exit_code = 0;
};

/// Runs one experiment, writes its data files (and SVG plots when asked) to
/// config.output plus manifest.json listing every file with its SHA-256.
RunResult run(const std::string& subcommand, const ExperimentConfig& config, bool plot = false);

/// 0 ok, 2 validation or parse, 3 solver non-convergence, 4 compare breach,
/// other kinds have their own codes.
int exit_code(ErrorKind kind);

}  // namespace rmrelax::cli
