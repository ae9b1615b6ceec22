#pragma once

#include "cli/registry.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace subriem::cli {

struct RunConfig {
    std::string command;  // validate, check-minimality, first-variation, mesh, metric-factor
    SurfaceRequest surface;
    std::vector<int> grid;       // cells per parameter axis; nodes are cells + 1
    int quad = 16;
    double eps = 1e-4;
    double fd_step = 0.0;        // 0 selects the library default
    double tol = 0.0;            // 0 selects the command default
    std::string variation = "bump";  // bump or tangential
    std::uint64_t seed = 0;
    std::uint64_t samples = 1'000'000;
    int codim = 2;               // metric-factor slice codimension
    bool ball = false;           // mesh the unit ball instead of a surface
    std::optional<double> mu0;   // single ball slice
    std::vector<int> plane;      // 1-based horizontal axes of the ball slice
    int threads = 0;
    std::string out;             // CSV destination for mesh
    std::string json;            // report destination
};

struct CommandResult {
    int exit_code = 0;  // 0 pass, 1 check failed, 2 usage or I/O error
    nlohmann::json report;
    std::string csv;    // mesh output when no --out path is given
};

nlohmann::json config_json(const RunConfig& config);

CommandResult cmd_validate(const RunConfig& config);
CommandResult cmd_check_minimality(const RunConfig& config);
CommandResult cmd_first_variation(const RunConfig& config);
CommandResult cmd_mesh(const RunConfig& config);
CommandResult cmd_metric_factor(const RunConfig& config);

// Dispatches on config.command, maps errors to exit codes and writes --json / --out files.
CommandResult run_command(const RunConfig& config);

}  // namespace subriem::cli
