#pragma once

#include <subriem/quadrature.hpp>
#include <subriem/surfaces.hpp>

#include <optional>
#include <string>
#include <vector>

namespace subriem::cli {

struct SurfaceRequest {
    std::string builtin;
    std::string graph;     // expression in x1..x2n
    int n = 0;             // Heisenberg rank for graphs, 0 infers it from the expression
    double r = 1.0;        // radius for tubular and circle-cylinder
    std::string rule = "converse";
    std::string algebra_path;
};

// A resolved patch with its parameter box and reference data.
struct SurfaceCase {
    std::string name;
    StratifiedAlgebra alg = heisenberg_algebra(1);
    Immersion immersion;
    FrameGauge gauge;
    ParameterBox box;
    std::vector<std::string> parameter_names;
    std::vector<int> default_cells;
    bool expected_minimal = false;
    std::optional<double> expected_residual;  // known constant |H + sigma|
    std::optional<surfaces::ScalarField> graph;
    std::string expression;
    std::string convention;  // curvature sign rule for curve-generated surfaces
};

std::vector<std::string> builtin_names();
SurfaceCase resolve_surface(const SurfaceRequest& request);

}  // namespace subriem::cli
