#pragma once

#include "subriem/frames.hpp"
#include "subriem/quadrature.hpp"

#include <functional>
#include <vector>

namespace subriem {

// One-parameter family F(eps, u) of immersions with F(0, .) the base patch.
struct VariationFamily {
    int domain_dim = 0;
    std::function<Vec(double, const Vec&)> deform;
    // d F / d u at fixed eps; central differences when empty.
    std::function<Mat(double, const Vec&)> deform_jacobian;
    // Variation field dF/deps at eps = 0 in coordinate components; central differences when empty.
    std::function<Vec(const Vec&)> field;
    bool boundary_fixed = false;

    Immersion member(double eps) const;
    Vec field_at(const Vec& u) const;
};

struct EvaluationOptions {
    FrameOptions frame;
    FrameGauge gauge;
    int threads = 0;  // 0 selects hardware concurrency
};

// Integral of the mu-density over the grid.
double mu_measure(const Submanifold& sub, const QuadratureGrid& grid, int threads = 0);

struct NumericFirstVariation {
    double central = 0.0;      // (V(eps) - V(-eps)) / (2 eps)
    double half_step = 0.0;    // same with eps / 2
    double richardson = 0.0;   // (4 half_step - central) / 3
    double eps = 0.0;
    double measure = 0.0;      // V(0)
};

NumericFirstVariation first_variation_numeric(const VariationFamily& fam, const StratifiedAlgebra& alg,
                                              const QuadratureGrid& grid, double eps,
                                              const EvaluationOptions& options = {});

struct AnalyticFirstVariation {
    double interior = 0.0;  // integral of sum_alpha f^alpha(W) (H_alpha + sigma_alpha) dmu
    double boundary = 0.0;  // flux of W^T through the boundary, outward normals
    double total() const { return interior + boundary; }
};

AnalyticFirstVariation first_variation_analytic(const VariationFamily& fam, const StratifiedAlgebra& alg,
                                                const QuadratureGrid& grid, const EvaluationOptions& options = {});

// Full-dimension case: sum over box faces of the integral of f^1(W) against the face mu-measure,
// with f^1 the conormal of the face oriented outward.
double boundary_conormal_flux(const VariationFamily& fam, const StratifiedAlgebra& alg, const ParameterBox& box,
                              int q, const EvaluationOptions& options = {});

struct NodeResidual {
    Vec u;
    Vec residual;  // H_alpha + sigma_alpha
    double norm = 0.0;
};

struct ResidualNorms {
    double sup = 0.0;   // max over nodes and alpha of |H_alpha + sigma_alpha|
    double l2 = 0.0;    // weighted RMS of |H + sigma| over the grid
    int nodes = 0;
    std::vector<NodeResidual> worst;  // largest residuals, descending
};

ResidualNorms minimality_residual(const Submanifold& sub, const QuadratureGrid& grid, int threads = 0,
                                  int keep_worst = 5);

}  // namespace subriem
