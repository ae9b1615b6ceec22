#pragma once

#include "subriem/algebra.hpp"

#include <cstdint>

// The Heisenberg group H^n in exponential coordinates (x^1..x^{2n}, x^{2n+1}).
// Coordinates are stored 0-based, so the centre is index 2n.
namespace subriem::heisenberg {

// Returns n for a point with 2n+1 coordinates.
int rank_of(const Vec& p);

Vec identity(int n);
Vec multiply(const Vec& p, const Vec& q);
inline Vec inverse(const Vec& p) { return -p; }
// Columns are e_0..e_{2n} at p.
Mat left_invariant_frame(const Vec& p);
// Layer-1 coordinates scale by lambda, the centre by lambda^2.
Vec dilate(const Vec& p, double lambda);

// Standard symplectic form sum_i (x^i y^{i+n} - x^{i+n} y^i) on the horizontal coordinates.
double symplectic(const Vec& x, const Vec& y);

struct GeodesicState {
    double mu0 = 0.0;
    Vec mu;  // length 2n
};

Vec geodesic(const GeodesicState& s, double t);
// Velocity in coordinate components.
Vec geodesic_velocity(const GeodesicState& s, double t);

// eps(mu0) = sqrt(2 (1 - cos mu0)) / |mu0|, with eps(0) = 1.
double ball_epsilon(double mu0);
// (mu0 - sin mu0) / (2 mu0^2), with value 0 at mu0 = 0.
double ball_vertical_factor(double mu0);
// Point of the unit CC sphere (|mubar| = 1) or ball (|mubar| < 1).
Vec ball_parametrization(double mu0, const Vec& mubar);

// Carnot-Caratheodory distance from the identity.
double cc_distance(const Vec& p);
// Distance rho(q^{-1} p).
double cc_distance(const Vec& p, const Vec& q);
// Same as cc_distance(p) for a point with horizontal norm r and centre coordinate h.
double cc_norm(double r, double h);

struct MonteCarloOptions {
    std::uint64_t samples = 1'000'000;
    std::uint64_t seed = 0;
    int partitions = 16;
    int threads = 0;  // 0 selects hardware concurrency
};

struct MetricFactorEstimate {
    double value = 0.0;
    double standard_error = 0.0;
    std::uint64_t samples = 0;
    std::uint64_t inside = 0;
    double box_volume = 0.0;
};

// Lebesgue measure of the unit CC ball sliced by a subspace that contains the centre.
// The columns of subspace span the slice; they need not be orthonormal.
MetricFactorEstimate metric_factor_estimate(const Mat& subspace, const MonteCarloOptions& options);

}  // namespace subriem::heisenberg
