#pragma once

#include "subriem/algebra.hpp"

#include <functional>
#include <vector>

namespace subriem {

// Parametrized patch u -> phi(u) in exponential coordinates of the group.
struct Immersion {
    int domain_dim = 0;
    std::function<Vec(const Vec&)> map;
    // Coordinate partial derivatives, group_dim x domain_dim. Central differences when empty.
    std::function<Mat(const Vec&)> jacobian;

    Vec operator()(const Vec& u) const { return map(u); }
    Mat jacobian_at(const Vec& u) const;
};

// Default central-difference step max(1e-5, 1e-5 |u|).
double default_fd_step(const Vec& u);

struct FrameOptions {
    double transversality_tol = 1e-8;
    double fd_step = 0.0;          // 0 selects default_fd_step
    double flip_tolerance = 0.5;   // minimum agreement with the reference frame on a stencil
};

// Adapted frame at one point. Index conventions (0-based):
//   [0, p)      horizontal normals f_alpha
//   [p, d1)     orthonormal basis of TM n D
//   [d1, n)     f_j = e_j - sum_alpha A_j^alpha f_alpha, tangent to M
struct AdaptedFrame {
    int n = 0;
    int d1 = 0;
    int p = 0;
    Vec point;
    Mat tangent;   // algebra coefficients of d phi / d u_a, n x m
    Mat vectors;   // column i is f_i in the basis e
    Mat dual;      // row i is f^i, the inverse of vectors
    Mat A;         // (n - d1) x p, A(j - d1, alpha) = A_j^alpha
    double transversality = 0.0;

    // a(j, k) = a_j^k, so that f_j = sum_k a_j^k e_k for j < d1.
    Mat a() const { return vectors.topLeftCorner(d1, d1).transpose(); }
    Vec f(int i) const { return vectors.col(i); }
    int dim() const { return n - p; }
};

// Builds the adapted frame from the tangent coefficients T = E(x)^{-1} d phi.
// With a reference frame the TM n D and normal bases are aligned to it.
AdaptedFrame adapted_frame(const StratifiedAlgebra& alg, const Vec& point, const Mat& tangent,
                           const AdaptedFrame* reference = nullptr, const FrameOptions& options = {},
                           bool strict_reference = true);

// Signed determinant of [f^i(d phi / d u_j)], i >= p: the mu-density in the frame's parameters.
double signed_mu_density(const AdaptedFrame& frame);

// det B and det W with B = I + A A^T and W = I - A^T B^{-1} A; their product is 1.
struct DeterminantPair {
    double det_B = 1.0;
    double det_W = 1.0;
};
DeterminantPair determinant_pair(const Mat& A);

struct ShapeData {
    AdaptedFrame frame;
    // omega[k - p](i, j) = omega_j^i(f_k) for tangent k, i < d1.
    std::vector<Mat> omega;
    // S[alpha](k - p, l - p) = S(f_k, f_l)^alpha.
    std::vector<Mat> S;
    // Weingarten[alpha] is the matrix of A_{f_alpha} in the tangent basis f_p..f_{n-1}.
    std::vector<Mat> weingarten;
    Vec H;
    Vec sigma;

    Vec residual() const { return H + sigma; }
};

struct MuDensity {
    double density = 0.0;       // |det f^i(d phi / d u_j)|, i >= p
    double signed_density = 0.0;
    double via_determinants = 0.0;  // det(B)^{-1/2} times the Riemannian area factor
    double area = 0.0;
    double det_B = 1.0;
    double det_W = 1.0;
};

struct StructuralResiduals {
    double cartan_normal = 0.0;      // d f^alpha on M
    double cartan_horizontal = 0.0;  // d f^i, i in [p, d1)
    double cartan_vertical = 0.0;    // d f^j, j >= d1
    double cartan_flatness = 0.0;    // d omega + omega ^ omega
    double gauss = 0.0;
    double codazzi = 0.0;
    double ricci = 0.0;

    double max() const;
};

// Optional preferred horizontal frame (columns) used to fix the gauge of the base frame.
using FrameGauge = std::function<Mat(const Vec&)>;

// A non-horizontal patch in a stratified group together with the frame machinery.
class Submanifold {
public:
    Submanifold(StratifiedAlgebra alg, Immersion im, FrameOptions options = {}, FrameGauge gauge = {});

    const StratifiedAlgebra& algebra() const { return alg_; }
    const Immersion& immersion() const { return im_; }
    const FrameOptions& options() const { return options_; }
    int codim() const { return alg_.dim() - im_.domain_dim; }

    double fd_step(const Vec& u) const;
    Mat tangent(const Vec& u, const Vec& point) const;

    AdaptedFrame frame(const Vec& u) const;
    AdaptedFrame frame(const Vec& u, const AdaptedFrame& reference) const;

    // omega_j^i along the parameter direction du, as a d1 x n matrix.
    Mat connection_forms(const Vec& u, const Vec& du) const;
    ShapeData shape_operators(const Vec& u) const;
    MuDensity mu_density(const Vec& u) const;
    // Residuals of the structure equations in the parameter plane (axis_a, axis_b) with step h.
    StructuralResiduals structural_residuals(const Vec& u, double h, int axis_a = 0, int axis_b = 1) const;

    // Parameter vector c with T c = X for X tangent to M.
    static Vec parameter_direction(const AdaptedFrame& frame, const Vec& X);

private:
    Mat connection_from_stencil(const AdaptedFrame& base, const AdaptedFrame& plus, const AdaptedFrame& minus,
                                double h) const;
    Mat connection_at(const Vec& u, const Vec& du, const AdaptedFrame& base, const AdaptedFrame& reference,
                      double h) const;

    StratifiedAlgebra alg_;
    Immersion im_;
    FrameOptions options_;
    FrameGauge gauge_;
};

}  // namespace subriem
