#pragma once

#include "subriem/frames.hpp"

#include <cmath>
#include <functional>
#include <string>

// Explicit constructions in the Heisenberg groups, mostly H^2 (coordinates x1..x4, x5).
namespace subriem::surfaces {

using Vec4 = Eigen::Vector4d;
using Mat4 = Eigen::Matrix4d;

// Complex structures on the horizontal layer of H^2:
// J e1 = e3, J e2 = e4, J e3 = -e1, J e4 = -e2 and R e1 = e2, R e2 = -e1, R e3 = -e4, R e4 = e3.
// Accepts 4-vectors or 5-vectors with zero centre component.
Vec4 apply_J(const Vec& x);
Vec4 apply_R(const Vec& x);
Mat4 J_matrix();
Mat4 R_matrix();

// f3 = R f4, f2 = -J f4, f1 = -R f2; the only non-zero brackets are [f1, f3] = [f2, f4] = e5.
struct JRFrame {
    Vec4 f1, f2, f3, f4;

    // Columns f1, f2, f3, f4.
    Mat4 matrix() const;
};
JRFrame jr_frame(const Vec4& f4);

// Skew matrix of the s-system f4' = b1 f1 + b3 f3 acting on f4.
Mat4 system_matrix(double b1, double b3);
// Phi(s) = cos(s b) I + sin(s b) / b M, the solution operator of that system.
Mat4 fundamental_matrix(double b1, double b3, double s);

// Transverse curve in H^2 with a unit horizontal field along it.
struct CurveData {
    std::function<Vec(double)> gamma;       // 5 coordinates
    std::function<Vec(double)> gamma_dot;
    std::function<Vec(double)> gamma_ddot;
    std::function<Vec4(double)> f4;
    std::function<Vec4(double)> f4_dot;
};

// Which sign rule turns the coefficients A_5^alpha into (b1, b3).
enum class CurvatureRule {
    converse,     // b1 = -A_5^3, b3 = A_5^1
    first_order,  // b1 = A_5^3, b3 = -A_5^1
};
std::string to_string(CurvatureRule rule);

// Decomposition d gamma / dt = lambda1 f4 + lambda2 f5 with f5 = e5 - sum A_5^alpha f_alpha.
struct CurveSample {
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    Eigen::Vector3d A = Eigen::Vector3d::Zero();      // A_5^1, A_5^2, A_5^3
    Eigen::Vector3d A_dot = Eigen::Vector3d::Zero();
    double b1 = 0.0, b3 = 0.0;
    double b1_dot = 0.0, b3_dot = 0.0;

    double b() const { return std::hypot(b1, b3); }
};
CurveSample sample_curve(const CurveData& curve, double t, CurvatureRule rule = CurvatureRule::converse);

// phi(t, s) = gamma(t) . (Delta x, 0) with Delta x = int_0^s Phi f4. Parameters are (t, s).
Immersion tubular_surface(const CurveData& curve, CurvatureRule rule = CurvatureRule::converse);
// phi(t, s) = gamma(t) . (s f4(t), 0).
Immersion ruled_surface(const CurveData& curve);
// JR frame of the transported field Phi(t, s) f4(t): normals f1, f2, f3, then the tangent f4.
FrameGauge transported_gauge(const CurveData& curve, CurvatureRule rule = CurvatureRule::converse);

struct GeneratedSurface {
    Immersion immersion;
    FrameGauge gauge;
    std::string kind;  // "ruled" or "tubular"
    CurvatureRule rule = CurvatureRule::converse;
    double b_min = 0.0;
    double b_max = 0.0;
};
// Samples b over [t0, t1]: identically zero gives the ruled surface, positive gives the tubular one,
// a sign change is rejected.
GeneratedSurface surface_from_curve(const CurveData& curve, double t0, double t1,
                                    CurvatureRule rule = CurvatureRule::converse, int samples = 65);

// gamma(t) = (r cos(t/r), 0, r sin(t/r), 0, 0) with f4 = (0, cos(t/r), 0, sin(t/r)).
CurveData circle_curve(double r);
// gamma(t) = t v for a fixed 5-vector v, with constant f4.
CurveData straight_curve(const Vec& v, const Vec4& f4);

// N(u, t) = (M(u), t) for an immersion M into R^{2n}.
Immersion vertical_cylinder(const Immersion& base);

// Value, gradient and Hessian of a function on R^{2n}.
struct ScalarJet {
    double value = 0.0;
    Vec grad;
    Mat hess;
};
using ScalarField = std::function<ScalarJet(const Vec&)>;

// x -> (x, u(x)) in H^n.
Immersion graph_immersion(int n, const ScalarField& u);

// phi_j = e_j(u - x_{2n+1}) for the graph of u; the horizontal gradient of the defining function.
Vec graph_horizontal_gradient(const ScalarJet& jet, const Vec& x);
// sum u_ii - (1/N^2) sum phi_i phi_j u_ij, N = |phi|.
double graph_residual(const ScalarField& u, const Vec& x);

struct DivergenceOptions {
    double inner_step = 0.0;  // 0 selects default_fd_step
    double outer_step = 1e-3;
};
// sum_j e_j(phi_j / N) with phi_j = e_j phi, by nested central differences along left translations.
double divergence_mean_curvature(const std::function<double(const Vec&)>& phi, const Vec& x,
                                 const DivergenceOptions& options = {});

}  // namespace subriem::surfaces
