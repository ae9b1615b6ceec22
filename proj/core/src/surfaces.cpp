#include "subriem/surfaces.hpp"

#include "subriem/errors.hpp"
#include "subriem/heisenberg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace subriem::surfaces {

namespace {

Vec4 horizontal(const Vec& x) {
    if (x.size() == 4) return x;
    if (x.size() == 5) {
        if (x(4) != 0.0) throw std::invalid_argument("J and R act on horizontal vectors only");
        return x.head<4>();
    }
    throw std::invalid_argument("expected a horizontal vector of H^2");
}

double omega4(const Vec4& x, const Vec4& y) { return x(0) * y(2) + x(1) * y(3) - x(2) * y(0) - x(3) * y(1); }

// Even functions of x = s b that appear in the generator, with series near 0.
double sinc(double x) {
    const double x2 = x * x;
    if (std::abs(x) < 0.05) return 1.0 - x2 / 6.0 * (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0));
    return std::sin(x) / x;
}
// (1 - cos x) / x^2
double versine2(double x) {
    const double x2 = x * x;
    if (std::abs(x) < 0.05) return 0.5 - x2 / 24.0 * (1.0 - x2 / 30.0 * (1.0 - x2 / 56.0));
    return (1.0 - std::cos(x)) / x2;
}
// sinc'(x) / x
double sinc_slope(double x) {
    const double x2 = x * x;
    if (std::abs(x) < 0.05) return -1.0 / 3.0 + x2 / 30.0 - x2 * x2 / 840.0;
    return (x * std::cos(x) - std::sin(x)) / (x2 * x);
}
// versine2'(x) / x
double versine2_slope(double x) {
    const double x2 = x * x;
    if (std::abs(x) < 0.05) return -1.0 / 12.0 + x2 / 180.0 - x2 * x2 / 6720.0;
    return (x * std::sin(x) - 2.0 * (1.0 - std::cos(x))) / (x2 * x2);
}

Mat4 k1_matrix() { return R_matrix() * J_matrix(); }

Vec eval_or_diff(const std::function<Vec(double)>& f, const std::function<Vec(double)>& base, double t) {
    if (f) return f(t);
    constexpr double h = 1e-6;
    return (base(t + h) - base(t - h)) / (2.0 * h);
}

struct Generator {
    Vec point;
    Mat jac;  // 5 x 2, columns d/dt and d/ds
};

Generator generate(const CurveData& curve, const CurveSample& cs, double t, double s) {
    const Vec g = curve.gamma(t);
    const Vec gd = curve.gamma_dot(t);
    const Vec4 gh = g.head<4>();
    const Vec4 ghd = gd.head<4>();
    const Vec4 f4 = curve.f4(t);
    const Vec4 f4d = curve.f4_dot ? curve.f4_dot(t) : Vec4((curve.f4(t + 1e-6) - curve.f4(t - 1e-6)) / 2e-6);

    const Mat4 m = system_matrix(cs.b1, cs.b3);
    const Mat4 md = system_matrix(cs.b1_dot, cs.b3_dot);
    const double x = s * cs.b();
    const double bbd = cs.b1 * cs.b1_dot + cs.b3 * cs.b3_dot;
    const double sv = s * sinc(x);
    const double cv = s * s * versine2(x);

    const Vec4 mf4 = m * f4;
    const Vec4 dx = sv * f4 + cv * mf4;
    const Vec4 dx_s = std::cos(x) * f4 + sv * mf4;
    const Vec4 dx_t = s * s * s * sinc_slope(x) * bbd * f4 + sv * f4d + s * s * s * s * versine2_slope(x) * bbd * mf4 +
                      cv * (md * f4 + m * f4d);

    Generator out;
    out.point.resize(5);
    out.point.head<4>() = gh + dx;
    out.point(4) = g(4) + 0.5 * omega4(gh, dx);
    out.jac.resize(5, 2);
    out.jac.col(0).head<4>() = ghd + dx_t;
    out.jac(4, 0) = gd(4) + 0.5 * (omega4(ghd, dx) + omega4(gh, dx_t));
    out.jac.col(1).head<4>() = dx_s;
    out.jac(4, 1) = 0.5 * omega4(gh, dx_s);
    return out;
}

void check_curve(const CurveData& curve) {
    if (!curve.gamma || !curve.gamma_dot || !curve.f4) throw std::invalid_argument("curve needs gamma, gamma_dot and f4");
}

}  // namespace

Mat4 J_matrix() {
    Mat4 j = Mat4::Zero();
    j(2, 0) = 1.0;
    j(3, 1) = 1.0;
    j(0, 2) = -1.0;
    j(1, 3) = -1.0;
    return j;
}

Mat4 R_matrix() {
    Mat4 r = Mat4::Zero();
    r(1, 0) = 1.0;
    r(0, 1) = -1.0;
    r(3, 2) = -1.0;
    r(2, 3) = 1.0;
    return r;
}

Vec4 apply_J(const Vec& x) { return J_matrix() * horizontal(x); }
Vec4 apply_R(const Vec& x) { return R_matrix() * horizontal(x); }

Mat4 JRFrame::matrix() const {
    Mat4 m;
    m << f1, f2, f3, f4;
    return m;
}

JRFrame jr_frame(const Vec4& f4) {
    if (std::abs(f4.norm() - 1.0) > 1e-10) throw std::invalid_argument("f4 must be a unit vector");
    JRFrame fr;
    fr.f4 = f4;
    fr.f3 = R_matrix() * f4;
    fr.f2 = -(J_matrix() * f4);
    fr.f1 = -(R_matrix() * fr.f2);
    return fr;
}

Mat4 system_matrix(double b1, double b3) { return b1 * k1_matrix() + b3 * R_matrix(); }

Mat4 fundamental_matrix(double b1, double b3, double s) {
    const double b = std::hypot(b1, b3);
    if (!(b > 0.0)) throw std::domain_error("fundamental matrix needs b > 0; use the ruled generator");
    return std::cos(s * b) * Mat4::Identity() + (std::sin(s * b) / b) * system_matrix(b1, b3);
}

std::string to_string(CurvatureRule rule) {
    return rule == CurvatureRule::converse ? "converse" : "first-order";
}

CurveSample sample_curve(const CurveData& curve, double t, CurvatureRule rule) {
    check_curve(curve);
    const Vec g = curve.gamma(t);
    const Vec gd = curve.gamma_dot(t);
    const Vec gdd = eval_or_diff(curve.gamma_ddot, curve.gamma_dot, t);
    if (g.size() != 5 || gd.size() != 5 || gdd.size() != 5) throw std::invalid_argument("curve must lie in H^2");
    const Vec4 gh = g.head<4>();
    const Vec4 xi = gd.head<4>();
    const Vec4 xi_d = gdd.head<4>();
    const double xi5 = gd(4) - 0.5 * omega4(gh, xi);
    const double xi5_d = gdd(4) - 0.5 * omega4(gh, xi_d);
    if (std::abs(xi5) < 1e-12) throw TransversalityError("curve is not transverse: d gamma / dt is horizontal");

    const Vec4 f4 = curve.f4(t);
    const Vec4 f4d = curve.f4_dot ? curve.f4_dot(t) : Vec4((curve.f4(t + 1e-6) - curve.f4(t - 1e-6)) / 2e-6);
    const JRFrame fr = jr_frame(f4);
    const Mat4 k[3] = {k1_matrix(), -J_matrix(), R_matrix()};
    const Vec4 fa[3] = {fr.f1, fr.f2, fr.f3};

    CurveSample out;
    out.lambda1 = xi.dot(f4);
    out.lambda2 = xi5;
    for (int a = 0; a < 3; ++a) {
        const double c = xi.dot(fa[a]);
        const double cd = xi_d.dot(fa[a]) + xi.dot(k[a] * f4d);
        out.A(a) = -c / xi5;
        out.A_dot(a) = -cd / xi5 + c * xi5_d / (xi5 * xi5);
    }
    const double sign = rule == CurvatureRule::converse ? 1.0 : -1.0;
    out.b1 = -sign * out.A(2);
    out.b3 = sign * out.A(0);
    out.b1_dot = -sign * out.A_dot(2);
    out.b3_dot = sign * out.A_dot(0);
    return out;
}

Immersion tubular_surface(const CurveData& curve, CurvatureRule rule) {
    check_curve(curve);
    Immersion im;
    im.domain_dim = 2;
    im.map = [curve, rule](const Vec& u) { return generate(curve, sample_curve(curve, u(0), rule), u(0), u(1)).point; };
    im.jacobian = [curve, rule](const Vec& u) {
        return generate(curve, sample_curve(curve, u(0), rule), u(0), u(1)).jac;
    };
    return im;
}

Immersion ruled_surface(const CurveData& curve) {
    check_curve(curve);
    Immersion im;
    im.domain_dim = 2;
    im.map = [curve](const Vec& u) { return generate(curve, CurveSample{}, u(0), u(1)).point; };
    im.jacobian = [curve](const Vec& u) { return generate(curve, CurveSample{}, u(0), u(1)).jac; };
    return im;
}

FrameGauge transported_gauge(const CurveData& curve, CurvatureRule rule) {
    check_curve(curve);
    return [curve, rule](const Vec& u) -> Mat {
        const CurveSample cs = sample_curve(curve, u(0), rule);
        const double x = u(1) * cs.b();
        const Mat4 phi = std::cos(x) * Mat4::Identity() + u(1) * sinc(x) * system_matrix(cs.b1, cs.b3);
        const Vec4 f4 = (phi * curve.f4(u(0))).normalized();
        return jr_frame(f4).matrix();
    };
}

GeneratedSurface surface_from_curve(const CurveData& curve, double t0, double t1, CurvatureRule rule, int samples) {
    check_curve(curve);
    if (!(t1 > t0)) throw std::invalid_argument("t-range must be increasing");
    samples = std::max(samples, 2);
    GeneratedSurface out;
    out.rule = rule;
    out.b_min = INFINITY;
    out.b_max = 0.0;
    for (int i = 0; i < samples; ++i) {
        const double t = t0 + (t1 - t0) * i / (samples - 1);
        const double b = sample_curve(curve, t, rule).b();
        out.b_min = std::min(out.b_min, b);
        out.b_max = std::max(out.b_max, b);
    }
    constexpr double zero = 1e-10;
    if (out.b_max <= zero) {
        out.kind = "ruled";
        out.immersion = ruled_surface(curve);
    } else if (out.b_min > zero) {
        out.kind = "tubular";
        out.immersion = tubular_surface(curve, rule);
    } else {
        throw std::domain_error("b(t) vanishes inside the t-range; split the range");
    }
    out.gauge = transported_gauge(curve, rule);
    return out;
}

CurveData circle_curve(double r) {
    if (!(r > 0.0)) throw std::invalid_argument("radius must be positive");
    CurveData c;
    c.gamma = [r](double t) {
        Vec g(5);
        g << r * std::cos(t / r), 0.0, r * std::sin(t / r), 0.0, 0.0;
        return g;
    };
    c.gamma_dot = [r](double t) {
        Vec g(5);
        g << -std::sin(t / r), 0.0, std::cos(t / r), 0.0, 0.0;
        return g;
    };
    c.gamma_ddot = [r](double t) {
        Vec g(5);
        g << -std::cos(t / r) / r, 0.0, -std::sin(t / r) / r, 0.0, 0.0;
        return g;
    };
    c.f4 = [r](double t) { return Vec4(0.0, std::cos(t / r), 0.0, std::sin(t / r)); };
    c.f4_dot = [r](double t) { return Vec4(0.0, -std::sin(t / r) / r, 0.0, std::cos(t / r) / r); };
    return c;
}

CurveData straight_curve(const Vec& v, const Vec4& f4) {
    if (v.size() != 5) throw std::invalid_argument("direction must have 5 coordinates");
    CurveData c;
    c.gamma = [v](double t) -> Vec { return t * v; };
    c.gamma_dot = [v](double) -> Vec { return v; };
    c.gamma_ddot = [](double) -> Vec { return Vec::Zero(5); };
    c.f4 = [f4](double) { return f4; };
    c.f4_dot = [](double) { return Vec4::Zero(); };
    return c;
}

Immersion vertical_cylinder(const Immersion& base) {
    if (!base.map) throw std::invalid_argument("base immersion has no map");
    const int m = base.domain_dim;
    Immersion im;
    im.domain_dim = m + 1;
    im.map = [base, m](const Vec& u) {
        const Vec x = base(u.head(m));
        Vec out(x.size() + 1);
        out << x, u(m);
        return out;
    };
    im.jacobian = [base, m](const Vec& u) {
        const Mat j = base.jacobian_at(u.head(m));
        Mat out = Mat::Zero(j.rows() + 1, m + 1);
        out.topLeftCorner(j.rows(), m) = j;
        out(j.rows(), m) = 1.0;
        return out;
    };
    return im;
}

Immersion graph_immersion(int n, const ScalarField& u) {
    if (n < 1) throw std::invalid_argument("Heisenberg rank must be positive");
    Immersion im;
    im.domain_dim = 2 * n;
    im.map = [u, n](const Vec& x) {
        Vec out(2 * n + 1);
        out << x, u(x).value;
        return out;
    };
    im.jacobian = [u, n](const Vec& x) {
        Mat out = Mat::Zero(2 * n + 1, 2 * n);
        out.topRows(2 * n).setIdentity();
        out.row(2 * n) = u(x).grad.transpose();
        return out;
    };
    return im;
}

Vec graph_horizontal_gradient(const ScalarJet& jet, const Vec& x) {
    const Eigen::Index n = x.size() / 2;
    if (x.size() != 2 * n || n < 1) throw std::invalid_argument("graph point needs 2n coordinates");
    Vec phi = jet.grad;
    for (Eigen::Index j = 0; j < n; ++j) {
        phi(j) += 0.5 * x(j + n);
        phi(j + n) -= 0.5 * x(j);
    }
    return phi;
}

double graph_residual(const ScalarField& u, const Vec& x) {
    const ScalarJet jet = u(x);
    const Vec phi = graph_horizontal_gradient(jet, x);
    const double n2 = phi.squaredNorm();
    if (!(n2 > 1e-24)) throw CharacteristicPointError("characteristic point: horizontal gradient vanishes");
    return jet.hess.trace() - phi.dot(jet.hess * phi) / n2;
}

double divergence_mean_curvature(const std::function<double(const Vec&)>& phi, const Vec& x,
                                 const DivergenceOptions& options) {
    const int n = heisenberg::rank_of(x);
    const double hi = options.inner_step > 0.0 ? options.inner_step : default_fd_step(x);
    const double ho = options.outer_step;
    auto shift = [](const Vec& y, int j, double h) {
        Vec step = Vec::Zero(y.size());
        step(j) = h;
        return heisenberg::multiply(y, step);
    };
    auto gradient = [&](const Vec& y) {
        Vec g(2 * n);
        for (int j = 0; j < 2 * n; ++j) g(j) = (phi(shift(y, j, hi)) - phi(shift(y, j, -hi))) / (2.0 * hi);
        return g;
    };
    if (!(gradient(x).norm() > 1e-12)) throw CharacteristicPointError("characteristic point: horizontal gradient vanishes");
    double div = 0.0;
    for (int j = 0; j < 2 * n; ++j) {
        const Vec gp = gradient(shift(x, j, ho));
        const Vec gm = gradient(shift(x, j, -ho));
        div += (gp(j) / gp.norm() - gm(j) / gm.norm()) / (2.0 * ho);
    }
    return div;
}

}  // namespace subriem::surfaces
