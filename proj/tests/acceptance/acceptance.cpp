// Acceptance suite: one line per criterion, non-zero exit if any fails.
#include <subriem/errors.hpp>
#include <subriem/group.hpp>
#include <subriem/heisenberg.hpp>
#include <subriem/surfaces.hpp>
#include <subriem/variation.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

using namespace subriem;
using namespace subriem::surfaces;

namespace {

constexpr double pi = std::numbers::pi;

struct Outcome {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void run(int id, const std::string& title, double budget_s, const std::function<Outcome()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = budget_s <= 0.0 || secs < budget_s;
    const bool pass = o.pass && in_time;
    if (!pass) ++failures;
    std::printf("[%s] criterion %d: %s | %s | %.2f s%s\n", pass ? "PASS" : "FAIL", id, title.c_str(),
                o.detail.c_str(), secs, in_time ? "" : " (over budget)");
    std::fflush(stdout);
}

template <typename... Args>
std::string fmt(const char* f, Args... args) {
    char buf[200];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double uniform(std::mt19937_64& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

Vec uniform_vec(std::mt19937_64& rng, int n, double lo, double hi) {
    Vec v(n);
    for (int i = 0; i < n; ++i) v(i) = uniform(rng, lo, hi);
    return v;
}

ParameterBox make_box(std::vector<double> lo, std::vector<double> hi) {
    ParameterBox b;
    b.lower = Eigen::Map<Vec>(lo.data(), static_cast<Eigen::Index>(lo.size()));
    b.upper = Eigen::Map<Vec>(hi.data(), static_cast<Eigen::Index>(hi.size()));
    return b;
}

double bump(const ParameterBox& box, const Vec& u) {
    double v = 1.0;
    for (int a = 0; a < box.dim(); ++a) {
        const double s = std::sin(pi * (u(a) - box.lower(a)) / (box.upper(a) - box.lower(a)));
        v *= s * s;
    }
    return v;
}

// Boundary-fixed normal variation x -> x . (eps bump f_1).
VariationFamily normal_bump(const StratifiedAlgebra& alg, const Immersion& im, const FrameGauge& gauge,
                            const ParameterBox& box) {
    const auto sub = std::make_shared<const Submanifold>(alg, im, FrameOptions{}, gauge);
    VariationFamily fam;
    fam.domain_dim = im.domain_dim;
    fam.boundary_fixed = true;
    fam.deform = [alg, im, box, sub](double e, const Vec& u) {
        return group_multiply(alg, im(u), Vec(e * bump(box, u) * sub->frame(u).f(0)));
    };
    fam.field = [alg, im, box, sub](const Vec& u) {
        return Vec(left_invariant_frame(alg, im(u)) * (bump(box, u) * sub->frame(u).f(0)));
    };
    return fam;
}

ScalarField quadratic_graph(Mat h) {
    return [h](const Vec& x) { return ScalarJet{0.5 * x.dot(h * x), h * x, h}; };
}

Vec circle_phi(double r, double t, double s) {
    const double c = std::cos(t / r), sn = std::sin(t / r), a = 1.0 + std::cos(2.0 * s / r), b = std::sin(2.0 * s / r);
    Vec x(5);
    x << 0.5 * r * c * a, 0.5 * r * b * c, 0.5 * r * sn * a, 0.5 * r * b * sn, 0.0;
    return x;
}

double symplectic4(const Vec4& x, const Vec4& y) { return x(0) * y(2) + x(1) * y(3) - x(2) * y(0) - x(3) * y(1); }

}  // namespace

int main() {
    const StratifiedAlgebra h1 = heisenberg_algebra(1);
    const StratifiedAlgebra h2 = heisenberg_algebra(2);

    run(1, "determinant identity", 1.0, [] {
        std::mt19937_64 rng(1);
        std::uniform_int_distribution<int> rows(1, 8), cols(1, 4);
        double worst = 0.0;
        for (int k = 0; k < 1000; ++k) {
            Mat a(rows(rng), cols(rng));
            for (int i = 0; i < a.size(); ++i) a.data()[i] = uniform(rng, -5, 5);
            const DeterminantPair d = determinant_pair(a);
            worst = std::max(worst, std::abs(d.det_B * d.det_W - 1.0));
        }
        return Outcome{worst < 1e-9, fmt("max |det B det W - 1| = %.3e (tol %.0e)", worst, 1e-9)};
    });

    run(2, "frame bracket table", 1.0, [&] {
        std::mt19937_64 rng(2);
        std::normal_distribution<double> g;
        double worst = 0.0;
        for (int k = 0; k < 1000; ++k) {
            const Vec4 f4 = Vec4(g(rng), g(rng), g(rng), g(rng)).normalized();
            const JRFrame fr = jr_frame(f4);
            std::vector<Vec> f(5, Vec::Zero(5));
            const Vec4 cols[4] = {fr.f1, fr.f2, fr.f3, fr.f4};
            for (int i = 0; i < 4; ++i) f[i].head<4>() = cols[i];
            f[4](4) = 1.0;
            for (int i = 0; i < 5; ++i)
                for (int j = i + 1; j < 5; ++j) {
                    Vec want = Vec::Zero(5);
                    if ((i == 0 && j == 2) || (i == 1 && j == 3)) want(4) = 1.0;
                    worst = std::max(worst, (h2.bracket(f[i], f[j]) - want).cwiseAbs().maxCoeff());
                }
            worst = std::max(worst, std::abs(symplectic4(fr.f1, fr.f3) - 1.0));
        }
        return Outcome{worst < 1e-13, fmt("max bracket error %.3e over ten relations (tol %.0e)", worst, 1e-13)};
    });

    run(3, "fundamental matrix", 1.0, [] {
        std::mt19937_64 rng(3);
        double orth = 0.0, ode = 0.0;
        const double h = 1e-5;
        for (int k = 0; k < 100; ++k) {
            const double b1 = uniform(rng, -3, 3), b3 = uniform(rng, -3, 3), s = uniform(rng, -2, 2);
            const Mat4 phi = fundamental_matrix(b1, b3, s);
            orth = std::max(orth, (phi.transpose() * phi - Mat4::Identity()).cwiseAbs().maxCoeff());
            const Mat4 d = (fundamental_matrix(b1, b3, s + h) - fundamental_matrix(b1, b3, s - h)) / (2 * h);
            ode = std::max(ode, (d - system_matrix(b1, b3) * phi).cwiseAbs().maxCoeff());
        }
        return Outcome{orth < 1e-12 && ode < 1e-7,
                       fmt("orthogonality %.3e (tol 1e-12), ODE residual %.3e (tol 1e-7)", orth, ode)};
    });

    run(4, "minimality of generated surfaces", 30.0, [&] {
        const GeneratedSurface tub = surface_from_curve(circle_curve(1.0), 0.0, 0.5 * pi);
        const Submanifold ts(h2, tub.immersion, {}, tub.gauge);
        const QuadratureGrid tg = QuadratureGrid::uniform(make_box({0.0, 0.1}, {0.5 * pi, 1.0}), {40, 40});
        const double tsup = minimality_residual(ts, tg, 0, 0).sup;

        const GeneratedSurface fo =
            surface_from_curve(circle_curve(1.0), 0.0, 0.5 * pi, CurvatureRule::first_order);
        const double fsup = minimality_residual(Submanifold(h2, fo.immersion, {}, fo.gauge), tg, 0, 0).sup;

        Vec v(5);
        v << 0.0, 0.3, 0.0, 0.5, 1.0;
        const GeneratedSurface ruled = surface_from_curve(straight_curve(v, Vec4(0, 0, 0, 1)), -1.0, 1.0);
        const Submanifold rs(h2, ruled.immersion, {}, ruled.gauge);
        const QuadratureGrid rg = QuadratureGrid::uniform(make_box({-1.0, 0.1}, {1.0, 1.0}), {40, 40});
        const double rsup = minimality_residual(rs, rg, 0, 0).sup;
        std::string d = fmt("tubular sup %.3e, ruled sup %.3e (tol 1e-5)", tsup, rsup);
        d += fmt("; first-order sign rule gives %.3e", fsup);
        return Outcome{tsup < 1e-5 && rsup < 1e-5, d};
    });

    run(5, "circle example", 0.0, [] {
        double mesh = 0.0, bdev = 0.0;
        for (double r : {0.5, 1.0, 2.0}) {
            const GeneratedSurface g = surface_from_curve(circle_curve(r), 0.0, 0.5 * pi * r);
            bdev = std::max({bdev, std::abs(g.b_min - 2.0 / r), std::abs(g.b_max - 2.0 / r)});
            for (int i = 0; i <= 40; ++i)
                for (int j = 0; j <= 40; ++j) {
                    Vec u(2);
                    u << 0.5 * pi * r * i / 40.0, r * (0.1 + 0.9 * j / 40.0);
                    mesh = std::max(mesh, (g.immersion(u) - circle_phi(r, u(0), u(1))).cwiseAbs().maxCoeff());
                }
        }
        return Outcome{mesh < 1e-10 && bdev < 1e-12, fmt("mesh deviation %.3e (tol 1e-10), |b - 2/r| %.3e (tol 1e-12)", mesh, bdev)};
    });

    run(6, "graph equation", 0.0, [] {
        Mat hq = Mat::Zero(4, 4);
        hq.diagonal() << 0.5, 0.5, -0.5, -0.5;
        const ScalarField u = quadratic_graph(hq);
        std::mt19937_64 rng(6);
        double pde = 0.0, div = 0.0;
        int points = 0;
        while (points < 1000) {
            const Vec x = uniform_vec(rng, 4, -2, 2);
            const ScalarJet j = u(x);
            const double N = graph_horizontal_gradient(j, x).norm();
            if (N < 0.1) continue;
            ++points;
            const double res = graph_residual(u, x);
            pde = std::max(pde, std::abs(res));
            const auto defining = [&u](const Vec& p) { return u(Vec(p.head(4))).value - p(4); };
            Vec p(5);
            p << x, j.value;
            div = std::max(div, std::abs(divergence_mean_curvature(defining, p) * N - res));
        }
        return Outcome{pde < 1e-10 && div < 1e-6, fmt("residual %.3e (tol 1e-10), divergence form gap %.3e (tol 1e-6)", pde, div)};
    });

    run(7, "first variation", 60.0, [&] {
        // Non-minimal graph u = x1^2 in H^1.
        const ParameterBox gbox = make_box({0.1, 0.1}, {1.0, 1.0});
        const Immersion gim = graph_immersion(1, quadratic_graph(Eigen::Matrix2d(Eigen::Vector2d(2.0, 0.0).asDiagonal())));
        const QuadratureGrid gg = QuadratureGrid::gauss(gbox, 16);
        const VariationFamily gf = normal_bump(h1, gim, {}, gbox);
        const NumericFirstVariation gn = first_variation_numeric(gf, h1, gg, 1e-4);
        const AnalyticFirstVariation ga = first_variation_analytic(gf, h1, gg);
        const double rel = std::abs(gn.richardson - ga.interior) / std::abs(gn.richardson);

        const GeneratedSurface tub = surface_from_curve(circle_curve(1.0), 0.0, 0.5 * pi);
        const ParameterBox tbox = make_box({0.0, 0.1}, {0.5 * pi, 1.0});
        const QuadratureGrid tg = QuadratureGrid::gauss(tbox, 16);
        EvaluationOptions opts;
        opts.gauge = tub.gauge;
        const VariationFamily tf = normal_bump(h2, tub.immersion, tub.gauge, tbox);
        const NumericFirstVariation tn = first_variation_numeric(tf, h2, tg, 1e-4, opts);
        double w_sup = 0.0;
        for (int k = 0; k < tg.size(); ++k) w_sup = std::max(w_sup, bump(tbox, tg.nodes.col(k)));
        const double bound = 1e-5 * tn.measure * w_sup;
        std::string d = fmt("graph relative error %.3e (tol 1e-2); tubular |numeric| %.3e", rel, std::abs(tn.richardson));
        d += fmt(" vs bound %.3e", bound);
        return Outcome{rel < 1e-2 && std::abs(tn.richardson) < bound, d};
    });

    run(8, "hypersurface torsion", 0.0, [&] {
        struct Case {
            int n;
            ScalarField u;
        };
        Mat a = Mat::Zero(2, 2), b = Mat::Zero(2, 2), c = Mat::Zero(4, 4), d = Mat::Zero(4, 4);
        a << 2.0, 0.0, 0.0, 0.0;
        b << 0.0, 1.0, 1.0, 0.4;
        c.diagonal() << 0.5, 0.5, -0.5, -0.5;
        d << 1.0, 0.2, 0.0, 0.0, 0.2, -0.3, 0.5, 0.0, 0.0, 0.5, 0.0, 1.0, 0.0, 0.0, 1.0, 0.7;
        const ScalarField wave = [](const Vec& x) {
            Mat h = Mat::Zero(2, 2);
            h(0, 0) = -std::sin(x(0));
            return ScalarJet{std::sin(x(0)) + x(1), Vec(Eigen::Vector2d(std::cos(x(0)), 1.0)), h};
        };
        const std::vector<Case> cases{{1, quadratic_graph(a)}, {1, quadratic_graph(b)}, {1, wave},
                                      {2, quadratic_graph(c)}, {2, quadratic_graph(d)}};
        std::mt19937_64 rng(8);
        double worst = 0.0;
        int points = 0;
        for (const Case& cs : cases) {
            const Submanifold sub(heisenberg_algebra(cs.n), graph_immersion(cs.n, cs.u));
            int taken = 0;
            while (taken < 100) {
                const Vec x = uniform_vec(rng, 2 * cs.n, -1.5, 1.5);
                if (graph_horizontal_gradient(cs.u(x), x).norm() < 0.1) continue;
                ++taken;
                worst = std::max(worst, sub.shape_operators(x).sigma.cwiseAbs().maxCoeff());
            }
            points += taken;
        }
        return Outcome{worst < 1e-12, fmt("max |sigma| %.3e over %d points (tol 1e-12)", worst, points)};
    });

    run(9, "vertical cylinders", 0.0, [&] {
        Immersion base;
        base.domain_dim = 2;
        base.map = [](const Vec& u) {
            Vec x(4);
            x << u(0), u(0) * u(0) - u(1) * u(1), u(1), 2.0 * u(0) * u(1);
            return x;
        };
        base.jacobian = [](const Vec& u) {
            Mat j(4, 2);
            j << 1.0, 0.0, 2.0 * u(0), -2.0 * u(1), 0.0, 1.0, 2.0 * u(1), 2.0 * u(0);
            return j;
        };
        const Submanifold holo(h2, vertical_cylinder(base));
        const QuadratureGrid hg = QuadratureGrid::uniform(make_box({-0.5, -0.5, 0.0}, {0.5, 0.5, 1.0}), {30, 30, 5});
        const double hsup = minimality_residual(holo, hg, 0, 0).sup;

        double dev = 0.0;
        for (double r : {0.5, 1.0, 3.0}) {
            Immersion circle;
            circle.domain_dim = 1;
            circle.map = [r](const Vec& u) { return Vec(Eigen::Vector2d(r * std::cos(u(0)), r * std::sin(u(0)))); };
            const Submanifold cyl(h1, vertical_cylinder(circle));
            const QuadratureGrid cg = QuadratureGrid::uniform(make_box({0.1, -1.0}, {2 * pi - 0.1, 1.0}), {12, 5});
            for (int k = 0; k < cg.size(); ++k)
                dev = std::max(dev, std::abs(std::abs(cyl.shape_operators(cg.nodes.col(k)).residual()(0)) - 1.0 / r));
        }
        return Outcome{hsup < 1e-5 && dev < 1e-4, fmt("holomorphic sup %.3e (tol 1e-5), circle curvature gap %.3e (tol 1e-4)", hsup, dev)};
    });

    run(10, "CC distance and metric factor", 120.0, [] {
        std::mt19937_64 rng(10);
        double horiz = 0.0, homog = 0.0;
        for (int k = 0; k < 1000; ++k) {
            Vec p = uniform_vec(rng, 5, -2, 2);
            Vec x = p;
            x(4) = 0.0;
            horiz = std::max(horiz, std::abs(heisenberg::cc_distance(x) - x.head(4).norm()));
            const double lambda = uniform(rng, 0.05, 20.0);
            homog = std::max(homog, std::abs(heisenberg::cc_distance(heisenberg::dilate(p, lambda)) -
                                             lambda * heisenberg::cc_distance(p)));
        }
        std::normal_distribution<double> g;
        std::vector<double> values;
        for (int f = 0; f < 10; ++f) {
            Mat m(4, 4);
            for (int i = 0; i < m.size(); ++i) m.data()[i] = g(rng);
            const Mat q = Eigen::HouseholderQR<Mat>(m).householderQ();
            Mat slice = Mat::Zero(5, 3);
            slice.topLeftCorner(4, 2) = q.rightCols(2);
            slice(4, 2) = 1.0;
            heisenberg::MonteCarloOptions mc;
            mc.samples = 1'000'000;
            mc.seed = 100 + static_cast<std::uint64_t>(f);
            values.push_back(heisenberg::metric_factor_estimate(slice, mc).value);
        }
        const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
        double mean = 0.0;
        for (double v : values) mean += v / static_cast<double>(values.size());
        const double spread = (*hi - *lo) / mean;
        std::string d = fmt("horizontal error %.3e, homogeneity %.3e (tol 1e-8)", horiz, homog);
        d += fmt("; metric factor mean %.5f, spread %.3e (tol 2e-2)", mean, spread);
        return Outcome{horiz == 0.0 && homog < 1e-8 && spread < 2e-2, d};
    });

    run(11, "structure equation convergence", 0.0, [&] {
        const GeneratedSurface tub = surface_from_curve(circle_curve(1.0), 0.0, 0.5 * pi);
        const Submanifold sub(h2, tub.immersion, {}, tub.gauge);
        const double h = 5e-3;
        double start = 0.0, min_ratio = 1e300;
        int compared = 0;
        for (double t : {0.2, 0.7, 1.3})
            for (double s : {0.3, 0.6, 0.9}) {
                Vec u(2);
                u << t, s;
                const StructuralResiduals a = sub.structural_residuals(u, h), b = sub.structural_residuals(u, 0.5 * h);
                const double ra[] = {a.cartan_normal, a.cartan_horizontal, a.cartan_vertical, a.cartan_flatness,
                                     a.gauss, a.codazzi, a.ricci};
                const double rb[] = {b.cartan_normal, b.cartan_horizontal, b.cartan_vertical, b.cartan_flatness,
                                     b.gauss, b.codazzi, b.ricci};
                for (int k = 0; k < 7; ++k) {
                    start = std::max(start, ra[k]);
                    // Residuals at the rounding floor carry no convergence information.
                    if (ra[k] < 1e-10 && rb[k] < 1e-10) continue;
                    ++compared;
                    min_ratio = std::min(min_ratio, ra[k] / rb[k]);
                }
            }
        std::string d = fmt("largest residual at h = 5e-3: %.3e (tol 1e-3), min halving ratio %.2f (need 3.5)", start, min_ratio);
        d += fmt(" over %d residuals", compared);
        return Outcome{start < 1e-3 && min_ratio >= 3.5, d};
    });

    std::printf("%s: %d of 11 criteria failed\n", failures ? "FAILED" : "PASSED", failures);
    return failures ? 1 : 0;
}
