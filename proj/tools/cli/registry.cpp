#include "cli/registry.hpp"

#include "cli/expression.hpp"

#include <subriem/errors.hpp>

#include <cmath>
#include <numbers>

namespace subriem::cli {

namespace {

using surfaces::CurvatureRule;

constexpr double pi = std::numbers::pi;

ParameterBox make_box(std::vector<double> lo, std::vector<double> hi) {
    ParameterBox b;
    b.lower = Eigen::Map<Vec>(lo.data(), static_cast<Eigen::Index>(lo.size()));
    b.upper = Eigen::Map<Vec>(hi.data(), static_cast<Eigen::Index>(hi.size()));
    return b;
}

CurvatureRule parse_rule(const std::string& rule) {
    if (rule == "converse") return CurvatureRule::converse;
    if (rule == "first-order") return CurvatureRule::first_order;
    throw InputError("unknown curvature rule '" + rule + "' (converse or first-order)");
}

// The loaded algebra must be the Heisenberg algebra of the requested rank.
StratifiedAlgebra heisenberg_for(const SurfaceRequest& req, int n) {
    const StratifiedAlgebra h = heisenberg_algebra(n);
    if (req.algebra_path.empty()) return h;
    const StratifiedAlgebra alg = load_algebra_json(req.algebra_path);
    if (alg.layer_dims() != h.layer_dims() || alg.constants() != h.constants())
        throw InputError("this surface needs the Heisenberg algebra of dimension " + std::to_string(2 * n + 1));
    return alg;
}

void set_curve_surface(SurfaceCase& sc, const surfaces::CurveData& curve, double t0, double t1,
                       CurvatureRule rule) {
    const auto gs = surfaces::surface_from_curve(curve, t0, t1, rule);
    sc.immersion = gs.immersion;
    sc.gauge = gs.gauge;
    sc.convention = surfaces::to_string(rule);
    sc.parameter_names = {"t", "s"};
    sc.default_cells = {39, 39};
    sc.expected_minimal = true;
}

void set_graph(SurfaceCase& sc, const Expression& e, int n) {
    const surfaces::ScalarField u = [e](const Vec& x) { return e.jet(x); };
    sc.graph = u;
    sc.expression = e.text();
    sc.immersion = surfaces::graph_immersion(n, u);
    std::vector<double> lo(2 * n, 0.1), hi(2 * n, 1.0);
    sc.box = make_box(lo, hi);
    for (int i = 1; i <= 2 * n; ++i) sc.parameter_names.push_back("x" + std::to_string(i));
    sc.default_cells.assign(2 * n, n == 1 ? 19 : 4);
}

}  // namespace

std::vector<std::string> builtin_names() {
    return {"tubular", "ruled", "hyperbolic-paraboloid", "plane", "holomorphic-cylinder", "circle-cylinder"};
}

SurfaceCase resolve_surface(const SurfaceRequest& req) {
    if (req.builtin.empty() == req.graph.empty()) throw InputError("give exactly one of --builtin and --graph");
    if (!(req.r > 0.0)) throw InputError("--r must be positive");
    SurfaceCase sc;

    if (!req.graph.empty()) {
        const Expression e = Expression::parse(req.graph);
        const int n = req.n > 0 ? req.n : std::max(1, (e.max_variable() + 1) / 2);
        if (e.max_variable() > 2 * n) throw InputError("expression uses more than 2n variables");
        sc.name = "graph";
        sc.alg = heisenberg_for(req, n);
        set_graph(sc, e, n);
        return sc;
    }

    sc.name = req.builtin;
    const double r = req.r;
    if (req.builtin == "tubular") {
        sc.alg = heisenberg_for(req, 2);
        set_curve_surface(sc, surfaces::circle_curve(r), 0.0, 0.5 * pi * r, parse_rule(req.rule));
        sc.box = make_box({0.0, 0.1 * r}, {0.5 * pi * r, r});
    } else if (req.builtin == "ruled") {
        sc.alg = heisenberg_for(req, 2);
        Vec v(5);
        v << 0.0, 0.3, 0.0, 0.5, 1.0;
        set_curve_surface(sc, surfaces::straight_curve(v, surfaces::Vec4(0, 0, 0, 1)), -1.0, 1.0,
                          parse_rule(req.rule));
        sc.box = make_box({-1.0, 0.1}, {1.0, 1.0});
    } else if (req.builtin == "hyperbolic-paraboloid") {
        sc.alg = heisenberg_for(req, 2);
        set_graph(sc, Expression::parse("0.25*(x1^2+x2^2-x3^2-x4^2)"), 2);
        sc.expected_minimal = true;
    } else if (req.builtin == "plane") {
        sc.alg = heisenberg_for(req, 1);
        set_graph(sc, Expression::parse("0"), 1);
        sc.expected_minimal = true;
    } else if (req.builtin == "holomorphic-cylinder") {
        sc.alg = heisenberg_for(req, 2);
        Immersion base;
        base.domain_dim = 2;
        // Complex curve w = z^2 with z = x1 + i x3, w = x2 + i x4.
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
        sc.immersion = surfaces::vertical_cylinder(base);
        sc.box = make_box({-0.5, -0.5, 0.0}, {0.5, 0.5, 1.0});
        sc.parameter_names = {"u1", "u2", "t"};
        sc.default_cells = {29, 29, 4};
        sc.expected_minimal = true;
    } else if (req.builtin == "circle-cylinder") {
        sc.alg = heisenberg_for(req, 1);
        Immersion base;
        base.domain_dim = 1;
        base.map = [r](const Vec& u) {
            Vec x(2);
            x << r * std::cos(u(0)), r * std::sin(u(0));
            return x;
        };
        base.jacobian = [r](const Vec& u) {
            Mat j(2, 1);
            j << -r * std::sin(u(0)), r * std::cos(u(0));
            return j;
        };
        sc.immersion = surfaces::vertical_cylinder(base);
        sc.box = make_box({0.1, 0.0}, {3.0, 1.0});
        sc.parameter_names = {"theta", "t"};
        sc.default_cells = {29, 4};
        sc.expected_residual = 1.0 / r;
    } else {
        std::string names;
        for (const auto& b : builtin_names()) names += (names.empty() ? "" : ", ") + b;
        throw InputError("unknown builtin '" + req.builtin + "' (" + names + ")");
    }
    return sc;
}

}  // namespace subriem::cli
