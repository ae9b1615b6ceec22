#include "support.hpp"

#include <subriem/group.hpp>
#include <subriem/surfaces.hpp>
#include <subriem/variation.hpp>

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace subriem;

namespace {

constexpr double pi = std::numbers::pi;

ParameterBox box2(double a0, double a1, double b0, double b1) {
    return {Vec(Eigen::Vector2d(a0, b0)), Vec(Eigen::Vector2d(a1, b1))};
}

double bump(const ParameterBox& box, const Vec& u) {
    double v = 1.0;
    for (int a = 0; a < box.dim(); ++a) {
        const double s = std::sin(pi * (u(a) - box.lower(a)) / (box.upper(a) - box.lower(a)));
        v *= s * s;
    }
    return v;
}

surfaces::ScalarField x1_squared() {
    return [](const Vec& x) {
        Mat h = Mat::Zero(2, 2);
        h(0, 0) = 2.0;
        return surfaces::ScalarJet{x(0) * x(0), Vec(Eigen::Vector2d(2.0 * x(0), 0.0)), h};
    };
}

// F(eps, u) = phi(u) exp(eps s(u) f_k(u)) with s a bump or 1.
VariationFamily frame_family(const StratifiedAlgebra& alg, const Submanifold& sub, const ParameterBox& box, int k,
                             bool fixed) {
    VariationFamily fam;
    fam.domain_dim = sub.immersion().domain_dim;
    fam.boundary_fixed = fixed;
    auto w = [&sub, box, k, fixed](const Vec& u) -> Vec { return (fixed ? bump(box, u) : 1.0) * sub.frame(u).f(k); };
    fam.deform = [&alg, &sub, w](double e, const Vec& u) { return group_multiply(alg, sub.immersion()(u), e * w(u)); };
    fam.field = [&alg, &sub, w](const Vec& u) {
        return Vec(left_invariant_frame(alg, sub.immersion()(u)) * w(u));
    };
    return fam;
}

}  // namespace

TEST_CASE("mu measure of a vertical unit square is 1") {
    const auto h1 = heisenberg_algebra(1);
    Immersion vplane;
    vplane.domain_dim = 2;
    vplane.map = [](const Vec& u) {
        Vec x(3);
        x << u(0), 0.0, u(1);
        return x;
    };
    const Submanifold vp(h1, vplane);
    const auto grid = QuadratureGrid::gauss(box2(0, 1, 0, 1), 4);
    CHECK(mu_measure(vp, grid, 1) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("normal bump on a non-minimal graph: numeric derivative equals the interior term") {
    const auto h1 = heisenberg_algebra(1);
    const Submanifold sub(h1, surfaces::graph_immersion(1, x1_squared()));
    const auto box = box2(0.1, 1.0, 0.1, 1.0);
    const auto fam = frame_family(h1, sub, box, 0, true);
    const auto grid = QuadratureGrid::gauss(box, 16);
    const auto num = first_variation_numeric(fam, h1, grid, 1e-4);
    const auto an = first_variation_analytic(fam, h1, grid);
    CHECK(std::abs(num.richardson) > 1e-3);
    CHECK(std::abs(num.richardson - an.interior) / std::abs(num.richardson) < 1e-4);
    CHECK(std::abs(an.boundary) < 1e-20);
    CHECK(num.measure == doctest::Approx(mu_measure(sub, grid)).epsilon(1e-9));
}

TEST_CASE("tangential variations: zero interior term, boundary flux when the boundary moves") {
    const auto h1 = heisenberg_algebra(1);
    const Submanifold sub(h1, surfaces::graph_immersion(1, x1_squared()));
    const auto box = box2(0.1, 1.0, 0.2, 0.9);
    const auto grid = QuadratureGrid::gauss(box, 16);

    const auto fixed = frame_family(h1, sub, box, 1, true);
    const auto a0 = first_variation_analytic(fixed, h1, grid);
    CHECK(std::abs(a0.interior) < 1e-12);
    CHECK(std::abs(first_variation_numeric(fixed, h1, grid, 1e-4).richardson) < 1e-8);

    const auto moving = frame_family(h1, sub, box, 1, false);
    const auto a1 = first_variation_analytic(moving, h1, grid);
    const auto n1 = first_variation_numeric(moving, h1, grid, 1e-4);
    CHECK(std::abs(n1.richardson) > 1e-2);
    CHECK(a1.total() == doctest::Approx(n1.richardson).epsilon(1e-6));
}

TEST_CASE("full-dimensional family: volume derivative equals the conormal flux") {
    const auto h1 = heisenberg_algebra(1);
    VariationFamily fam;
    fam.domain_dim = 3;
    // Flow of W = (1 + x1) e1 + x2 e3 composed on the right.
    fam.deform = [&h1](double e, const Vec& u) {
        Vec w(3);
        w << 1.0 + u(0), 0.0, u(1);
        return group_multiply(h1, u, e * w);
    };
    ParameterBox box{Vec(Eigen::Vector3d(0, 0, 0)), Vec(Eigen::Vector3d(1, 0.5, 0.7))};
    const auto grid = QuadratureGrid::gauss(box, 6);
    const auto num = first_variation_numeric(fam, h1, grid, 1e-4);
    CHECK(num.measure == doctest::Approx(box.volume()).epsilon(1e-10));
    const double flux = boundary_conormal_flux(fam, h1, box, 6);
    CHECK(flux == doctest::Approx(num.richardson).epsilon(1e-6));
}

TEST_CASE("minimality residual norms and thread determinism") {
    const auto h1 = heisenberg_algebra(1);
    const surfaces::ScalarField zero = [](const Vec&) {
        return surfaces::ScalarJet{0.0, Vec::Zero(2), Mat::Zero(2, 2)};
    };
    const Submanifold plane(h1, surfaces::graph_immersion(1, zero));
    const auto grid = QuadratureGrid::uniform(box2(0.1, 1, 0.1, 1), {6, 6});
    const auto r = minimality_residual(plane, grid, 2);
    CHECK(r.nodes == 36);
    CHECK(r.sup < 1e-8);

    const Submanifold curved(h1, surfaces::graph_immersion(1, x1_squared()));
    const auto rc = minimality_residual(curved, grid, 0, 4);
    REQUIRE(rc.worst.size() == 4);
    for (std::size_t i = 1; i < rc.worst.size(); ++i) CHECK(rc.worst[i - 1].norm >= rc.worst[i].norm);
    CHECK(rc.worst[0].norm == rc.sup);
    CHECK(rc.l2 <= rc.sup);

    const auto g = QuadratureGrid::gauss(box2(0.1, 1, 0.1, 1), 8);
    CHECK(mu_measure(curved, g, 1) == mu_measure(curved, g, 4));
}
