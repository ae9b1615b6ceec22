#include "subriem/variation.hpp"

#include "subriem/detail/parallel.hpp"
#include "subriem/group.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace subriem {

namespace {

double ordered_sum(const Vec& weights, const std::vector<double>& values) {
    double s = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) s += weights(static_cast<Eigen::Index>(i)) * values[i];
    return s;
}

Submanifold make_submanifold(const StratifiedAlgebra& alg, Immersion im, const EvaluationOptions& options) {
    return Submanifold(alg, std::move(im), options.frame, options.gauge);
}

// Field in algebra coefficients at the point x.
Vec field_coefficients(const StratifiedAlgebra& alg, const Vec& x, const Vec& w) {
    return left_invariant_frame(alg, x).partialPivLu().solve(w);
}

}  // namespace

Immersion VariationFamily::member(double eps) const {
    if (!deform) throw std::invalid_argument("variation family has no deformation");
    Immersion im;
    im.domain_dim = domain_dim;
    auto d = deform;
    im.map = [d, eps](const Vec& u) { return d(eps, u); };
    if (deform_jacobian) {
        auto j = deform_jacobian;
        im.jacobian = [j, eps](const Vec& u) { return j(eps, u); };
    }
    return im;
}

Vec VariationFamily::field_at(const Vec& u) const {
    if (field) return field(u);
    constexpr double h = 1e-6;
    return (deform(h, u) - deform(-h, u)) / (2.0 * h);
}

double mu_measure(const Submanifold& sub, const QuadratureGrid& grid, int threads) {
    std::vector<double> values(static_cast<std::size_t>(grid.size()));
    detail::parallel_for(values.size(), threads, [&](std::size_t i) {
        values[i] = sub.mu_density(grid.nodes.col(static_cast<Eigen::Index>(i))).density;
    });
    return ordered_sum(grid.weights, values);
}

NumericFirstVariation first_variation_numeric(const VariationFamily& fam, const StratifiedAlgebra& alg,
                                              const QuadratureGrid& grid, double eps,
                                              const EvaluationOptions& options) {
    if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
    auto volume = [&](double e) {
        return mu_measure(make_submanifold(alg, fam.member(e), options), grid, options.threads);
    };
    NumericFirstVariation out;
    out.eps = eps;
    out.central = (volume(eps) - volume(-eps)) / (2.0 * eps);
    out.half_step = (volume(0.5 * eps) - volume(-0.5 * eps)) / eps;
    out.richardson = (4.0 * out.half_step - out.central) / 3.0;
    out.measure = volume(0.0);
    return out;
}

AnalyticFirstVariation first_variation_analytic(const VariationFamily& fam, const StratifiedAlgebra& alg,
                                                const QuadratureGrid& grid, const EvaluationOptions& options) {
    const Submanifold sub = make_submanifold(alg, fam.member(0.0), options);
    AnalyticFirstVariation out;

    std::vector<double> interior(static_cast<std::size_t>(grid.size()));
    detail::parallel_for(interior.size(), options.threads, [&](std::size_t i) {
        const Vec u = grid.nodes.col(static_cast<Eigen::Index>(i));
        const ShapeData shape = sub.shape_operators(u);
        const AdaptedFrame& fr = shape.frame;
        const Vec w = field_coefficients(alg, fr.point, fam.field_at(u));
        double v = 0.0;
        for (int alpha = 0; alpha < fr.p; ++alpha) v += fr.dual.row(alpha).dot(w) * (shape.H(alpha) + shape.sigma(alpha));
        interior[i] = v * std::abs(signed_mu_density(fr));
    });
    out.interior = ordered_sum(grid.weights, interior);

    const int q = grid.order > 0 ? grid.order : 16;
    for (const BoxFace& face : box_faces(grid.box, q)) {
        std::vector<double> flux(static_cast<std::size_t>(face.grid.size()));
        detail::parallel_for(flux.size(), options.threads, [&](std::size_t i) {
            const Vec u = face.grid.nodes.col(static_cast<Eigen::Index>(i));
            const AdaptedFrame fr = sub.frame(u);
            Vec w = field_coefficients(alg, fr.point, fam.field_at(u));
            for (int alpha = 0; alpha < fr.p; ++alpha) w -= fr.dual.row(alpha).dot(w) * fr.f(alpha);
            const Vec c = Submanifold::parameter_direction(fr, w);
            flux[i] = std::abs(signed_mu_density(fr)) * c(face.axis) * face.outward;
        });
        out.boundary += ordered_sum(face.grid.weights, flux);
    }
    return out;
}

double boundary_conormal_flux(const VariationFamily& fam, const StratifiedAlgebra& alg, const ParameterBox& box,
                              int q, const EvaluationOptions& options) {
    const int m = fam.domain_dim;
    if (m != alg.dim()) throw std::invalid_argument("conormal flux needs a full-dimensional family");
    if (m < 2) throw std::invalid_argument("conormal flux needs at least two parameters");
    const Immersion full = fam.member(0.0);
    const Submanifold full_sub = make_submanifold(alg, full, options);

    double total = 0.0;
    for (const BoxFace& face : box_faces(box, q)) {
        const int axis = face.axis;
        const double fixed = face.outward > 0.0 ? box.upper(axis) : box.lower(axis);
        auto embed = [axis, fixed, m](const Vec& v) {
            Vec u(m);
            for (int a = 0, b = 0; a < m; ++a) u(a) = a == axis ? fixed : v(b++);
            return u;
        };
        Immersion face_im;
        face_im.domain_dim = m - 1;
        face_im.map = [full, embed](const Vec& v) { return full(embed(v)); };
        face_im.jacobian = [full, embed, axis, m](const Vec& v) {
            const Mat j = full.jacobian_at(embed(v));
            Mat out(j.rows(), m - 1);
            for (int a = 0, b = 0; a < m; ++a)
                if (a != axis) out.col(b++) = j.col(a);
            return out;
        };
        const Submanifold face_sub(alg, face_im, options.frame);

        std::vector<double> flux(static_cast<std::size_t>(face.grid.size()));
        detail::parallel_for(flux.size(), options.threads, [&](std::size_t i) {
            const Vec u = face.grid.nodes.col(static_cast<Eigen::Index>(i));
            Vec v(m - 1);
            for (int a = 0, b = 0; a < m; ++a)
                if (a != axis) v(b++) = u(a);
            const AdaptedFrame fr = face_sub.frame(v);
            const Vec outward = full_sub.tangent(u, fr.point).col(axis) * face.outward;
            const double orient = fr.dual.row(0).dot(outward) >= 0.0 ? 1.0 : -1.0;
            const Vec w = field_coefficients(alg, fr.point, fam.field_at(u));
            flux[i] = orient * fr.dual.row(0).dot(w) * std::abs(signed_mu_density(fr));
        });
        // Face weights carry the full-box layout; the fixed axis has unit weight.
        total += ordered_sum(face.grid.weights, flux);
    }
    return total;
}

ResidualNorms minimality_residual(const Submanifold& sub, const QuadratureGrid& grid, int threads, int keep_worst) {
    const auto count = static_cast<std::size_t>(grid.size());
    std::vector<NodeResidual> nodes(count);
    detail::parallel_for(count, threads, [&](std::size_t i) {
        NodeResidual& r = nodes[i];
        r.u = grid.nodes.col(static_cast<Eigen::Index>(i));
        r.residual = sub.shape_operators(r.u).residual();
        r.norm = r.residual.size() ? r.residual.cwiseAbs().maxCoeff() : 0.0;
    });

    ResidualNorms out;
    out.nodes = static_cast<int>(count);
    double sq = 0.0, wsum = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
        const double w = grid.weights(static_cast<Eigen::Index>(i));
        out.sup = std::max(out.sup, nodes[i].norm);
        sq += w * nodes[i].residual.squaredNorm();
        wsum += w;
    }
    out.l2 = wsum > 0.0 ? std::sqrt(sq / wsum) : 0.0;

    std::vector<std::size_t> order(count);
    std::iota(order.begin(), order.end(), std::size_t{0});
    const auto keep = std::min<std::size_t>(count, static_cast<std::size_t>(std::max(keep_worst, 0)));
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(keep), order.end(),
                      [&](std::size_t a, std::size_t b) { return nodes[a].norm > nodes[b].norm; });
    for (std::size_t i = 0; i < keep; ++i) out.worst.push_back(nodes[order[i]]);
    return out;
}

}  // namespace subriem
