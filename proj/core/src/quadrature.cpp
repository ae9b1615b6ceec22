#include "subriem/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace subriem {

namespace {

// P_q(x) and P_q'(x) by the three-term recurrence.
std::pair<double, double> legendre(int q, double x) {
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= q; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
    }
    if (q == 1) return {x, 1.0};
    return {p1, q * (x * p1 - p0) / (x * x - 1.0)};
}

}  // namespace

GaussLegendre gauss_legendre(int q) {
    if (q < 1) throw std::invalid_argument("quadrature order must be positive");
    GaussLegendre rule{Vec(q), Vec(q)};
    for (int i = 0; i < (q + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (q + 0.5));
        for (int iter = 0; iter < 100; ++iter) {
            const auto [p, dp] = legendre(q, x);
            const double dx = p / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        const double dp = legendre(q, x).second;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes(i) = -x;
        rule.nodes(q - 1 - i) = x;
        rule.weights(i) = w;
        rule.weights(q - 1 - i) = w;
    }
    if (q % 2 == 1) rule.nodes(q / 2) = 0.0;
    return rule;
}

double ParameterBox::volume() const {
    double v = 1.0;
    for (int a = 0; a < dim(); ++a) v *= upper(a) - lower(a);
    return v;
}

namespace {

void check_box(const ParameterBox& box) {
    if (box.lower.size() != box.upper.size() || box.lower.size() == 0)
        throw std::invalid_argument("parameter box bounds must have equal, positive length");
    for (int a = 0; a < box.dim(); ++a)
        if (!(box.upper(a) > box.lower(a))) throw std::invalid_argument("parameter box must have positive extent");
}

// Tensor product of per-axis node lists.
QuadratureGrid tensor(const ParameterBox& box, const std::vector<Vec>& x, const std::vector<Vec>& w) {
    QuadratureGrid g;
    g.box = box;
    const int m = box.dim();
    Eigen::Index total = 1;
    for (const auto& xa : x) total *= xa.size();
    g.nodes.resize(m, total);
    g.weights.resize(total);
    for (Eigen::Index idx = 0; idx < total; ++idx) {
        Eigen::Index rem = idx;
        double weight = 1.0;
        for (int a = m - 1; a >= 0; --a) {
            const Eigen::Index i = rem % x[a].size();
            rem /= x[a].size();
            g.nodes(a, idx) = x[a](i);
            weight *= w[a](i);
        }
        g.weights(idx) = weight;
    }
    return g;
}

}  // namespace

QuadratureGrid QuadratureGrid::gauss(const ParameterBox& box, int q) {
    check_box(box);
    const GaussLegendre rule = gauss_legendre(q);
    std::vector<Vec> x, w;
    for (int a = 0; a < box.dim(); ++a) {
        const double half = 0.5 * (box.upper(a) - box.lower(a));
        const double mid = 0.5 * (box.upper(a) + box.lower(a));
        x.push_back((mid + half * rule.nodes.array()).matrix());
        w.push_back(half * rule.weights);
    }
    QuadratureGrid g = tensor(box, x, w);
    g.order = q;
    return g;
}

QuadratureGrid QuadratureGrid::uniform(const ParameterBox& box, const std::vector<int>& counts) {
    check_box(box);
    if (static_cast<int>(counts.size()) != box.dim()) throw std::invalid_argument("one node count per axis");
    std::vector<Vec> x, w;
    for (int a = 0; a < box.dim(); ++a) {
        if (counts[a] < 1) throw std::invalid_argument("node counts must be positive");
        Vec xa = counts[a] == 1 ? Vec(Vec::Constant(1, 0.5 * (box.lower(a) + box.upper(a))))
                                : Vec(Vec::LinSpaced(counts[a], box.lower(a), box.upper(a)));
        x.push_back(xa);
        w.push_back(Vec::Constant(counts[a], (box.upper(a) - box.lower(a)) / counts[a]));
    }
    return tensor(box, x, w);
}

std::vector<BoxFace> box_faces(const ParameterBox& box, int q) {
    check_box(box);
    const int m = box.dim();
    const GaussLegendre rule = gauss_legendre(q);
    std::vector<BoxFace> faces;
    for (int axis = 0; axis < m; ++axis) {
        for (int side = 0; side < 2; ++side) {
            std::vector<Vec> x, w;
            for (int a = 0; a < m; ++a) {
                if (a == axis) {
                    x.push_back(Vec::Constant(1, side ? box.upper(a) : box.lower(a)));
                    w.push_back(Vec::Ones(1));
                    continue;
                }
                const double half = 0.5 * (box.upper(a) - box.lower(a));
                const double mid = 0.5 * (box.upper(a) + box.lower(a));
                x.push_back((mid + half * rule.nodes.array()).matrix());
                w.push_back(half * rule.weights);
            }
            BoxFace face;
            face.axis = axis;
            face.outward = side ? 1.0 : -1.0;
            face.grid = tensor(box, x, w);
            face.grid.order = q;
            faces.push_back(std::move(face));
        }
    }
    return faces;
}

}  // namespace subriem
