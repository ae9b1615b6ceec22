#include "subriem/heisenberg.hpp"

#include "subriem/detail/parallel.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace subriem::heisenberg {

namespace {

constexpr double kPi = std::numbers::pi;

// (a - sin a) / a^2, continuous at 0.
double vertical_ratio(double a) {
    if (std::abs(a) < 1e-2) {
        const double a2 = a * a;
        return a * (1.0 / 6.0 - a2 * (1.0 / 120.0 - a2 / 5040.0));
    }
    return (a - std::sin(a)) / (a * a);
}

double sinc(double a) {
    if (std::abs(a) < 1e-4) return 1.0 - a * a / 6.0;
    return std::sin(a) / a;
}

// (1 - cos a) / a, continuous at 0.
double versine_ratio(double a) {
    if (std::abs(a) < 1e-8) return 0.5 * a;
    const double s = std::sin(0.5 * a);
    return 2.0 * s * s / a;
}

// (mu - sin mu) / (4 (1 - cos mu)) on (0, 2 pi); increasing from 0 to infinity.
double height_ratio(double mu) {
    const double s = std::sin(0.5 * mu);
    return vertical_ratio(mu) * mu * mu / (8.0 * s * s);
}

void check_point(const Vec& p) {
    if (p.size() < 3 || p.size() % 2 == 0) throw std::invalid_argument("Heisenberg point needs 2n+1 coordinates");
}

}  // namespace

int rank_of(const Vec& p) {
    check_point(p);
    return static_cast<int>(p.size() / 2);
}

Vec identity(int n) {
    if (n < 1) throw std::invalid_argument("Heisenberg rank must be positive");
    return Vec::Zero(2 * n + 1);
}

double symplectic(const Vec& x, const Vec& y) {
    const Eigen::Index n = std::min(x.size(), y.size()) / 2;
    double s = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) s += x(i) * y(i + n) - x(i + n) * y(i);
    return s;
}

Vec multiply(const Vec& p, const Vec& q) {
    check_point(p);
    if (q.size() != p.size()) throw std::invalid_argument("Heisenberg points of different dimension");
    Vec r = p + q;
    r(r.size() - 1) += 0.5 * symplectic(p, q);
    return r;
}

Mat left_invariant_frame(const Vec& p) {
    const int n = rank_of(p);
    Mat e = Mat::Identity(2 * n + 1, 2 * n + 1);
    for (int i = 0; i < n; ++i) {
        e(2 * n, i) = -0.5 * p(i + n);
        e(2 * n, i + n) = 0.5 * p(i);
    }
    return e;
}

Vec dilate(const Vec& p, double lambda) {
    check_point(p);
    Vec r = lambda * p;
    r(r.size() - 1) *= lambda;
    return r;
}

Vec geodesic(const GeodesicState& s, double t) {
    if (s.mu.size() < 2 || s.mu.size() % 2 != 0) throw std::invalid_argument("geodesic needs 2n covector entries");
    const Eigen::Index n = s.mu.size() / 2;
    const double a = s.mu0 * t;
    const double c1 = t * sinc(a);
    const double c2 = t * versine_ratio(a);
    Vec x(2 * n + 1);
    for (Eigen::Index j = 0; j < n; ++j) {
        x(j) = s.mu(j) * c1 - s.mu(j + n) * c2;
        x(j + n) = s.mu(j) * c2 + s.mu(j + n) * c1;
    }
    x(2 * n) = 0.5 * s.mu.squaredNorm() * t * t * vertical_ratio(a);
    return x;
}

Vec geodesic_velocity(const GeodesicState& s, double t) {
    if (s.mu.size() < 2 || s.mu.size() % 2 != 0) throw std::invalid_argument("geodesic needs 2n covector entries");
    const Eigen::Index n = s.mu.size() / 2;
    const double a = s.mu0 * t;
    const double c = std::cos(a), sn = std::sin(a);
    Vec v(2 * n + 1);
    for (Eigen::Index j = 0; j < n; ++j) {
        v(j) = s.mu(j) * c - s.mu(j + n) * sn;
        v(j + n) = s.mu(j) * sn + s.mu(j + n) * c;
    }
    v(2 * n) = 0.5 * s.mu.squaredNorm() * t * versine_ratio(a);
    return v;
}

double ball_epsilon(double mu0) {
    if (std::abs(mu0) < 1e-4) return 1.0 - mu0 * mu0 / 24.0;
    return 2.0 * std::abs(std::sin(0.5 * mu0)) / std::abs(mu0);
}

double ball_vertical_factor(double mu0) { return 0.5 * vertical_ratio(mu0); }

Vec ball_parametrization(double mu0, const Vec& mubar) {
    if (!(std::abs(mu0) <= 2.0 * kPi)) throw std::domain_error("mu0 must lie in [-2 pi, 2 pi]");
    if (mubar.size() < 2 || mubar.size() % 2 != 0) throw std::invalid_argument("mubar needs 2n entries");
    if (mubar.norm() > 1.0 + 1e-12) throw std::domain_error("|mubar| must not exceed 1");
    Vec x(mubar.size() + 1);
    x.head(mubar.size()) = ball_epsilon(mu0) * mubar;
    x(mubar.size()) = ball_vertical_factor(mu0) * mubar.squaredNorm();
    return x;
}

double cc_norm(double r, double h) {
    r = std::abs(r);
    h = std::abs(h);
    if (h == 0.0) return r;
    if (r == 0.0) return std::sqrt(4.0 * kPi * h);
    const double target = h / (r * r);
    double lo = 0.0, hi = 2.0 * kPi;
    while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        if (height_ratio(mid) < target)
            lo = mid;
        else
            hi = mid;
    }
    const double mu = 0.5 * (lo + hi);
    if (mu < kPi) return r / ball_epsilon(mu);
    return std::sqrt(h / ball_vertical_factor(mu));
}

double cc_distance(const Vec& p) {
    check_point(p);
    const Eigen::Index m = p.size() - 1;
    return cc_norm(p.head(m).norm(), p(m));
}

double cc_distance(const Vec& p, const Vec& q) { return cc_distance(multiply(inverse(q), p)); }

MetricFactorEstimate metric_factor_estimate(const Mat& subspace, const MonteCarloOptions& options) {
    const Eigen::Index dim = subspace.rows();
    if (dim < 3 || dim % 2 == 0) throw std::invalid_argument("subspace vectors need 2n+1 coordinates");
    if (subspace.cols() < 1) throw std::invalid_argument("empty subspace");
    if (options.samples == 0) throw std::invalid_argument("samples must be positive");
    if (options.partitions < 1) throw std::invalid_argument("partitions must be positive");

    Eigen::ColPivHouseholderQR<Mat> qr(subspace);
    qr.setThreshold(1e-10);
    const Eigen::Index k = subspace.cols();
    if (qr.rank() != k) throw std::invalid_argument("degenerate (rank-deficient) subspace");
    const Mat q = Mat(qr.householderQ()).leftCols(k);
    const Vec centre = Vec::Unit(dim, dim - 1);
    if ((centre - q * (q.transpose() * centre)).norm() > 1e-10)
        throw std::invalid_argument("subspace does not contain the centre direction");

    // Orthonormal basis of the horizontal part; the slice is (horizontal part) + R e_centre.
    Eigen::JacobiSVD<Mat> svd(q.topRows(dim - 1), Eigen::ComputeThinU);
    const Eigen::Index kh = k - 1;
    const Mat basis = svd.matrixU().leftCols(kh);

    // |x| <= rho and |x^{2n+1}| <= rho^2 / (2 pi) on the CC ball; the vertical
    // factor of the sphere peaks at mu0 = pi.
    const double half_height = 1.0 / (2.0 * kPi);
    const double box_volume = std::pow(2.0, static_cast<double>(kh)) * 2.0 * half_height;

    const auto parts = static_cast<std::size_t>(options.partitions);
    std::vector<std::uint64_t> inside(parts, 0);
    detail::parallel_for(parts, options.threads, [&](std::size_t part) {
        const std::uint64_t count = options.samples / parts + (part < options.samples % parts ? 1 : 0);
        std::seed_seq seq{static_cast<std::uint32_t>(options.seed), static_cast<std::uint32_t>(options.seed >> 32),
                          static_cast<std::uint32_t>(part)};
        std::mt19937_64 rng(seq);
        std::uniform_real_distribution<double> unit(-1.0, 1.0);
        std::uint64_t hits = 0;
        Vec y(kh);
        Vec x(dim - 1);
        for (std::uint64_t s = 0; s < count; ++s) {
            for (Eigen::Index i = 0; i < kh; ++i) y(i) = unit(rng);
            const double h = half_height * unit(rng);
            x.noalias() = basis * y;
            const double r = x.norm();
            if (r >= 1.0) continue;
            if (cc_norm(r, h) < 1.0) ++hits;
        }
        inside[part] = hits;
    });

    MetricFactorEstimate est;
    est.samples = options.samples;
    for (auto h : inside) est.inside += h;
    est.box_volume = box_volume;
    const double f = static_cast<double>(est.inside) / static_cast<double>(est.samples);
    est.value = box_volume * f;
    est.standard_error = box_volume * std::sqrt(f * (1.0 - f) / static_cast<double>(est.samples));
    return est;
}

}  // namespace subriem::heisenberg
