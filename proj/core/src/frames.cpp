#include "subriem/frames.hpp"

#include "subriem/errors.hpp"
#include "subriem/group.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace subriem {

namespace {

// First component with |c| > 1e-8 |v| is made positive.
void fix_sign(Eigen::Ref<Vec> v) {
    const double tol = 1e-8 * v.norm();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (std::abs(v(i)) > tol) {
            if (v(i) < 0.0) v = -v;
            return;
        }
    }
}

// Orthonormal vectors spanning range(q), ordered and signed to follow the columns of ref.
Mat align_basis(const Mat& q, const Mat* ref, double flip_tol, bool strict) {
    const Eigen::Index r = q.cols();
    Mat out(q.rows(), r);
    if (!ref) {
        out = q;
        for (Eigen::Index i = 0; i < r; ++i) fix_sign(out.col(i));
        return out;
    }
    for (Eigen::Index i = 0; i < r; ++i) {
        Vec v = q * (q.transpose() * ref->col(i));
        for (Eigen::Index k = 0; k < i; ++k) v -= out.col(k).dot(v) * out.col(k);
        double nv = v.norm();
        if (nv < 1e-10) {
            if (strict) throw OrientationFlipError("frame degenerates across the stencil; reduce the FD step");
            // Fall back to the basis column least represented so far.
            double best = -1.0;
            for (Eigen::Index c = 0; c < r; ++c) {
                Vec w = q.col(c);
                for (Eigen::Index k = 0; k < i; ++k) w -= out.col(k).dot(w) * out.col(k);
                if (w.norm() > best) {
                    best = w.norm();
                    v = w;
                }
            }
            nv = v.norm();
            v /= nv;
            fix_sign(v);
            out.col(i) = v;
            continue;
        }
        v /= nv;
        if (strict && v.dot(ref->col(i)) < flip_tol)
            throw OrientationFlipError("adapted frame changes orientation across the stencil; reduce the FD step");
        out.col(i) = v;
    }
    return out;
}

Mat pseudo_solve(const Mat& m, const Mat& rhs) { return m.completeOrthogonalDecomposition().solve(rhs); }

}  // namespace

double default_fd_step(const Vec& u) { return std::max(1e-5, 1e-5 * u.norm()); }

Mat Immersion::jacobian_at(const Vec& u) const {
    if (jacobian) return jacobian(u);
    const double h = default_fd_step(u);
    Mat j;
    for (int a = 0; a < domain_dim; ++a) {
        Vec up = u, um = u;
        up(a) += h;
        um(a) -= h;
        const Vec d = (map(up) - map(um)) / (2.0 * h);
        if (a == 0) j.resize(d.size(), domain_dim);
        j.col(a) = d;
    }
    return j;
}

AdaptedFrame adapted_frame(const StratifiedAlgebra& alg, const Vec& point, const Mat& tangent,
                           const AdaptedFrame* reference, const FrameOptions& options, bool strict_reference) {
    const int n = alg.dim();
    const int d1 = alg.horizontal_dim();
    const int m = static_cast<int>(tangent.cols());
    if (tangent.rows() != n) throw std::invalid_argument("tangent matrix has wrong row count");
    if (m < 1 || m > n) throw std::invalid_argument("immersion dimension must lie in [1, dim G]");
    const int p = n - m;
    const int hi = n - d1;

    AdaptedFrame fr;
    fr.n = n;
    fr.d1 = d1;
    fr.p = p;
    fr.point = point;
    fr.tangent = tangent;

    Mat spanning(n, m + d1);
    for (int a = 0; a < m; ++a) {
        const double c = tangent.col(a).norm();
        if (!(c > 0.0) || !std::isfinite(c)) throw DegenerateError("immersion has a vanishing partial derivative");
        spanning.col(a) = tangent.col(a) / c;
    }
    spanning.rightCols(d1) = Mat::Identity(n, d1);
    {
        Eigen::JacobiSVD<Mat> svd(tangent.colwise().normalized());
        if (svd.singularValues()(m - 1) < options.transversality_tol)
            throw DegenerateError("immersion jacobian is rank deficient");
    }
    Eigen::JacobiSVD<Mat> span_svd(spanning);
    fr.transversality = span_svd.singularValues()(n - 1);
    if (!(fr.transversality >= options.transversality_tol)) {
        std::ostringstream msg;
        msg << "near-horizontal point: TM + D does not span (margin " << fr.transversality << ")";
        throw TransversalityError(msg.str());
    }

    const Mat t_low = tangent.topRows(d1);
    const Mat t_high = tangent.bottomRows(hi);
    Mat kernel;
    if (hi == 0) {
        kernel = Mat::Identity(m, m);
    } else {
        Eigen::JacobiSVD<Mat> svd(t_high, Eigen::ComputeFullV);
        kernel = svd.matrixV().rightCols(m - hi);
    }
    const int k = d1 - p;
    Mat u = Mat::Identity(d1, d1);
    if (k > 0) {
        Eigen::JacobiSVD<Mat> hsvd(t_low * kernel, Eigen::ComputeFullU);
        u = hsvd.matrixU();
    }

    Mat ref_normals, ref_tangent;
    if (reference) {
        ref_normals = reference->vectors.topLeftCorner(d1, p);
        ref_tangent = reference->vectors.block(0, p, d1, k);
    }
    const Mat normals = align_basis(u.rightCols(p), reference ? &ref_normals : nullptr, options.flip_tolerance,
                                    strict_reference);
    const Mat tangents = align_basis(u.leftCols(k), reference ? &ref_tangent : nullptr, options.flip_tolerance,
                                     strict_reference);

    fr.vectors = Mat::Zero(n, n);
    fr.vectors.block(0, 0, d1, p) = normals;
    fr.vectors.block(0, p, d1, k) = tangents;
    fr.A = Mat::Zero(hi, p);
    if (hi > 0) {
        const Mat c = pseudo_solve(t_high, Mat::Identity(hi, hi));
        const Mat h = t_low * c;
        fr.A = -(h.transpose() * normals);
        for (int j = 0; j < hi; ++j) {
            fr.vectors(d1 + j, d1 + j) = 1.0;
            fr.vectors.block(0, d1 + j, d1, 1) = -normals * fr.A.row(j).transpose();
        }
    }
    fr.dual = fr.vectors.inverse();
    return fr;
}

double signed_mu_density(const AdaptedFrame& frame) {
    const Eigen::Index m = frame.tangent.cols();
    return (frame.dual * frame.tangent).bottomRows(m).determinant();
}

double StructuralResiduals::max() const {
    return std::max({cartan_normal, cartan_horizontal, cartan_vertical, cartan_flatness, gauss, codazzi, ricci});
}

Submanifold::Submanifold(StratifiedAlgebra alg, Immersion im, FrameOptions options, FrameGauge gauge)
    : alg_(std::move(alg)), im_(std::move(im)), options_(options), gauge_(std::move(gauge)) {
    if (im_.domain_dim < 1 || im_.domain_dim > alg_.dim())
        throw std::invalid_argument("immersion dimension must lie in [1, dim G]");
    if (!im_.map) throw std::invalid_argument("immersion has no map");
}

double Submanifold::fd_step(const Vec& u) const {
    return options_.fd_step > 0.0 ? options_.fd_step : default_fd_step(u);
}

Mat Submanifold::tangent(const Vec& u, const Vec& point) const {
    if (point.size() != alg_.dim()) throw std::invalid_argument("immersion returns points of the wrong dimension");
    const Mat j = im_.jacobian_at(u);
    if (j.rows() != alg_.dim() || j.cols() != im_.domain_dim)
        throw std::invalid_argument("immersion jacobian has the wrong shape");
    return left_invariant_frame(alg_, point).partialPivLu().solve(j);
}

AdaptedFrame Submanifold::frame(const Vec& u) const {
    const Vec x = im_(u);
    const Mat t = tangent(u, x);
    if (!gauge_) return adapted_frame(alg_, x, t, nullptr, options_);
    AdaptedFrame ref;
    ref.vectors = Mat::Zero(alg_.dim(), alg_.dim());
    const Mat g = gauge_(u);
    if (g.rows() != alg_.horizontal_dim() || g.cols() != alg_.horizontal_dim())
        throw std::invalid_argument("gauge must return a d1 x d1 matrix");
    ref.vectors.topLeftCorner(g.rows(), g.cols()) = g;
    return adapted_frame(alg_, x, t, &ref, options_, false);
}

AdaptedFrame Submanifold::frame(const Vec& u, const AdaptedFrame& reference) const {
    const Vec x = im_(u);
    return adapted_frame(alg_, x, tangent(u, x), &reference, options_, true);
}

Vec Submanifold::parameter_direction(const AdaptedFrame& frame, const Vec& X) {
    return frame.tangent.colPivHouseholderQr().solve(X);
}

Mat Submanifold::connection_from_stencil(const AdaptedFrame& base, const AdaptedFrame& plus,
                                         const AdaptedFrame& minus, double h) const {
    const int n = base.n, d1 = base.d1, p = base.p;
    const Mat& f = base.vectors;
    const Mat df = (plus.vectors - minus.vectors) / (2.0 * h);
    const Mat da = (plus.A - minus.A) / (2.0 * h);
    Mat omega = Mat::Zero(d1, n);
    omega.leftCols(d1) = f.topLeftCorner(d1, d1).transpose() * df.topLeftCorner(d1, d1);
    for (int j = d1; j < n; ++j) {
        const int r = j - d1;
        for (int alpha = 0; alpha < p; ++alpha) {
            double v = -da(r, alpha);
            for (int beta = 0; beta < p; ++beta) v -= base.A(r, beta) * omega(alpha, beta);
            omega(alpha, j) = v;
        }
        for (int i = p; i < d1; ++i) {
            double v = 0.0;
            for (int beta = 0; beta < p; ++beta) v -= base.A(r, beta) * omega(i, beta);
            omega(i, j) = v;
        }
    }
    return omega;
}

Mat Submanifold::connection_at(const Vec& u, const Vec& du, const AdaptedFrame& base,
                               const AdaptedFrame& reference, double h) const {
    return connection_from_stencil(base, frame(u + h * du, reference), frame(u - h * du, reference), h);
}

Mat Submanifold::connection_forms(const Vec& u, const Vec& du) const {
    if (du.size() != im_.domain_dim) throw std::invalid_argument("direction has wrong dimension");
    const double len = du.norm();
    if (len == 0.0) return Mat::Zero(alg_.horizontal_dim(), alg_.dim());
    const AdaptedFrame base = frame(u);
    const double h = fd_step(u) / len;
    return connection_at(u, du, base, base, h);
}

ShapeData Submanifold::shape_operators(const Vec& u) const {
    ShapeData out;
    out.frame = frame(u);
    const AdaptedFrame& fr = out.frame;
    const int n = fr.n, d1 = fr.d1, p = fr.p, m = im_.domain_dim;
    const double h = fd_step(u);

    std::vector<Mat> axis(m);
    for (int a = 0; a < m; ++a) axis[a] = connection_at(u, Vec::Unit(m, a), fr, fr, h);

    out.omega.resize(m);
    for (int k = p; k < n; ++k) {
        const Vec c = parameter_direction(fr, fr.f(k));
        Mat w = Mat::Zero(d1, n);
        for (int a = 0; a < m; ++a) w += c(a) * axis[a];
        out.omega[k - p] = w;
    }

    out.S.assign(p, Mat::Zero(m, m));
    out.weingarten.assign(p, Mat::Zero(m, m));
    out.H = Vec::Zero(p);
    out.sigma = Vec::Zero(p);
    for (int alpha = 0; alpha < p; ++alpha) {
        for (int k = 0; k < m; ++k) {
            for (int l = 0; l < m; ++l) out.S[alpha](k, l) = out.omega[k](alpha, p + l);
            for (int i = p; i < d1; ++i) out.weingarten[alpha](i - p, k) = -out.omega[k](i, alpha);
        }
        out.H(alpha) = -out.weingarten[alpha].trace();
        double s = 0.0;
        for (int j = d1; j < n; ++j) s += fr.dual.row(j).dot(alg_.torsion(fr.f(alpha), fr.f(j)));
        out.sigma(alpha) = s;
    }
    return out;
}

DeterminantPair determinant_pair(const Mat& A) {
    const Eigen::Index hi = A.rows(), p = A.cols();
    const Mat b = Mat::Identity(hi, hi) + A * A.transpose();
    const Mat w = Mat::Identity(p, p) - A.transpose() * b.ldlt().solve(A);
    return {b.determinant(), w.determinant()};
}

MuDensity Submanifold::mu_density(const Vec& u) const {
    const AdaptedFrame fr = frame(u);
    MuDensity out;
    out.signed_density = signed_mu_density(fr);
    out.density = std::abs(out.signed_density);
    if (!(out.density > 0.0) || !std::isfinite(out.density)) throw DegenerateError("zero mu-density");

    const DeterminantPair dets = determinant_pair(fr.A);
    out.det_B = dets.det_B;
    out.det_W = dets.det_W;
    out.area = std::sqrt((fr.tangent.transpose() * fr.tangent).determinant());
    out.via_determinants = out.area / std::sqrt(out.det_B);
    return out;
}

StructuralResiduals Submanifold::structural_residuals(const Vec& u, double h, int axis_a, int axis_b) const {
    const int m = im_.domain_dim;
    if (axis_a < 0 || axis_b < 0 || axis_a >= m || axis_b >= m || axis_a == axis_b)
        throw std::out_of_range("structural residuals need two distinct parameter axes");
    if (!(h > 0.0)) throw std::invalid_argument("step must be positive");

    const AdaptedFrame base = frame(u);
    const int n = base.n, d1 = base.d1, p = base.p;
    const Vec ea = Vec::Unit(m, axis_a), eb = Vec::Unit(m, axis_b);

    auto at = [&](const Vec& v) { return frame(v, base); };
    auto padded = [&](const Mat& w) {
        Mat full = Mat::Zero(n, n);
        full.topRows(d1) = w;
        return full;
    };
    // Connection matrix along a parameter axis at v.
    auto omega = [&](const Vec& v, const AdaptedFrame& fv, const Vec& axis) {
        return padded(connection_from_stencil(fv, at(v + h * axis), at(v - h * axis), h));
    };
    auto theta = [&](const AdaptedFrame& fv, int axis) -> Vec { return fv.dual * fv.tangent.col(axis); };

    const AdaptedFrame fa_p = at(u + h * ea), fa_m = at(u - h * ea);
    const AdaptedFrame fb_p = at(u + h * eb), fb_m = at(u - h * eb);

    const Mat om_a = padded(connection_from_stencil(base, fa_p, fa_m, h));
    const Mat om_b = padded(connection_from_stencil(base, fb_p, fb_m, h));
    const Vec th_a = theta(base, axis_a), th_b = theta(base, axis_b);

    const Vec d_thb_a = (theta(fa_p, axis_b) - theta(fa_m, axis_b)) / (2.0 * h);
    const Vec d_tha_b = (theta(fb_p, axis_a) - theta(fb_m, axis_a)) / (2.0 * h);
    const Vec tor = base.dual * alg_.torsion(base.tangent.col(axis_a), base.tangent.col(axis_b));
    const Vec wedge = om_a * th_b - om_b * th_a;

    StructuralResiduals r;
    for (int i = 0; i < n; ++i) {
        if (i < p) {
            r.cartan_normal = std::max(r.cartan_normal, std::abs(wedge(i) - tor(i)));
            continue;
        }
        const double res = std::abs(d_thb_a(i) - d_tha_b(i) + wedge(i) - tor(i));
        if (i < d1)
            r.cartan_horizontal = std::max(r.cartan_horizontal, res);
        else
            r.cartan_vertical = std::max(r.cartan_vertical, res);
    }

    const Mat d_omb_a = (omega(u + h * ea, fa_p, eb) - omega(u - h * ea, fa_m, eb)) / (2.0 * h);
    const Mat d_oma_b = (omega(u + h * eb, fb_p, ea) - omega(u - h * eb, fb_m, ea)) / (2.0 * h);
    const Mat curv = d_omb_a - d_oma_b + om_a * om_b - om_b * om_a;
    r.cartan_flatness = curv.cwiseAbs().maxCoeff();
    for (int i = 0; i < d1; ++i)
        for (int j = 0; j < n; ++j) {
            const double v = std::abs(curv(i, j));
            if (i >= p && j >= p)
                r.gauss = std::max(r.gauss, v);
            else if (i < p && j >= p)
                r.codazzi = std::max(r.codazzi, v);
            else if (i < p && j < p)
                r.ricci = std::max(r.ricci, v);
        }
    return r;
}

}  // namespace subriem
