#include "subriem/group.hpp"

#include <cmath>
#include <stdexcept>

namespace subriem {

namespace {

// Taylor coefficients of z / (1 - exp(-z)); ad_x is nilpotent, so the series terminates.
constexpr double kPsi[] = {1.0,           0.5, 1.0 / 12.0, 0.0, -1.0 / 720.0, 0.0, 1.0 / 30240.0, 0.0,
                           -1.0 / 1209600.0};

}  // namespace

Mat left_invariant_frame(const StratifiedAlgebra& alg, const Vec& x) {
    const int n = alg.dim();
    if (alg.step() > static_cast<int>(std::size(kPsi)))
        throw std::invalid_argument("step too large for the frame series");
    const Mat ad = alg.ad(x);
    Mat out = Mat::Identity(n, n);
    Mat power = Mat::Identity(n, n);
    for (int k = 1; k < alg.step(); ++k) {
        power = power * ad;
        if (kPsi[k] != 0.0) out += kPsi[k] * power;
    }
    return out;
}

Vec group_multiply(const StratifiedAlgebra& alg, const Vec& x, const Vec& y) {
    if (alg.step() > 4) throw std::invalid_argument("group law implemented for step <= 4");
    Vec z = x + y;
    if (alg.step() == 1) return z;
    const Vec xy = alg.bracket(x, y);
    z += 0.5 * xy;
    if (alg.step() == 2) return z;
    const Vec xxy = alg.bracket(x, xy);
    z += (xxy - alg.bracket(y, xy)) / 12.0;
    if (alg.step() == 3) return z;
    z -= alg.bracket(y, xxy) / 24.0;
    return z;
}

Vec dilate(const StratifiedAlgebra& alg, const Vec& x, double lambda) {
    if (x.size() != alg.dim()) throw std::invalid_argument("point has wrong dimension");
    Vec out = x;
    for (int k = 0; k < alg.dim(); ++k) out(k) *= std::pow(lambda, alg.degree(k));
    return out;
}

}  // namespace subriem
