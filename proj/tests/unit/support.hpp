#pragma once

#include <subriem/algebra.hpp>

#include <random>

namespace testing_support {

using subriem::Mat;
using subriem::Vec;

inline Vec uniform_vec(std::mt19937_64& rng, int n, double lo = -1.0, double hi = 1.0) {
    std::uniform_real_distribution<double> d(lo, hi);
    Vec v(n);
    for (int i = 0; i < n; ++i) v(i) = d(rng);
    return v;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

// Hand-written Heisenberg product (x, t)(y, s) = (x + y, t + s + (1/2) sum x_j y_{j+n} - x_{j+n} y_j).
inline Vec heis_mul(const Vec& p, const Vec& q) {
    const int n = static_cast<int>(p.size() - 1) / 2;
    Vec r = p + q;
    for (int j = 0; j < n; ++j) r(2 * n) += 0.5 * (p(j) * q(j + n) - p(j + n) * q(j));
    return r;
}

}  // namespace testing_support
