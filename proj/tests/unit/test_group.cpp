#include "support.hpp"

#include <subriem/group.hpp>

#include <doctest.h>

using namespace subriem;
using testing_support::uniform_vec;

namespace {

StratifiedAlgebra engel() { return StratifiedAlgebra({2, 1, 1}, {{0, 1, 2, 1.0}, {0, 2, 3, 1.0}}); }

// Step-4 filiform algebra: [e1, e_k] = e_{k+1} for k = 2..4.
StratifiedAlgebra filiform() {
    return StratifiedAlgebra({2, 1, 1, 1}, {{0, 1, 2, 1.0}, {0, 2, 3, 1.0}, {0, 3, 4, 1.0}});
}

}  // namespace

TEST_CASE("Heisenberg product agrees with the closed form") {
    std::mt19937_64 rng(3);
    const auto h = heisenberg_algebra(2);
    for (int trial = 0; trial < 100; ++trial) {
        const Vec x = uniform_vec(rng, 5, -3, 3), y = uniform_vec(rng, 5, -3, 3);
        CHECK((group_multiply(h, x, y) - testing_support::heis_mul(x, y)).norm() < 1e-13);
    }
}

TEST_CASE("group law: associativity, identity, inverse, dilations") {
    std::mt19937_64 rng(5);
    for (const auto& alg : {engel(), filiform()}) {
        const int n = alg.dim();
        for (int trial = 0; trial < 100; ++trial) {
            const Vec x = uniform_vec(rng, n), y = uniform_vec(rng, n), z = uniform_vec(rng, n);
            const Vec lhs = group_multiply(alg, group_multiply(alg, x, y), z);
            const Vec rhs = group_multiply(alg, x, group_multiply(alg, y, z));
            CHECK((lhs - rhs).norm() < 1e-12);
            CHECK((group_multiply(alg, x, group_inverse(x))).norm() < 1e-14);
            CHECK((group_multiply(alg, x, Vec::Zero(n)) - x).norm() == 0.0);
            const double lam = testing_support::uniform(rng, 0.2, 3.0);
            const Vec d = dilate(alg, group_multiply(alg, x, y), lam);
            CHECK((d - group_multiply(alg, dilate(alg, x, lam), dilate(alg, y, lam))).norm() < 1e-12);
        }
    }
}

TEST_CASE("left-invariant frame is the derivative of right multiplication") {
    std::mt19937_64 rng(9);
    for (const auto& alg : {heisenberg_algebra(2), engel(), filiform()}) {
        const int n = alg.dim();
        const Vec x = uniform_vec(rng, n);
        const Mat e = left_invariant_frame(alg, x);
        const double h = 1e-6;
        for (int i = 0; i < n; ++i) {
            const Vec fd = (group_multiply(alg, x, h * Vec::Unit(n, i)) - group_multiply(alg, x, -h * Vec::Unit(n, i))) /
                           (2.0 * h);
            CHECK((fd - e.col(i)).norm() < 1e-8);
        }
    }
}
