#include <subriem/heisenberg.hpp>
#include <subriem/surfaces.hpp>
#include <subriem/variation.hpp>

#include <benchmark/benchmark.h>

#include <numbers>
#include <random>

using namespace subriem;

namespace {

constexpr double pi = std::numbers::pi;

surfaces::GeneratedSurface tubular() { return surfaces::surface_from_curve(surfaces::circle_curve(1.0), 0.0, 0.5 * pi); }

Vec param(double t, double s) {
    Vec u(2);
    u << t, s;
    return u;
}

void BM_cc_distance(benchmark::State& state) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    std::vector<Vec> pts(256, Vec(5));
    for (auto& p : pts)
        for (int i = 0; i < 5; ++i) p(i) = d(rng);
    std::size_t k = 0;
    for (auto _ : state) benchmark::DoNotOptimize(heisenberg::cc_distance(pts[k++ % pts.size()]));
}
BENCHMARK(BM_cc_distance);

void BM_adapted_frame(benchmark::State& state) {
    const auto g = tubular();
    const Submanifold sub(heisenberg_algebra(2), g.immersion, {}, g.gauge);
    for (auto _ : state) benchmark::DoNotOptimize(sub.frame(param(0.4, 0.5)));
}
BENCHMARK(BM_adapted_frame);

void BM_shape_operators(benchmark::State& state) {
    const auto g = tubular();
    const Submanifold sub(heisenberg_algebra(2), g.immersion, {}, g.gauge);
    for (auto _ : state) benchmark::DoNotOptimize(sub.shape_operators(param(0.4, 0.5)));
}
BENCHMARK(BM_shape_operators);

void BM_mu_measure(benchmark::State& state) {
    const auto g = tubular();
    const Submanifold sub(heisenberg_algebra(2), g.immersion, {}, g.gauge);
    ParameterBox box;
    box.lower = param(0.0, 0.1);
    box.upper = param(0.5 * pi, 1.0);
    const QuadratureGrid grid = QuadratureGrid::gauss(box, static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(mu_measure(sub, grid, 1));
}
BENCHMARK(BM_mu_measure)->Arg(8)->Arg(16);

}  // namespace

BENCHMARK_MAIN();
