#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "cogs/fitting.hpp"
#include "cogs/scene.hpp"

namespace {

std::vector<cogs::Vec3> wavy_polyline(size_t n, double phase) {
    std::vector<cogs::Vec3> out;
    for (size_t i = 0; i < n; ++i) {
        double u = static_cast<double>(i) / (n - 1);
        out.push_back({u, 0.2 * std::sin(2 * cogs::kPi * (u + phase) / 0.5), 0.0});
    }
    return out;
}

cogs::Scene cube_grid(int side) {
    cogs::Scene scene;
    for (int j = 0; j < side; ++j) {
        for (int i = 0; i < side; ++i) {
            cogs::SceneObject obj;
            obj.name = "cube_" + std::to_string(j * side + i);
            obj.position = {(i - side / 2) * 0.12, 1.0 + (j - side / 2) * 0.12, 2.0};
            obj.scale = {0.04, 0.04, 0.04};
            scene.objects.push_back(std::move(obj));
        }
    }
    return scene;
}

void BM_DtwSimilarity(benchmark::State& state) {
    auto a = wavy_polyline(static_cast<size_t>(state.range(0)), 0.0);
    auto b = wavy_polyline(static_cast<size_t>(state.range(0)), 0.1);
    for (auto _ : state)
        benchmark::DoNotOptimize(cogs::dtw_similarity(a, b));
}
BENCHMARK(BM_DtwSimilarity)->Arg(64)->Arg(256);

void BM_RayIntersect(benchmark::State& state) {
    cogs::Scene scene = cube_grid(5);
    cogs::Ray ray{{0, 1, 0}, {0, 0, 1}, 10.0};
    for (auto _ : state)
        benchmark::DoNotOptimize(cogs::ray_intersect(scene, ray));
}
BENCHMARK(BM_RayIntersect);

void BM_ConeIntersect(benchmark::State& state) {
    cogs::Scene scene = cube_grid(5);
    cogs::Cone cone{{0, 1, -0.3}, {0, 0, 1}, {0, 1, 0}, 0.05, 10.0};
    for (auto _ : state)
        benchmark::DoNotOptimize(cogs::cone_intersect(scene, cone));
}
BENCHMARK(BM_ConeIntersect);

void BM_FitSine(benchmark::State& state) {
    std::vector<cogs::Point2> pts;
    for (int i = 0; i < 64; ++i) {
        double u = 0.3 * i / 63.0;
        pts.push_back({u, 0.2 * std::sin(2 * cogs::kPi * u / 1.5)});
    }
    for (auto _ : state)
        benchmark::DoNotOptimize(cogs::fit_sine(pts));
}
BENCHMARK(BM_FitSine);

}  // namespace

BENCHMARK_MAIN();
