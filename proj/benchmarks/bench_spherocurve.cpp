#include "spherocurve/catalog.hpp"
#include "spherocurve/convexity.hpp"
#include "spherocurve/decomp.hpp"
#include "spherocurve/frenet.hpp"
#include "spherocurve/sphere2.hpp"

#include <benchmark/benchmark.h>

#include <numbers>

using namespace spherocurve;

namespace {

constexpr double pi = std::numbers::pi;

void BM_FrameCurve(benchmark::State& state) {
    const auto g = gamma1(5).curve;
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(frame_curve(g, n));
    state.SetItemsProcessed(state.iterations() * (n + 1));
}
BENCHMARK(BM_FrameCurve)->Arg(512)->Arg(4096)->Unit(benchmark::kMillisecond);

void BM_IntegrateJacobian(benchmark::State& state) {
    const Mat lam = gamma1(5).lambda;
    const int steps = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(integrate_jacobian([&](double) { return lam; }, steps));
}
BENCHMARK(BM_IntegrateJacobian)->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond);

void BM_Decompose(benchmark::State& state) {
    const auto g = gamma1(2).curve;
    for (auto _ : state) benchmark::DoNotOptimize(decompose(g, 1024));
}
BENCHMARK(BM_Decompose)->Unit(benchmark::kMillisecond);

void BM_CountIntersections(benchmark::State& state) {
    const IntersectionCounter counter(gamma1(5).curve);
    const Hyperplane h(Eigen::Vector4d(0, 1, 1, 0));
    for (auto _ : state) benchmark::DoNotOptimize(counter.count(h));
}
BENCHMARK(BM_CountIntersections)->Unit(benchmark::kMicrosecond);

// A convex curve exhausts the budget, so this is the worst case per tuple count.
void BM_WitnessSearchExhaustive(benchmark::State& state) {
    const auto g = gamma1(1).curve;
    const long budget = state.range(0);
    for (auto _ : state) benchmark::DoNotOptimize(find_nonconvexity_witness(g, budget));
    state.SetItemsProcessed(state.iterations() * budget);
}
BENCHMARK(BM_WitnessSearchExhaustive)->Arg(2000)->Arg(20000)->Unit(benchmark::kMillisecond);

void BM_MomentCertificate(benchmark::State& state) {
    const auto g = gamma1(2).curve;
    for (auto _ : state) benchmark::DoNotOptimize(moment_curve_convexity_proof(g));
}
BENCHMARK(BM_MomentCertificate)->Unit(benchmark::kMillisecond);

void BM_HemisphereClassify(benchmark::State& state) {
    const auto c = sigma(pi, 2);
    for (auto _ : state) benchmark::DoNotOptimize(hemisphere_classify(c));
}
BENCHMARK(BM_HemisphereClassify)->Unit(benchmark::kMillisecond);

void BM_HemisphereBorderline(benchmark::State& state) {
    const auto c = sigma(2 * pi);
    for (auto _ : state) benchmark::DoNotOptimize(hemisphere_classify(c));
}
BENCHMARK(BM_HemisphereBorderline)->Unit(benchmark::kMillisecond);

void BM_DistinguishedHemisphere(benchmark::State& state) {
    const auto c = sigma(pi, 2);
    for (auto _ : state) benchmark::DoNotOptimize(distinguished_hemisphere(c));
}
BENCHMARK(BM_DistinguishedHemisphere)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
