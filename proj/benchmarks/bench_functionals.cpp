#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

#include "varcurve/constraints.hpp"
#include "varcurve/functionals.hpp"
#include "varcurve/optimizer.hpp"

using namespace varcurve;

namespace {

constexpr double kPi = std::numbers::pi;

DiscreteCurve wobbly_sphere_curve(int n) {
  return DiscreteCurve::sample(make_manifold("sphere:2"), DomainKind::interval, n, [](double t) {
    Vec p(3);
    p << std::cos(2.0 * t), std::sin(2.0 * t), 0.2 * std::sin(3 * kPi * t);
    return p;
  });
}

void BM_Evaluate(benchmark::State& state) {
  const auto x = wobbly_sphere_curve(static_cast<int>(state.range(0)));
  const auto spec = FunctionalSpec::tension(1.0);
  for (auto _ : state) benchmark::DoNotOptimize(evaluate(spec, x));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Evaluate)->RangeMultiplier(4)->Range(64, 4096)->Complexity();

void BM_Gradient(benchmark::State& state) {
  const auto x = wobbly_sphere_curve(static_cast<int>(state.range(0)));
  const auto spec = FunctionalSpec::tension(1.0);
  std::vector<bool> free(static_cast<std::size_t>(x.sample_count()), true);
  free.front() = free.back() = false;
  for (auto _ : state) benchmark::DoNotOptimize(gradient(spec, x, free));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Gradient)->RangeMultiplier(4)->Range(64, 4096)->Complexity();

void BM_MinimizeCircleWinding(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto m = make_manifold("circle");
  Vec a(1), b(1);
  a << 0.0;
  b << kPi / 2;
  const auto c = ConstraintSet::interpolation({{0.0, a}, {1.0, b}});
  const auto x0 = seed(c, m, n, SeedHint{{1}, {}});
  for (auto _ : state) benchmark::DoNotOptimize(minimize(FunctionalSpec::tension(1.0), c, x0).objective);
}
BENCHMARK(BM_MinimizeCircleWinding)->Arg(100)->Arg(200)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_MinimizeSphereClamped(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto m = make_manifold("sphere:2");
  Vec p(3), q(3), v(3), w(3);
  p << 1, 0, 0;
  q << 0, 0, 1;
  v << 0, 1, 0;
  w << 0, 1, 0;
  const auto c = ConstraintSet::clamped(2, {p, v}, {q, w});
  const auto x0 = seed(c, m, n);
  for (auto _ : state) benchmark::DoNotOptimize(minimize(FunctionalSpec::tension(0.5), c, x0).objective);
}
BENCHMARK(BM_MinimizeSphereClamped)->Arg(50)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
