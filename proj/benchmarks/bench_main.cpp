#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "parawork/avoiders.hpp"
#include "parawork/ffield.hpp"
#include "parawork/gapfinder.hpp"
#include "parawork/mollifier.hpp"
#include "parawork/pgeom.hpp"
#include "parawork/progressions.hpp"
#include "parawork/spectral.hpp"

namespace {

using namespace parawork;

const char* kFields[] = {"3", "5", "7", "3^2", "11", "13", "5^2", "3^3", "7^2", "3^4"};

std::vector<cplx> random_grid(std::uint32_t q, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  std::vector<cplx> f(std::size_t{q} * q);
  for (auto& x : f) x = {nd(rng), nd(rng)};
  return f;
}

void BM_Transform(benchmark::State& st) {
  const FieldCtx f = parse_field(kFields[st.range(0)]);
  const auto path = st.range(1) ? TransformPath::Naive : TransformPath::Fast;
  const auto g = random_grid(f.q(), 1);
  for (auto _ : st) benchmark::DoNotOptimize(fourier_transform(f, g, path));
  st.SetLabel("q=" + std::to_string(f.q()));
}
BENCHMARK(BM_Transform)->ArgsProduct({{2, 5, 7, 8, 9}, {0}})->ArgsProduct({{2, 5, 7}, {1}});

void BM_CountPairs(benchmark::State& st) {
  const FieldCtx f = parse_field(kFields[st.range(0)]);
  std::mt19937_64 rng(2);
  std::vector<std::uint32_t> cells;
  for (std::uint32_t c = 0; c < f.q() * f.q(); ++c)
    if (rng() % 2) cells.push_back(c);
  const PointSet2 a = PointSet2::from_indices(f, cells);
  for (auto _ : st) benchmark::DoNotOptimize(count_pairs(a));
  st.SetLabel("q=" + std::to_string(f.q()));
}
BENCHMARK(BM_CountPairs)->DenseRange(5, 9);

void BM_MaxAvoiderExact(benchmark::State& st) {
  const FieldCtx f = parse_field(kFields[st.range(0)]);
  for (auto _ : st) benchmark::DoNotOptimize(max_avoider_exact(f));
  st.SetLabel("q=" + std::to_string(f.q()));
}
BENCHMARK(BM_MaxAvoiderExact)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

void BM_ContentDp(benchmark::State& st) {
  const int m = static_cast<int>(st.range(0));
  std::mt19937_64 rng(3);
  const GridSet k = GridSet::random(m, 0.5, rng);
  for (auto _ : st) benchmark::DoNotOptimize(content_dp(k, 2.9));
}
BENCHMARK(BM_ContentDp)->DenseRange(3, 6)->Unit(benchmark::kMillisecond);

void BM_RieszEnergy(benchmark::State& st) {
  const int m = static_cast<int>(st.range(0));
  const GridMeasure mu(m, std::vector<double>(cells_at(m), 1.0 / static_cast<double>(cells_at(m))));
  for (auto _ : st) benchmark::DoNotOptimize(riesz_energy(mu, 10.0 / 6.0));
}
BENCHMARK(BM_RieszEnergy)->DenseRange(2, 5)->Unit(benchmark::kMillisecond);

void BM_MeasureFourier(benchmark::State& st) {
  const int m = static_cast<int>(st.range(0));
  const GridMeasure mu(m, std::vector<double>(cells_at(m), 1.0 / static_cast<double>(cells_at(m))));
  const MeasureFourier ft(mu);
  double xi = 0.1;
  for (auto _ : st) {
    benchmark::DoNotOptimize(ft(xi, 2.0 * xi));
    xi += 0.01;
  }
}
BENCHMARK(BM_MeasureFourier)->DenseRange(3, 6);

void BM_MollifierHat(benchmark::State& st) {
  const Mollifier phi;
  double k = 0.5;
  for (auto _ : st) {
    benchmark::DoNotOptimize(phi.profile_hat_real(k));
    k += 0.37;
    if (k > 1e4) k = 0.5;
  }
}
BENCHMARK(BM_MollifierHat);

void BM_ConvolutionFunctional(benchmark::State& st) {
  const int m = static_cast<int>(st.range(0));
  const GridMeasure mu(m, std::vector<double>(cells_at(m), 1.0 / static_cast<double>(cells_at(m))));
  const ParabolaMeasure pm(2.0, 512);
  for (auto _ : st) benchmark::DoNotOptimize(convolution_functional(mu, pm, 0.1));
}
BENCHMARK(BM_ConvolutionFunctional)->DenseRange(1, 3)->Unit(benchmark::kMillisecond);

void BM_GapPipeline(benchmark::State& st) {
  const Mollifier phi;
  const GridSet k = GridSet::full(static_cast<int>(st.range(0)));
  const GapParams p = GapParams::make(1.0, 1.1, 1);
  for (auto _ : st) benchmark::DoNotOptimize(build_gap_measure(k, 2.9, p, phi));
}
BENCHMARK(BM_GapPipeline)->DenseRange(3, 4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
