#include <benchmark/benchmark.h>

#include "bianchi/geodesic.hpp"
#include "bianchi/lattice.hpp"
#include "bianchi/mathieu.hpp"
#include "bianchi/specfun.hpp"
#include "bianchi/spectrum.hpp"
#include "bianchi/stats.hpp"

using namespace bianchi;

static void BM_MathieuBelow(benchmark::State& state) {
  const double mu = static_cast<double>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(mathieu::characteristic_values_below(mu, 4.0 * mu + 400.0));
  }
}
BENCHMARK(BM_MathieuBelow)->Arg(1)->Arg(50)->Arg(500);

static void BM_JacobiTriple(benchmark::State& state) {
  double x = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(specfun::jacobi_sn_cn_dn(x, 0.9));
    x += 1e-3;
  }
}
BENCHMARK(BM_JacobiTriple);

static void BM_RepcountDivisor(benchmark::State& state) {
  for (auto _ : state) {
    std::int64_t acc = 0;
    for (std::int64_t K = 1; K <= 10000; ++K) {
      acc += lattice::representation_count_divisor(lattice::FormKind::square, K).N;
    }
    benchmark::DoNotOptimize(acc);
  }
}
BENCHMARK(BM_RepcountDivisor)->Unit(benchmark::kMillisecond);

static void BM_QuotientSpectrum(benchmark::State& state) {
  spectrum::SpectrumOptions opts;
  opts.E_max = static_cast<double>(state.range(0));
  opts.threads = 1;
  for (auto _ : state) {
    const auto s = spectrum::quotient_spectrum(MetricParams(1.0, 2.0), lattice::Lattice2D::square(4), 4, opts);
    benchmark::DoNotOptimize(s.lines.size());
  }
}
BENCHMARK(BM_QuotientSpectrum)->Arg(250)->Arg(1000)->Unit(benchmark::kMillisecond);

static void BM_ExactGeodesic(benchmark::State& state) {
  geodesic::TrajectoryState s0;
  s0.q0 = 0.3;
  s0.p0 = 0.8;
  s0.p1 = 1.1;
  s0.p2 = -0.4;
  for (auto _ : state) {
    benchmark::DoNotOptimize(geodesic::integrate_geodesic(MetricParams(1.0, 2.5), s0, 100.0, 0.1));
  }
}
BENCHMARK(BM_ExactGeodesic)->Unit(benchmark::kMillisecond);

static void BM_PairCorrelation(benchmark::State& state) {
  stats::UnfoldOptions o;
  o.levels = stats::LevelMode::distinct;
  o.method = stats::UnfoldMethod::polynomial_fit;
  const auto u = stats::unfold(stats::diagonal_form_values(1.618033988749895, 1e5), o);
  for (auto _ : state) benchmark::DoNotOptimize(stats::pair_correlation(u, 1.0, 10, 1));
}
BENCHMARK(BM_PairCorrelation)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
