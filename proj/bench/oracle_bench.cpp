// ---------------------------------------------------------------------
// Benchmark: brute-force Gram histogram enumeration, serial reference
// vs the OpenMP kernel.  The enumeration walks all pairs of columns of
// (O_F / pi^{2a})^2 -- p^{8a} pairs -- so level 2 at p = 3 is ~43M
// column pairs per run.  With OMP_NUM_THREADS=1 the two paths should
// time alike (the parallel kernel then measures its scheduling
// overhead); with more threads the parallel path should win.
//
//   ./oracle_bench [--benchmark_filter=...]
// ---------------------------------------------------------------------

#include <benchmark/benchmark.h>

#include "ulat/oracle.hpp"
#include "ulat/padic.hpp"

namespace {

using ulat::BaseLattice;
using ulat::PrimeParam;

void BM_HistogramSerial(benchmark::State& state) {
  PrimeParam f = PrimeParam::make(3);
  const auto base = state.range(0) == 0 ? BaseLattice::L : BaseLattice::H;
  const int64_t a = state.range(1);
  int64_t total = 0;
  for (auto _ : state) {
    auto h = ulat::gram_histogram_serial(f, base, a);
    total = h.total();
    benchmark::DoNotOptimize(h.counts.data());
  }
  state.counters["vectors"] = static_cast<double>(total);
}

void BM_HistogramParallel(benchmark::State& state) {
  PrimeParam f = PrimeParam::make(3);
  const auto base = state.range(0) == 0 ? BaseLattice::L : BaseLattice::H;
  const int64_t a = state.range(1);
  int64_t total = 0;
  for (auto _ : state) {
    auto h = ulat::gram_histogram(f, base, a);
    total = h.total();
    benchmark::DoNotOptimize(h.counts.data());
  }
  state.counters["vectors"] = static_cast<double>(total);
}

BENCHMARK(BM_HistogramSerial)
    ->ArgsProduct({{0, 1}, {1, 2}})
    ->ArgNames({"base", "level"})
    ->Unit(benchmark::kMillisecond);
BENCHMARK(BM_HistogramParallel)
    ->ArgsProduct({{0, 1}, {1, 2}})
    ->ArgNames({"base", "level"})
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
