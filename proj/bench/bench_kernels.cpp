// Parallel kernels against their serial reference twins.
// Run with --benchmark_filter=Parallel or =Serial; OMP_NUM_THREADS sets the team size.

#include <benchmark/benchmark.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "spdc/kernels.hpp"

namespace k = spdc::kernels;

namespace {

std::vector<double> noise(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

std::vector<double> gaussian(std::size_t half, double sigma) {
  std::vector<double> g(2 * half + 1);
  double total = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double x = static_cast<double>(i) - static_cast<double>(half);
    g[i] = std::exp(-0.5 * x * x / (sigma * sigma));
    total += g[i];
  }
  for (auto& x : g) x /= total;
  return g;
}

/// Sorted integer timestamps at a mean spacing of `spacing` ps.
std::vector<std::int64_t> arrivals(std::size_t n, double spacing, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> gap(1.0 / spacing);
  std::vector<std::int64_t> t(n);
  double now = 0.0;
  for (auto& x : t) {
    now += gap(rng);
    x = static_cast<std::int64_t>(now);
  }
  return t;
}

// 125 ps IRF on a 1 ps trace.
template <bool Parallel>
void BM_ConvolveSame(benchmark::State& state) {
  const auto in = noise(static_cast<std::size_t>(state.range(0)), 1);
  const auto kernel = gaussian(750, 125.0);
  std::vector<double> out(in.size());
  for (auto _ : state) {
    if constexpr (Parallel) {
      k::convolve_same(in, kernel, out);
    } else {
      k::reference::convolve_same(in, kernel, out);
    }
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool Parallel>
void BM_ConvolveBin(benchmark::State& state) {
  const auto in = noise(1 << 20, 2);
  const auto kernel = gaussian(750, 125.0);
  const std::size_t factor = 50, first = 1 << 19, bins = 200;
  std::vector<double> out(bins);
  for (auto _ : state) {
    if constexpr (Parallel) {
      k::convolve_bin(in, kernel, factor, first, out);
    } else {
      k::reference::convolve_bin(in, kernel, factor, first, out);
    }
    benchmark::DoNotOptimize(out.data());
  }
}

// Background map assembly: three separable terms on an n x n grid.
template <bool Parallel>
void BM_AssembleSeparable(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto g = noise(n, 3), c1 = noise(n, 4), c2 = noise(n, 5);
  const std::vector<k::SeparableTerm> terms = {{1.0, c1, g}, {1.0, g, c2}, {-1.0, g, g}};
  std::vector<double> out(n * n);
  for (auto _ : state) {
    if constexpr (Parallel) {
      k::assemble_separable(terms, n, n, out);
    } else {
      k::reference::assemble_separable(terms, n, n, out);
    }
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * n));
}

template <bool Parallel>
void BM_ConvolveMap(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto in = noise(n * n, 6);
  const auto kernel = gaussian(12, 2.5);
  std::vector<double> tmp(n * n), out(n * n);
  for (auto _ : state) {
    if constexpr (Parallel) {
      k::convolve_rows(in, n, n, kernel, tmp);
      k::convolve_cols(tmp, n, n, kernel, out);
    } else {
      k::reference::convolve_rows(in, n, n, kernel, tmp);
      k::reference::convolve_cols(tmp, n, n, kernel, out);
    }
    benchmark::DoNotOptimize(out.data());
  }
}

// One second of a 1 MHz idler/signal stream with a 20 ns window and 50 ps bins.
template <bool Parallel>
void BM_CorrelatePairs(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto ref = arrivals(n, 1e6, 7);
  const auto target = arrivals(n, 1e6, 8);
  const std::int64_t window = 20000, bin = 50;
  std::vector<double> hist(static_cast<std::size_t>(2 * window / bin));
  for (auto _ : state) {
    std::fill(hist.begin(), hist.end(), 0.0);
    if constexpr (Parallel) {
      k::correlate_pairs(ref, target, window, bin, hist);
    } else {
      k::reference::correlate_pairs(ref, target, window, bin, hist);
    }
    benchmark::DoNotOptimize(hist.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(2 * n));
}

template <bool Parallel>
void BM_CorrelateTriples(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto ref = arrivals(n, 5e4, 9);
  const auto t1 = arrivals(n, 5e4, 10);
  const auto t2 = arrivals(n, 5e4, 11);
  const std::int64_t window = 5000, bin = 50;
  const auto nbins = static_cast<std::size_t>(2 * window / bin);
  std::vector<double> hist(nbins * nbins);
  for (auto _ : state) {
    std::fill(hist.begin(), hist.end(), 0.0);
    if constexpr (Parallel) {
      k::correlate_triples(ref, t1, t2, window, bin, nbins, hist);
    } else {
      k::reference::correlate_triples(ref, t1, t2, window, bin, nbins, hist);
    }
    benchmark::DoNotOptimize(hist.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(3 * n));
}

}  // namespace

BENCHMARK_TEMPLATE(BM_ConvolveSame, false)->Name("Serial/ConvolveSame")->Arg(1 << 16)->Arg(1 << 18);
BENCHMARK_TEMPLATE(BM_ConvolveSame, true)->Name("Parallel/ConvolveSame")->Arg(1 << 16)->Arg(1 << 18);
BENCHMARK_TEMPLATE(BM_ConvolveBin, false)->Name("Serial/ConvolveBin");
BENCHMARK_TEMPLATE(BM_ConvolveBin, true)->Name("Parallel/ConvolveBin");
BENCHMARK_TEMPLATE(BM_AssembleSeparable, false)->Name("Serial/AssembleSeparable")->Arg(1000)->Arg(4000);
BENCHMARK_TEMPLATE(BM_AssembleSeparable, true)->Name("Parallel/AssembleSeparable")->Arg(1000)->Arg(4000);
BENCHMARK_TEMPLATE(BM_ConvolveMap, false)->Name("Serial/ConvolveMap")->Arg(1000);
BENCHMARK_TEMPLATE(BM_ConvolveMap, true)->Name("Parallel/ConvolveMap")->Arg(1000);
BENCHMARK_TEMPLATE(BM_CorrelatePairs, false)->Name("Serial/CorrelatePairs")->Arg(1000000);
BENCHMARK_TEMPLATE(BM_CorrelatePairs, true)->Name("Parallel/CorrelatePairs")->Arg(1000000);
BENCHMARK_TEMPLATE(BM_CorrelateTriples, false)->Name("Serial/CorrelateTriples")->Arg(1000000);
BENCHMARK_TEMPLATE(BM_CorrelateTriples, true)->Name("Parallel/CorrelateTriples")->Arg(1000000);

BENCHMARK_MAIN();
