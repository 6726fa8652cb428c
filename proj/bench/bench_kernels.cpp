#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "hrvsvm/hrv.hpp"
#include "hrvsvm/kernels.hpp"
#include "hrvsvm/reference.hpp"
#include "hrvsvm/svm.hpp"

namespace {

using namespace hrvsvm;

std::vector<double> random_intervals(std::size_t n, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> jitter(0.0, 40.0);
  std::vector<double> v(n);
  for (auto& x : v) x = std::max(300.0, 800.0 + jitter(rng));
  return v;
}

std::vector<double> random_points(std::size_t l, std::size_t dim,
                                  unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> coord(-2.0, 2.0);
  std::vector<double> v(l * dim);
  for (auto& x : v) x = coord(rng);
  return v;
}

void bm_sum_parallel(benchmark::State& state) {
  const auto v = random_intervals(static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(kernels::sum(v));
  }
}

void bm_sum_serial(benchmark::State& state) {
  const auto v = random_intervals(static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ref::sum(v));
  }
}

void bm_metrics_parallel(benchmark::State& state) {
  RrSeries rr;
  rr.intervals = random_intervals(static_cast<std::size_t>(state.range(0)), 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(hrv::compute_metrics(rr));
  }
}

void bm_metrics_serial(benchmark::State& state) {
  RrSeries rr;
  rr.intervals = random_intervals(static_cast<std::size_t>(state.range(0)), 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ref::compute_metrics(rr, 50.0));
  }
}

void bm_gram_parallel(benchmark::State& state) {
  const std::size_t l = static_cast<std::size_t>(state.range(0));
  const auto pts = random_points(l, 2, 3);
  const auto k = svm::KernelSpec::gaussian(1.0);
  std::vector<double> out(l * l);
  for (auto _ : state) {
    kernels::gram(k, pts, 2, out);
    benchmark::DoNotOptimize(out.data());
  }
}

void bm_gram_serial(benchmark::State& state) {
  const std::size_t l = static_cast<std::size_t>(state.range(0));
  const auto pts = random_points(l, 2, 3);
  const auto k = svm::KernelSpec::gaussian(1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ref::gram(k, pts, 2));
  }
}

svm::Model synthetic_model(std::size_t support, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> coord(-2.0, 2.0);
  std::uniform_real_distribution<double> a(0.0, 1.0);
  svm::Model m;
  m.kernel = svm::KernelSpec::gaussian(1.0);
  for (std::size_t i = 0; i < support; ++i) {
    m.support_points.push_back({coord(rng), coord(rng)});
    m.support_labels.push_back(i % 2 == 0 ? 1 : -1);
    m.support_alphas.push_back(a(rng));
  }
  return m;
}

void bm_decision_batch_parallel(benchmark::State& state) {
  const auto m = synthetic_model(256, 4);
  std::vector<std::vector<double>> probes;
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> coord(-2.0, 2.0);
  for (int i = 0; i < 4096; ++i) probes.push_back({coord(rng), coord(rng)});
  std::vector<double> out(probes.size());
  for (auto _ : state) {
    kernels::decision_values(m, probes, out);
    benchmark::DoNotOptimize(out.data());
  }
}

void bm_decision_batch_serial(benchmark::State& state) {
  const auto m = synthetic_model(256, 4);
  std::vector<std::vector<double>> probes;
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> coord(-2.0, 2.0);
  for (int i = 0; i < 4096; ++i) probes.push_back({coord(rng), coord(rng)});
  std::vector<double> out(probes.size());
  for (auto _ : state) {
    for (std::size_t i = 0; i < probes.size(); ++i) {
      out[i] = ref::decision_value(m, probes[i]);
    }
    benchmark::DoNotOptimize(out.data());
  }
}

BENCHMARK(bm_sum_serial)->Arg(1 << 16)->Arg(1 << 21);
BENCHMARK(bm_sum_parallel)->Arg(1 << 16)->Arg(1 << 21);
BENCHMARK(bm_metrics_serial)->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(bm_metrics_parallel)->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(bm_gram_serial)->Arg(256)->Arg(1024);
BENCHMARK(bm_gram_parallel)->Arg(256)->Arg(1024);
BENCHMARK(bm_decision_batch_serial);
BENCHMARK(bm_decision_batch_parallel);

}  // namespace

BENCHMARK_MAIN();
