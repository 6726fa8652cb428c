#include "hrvsvm/kernels.hpp"

#include <cmath>
#include <cstdint>

namespace hrvsvm::kernels {

namespace {

inline std::size_t chunk_count(std::size_t n) {
  return n == 0 ? 0 : (n - 1) / kChunk + 1;
}

}  // namespace

double sum(std::span<const double> v) {
  const std::int64_t nc = static_cast<std::int64_t>(chunk_count(v.size()));
  if (nc <= 1) {
    double acc = 0.0;
    for (double x : v) acc += x;
    return acc;
  }
  std::vector<double> partial(static_cast<std::size_t>(nc), 0.0);
#pragma omp parallel for schedule(static)
  for (std::int64_t c = 0; c < nc; ++c) {
    const std::size_t begin = static_cast<std::size_t>(c) * kChunk;
    const std::size_t end = std::min(begin + kChunk, v.size());
    double acc = 0.0;
    for (std::size_t i = begin; i < end; ++i) acc += v[i];
    partial[static_cast<std::size_t>(c)] = acc;
  }
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

double sum_dev(std::span<const double> v, double shift) {
  const std::int64_t nc = static_cast<std::int64_t>(chunk_count(v.size()));
  if (nc <= 1) {
    double acc = 0.0;
    for (double x : v) acc += x - shift;
    return acc;
  }
  std::vector<double> partial(static_cast<std::size_t>(nc), 0.0);
#pragma omp parallel for schedule(static)
  for (std::int64_t c = 0; c < nc; ++c) {
    const std::size_t begin = static_cast<std::size_t>(c) * kChunk;
    const std::size_t end = std::min(begin + kChunk, v.size());
    double acc = 0.0;
    for (std::size_t i = begin; i < end; ++i) acc += v[i] - shift;
    partial[static_cast<std::size_t>(c)] = acc;
  }
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

double sum_sq_dev(std::span<const double> v, double center) {
  const std::int64_t nc = static_cast<std::int64_t>(chunk_count(v.size()));
  if (nc <= 1) {
    double acc = 0.0;
    for (double x : v) {
      const double d = x - center;
      acc += d * d;
    }
    return acc;
  }
  std::vector<double> partial(static_cast<std::size_t>(nc), 0.0);
#pragma omp parallel for schedule(static)
  for (std::int64_t c = 0; c < nc; ++c) {
    const std::size_t begin = static_cast<std::size_t>(c) * kChunk;
    const std::size_t end = std::min(begin + kChunk, v.size());
    double acc = 0.0;
    for (std::size_t i = begin; i < end; ++i) {
      const double d = v[i] - center;
      acc += d * d;
    }
    partial[static_cast<std::size_t>(c)] = acc;
  }
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

double sum_sq_succ_diff(std::span<const double> v) {
  if (v.size() < 2) return 0.0;
  const std::size_t nd = v.size() - 1;
  const std::int64_t nc = static_cast<std::int64_t>(chunk_count(nd));
  if (nc <= 1) {
    double acc = 0.0;
    for (std::size_t i = 0; i < nd; ++i) {
      const double d = v[i + 1] - v[i];
      acc += d * d;
    }
    return acc;
  }
  std::vector<double> partial(static_cast<std::size_t>(nc), 0.0);
#pragma omp parallel for schedule(static)
  for (std::int64_t c = 0; c < nc; ++c) {
    const std::size_t begin = static_cast<std::size_t>(c) * kChunk;
    const std::size_t end = std::min(begin + kChunk, nd);
    double acc = 0.0;
    for (std::size_t i = begin; i < end; ++i) {
      const double d = v[i + 1] - v[i];
      acc += d * d;
    }
    partial[static_cast<std::size_t>(c)] = acc;
  }
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

long long count_abs_succ_diff_gt(std::span<const double> v, double threshold) {
  if (v.size() < 2) return 0;
  const std::int64_t nd = static_cast<std::int64_t>(v.size() - 1);
  long long count = 0;
#pragma omp parallel for schedule(static) reduction(+ : count) if (nd >= 4 * static_cast<std::int64_t>(kChunk))
  for (std::int64_t i = 0; i < nd; ++i) {
    if (std::abs(v[i + 1] - v[i]) > threshold) ++count;
  }
  return count;
}

void reciprocal_scale(std::span<const double> in, double scale,
                      std::span<double> out) {
  const std::int64_t n = static_cast<std::int64_t>(in.size());
#pragma omp parallel for schedule(static) if (n >= 4 * static_cast<std::int64_t>(kChunk))
  for (std::int64_t i = 0; i < n; ++i) {
    out[i] = scale / in[i];
  }
}

void gram(const svm::KernelSpec& k, std::span<const double> points,
          std::size_t dim, std::span<double> out) {
  const std::int64_t l = static_cast<std::int64_t>(points.size() / dim);
#pragma omp parallel for schedule(dynamic, 4) if (l >= 64)
  for (std::int64_t i = 0; i < l; ++i) {
    const std::span<const double> xi = points.subspan(i * dim, dim);
    for (std::int64_t j = i; j < l; ++j) {
      const double value =
          svm::kernel_eval(k, xi, points.subspan(j * dim, dim));
      out[i * l + j] = value;
      out[j * l + i] = value;
    }
  }
}

void decision_values(const svm::Model& m,
                     std::span<const std::vector<double>> probes,
                     std::span<double> out) {
  const std::int64_t n = static_cast<std::int64_t>(probes.size());
#pragma omp parallel for schedule(static) if (n >= 16)
  for (std::int64_t i = 0; i < n; ++i) {
    out[i] = svm::decision_value(m, probes[i]);
  }
}

}  // namespace hrvsvm::kernels
