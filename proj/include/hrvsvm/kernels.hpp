#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hrvsvm/svm.hpp"

namespace hrvsvm::kernels {

// OpenMP-parallel inner loops. Reductions sum fixed 2048-element chunks
// serially and combine the partials in chunk order, so every result is
// bitwise identical for any thread count (and to the single-thread run).
// The serial counterparts live in hrvsvm::ref.

inline constexpr std::size_t kChunk = 2048;

double sum(std::span<const double> v);
// sum of (v[i] - shift); shifting by the first element keeps means exact on
// constant input
double sum_dev(std::span<const double> v, double shift);
double sum_sq_dev(std::span<const double> v, double center);
double sum_sq_succ_diff(std::span<const double> v);
long long count_abs_succ_diff_gt(std::span<const double> v, double threshold);

// out[i] = scale / in[i]
void reciprocal_scale(std::span<const double> in, double scale,
                      std::span<double> out);

// Row-major symmetric kernel matrix over row-major points. Parallel over
// rows; each entry is written once and mirrored.
void gram(const svm::KernelSpec& k, std::span<const double> points,
          std::size_t dim, std::span<double> out);

// Decision values for a batch of probes, parallel over probes, results in
// probe order.
void decision_values(const svm::Model& m,
                     std::span<const std::vector<double>> probes,
                     std::span<double> out);

}  // namespace hrvsvm::kernels
