#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hrvsvm/hrv.hpp"
#include "hrvsvm/series.hpp"
#include "hrvsvm/svm.hpp"

// Serial reference implementations, kept for testing and benchmarking the
// parallel kernels, plus the brute-force dual maximizer used as the solver
// oracle. Straightforward definitional code; not linked into the main
// library or the CLI.
namespace hrvsvm::ref {

double sum(std::span<const double> v);
double sum_sq_dev(std::span<const double> v, double center);
double sum_sq_succ_diff(std::span<const double> v);
long long count_abs_succ_diff_gt(std::span<const double> v, double threshold);
void reciprocal_scale(std::span<const double> in, double scale,
                      std::span<double> out);

double kernel_eval(const svm::KernelSpec& k, std::span<const double> x,
                   std::span<const double> y);
std::vector<double> gram(const svm::KernelSpec& k,
                         std::span<const double> points, std::size_t dim);
double decision_value(const svm::Model& m, std::span<const double> x);

// Textbook two-pass recomputation of every metric field.
hrv::HrvMetrics compute_metrics(const RrSeries& rr, double x_threshold_ms,
                                double sdann_segment_ms = hrv::kSdannSegmentMs);

// sum alpha_i - 1/2 sum_ij alpha_i alpha_j y_i y_j K(x_i, x_j)
double dual_objective(const svm::TrainingSet& ts, const svm::KernelSpec& k,
                      std::span<const double> alphas);

// Maximizes the dual by grid-refined line search along every feasible pair
// segment (the moves that keep sum alpha_i y_i = 0 inside the box), repeated
// until no pair improves. Independent of the analytic SMO update.
std::vector<double> solve_dual_search(const svm::TrainingSet& ts,
                                      const svm::KernelSpec& k,
                                      double c_bound);

// Determinant by cofactor expansion, for small PSD checks.
double determinant(const std::vector<double>& matrix, std::size_t n);

}  // namespace hrvsvm::ref
