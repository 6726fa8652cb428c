#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hrvsvm/normalizer.hpp"

namespace hrvsvm::svm {

enum class KernelKind { linear, gaussian, polynomial };

std::string to_string(KernelKind kind);
KernelKind kernel_kind_from(const std::string& name);  // throws std::invalid_argument

struct KernelSpec {
  KernelKind kind = KernelKind::gaussian;
  double sigma = 1.0;   // gaussian width
  int degree = 3;       // polynomial degree
  double coef0 = 1.0;   // polynomial offset

  static KernelSpec linear();
  static KernelSpec gaussian(double sigma = 1.0);
  static KernelSpec polynomial(int degree, double coef0 = 1.0);

  void validate() const;  // throws std::invalid_argument
};

// gaussian: exp(-|x-y|^2 / (2 sigma^2)); linear: x.y;
// polynomial: (x.y + coef0)^degree.
double kernel_eval(const KernelSpec& k, std::span<const double> x,
                   std::span<const double> y);

// Labeled points of one fixed dimension with both classes present. Identical
// points carrying opposite labels are rejected at construction: no feasible
// KKT point exists for them once the box bound is large.
class TrainingSet {
 public:
  TrainingSet(std::vector<std::vector<double>> points, std::vector<int> labels);

  std::size_t size() const noexcept { return labels_.size(); }
  std::size_t dim() const noexcept { return dim_; }
  std::span<const double> point(std::size_t i) const {
    return {data_.data() + i * dim_, dim_};
  }
  int label(std::size_t i) const { return labels_[i]; }
  const std::vector<int>& labels() const noexcept { return labels_; }
  std::span<const double> flat() const noexcept { return data_; }

 private:
  std::vector<double> data_;  // row-major points
  std::vector<int> labels_;   // -1 / +1
  std::size_t dim_ = 0;
};

struct SolveOptions {
  double c_bound = 1000.0;
  double kkt_tol = 1e-3;
  int max_passes = 10000;
  // Recompute the dual objective after every pair update and throw
  // std::logic_error if it ever decreases. O(l^2) per step; test use only.
  bool check_monotone_objective = false;
};

struct DualSolution {
  std::vector<double> alphas;
  double bias = 0.0;
  double objective_value = 0.0;
  KernelSpec kernel;
  double c_bound = 0.0;
  int iterations = 0;  // completed outer sweeps
  bool converged = false;
};

// SMO-style pairwise coordinate ascent on the kernelized dual. The outer
// loop alternates full sweeps with sweeps over non-bound multipliers; the
// partner index maximizes |E_i - E_j| with deterministic fallbacks, so the
// solve path depends only on the input order. Terminates converged when a
// full sweep finds no KKT violator beyond kkt_tol, or feasible-but-unflagged
// at max_passes.
DualSolution solve_dual(const TrainingSet& ts, const KernelSpec& k,
                        const SolveOptions& opt = {});

// Mean of y_i - sum_j alpha_j y_j K(x_j, x_i) over margin support vectors;
// falls back to the midpoint rule -(max_{y=-1} f0 + min_{y=+1} f0)/2 when
// every multiplier sits on a bound.
double compute_bias(const DualSolution& sol, const TrainingSet& ts);

// 2 / |w| with w = sum alpha_i y_i x_i. Linear kernel only.
double linear_margin(const DualSolution& sol, const TrainingSet& ts);

// Support vectors (alpha > 1e-8) plus bias, kernel, and optional feature
// scaler. Immutable after construction; safe to share across threads.
struct Model {
  std::vector<std::vector<double>> support_points;
  std::vector<int> support_labels;
  std::vector<double> support_alphas;
  double bias = 0.0;
  KernelSpec kernel;
  std::optional<Normalizer> normalizer;

  std::size_t dim() const noexcept {
    return support_points.empty() ? 0 : support_points.front().size();
  }
};

Model make_model(const DualSolution& sol, const TrainingSet& ts,
                 std::optional<Normalizer> normalizer = std::nullopt);

// sum alpha_i y_i K(x_i, x) + b; the normalizer, when present, is applied to
// x first.
double decision_value(const Model& m, std::span<const double> x);

// Sign rule: positive decision values are the task-positive class, zero
// breaks toward healthy.
int sign_label(double decision);
int classify(const Model& m, std::span<const double> x);

// Row-major l x l kernel matrix; each unordered pair is evaluated once, so
// the matrix is exactly symmetric.
std::vector<double> gram_matrix(const KernelSpec& k, const TrainingSet& ts);

}  // namespace hrvsvm::svm
