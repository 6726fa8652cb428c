#include "hrvsvm/svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "hrvsvm/kernels.hpp"

namespace hrvsvm::svm {

namespace {
// Multipliers below this are treated as zero; above c_bound minus this as at
// the upper bound.
constexpr double kAlphaEps = 1e-8;
}  // namespace

std::string to_string(KernelKind kind) {
  switch (kind) {
    case KernelKind::linear: return "linear";
    case KernelKind::gaussian: return "gaussian";
    case KernelKind::polynomial: return "polynomial";
  }
  return "?";
}

KernelKind kernel_kind_from(const std::string& name) {
  if (name == "linear") return KernelKind::linear;
  if (name == "gaussian") return KernelKind::gaussian;
  if (name == "polynomial") return KernelKind::polynomial;
  throw std::invalid_argument("unknown kernel: " + name);
}

KernelSpec KernelSpec::linear() { return {KernelKind::linear, 0.0, 0, 0.0}; }

KernelSpec KernelSpec::gaussian(double sigma) {
  KernelSpec k{KernelKind::gaussian, sigma, 0, 0.0};
  k.validate();
  return k;
}

KernelSpec KernelSpec::polynomial(int degree, double coef0) {
  KernelSpec k{KernelKind::polynomial, 0.0, degree, coef0};
  k.validate();
  return k;
}

void KernelSpec::validate() const {
  if (kind == KernelKind::gaussian && !(sigma > 0.0)) {
    throw std::invalid_argument("gaussian kernel needs sigma > 0");
  }
  if (kind == KernelKind::polynomial && degree < 1) {
    throw std::invalid_argument("polynomial kernel needs degree >= 1");
  }
}

namespace {

double dot(std::span<const double> x, std::span<const double> y) {
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) acc += x[i] * y[i];
  return acc;
}

double int_pow(double base, int exponent) {
  double acc = 1.0;
  for (int i = 0; i < exponent; ++i) acc *= base;
  return acc;
}

}  // namespace

double kernel_eval(const KernelSpec& k, std::span<const double> x,
                   std::span<const double> y) {
  if (x.size() != y.size()) {
    throw std::invalid_argument("kernel arguments differ in dimension");
  }
  switch (k.kind) {
    case KernelKind::linear:
      return dot(x, y);
    case KernelKind::gaussian: {
      double sq = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - y[i];
        sq += d * d;
      }
      return std::exp(-sq / (2.0 * k.sigma * k.sigma));
    }
    case KernelKind::polynomial:
      return int_pow(dot(x, y) + k.coef0, k.degree);
  }
  throw std::logic_error("unreachable kernel kind");
}

TrainingSet::TrainingSet(std::vector<std::vector<double>> points,
                         std::vector<int> labels) {
  if (points.empty()) {
    throw std::invalid_argument("empty training set");
  }
  if (points.size() != labels.size()) {
    throw std::invalid_argument("points and labels differ in length");
  }
  dim_ = points.front().size();
  if (dim_ == 0) {
    throw std::invalid_argument("points must have dimension >= 1");
  }
  bool has_pos = false, has_neg = false;
  data_.reserve(points.size() * dim_);
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].size() != dim_) {
      throw std::invalid_argument("points differ in dimension");
    }
    if (labels[i] != 1 && labels[i] != -1) {
      throw std::invalid_argument("labels must be -1 or +1");
    }
    (labels[i] == 1 ? has_pos : has_neg) = true;
    data_.insert(data_.end(), points[i].begin(), points[i].end());
  }
  if (!has_pos || !has_neg) {
    throw std::invalid_argument("single-class training set: need both classes");
  }
  labels_ = std::move(labels);
  for (std::size_t i = 0; i < size(); ++i) {
    for (std::size_t j = i + 1; j < size(); ++j) {
      if (labels_[i] != labels_[j] &&
          std::equal(point(i).begin(), point(i).end(), point(j).begin())) {
        throw std::invalid_argument(
            "identical points with opposite labels (rows " + std::to_string(i) +
            ", " + std::to_string(j) + ")");
      }
    }
  }
}

std::vector<double> gram_matrix(const KernelSpec& k, const TrainingSet& ts) {
  k.validate();
  std::vector<double> out(ts.size() * ts.size());
  kernels::gram(k, ts.flat(), ts.dim(), out);
  return out;
}

namespace {

// Platt-style SMO on the kernelized dual with an error cache over all
// points. The threshold is carried through the iteration; the reported bias
// is recomputed from margin support vectors afterwards.
class SmoSolver {
 public:
  SmoSolver(const TrainingSet& ts, const std::vector<double>& gram,
            const SolveOptions& opt)
      : ts_(ts),
        gram_(gram),
        l_(ts.size()),
        c_(opt.c_bound),
        tol_(opt.kkt_tol),
        check_obj_(opt.check_monotone_objective),
        alpha_(ts.size(), 0.0),
        error_(ts.size()) {
    for (std::size_t i = 0; i < l_; ++i) {
      error_[i] = -static_cast<double>(ts_.label(i));
    }
  }

  std::pair<bool, int> run(int max_passes) {
    bool examine_all = true;
    int passes = 0;
    while (passes < max_passes) {
      int changed = 0;
      for (std::size_t i = 0; i < l_; ++i) {
        if (examine_all || is_free(alpha_[i])) changed += examine(i);
      }
      ++passes;
      if (examine_all) {
        if (changed == 0) return {true, passes};
        examine_all = false;
      } else if (changed == 0) {
        examine_all = true;
      }
    }
    return {false, passes};
  }

  const std::vector<double>& alphas() const { return alpha_; }

  double objective() const {
    double obj = 0.0;
    for (std::size_t i = 0; i < l_; ++i) {
      if (alpha_[i] == 0.0) continue;
      obj += alpha_[i];
      const double yi_ai = alpha_[i] * ts_.label(i);
      double acc = 0.0;
      for (std::size_t j = 0; j < l_; ++j) {
        if (alpha_[j] == 0.0) continue;
        acc += alpha_[j] * ts_.label(j) * gram_[i * l_ + j];
      }
      obj -= 0.5 * yi_ai * acc;
    }
    return obj;
  }

 private:
  bool is_free(double a) const { return a > kAlphaEps && a < c_ - kAlphaEps; }

  int examine(std::size_t i2) {
    const double y2 = ts_.label(i2);
    const double a2 = alpha_[i2];
    const double r2 = error_[i2] * y2;
    const bool violates = (r2 < -tol_ && a2 < c_ - kAlphaEps) ||
                          (r2 > tol_ && a2 > kAlphaEps);
    if (!violates) return 0;

    // Partner maximizing |E1 - E2| among free multipliers; lowest index on
    // ties keeps the solve path a function of input order.
    std::size_t best = l_;
    double best_gap = -1.0;
    for (std::size_t i = 0; i < l_; ++i) {
      if (i == i2 || !is_free(alpha_[i])) continue;
      const double gap = std::abs(error_[i] - error_[i2]);
      if (gap > best_gap) {
        best_gap = gap;
        best = i;
      }
    }
    if (best < l_ && take_step(best, i2)) return 1;
    for (std::size_t k = 1; k < l_; ++k) {
      const std::size_t i = (i2 + k) % l_;
      if (is_free(alpha_[i]) && take_step(i, i2)) return 1;
    }
    for (std::size_t k = 1; k < l_; ++k) {
      const std::size_t i = (i2 + k) % l_;
      if (take_step(i, i2)) return 1;
    }
    return 0;
  }

  bool take_step(std::size_t i1, std::size_t i2) {
    if (i1 == i2) return false;
    const double a1 = alpha_[i1];
    const double a2 = alpha_[i2];
    const double y1 = ts_.label(i1);
    const double y2 = ts_.label(i2);
    const double e1 = error_[i1];
    const double e2 = error_[i2];
    const double s = y1 * y2;

    double lo, hi;
    if (y1 != y2) {
      lo = std::max(0.0, a2 - a1);
      hi = std::min(c_, c_ + a2 - a1);
    } else {
      lo = std::max(0.0, a1 + a2 - c_);
      hi = std::min(c_, a1 + a2);
    }
    if (lo >= hi) return false;

    const double k11 = gram_[i1 * l_ + i1];
    const double k12 = gram_[i1 * l_ + i2];
    const double k22 = gram_[i2 * l_ + i2];
    const double eta = k11 + k22 - 2.0 * k12;

    double a2new;
    if (eta > 0.0) {
      a2new = std::clamp(a2 + y2 * (e1 - e2) / eta, lo, hi);
    } else {
      // Flat direction: pick the better segment end by evaluating the full
      // objective there (rare, so the O(l^2) cost does not matter).
      const double obj_lo = objective_with(i1, i2, s, lo);
      const double obj_hi = objective_with(i1, i2, s, hi);
      if (obj_lo > obj_hi + 1e-12) {
        a2new = lo;
      } else if (obj_hi > obj_lo + 1e-12) {
        a2new = hi;
      } else {
        return false;
      }
    }
    if (std::abs(a2new - a2) < 1e-14 * (a2new + a2 + 1.0)) return false;

    double a1new = std::clamp(a1 + s * (a2 - a2new), 0.0, c_);

    const double da1 = a1new - a1;
    const double da2 = a2new - a2;
    const double b1 = b_ - e1 - y1 * da1 * k11 - y2 * da2 * k12;
    const double b2 = b_ - e2 - y1 * da1 * k12 - y2 * da2 * k22;
    double bnew;
    if (a1new > kAlphaEps && a1new < c_ - kAlphaEps) {
      bnew = b1;
    } else if (a2new > kAlphaEps && a2new < c_ - kAlphaEps) {
      bnew = b2;
    } else {
      bnew = 0.5 * (b1 + b2);
    }

    const double db = bnew - b_;
    for (std::size_t i = 0; i < l_; ++i) {
      error_[i] +=
          y1 * da1 * gram_[i1 * l_ + i] + y2 * da2 * gram_[i2 * l_ + i] + db;
    }
    alpha_[i1] = a1new;
    alpha_[i2] = a2new;
    b_ = bnew;

    if (check_obj_) {
      const double obj = objective();
      if (obj < last_obj_ - 1e-9 * std::max(1.0, std::abs(last_obj_))) {
        throw std::logic_error("dual objective decreased across SMO update");
      }
      last_obj_ = obj;
    }
    return true;
  }

  double objective_with(std::size_t i1, std::size_t i2, double s,
                        double a2_value) {
    const double saved1 = alpha_[i1];
    const double saved2 = alpha_[i2];
    alpha_[i2] = a2_value;
    alpha_[i1] = std::clamp(saved1 + s * (saved2 - a2_value), 0.0, c_);
    const double obj = objective();
    alpha_[i1] = saved1;
    alpha_[i2] = saved2;
    return obj;
  }

  const TrainingSet& ts_;
  const std::vector<double>& gram_;
  std::size_t l_;
  double c_;
  double tol_;
  bool check_obj_;
  std::vector<double> alpha_;
  std::vector<double> error_;
  double b_ = 0.0;
  double last_obj_ = 0.0;
};

double bias_free_value(const std::vector<double>& alphas,
                       const TrainingSet& ts,
                       const std::vector<double>& gram, std::size_t i) {
  double acc = 0.0;
  for (std::size_t j = 0; j < ts.size(); ++j) {
    if (alphas[j] <= kAlphaEps) continue;
    acc += alphas[j] * ts.label(j) * gram[j * ts.size() + i];
  }
  return acc;
}

double bias_from(const std::vector<double>& alphas, const TrainingSet& ts,
                 const std::vector<double>& gram, double c_bound) {
  double acc = 0.0;
  std::size_t margin_count = 0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (alphas[i] > kAlphaEps && alphas[i] < c_bound - kAlphaEps) {
      acc += ts.label(i) - bias_free_value(alphas, ts, gram, i);
      ++margin_count;
    }
  }
  if (margin_count > 0) return acc / static_cast<double>(margin_count);

  // Every multiplier is on a bound: center the threshold between the
  // innermost bias-free values of the two classes.
  double max_neg = -std::numeric_limits<double>::infinity();
  double min_pos = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const double f0 = bias_free_value(alphas, ts, gram, i);
    if (ts.label(i) == -1) {
      max_neg = std::max(max_neg, f0);
    } else {
      min_pos = std::min(min_pos, f0);
    }
  }
  return -0.5 * (max_neg + min_pos);
}

}  // namespace

DualSolution solve_dual(const TrainingSet& ts, const KernelSpec& k,
                        const SolveOptions& opt) {
  k.validate();
  if (!(opt.c_bound > 0.0)) {
    throw std::invalid_argument("c_bound must be > 0");
  }
  if (!(opt.kkt_tol > 0.0)) {
    throw std::invalid_argument("kkt_tol must be > 0");
  }
  if (opt.max_passes < 1) {
    throw std::invalid_argument("max_passes must be >= 1");
  }

  const std::vector<double> gram = gram_matrix(k, ts);
  SmoSolver solver(ts, gram, opt);
  const auto [converged, passes] = solver.run(opt.max_passes);

  DualSolution sol;
  sol.alphas = solver.alphas();
  sol.kernel = k;
  sol.c_bound = opt.c_bound;
  sol.iterations = passes;
  sol.converged = converged;
  sol.objective_value = solver.objective();
  sol.bias = bias_from(sol.alphas, ts, gram, opt.c_bound);
  return sol;
}

double compute_bias(const DualSolution& sol, const TrainingSet& ts) {
  const std::vector<double> gram = gram_matrix(sol.kernel, ts);
  return bias_from(sol.alphas, ts, gram, sol.c_bound);
}

double linear_margin(const DualSolution& sol, const TrainingSet& ts) {
  if (sol.kernel.kind != KernelKind::linear) {
    throw std::invalid_argument(
        "margin as 2/|w| needs the linear kernel; w has no finite-dimensional "
        "form otherwise");
  }
  std::vector<double> w(ts.dim(), 0.0);
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (sol.alphas[i] <= kAlphaEps) continue;
    const auto x = ts.point(i);
    for (std::size_t f = 0; f < ts.dim(); ++f) {
      w[f] += sol.alphas[i] * ts.label(i) * x[f];
    }
  }
  double norm_sq = 0.0;
  for (double v : w) norm_sq += v * v;
  return 2.0 / std::sqrt(norm_sq);
}

Model make_model(const DualSolution& sol, const TrainingSet& ts,
                 std::optional<Normalizer> normalizer) {
  Model m;
  m.bias = sol.bias;
  m.kernel = sol.kernel;
  m.normalizer = std::move(normalizer);
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (sol.alphas[i] > kAlphaEps) {
      const auto x = ts.point(i);
      m.support_points.emplace_back(x.begin(), x.end());
      m.support_labels.push_back(ts.label(i));
      m.support_alphas.push_back(sol.alphas[i]);
    }
  }
  return m;
}

double decision_value(const Model& m, std::span<const double> x) {
  std::vector<double> probe(x.begin(), x.end());
  if (m.normalizer) {
    m.normalizer->apply_in_place(probe);
  }
  if (probe.size() != m.dim()) {
    throw std::invalid_argument("probe dimension does not match model");
  }
  double acc = m.bias;
  for (std::size_t i = 0; i < m.support_points.size(); ++i) {
    acc += m.support_alphas[i] * m.support_labels[i] *
           kernel_eval(m.kernel, m.support_points[i], probe);
  }
  return acc;
}

int sign_label(double decision) { return decision > 0.0 ? 1 : -1; }

int classify(const Model& m, std::span<const double> x) {
  return sign_label(decision_value(m, x));
}

}  // namespace hrvsvm::svm
