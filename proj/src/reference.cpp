#include "hrvsvm/reference.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hrvsvm::ref {

double sum(std::span<const double> v) {
  double acc = 0.0;
  for (double x : v) acc += x;
  return acc;
}

double sum_sq_dev(std::span<const double> v, double center) {
  double acc = 0.0;
  for (double x : v) {
    const double d = x - center;
    acc += d * d;
  }
  return acc;
}

double sum_sq_succ_diff(std::span<const double> v) {
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < v.size(); ++i) {
    const double d = v[i + 1] - v[i];
    acc += d * d;
  }
  return acc;
}

long long count_abs_succ_diff_gt(std::span<const double> v, double threshold) {
  long long count = 0;
  for (std::size_t i = 0; i + 1 < v.size(); ++i) {
    if (std::abs(v[i + 1] - v[i]) > threshold) ++count;
  }
  return count;
}

void reciprocal_scale(std::span<const double> in, double scale,
                      std::span<double> out) {
  for (std::size_t i = 0; i < in.size(); ++i) out[i] = scale / in[i];
}

double kernel_eval(const svm::KernelSpec& k, std::span<const double> x,
                   std::span<const double> y) {
  if (x.size() != y.size()) {
    throw std::invalid_argument("dimension mismatch");
  }
  double dot = 0.0;
  double sq = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    dot += x[i] * y[i];
    const double d = x[i] - y[i];
    sq += d * d;
  }
  switch (k.kind) {
    case svm::KernelKind::linear:
      return dot;
    case svm::KernelKind::gaussian:
      return std::exp(-sq / (2.0 * k.sigma * k.sigma));
    case svm::KernelKind::polynomial:
      return std::pow(dot + k.coef0, k.degree);
  }
  throw std::logic_error("unreachable");
}

std::vector<double> gram(const svm::KernelSpec& k,
                         std::span<const double> points, std::size_t dim) {
  const std::size_t l = points.size() / dim;
  std::vector<double> out(l * l);
  for (std::size_t i = 0; i < l; ++i) {
    for (std::size_t j = 0; j < l; ++j) {
      out[i * l + j] = ref::kernel_eval(k, points.subspan(i * dim, dim),
                                        points.subspan(j * dim, dim));
    }
  }
  return out;
}

double decision_value(const svm::Model& m, std::span<const double> x) {
  std::vector<double> probe(x.begin(), x.end());
  if (m.normalizer) {
    for (std::size_t f = 0; f < probe.size(); ++f) {
      probe[f] = (probe[f] - m.normalizer->mean[f]) / m.normalizer->stdev[f];
    }
  }
  double acc = m.bias;
  for (std::size_t i = 0; i < m.support_points.size(); ++i) {
    acc += m.support_alphas[i] * m.support_labels[i] *
           ref::kernel_eval(m.kernel, m.support_points[i], probe);
  }
  return acc;
}

namespace {

double naive_mean(const std::vector<double>& v) {
  double acc = 0.0;
  for (double x : v) acc += x;
  return acc / static_cast<double>(v.size());
}

double naive_sample_std(const std::vector<double>& v) {
  const double mean = naive_mean(v);
  double ssd = 0.0;
  for (double x : v) {
    const double d = x - mean;
    ssd += d * d;
  }
  return std::sqrt(ssd / static_cast<double>(v.size() - 1));
}

}  // namespace

hrv::HrvMetrics compute_metrics(const RrSeries& rr, double x_threshold_ms,
                                double sdann_segment_ms) {
  if (rr.size() < 2) {
    throw std::invalid_argument("need at least 2 intervals");
  }
  const std::vector<double>& v = rr.intervals;
  const std::size_t n = v.size();

  hrv::HrvMetrics m;
  m.x_threshold_ms = x_threshold_ms;
  m.mean_rr = naive_mean(v);
  m.sdev_nn = naive_sample_std(v);

  std::vector<double> hr(n);
  for (std::size_t i = 0; i < n; ++i) hr[i] = 60000.0 / v[i];
  m.mean_hr = naive_mean(hr);
  m.sdev_hr = naive_sample_std(hr);

  double ssd = 0.0;
  long long nnx = 0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double d = v[i + 1] - v[i];
    ssd += d * d;
    if (std::abs(d) > x_threshold_ms) ++nnx;
  }
  m.rmssd = std::sqrt(ssd / static_cast<double>(n - 1));
  m.nnx_count = nnx;
  m.pnnx = static_cast<double>(nnx) / static_cast<double>(n - 1);

  // Brute-force segment averaging: an interval belongs to the 5-minute
  // window its relative start time falls in; only fully covered windows with
  // at least one interval contribute a mean.
  double total = 0.0;
  for (double x : v) total += x;
  std::vector<double> seg_sum;
  std::vector<std::size_t> seg_count;
  double rel_start = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto seg = static_cast<std::size_t>(rel_start / sdann_segment_ms);
    if (seg >= seg_sum.size()) {
      seg_sum.resize(seg + 1, 0.0);
      seg_count.resize(seg + 1, 0);
    }
    seg_sum[seg] += v[i];
    seg_count[seg] += 1;
    rel_start += v[i];
  }
  std::vector<double> means;
  for (std::size_t s = 0; s < seg_sum.size(); ++s) {
    const bool complete =
        (static_cast<double>(s + 1) * sdann_segment_ms) <= total;
    if (complete && seg_count[s] > 0) {
      means.push_back(seg_sum[s] / static_cast<double>(seg_count[s]));
    }
  }
  if (means.size() >= 2) {
    m.sdann = naive_sample_std(means);
  }
  return m;
}

double dual_objective(const svm::TrainingSet& ts, const svm::KernelSpec& k,
                      std::span<const double> alphas) {
  const std::size_t l = ts.size();
  double obj = 0.0;
  for (std::size_t i = 0; i < l; ++i) obj += alphas[i];
  for (std::size_t i = 0; i < l; ++i) {
    for (std::size_t j = 0; j < l; ++j) {
      obj -= 0.5 * alphas[i] * alphas[j] * ts.label(i) * ts.label(j) *
             ref::kernel_eval(k, ts.point(i), ts.point(j));
    }
  }
  return obj;
}

std::vector<double> solve_dual_search(const svm::TrainingSet& ts,
                                      const svm::KernelSpec& k,
                                      double c_bound) {
  const std::size_t l = ts.size();
  std::vector<double> alpha(l, 0.0);

  std::vector<double> q(l * l);
  for (std::size_t i = 0; i < l; ++i) {
    for (std::size_t j = 0; j < l; ++j) {
      q[i * l + j] = ts.label(i) * ts.label(j) *
                     ref::kernel_eval(k, ts.point(i), ts.point(j));
    }
  }
  auto objective = [&](const std::vector<double>& a) {
    double obj = 0.0;
    for (std::size_t i = 0; i < l; ++i) obj += a[i];
    for (std::size_t i = 0; i < l; ++i) {
      for (std::size_t j = 0; j < l; ++j) {
        obj -= 0.5 * a[i] * a[j] * q[i * l + j];
      }
    }
    return obj;
  };
  double best_obj = objective(alpha);

  // Moving along a pair (i, j) by step t: alpha_i += y_i t, alpha_j -= y_j t
  // keeps sum alpha_i y_i fixed. Box bounds give the feasible t segment,
  // which a shrinking grid searches; the objective is concave along it.
  constexpr int kGridPoints = 48;
  constexpr int kRefineRounds = 6;
  constexpr int kMaxSweeps = 400;

  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool improved = false;
    for (std::size_t i = 0; i < l; ++i) {
      for (std::size_t j = i + 1; j < l; ++j) {
        const double yi = ts.label(i);
        const double yj = ts.label(j);
        double lo_i, hi_i, lo_j, hi_j;
        if (yi > 0) {
          lo_i = -alpha[i];
          hi_i = c_bound - alpha[i];
        } else {
          lo_i = alpha[i] - c_bound;
          hi_i = alpha[i];
        }
        if (yj > 0) {
          lo_j = alpha[j] - c_bound;
          hi_j = alpha[j];
        } else {
          lo_j = -alpha[j];
          hi_j = c_bound - alpha[j];
        }
        double lo = std::max(lo_i, lo_j);
        double hi = std::min(hi_i, hi_j);
        if (hi - lo < 1e-15) continue;

        const double base_i = alpha[i];
        const double base_j = alpha[j];
        auto objective_at = [&](double t) {
          alpha[i] = std::clamp(base_i + yi * t, 0.0, c_bound);
          alpha[j] = std::clamp(base_j - yj * t, 0.0, c_bound);
          return objective(alpha);
        };

        double best_t = 0.0;
        double best_local = best_obj;
        for (int round = 0; round < kRefineRounds; ++round) {
          const double step = (hi - lo) / (kGridPoints - 1);
          for (int g = 0; g < kGridPoints; ++g) {
            const double t = lo + step * g;
            const double obj = objective_at(t);
            if (obj > best_local) {
              best_local = obj;
              best_t = t;
            }
          }
          lo = std::max(lo, best_t - step);
          hi = std::min(hi, best_t + step);
        }
        if (best_local > best_obj + 1e-13) {
          alpha[i] = std::clamp(base_i + yi * best_t, 0.0, c_bound);
          alpha[j] = std::clamp(base_j - yj * best_t, 0.0, c_bound);
          best_obj = best_local;
          improved = true;
        } else {
          alpha[i] = base_i;
          alpha[j] = base_j;
        }
      }
    }
    if (!improved) break;
  }
  return alpha;
}

double determinant(const std::vector<double>& matrix, std::size_t n) {
  if (n == 0) return 1.0;
  if (n == 1) return matrix[0];
  double det = 0.0;
  double sign = 1.0;
  for (std::size_t col = 0; col < n; ++col) {
    std::vector<double> minor;
    minor.reserve((n - 1) * (n - 1));
    for (std::size_t r = 1; r < n; ++r) {
      for (std::size_t c = 0; c < n; ++c) {
        if (c == col) continue;
        minor.push_back(matrix[r * n + c]);
      }
    }
    det += sign * matrix[col] * determinant(minor, n - 1);
    sign = -sign;
  }
  return det;
}

}  // namespace hrvsvm::ref
