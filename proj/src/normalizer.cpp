#include "hrvsvm/normalizer.hpp"

#include <cmath>
#include <stdexcept>

namespace hrvsvm {

Normalizer Normalizer::fit(const std::vector<std::vector<double>>& points) {
  if (points.empty()) {
    throw std::invalid_argument("cannot fit normalizer on empty feature set");
  }
  const std::size_t d = points.front().size();
  Normalizer nz;
  nz.mean.assign(d, 0.0);
  nz.stdev.assign(d, 0.0);
  const double n = static_cast<double>(points.size());
  for (std::size_t f = 0; f < d; ++f) {
    const double shift = points.front()[f];
    double acc = 0.0;
    for (const auto& p : points) acc += p[f] - shift;
    nz.mean[f] = shift + acc / n;
    double ssd = 0.0;
    for (const auto& p : points) {
      const double dev = p[f] - nz.mean[f];
      ssd += dev * dev;
    }
    nz.stdev[f] = points.size() > 1 ? std::sqrt(ssd / (n - 1.0)) : 0.0;
    if (!(nz.stdev[f] > 0.0)) {
      throw std::invalid_argument("feature " + std::to_string(f) +
                                  " is constant; cannot normalize");
    }
  }
  return nz;
}

std::vector<double> Normalizer::apply(const std::vector<double>& x) const {
  std::vector<double> z = x;
  apply_in_place(z);
  return z;
}

void Normalizer::apply_in_place(std::vector<double>& x) const {
  if (x.size() != mean.size()) {
    throw std::invalid_argument("feature dimension mismatch in normalizer");
  }
  for (std::size_t f = 0; f < x.size(); ++f) {
    x[f] = (x[f] - mean[f]) / stdev[f];
  }
}

}  // namespace hrvsvm
