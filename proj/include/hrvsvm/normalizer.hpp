#pragma once

#include <cstddef>
#include <vector>

namespace hrvsvm {

// Per-feature z-score scaler fitted on training features. Construction
// rejects constant features (std of zero).
struct Normalizer {
  std::vector<double> mean;
  std::vector<double> stdev;

  static Normalizer fit(const std::vector<std::vector<double>>& points);

  std::vector<double> apply(const std::vector<double>& x) const;
  void apply_in_place(std::vector<double>& x) const;

  std::size_t dim() const noexcept { return mean.size(); }

  bool operator==(const Normalizer&) const = default;
};

}  // namespace hrvsvm
