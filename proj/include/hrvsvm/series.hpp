#pragma once

#include <cstddef>
#include <vector>

namespace hrvsvm {

// Ordered inter-beat (RR/NN) intervals in milliseconds. The cumulative time
// of interval k is start_offset_ms plus the sum of intervals 0..k, i.e. the
// timestamp of the beat that closes the interval.
struct RrSeries {
  std::vector<double> intervals;
  double start_offset_ms = 0.0;

  std::size_t size() const noexcept { return intervals.size(); }
  bool empty() const noexcept { return intervals.empty(); }

  // Sum of all intervals, independent of the start offset.
  double duration_ms() const noexcept {
    double total = 0.0;
    for (double v : intervals) total += v;
    return total;
  }

  bool operator==(const RrSeries&) const = default;
};

struct HrSample {
  double t_ms = 0.0;
  double hr_bpm = 0.0;

  bool operator==(const HrSample&) const = default;
};

// Heart-rate samples with strictly increasing timestamps and positive rates.
struct HrSeries {
  std::vector<HrSample> samples;

  std::size_t size() const noexcept { return samples.size(); }
  bool empty() const noexcept { return samples.empty(); }

  bool operator==(const HrSeries&) const = default;
};

}  // namespace hrvsvm
