#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hrvsvm/series.hpp"

namespace hrvsvm::hrv {

// 5-minute windows for SDANN segment means.
inline constexpr double kSdannSegmentMs = 300000.0;

// Time-domain HRV bundle. Dispersion fields use the sample (N-1) standard
// deviation. mean_hr averages the per-interval instantaneous rate 60000/RR
// rather than inverting mean_rr. sdann is absent when the series spans fewer
// than two complete 5-minute segments.
struct HrvMetrics {
  double mean_hr = 0.0;  // bpm
  double mean_rr = 0.0;  // ms
  double sdev_hr = 0.0;  // bpm
  double sdev_nn = 0.0;  // ms
  double rmssd = 0.0;    // ms
  std::optional<double> sdann;  // ms
  long long nnx_count = 0;
  double pnnx = 0.0;  // nnx_count / (N-1)
  double x_threshold_ms = 50.0;
};

// intervals[n] = beat_times[n+1] - beat_times[n]; the first beat becomes the
// start offset. Requires at least two strictly increasing beat times.
RrSeries ibi_from_beats(const std::vector<double>& beat_times_ms);

// intervals[n] = 60000 / hr_bpm[n]; the first timestamp becomes the start
// offset. Requires a nonempty series.
RrSeries ibi_from_hr(const HrSeries& hr);

// hr_bpm[n] = 60000 / intervals[n] stamped at the interval's cumulative time.
HrSeries hr_from_ibi(const RrSeries& rr);

// Drops intervals deviating from the median of their up-to-5-interval
// centered window by more than tolerance_fraction times that median. Passes
// repeat until no interval is dropped, so the filter is idempotent. The
// result keeps the original start offset and is meant for statistics only;
// no gap bookkeeping is attempted.
RrSeries filter_ectopic(const RrSeries& rr, double tolerance_fraction = 0.2);

// Requires at least two intervals. sdann_segment_ms is the averaging window
// for SDANN; the 5-minute default is the reporting convention.
HrvMetrics compute_metrics(const RrSeries& rr, double x_threshold_ms = 50.0,
                           double sdann_segment_ms = kSdannSegmentMs);

// Flat key=value lines: mean_hr, mean_rr, sdev_hr, sdev_nn, rmssd, sdann
// (omitted when absent), nn50, pnn50.
std::string metrics_to_text(const HrvMetrics& m);

}  // namespace hrvsvm::hrv
