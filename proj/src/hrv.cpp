#include "hrvsvm/hrv.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hrvsvm/kernels.hpp"
#include "text_util.hpp"

namespace hrvsvm::hrv {

RrSeries ibi_from_beats(const std::vector<double>& beat_times_ms) {
  if (beat_times_ms.size() < 2) {
    throw std::invalid_argument("need at least 2 beat times");
  }
  RrSeries rr;
  rr.start_offset_ms = beat_times_ms.front();
  rr.intervals.reserve(beat_times_ms.size() - 1);
  for (std::size_t n = 1; n < beat_times_ms.size(); ++n) {
    const double dt = beat_times_ms[n] - beat_times_ms[n - 1];
    if (dt <= 0.0) {
      throw std::invalid_argument("beat times must be strictly increasing (beat " +
                                  std::to_string(n + 1) + ")");
    }
    rr.intervals.push_back(dt);
  }
  return rr;
}

RrSeries ibi_from_hr(const HrSeries& hr) {
  if (hr.empty()) {
    throw std::invalid_argument("empty heart-rate series");
  }
  RrSeries rr;
  rr.start_offset_ms = hr.samples.front().t_ms;
  rr.intervals.resize(hr.size());
  std::vector<double> bpm(hr.size());
  for (std::size_t i = 0; i < hr.size(); ++i) {
    if (hr.samples[i].hr_bpm <= 0.0) {
      throw std::invalid_argument("hr_bpm must be > 0");
    }
    bpm[i] = hr.samples[i].hr_bpm;
  }
  kernels::reciprocal_scale(bpm, 60000.0, rr.intervals);
  return rr;
}

HrSeries hr_from_ibi(const RrSeries& rr) {
  if (rr.empty()) {
    throw std::invalid_argument("empty RR series");
  }
  HrSeries hr;
  hr.samples.resize(rr.size());
  double t = rr.start_offset_ms;
  for (std::size_t n = 0; n < rr.size(); ++n) {
    t += rr.intervals[n];
    hr.samples[n].t_ms = t;
    hr.samples[n].hr_bpm = 60000.0 / rr.intervals[n];
  }
  return hr;
}

namespace {

double window_median(const std::vector<double>& v, std::size_t i) {
  const std::size_t lo = i >= 2 ? i - 2 : 0;
  const std::size_t hi = std::min(v.size(), i + 3);
  double w[5] = {};
  std::size_t n = 0;
  for (std::size_t j = lo; j < hi; ++j) w[n++] = v[j];
  std::sort(w, w + n);
  return (n % 2 == 1) ? w[n / 2] : 0.5 * (w[n / 2 - 1] + w[n / 2]);
}

}  // namespace

RrSeries filter_ectopic(const RrSeries& rr, double tolerance_fraction) {
  if (!(tolerance_fraction > 0.0 && tolerance_fraction < 1.0)) {
    throw std::invalid_argument("tolerance_fraction must be in (0, 1)");
  }
  RrSeries out = rr;
  // Repeat single passes until stable so the filter is idempotent even when
  // a removal shifts a neighbour's window median.
  bool removed = true;
  while (removed && !out.intervals.empty()) {
    removed = false;
    std::vector<double> kept;
    kept.reserve(out.intervals.size());
    for (std::size_t i = 0; i < out.intervals.size(); ++i) {
      const double med = window_median(out.intervals, i);
      if (std::abs(out.intervals[i] - med) <= tolerance_fraction * med) {
        kept.push_back(out.intervals[i]);
      } else {
        removed = true;
      }
    }
    out.intervals = std::move(kept);
  }
  return out;
}

namespace {

double sample_std_small(const std::vector<double>& v) {
  const std::size_t n = v.size();
  const double shift = v.front();
  double acc = 0.0;
  for (double x : v) acc += x - shift;
  const double mean = shift + acc / static_cast<double>(n);
  double ssd = 0.0;
  for (double x : v) {
    const double d = x - mean;
    ssd += d * d;
  }
  return std::sqrt(ssd / static_cast<double>(n - 1));
}

// Segment s covers relative time [s*300000, (s+1)*300000); an interval
// belongs to the segment its start time falls in. A segment counts only when
// the series' total duration covers it completely and it holds at least one
// interval.
std::optional<double> sdann_of(const std::vector<double>& intervals,
                               double segment_ms) {
  const double total = kernels::sum(intervals);
  std::vector<double> means;
  std::size_t begin = 0;
  double rel_start = 0.0;
  std::size_t seg = 0;
  for (std::size_t i = 0; i <= intervals.size(); ++i) {
    const std::size_t seg_of_i =
        (i == intervals.size())
            ? seg + 1
            : static_cast<std::size_t>(rel_start / segment_ms);
    if (seg_of_i != seg) {
      const bool complete =
          (static_cast<double>(seg + 1) * segment_ms) <= total;
      if (complete && i > begin) {
        const std::span<const double> sub(intervals.data() + begin, i - begin);
        const double shift = sub.front();
        means.push_back(shift + kernels::sum_dev(sub, shift) /
                                    static_cast<double>(sub.size()));
      }
      begin = i;
      seg = seg_of_i;
    }
    if (i < intervals.size()) rel_start += intervals[i];
  }
  if (means.size() < 2) return std::nullopt;
  return sample_std_small(means);
}

}  // namespace

HrvMetrics compute_metrics(const RrSeries& rr, double x_threshold_ms,
                           double sdann_segment_ms) {
  const std::size_t n = rr.size();
  if (n < 2) {
    throw std::invalid_argument("need at least 2 intervals to compute metrics");
  }
  if (!(sdann_segment_ms > 0.0)) {
    throw std::invalid_argument("sdann segment length must be > 0");
  }
  const std::vector<double>& v = rr.intervals;
  HrvMetrics m;
  m.x_threshold_ms = x_threshold_ms;

  const double shift = v.front();
  m.mean_rr = shift + kernels::sum_dev(v, shift) / static_cast<double>(n);
  m.sdev_nn =
      std::sqrt(kernels::sum_sq_dev(v, m.mean_rr) / static_cast<double>(n - 1));

  std::vector<double> hr(n);
  kernels::reciprocal_scale(v, 60000.0, hr);
  const double hr_shift = hr.front();
  m.mean_hr = hr_shift + kernels::sum_dev(hr, hr_shift) / static_cast<double>(n);
  m.sdev_hr =
      std::sqrt(kernels::sum_sq_dev(hr, m.mean_hr) / static_cast<double>(n - 1));

  m.rmssd = std::sqrt(kernels::sum_sq_succ_diff(v) / static_cast<double>(n - 1));
  m.nnx_count = kernels::count_abs_succ_diff_gt(v, x_threshold_ms);
  m.pnnx = static_cast<double>(m.nnx_count) / static_cast<double>(n - 1);
  m.sdann = sdann_of(v, sdann_segment_ms);
  return m;
}

std::string metrics_to_text(const HrvMetrics& m) {
  using detail::format_g17;
  std::string out;
  out += "mean_hr=" + format_g17(m.mean_hr) + "\n";
  out += "mean_rr=" + format_g17(m.mean_rr) + "\n";
  out += "sdev_hr=" + format_g17(m.sdev_hr) + "\n";
  out += "sdev_nn=" + format_g17(m.sdev_nn) + "\n";
  out += "rmssd=" + format_g17(m.rmssd) + "\n";
  if (m.sdann) {
    out += "sdann=" + format_g17(*m.sdann) + "\n";
  }
  out += "nn50=" + std::to_string(m.nnx_count) + "\n";
  out += "pnn50=" + format_g17(m.pnnx) + "\n";
  return out;
}

}  // namespace hrvsvm::hrv
