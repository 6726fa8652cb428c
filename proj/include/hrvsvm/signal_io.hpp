#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hrvsvm/errors.hpp"
#include "hrvsvm/series.hpp"

namespace hrvsvm::io {

enum class SignalKind { rr, hr };

std::string to_string(SignalKind kind);
SignalKind signal_kind_from(const std::string& name);  // throws std::invalid_argument

// One recording session: the signal file plus the metadata captured before
// the activity. Optional cells that were empty in the manifest stay absent;
// absent is not zero.
struct SessionRecord {
  std::string session_id;
  std::string signal_path;
  SignalKind signal_kind = SignalKind::rr;
  int stress_level = 1;  // 1..10
  int flu_level = 1;     // 1..10
  std::optional<double> sleep_hours;
  std::optional<double> temperature_c;
  std::optional<int> systole;
  std::optional<int> diastole;

  bool operator==(const SessionRecord&) const = default;
};

// One interval in ms per line; blank lines and lines starting with '#' are
// ignored. Throws ParseError on non-numeric tokens, values <= 0, or an empty
// payload.
RrSeries parse_rr_file(const std::string& text);

// CSV with header "t_ms,hr_bpm". Timestamps must be strictly increasing and
// rates positive.
HrSeries parse_hr_file(const std::string& text);

// CSV with header
// "session_id,signal_path,signal_kind,stress_level,flu_level,sleep_hours,temperature_c,systole,diastole".
// The last four columns may be empty. Duplicate session ids are rejected.
std::vector<SessionRecord> parse_session_manifest(const std::string& text);

std::string rr_to_text(const RrSeries& rr);
std::string hr_to_text(const HrSeries& hr);
std::string manifest_to_text(const std::vector<SessionRecord>& sessions);

std::string read_file(const std::string& path);  // throws std::runtime_error
void write_file(const std::string& path, const std::string& content);

}  // namespace hrvsvm::io
