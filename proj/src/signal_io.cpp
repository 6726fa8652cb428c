#include "hrvsvm/signal_io.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "text_util.hpp"

namespace hrvsvm::io {

using detail::format_g17;
using detail::parse_double;
using detail::parse_int;
using detail::split_csv;
using detail::split_lines;
using detail::trim;

std::string to_string(SignalKind kind) {
  return kind == SignalKind::rr ? "rr" : "hr";
}

SignalKind signal_kind_from(const std::string& name) {
  if (name == "rr") return SignalKind::rr;
  if (name == "hr") return SignalKind::hr;
  throw std::invalid_argument("unknown signal kind: " + name);
}

RrSeries parse_rr_file(const std::string& text) {
  const auto lines = split_lines(text);
  RrSeries rr;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string_view line = trim(lines[i]);
    if (line.empty() || line.front() == '#') continue;
    const auto value = parse_double(line);
    if (!value) {
      throw ParseError(i + 1, "expected one interval in ms, got \"" +
                                  std::string(line) + "\"");
    }
    if (*value <= 0.0) {
      throw ParseError(i + 1, "interval must be > 0 ms, got " + format_g17(*value));
    }
    rr.intervals.push_back(*value);
  }
  if (rr.intervals.empty()) {
    throw ParseError(lines.size() + 1, "empty series: no intervals in document");
  }
  return rr;
}

namespace {
constexpr const char* kHrHeader = "t_ms,hr_bpm";
constexpr const char* kManifestHeader =
    "session_id,signal_path,signal_kind,stress_level,flu_level,sleep_hours,"
    "temperature_c,systole,diastole";
}  // namespace

HrSeries parse_hr_file(const std::string& text) {
  const auto lines = split_lines(text);
  if (lines.empty() || trim(lines[0]) != kHrHeader) {
    throw ParseError(1, std::string("expected header \"") + kHrHeader + "\"");
  }
  HrSeries hr;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::string_view line = trim(lines[i]);
    if (line.empty()) continue;
    const auto fields = split_csv(line);
    if (fields.size() != 2) {
      throw ParseError(i + 1, "expected two columns t_ms,hr_bpm");
    }
    const auto t = parse_double(fields[0]);
    const auto bpm = parse_double(fields[1]);
    if (!t || !bpm) {
      throw ParseError(i + 1, "non-numeric value in row \"" + std::string(line) + "\"");
    }
    if (*bpm <= 0.0) {
      throw ParseError(i + 1, "hr_bpm must be > 0, got " + format_g17(*bpm));
    }
    if (!hr.samples.empty() && *t <= hr.samples.back().t_ms) {
      throw ParseError(i + 1, "t_ms must be strictly increasing");
    }
    hr.samples.push_back({*t, *bpm});
  }
  return hr;
}

namespace {

std::optional<double> optional_real(std::string_view field, std::size_t line,
                                    const char* name) {
  if (trim(field).empty()) return std::nullopt;
  const auto value = detail::parse_double(field);
  if (!value) {
    throw ParseError(line, std::string("non-numeric ") + name);
  }
  return value;
}

std::optional<int> optional_integer(std::string_view field, std::size_t line,
                                    const char* name) {
  if (trim(field).empty()) return std::nullopt;
  const auto value = detail::parse_int(field);
  if (!value) {
    throw ParseError(line, std::string("non-integer ") + name);
  }
  return static_cast<int>(*value);
}

int level_in_range(std::string_view field, std::size_t line, const char* name) {
  const auto value = detail::parse_int(field);
  if (!value) {
    throw ParseError(line, std::string("non-integer ") + name);
  }
  if (*value < 1 || *value > 10) {
    throw ParseError(line, std::string(name) + " must be in 1..10, got " +
                               std::to_string(*value));
  }
  return static_cast<int>(*value);
}

}  // namespace

std::vector<SessionRecord> parse_session_manifest(const std::string& text) {
  const auto lines = split_lines(text);
  if (lines.empty() || trim(lines[0]) != kManifestHeader) {
    throw ParseError(1, std::string("expected header \"") + kManifestHeader + "\"");
  }
  std::vector<SessionRecord> sessions;
  std::set<std::string> seen_ids;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::string_view line = trim(lines[i]);
    if (line.empty()) continue;
    const std::size_t line_no = i + 1;
    const auto fields = split_csv(line);
    if (fields.size() != 9) {
      throw ParseError(line_no, "expected 9 columns, got " +
                                    std::to_string(fields.size()));
    }
    SessionRecord s;
    s.session_id = std::string(trim(fields[0]));
    if (s.session_id.empty()) {
      throw ParseError(line_no, "empty session_id");
    }
    if (!seen_ids.insert(s.session_id).second) {
      throw ParseError(line_no, "duplicate session_id \"" + s.session_id + "\"");
    }
    s.signal_path = std::string(trim(fields[1]));
    if (s.signal_path.empty()) {
      throw ParseError(line_no, "empty signal_path");
    }
    try {
      s.signal_kind = signal_kind_from(std::string(trim(fields[2])));
    } catch (const std::invalid_argument& e) {
      throw ParseError(line_no, e.what());
    }
    s.stress_level = level_in_range(fields[3], line_no, "stress_level");
    s.flu_level = level_in_range(fields[4], line_no, "flu_level");
    s.sleep_hours = optional_real(fields[5], line_no, "sleep_hours");
    if (s.sleep_hours && *s.sleep_hours < 0.0) {
      throw ParseError(line_no, "sleep_hours must be >= 0");
    }
    s.temperature_c = optional_real(fields[6], line_no, "temperature_c");
    s.systole = optional_integer(fields[7], line_no, "systole");
    s.diastole = optional_integer(fields[8], line_no, "diastole");
    sessions.push_back(std::move(s));
  }
  return sessions;
}

std::string rr_to_text(const RrSeries& rr) {
  std::string out;
  for (double v : rr.intervals) {
    out += format_g17(v);
    out += '\n';
  }
  return out;
}

std::string hr_to_text(const HrSeries& hr) {
  std::string out = kHrHeader;
  out += '\n';
  for (const HrSample& s : hr.samples) {
    out += format_g17(s.t_ms);
    out += ',';
    out += format_g17(s.hr_bpm);
    out += '\n';
  }
  return out;
}

std::string manifest_to_text(const std::vector<SessionRecord>& sessions) {
  std::string out = kManifestHeader;
  out += '\n';
  for (const SessionRecord& s : sessions) {
    out += s.session_id;
    out += ',';
    out += s.signal_path;
    out += ',';
    out += to_string(s.signal_kind);
    out += ',';
    out += std::to_string(s.stress_level);
    out += ',';
    out += std::to_string(s.flu_level);
    out += ',';
    if (s.sleep_hours) out += format_g17(*s.sleep_hours);
    out += ',';
    if (s.temperature_c) out += format_g17(*s.temperature_c);
    out += ',';
    if (s.systole) out += std::to_string(*s.systole);
    out += ',';
    if (s.diastole) out += std::to_string(*s.diastole);
    out += '\n';
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("no such file or unreadable: " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open for writing: " + path);
  }
  out << content;
  if (!out.flush()) {
    throw std::runtime_error("write failed: " + path);
  }
}

}  // namespace hrvsvm::io
