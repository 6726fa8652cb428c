#include "hrvsvm/pipeline.hpp"

#include <cmath>
#include <filesystem>
#include <stdexcept>

#include "hrvsvm/errors.hpp"
#include "text_util.hpp"

namespace hrvsvm::pipeline {

using detail::format_g17;

std::string to_string(TaskKind kind) {
  return kind == TaskKind::stress ? "stress" : "influenza";
}

TaskKind task_kind_from(const std::string& name) {
  if (name == "stress") return TaskKind::stress;
  if (name == "influenza") return TaskKind::influenza;
  throw std::invalid_argument("unknown task: " + name);
}

Task Task::stress() {
  return Task{TaskKind::stress, 2, {"sdev_hr", "sdev_nn"}};
}

Task Task::influenza() {
  return Task{TaskKind::influenza, 1, {"mean_hr", "mean_rr"}};
}

Task Task::of(TaskKind kind) {
  return kind == TaskKind::stress ? stress() : influenza();
}

int label_for(const Task& task, int level) {
  if (level < 1 || level > 10) {
    throw std::invalid_argument("level must be in 1..10, got " +
                                std::to_string(level));
  }
  return level > task.positive_threshold ? 1 : -1;
}

int task_level(const Task& task, const io::SessionRecord& session) {
  return task.kind == TaskKind::stress ? session.stress_level
                                       : session.flu_level;
}

namespace {

double metric_by_name(const hrv::HrvMetrics& m, const std::string& name) {
  if (name == "mean_hr") return m.mean_hr;
  if (name == "mean_rr") return m.mean_rr;
  if (name == "sdev_hr") return m.sdev_hr;
  if (name == "sdev_nn") return m.sdev_nn;
  if (name == "rmssd") return m.rmssd;
  if (name == "sdann") {
    if (!m.sdann) throw std::invalid_argument("metric sdann is absent");
    return *m.sdann;
  }
  if (name == "pnn50") return m.pnnx;
  throw std::invalid_argument("unknown metric key: " + name);
}

}  // namespace

FeatureVector extract_features(const Task& task, const hrv::HrvMetrics& m,
                               const std::string& session_id) {
  FeatureVector fv;
  fv.session_id = session_id;
  for (std::size_t f = 0; f < 2; ++f) {
    const double value = metric_by_name(m, task.feature_names[f]);
    if (!std::isfinite(value)) {
      throw std::invalid_argument("non-finite feature " + task.feature_names[f] +
                                  " for session " + session_id);
    }
    fv.values[f] = value;
  }
  return fv;
}

SignalLoader file_loader(const std::string& base_dir) {
  return [base_dir](const io::SessionRecord& s) -> RrSeries {
    namespace fs = std::filesystem;
    fs::path p(s.signal_path);
    if (p.is_relative() && !base_dir.empty()) {
      p = fs::path(base_dir) / p;
    }
    const std::string text = io::read_file(p.string());
    if (s.signal_kind == io::SignalKind::rr) {
      return io::parse_rr_file(text);
    }
    return hrv::ibi_from_hr(io::parse_hr_file(text));
  };
}

namespace {

std::vector<FeatureVector> features_for(
    const std::vector<io::SessionRecord>& sessions, const Task& task,
    const SignalLoader& load, bool ectopic_filter, double ectopic_tolerance) {
  std::vector<FeatureVector> features;
  features.reserve(sessions.size());
  for (const auto& s : sessions) {
    RrSeries rr = load(s);
    if (ectopic_filter) {
      rr = hrv::filter_ectopic(rr, ectopic_tolerance);
    }
    const hrv::HrvMetrics m = hrv::compute_metrics(rr);
    features.push_back(extract_features(task, m, s.session_id));
  }
  return features;
}

}  // namespace

TrainedModel train(const std::vector<io::SessionRecord>& sessions,
                   const Task& task, const TrainConfig& cfg,
                   const SignalLoader& load) {
  if (sessions.size() < 2) {
    throw std::invalid_argument("need at least 2 sessions to train");
  }
  const std::vector<FeatureVector> features = features_for(
      sessions, task, load, cfg.ectopic_filter, cfg.ectopic_tolerance);

  std::vector<std::vector<double>> points;
  std::vector<int> labels;
  points.reserve(features.size());
  labels.reserve(features.size());
  bool has_pos = false, has_neg = false;
  for (std::size_t i = 0; i < sessions.size(); ++i) {
    points.push_back({features[i].values[0], features[i].values[1]});
    const int label = label_for(task, task_level(task, sessions[i]));
    (label == 1 ? has_pos : has_neg) = true;
    labels.push_back(label);
  }
  if (!has_pos || !has_neg) {
    throw std::invalid_argument(
        "need both classes: every session labeled " +
        std::string(has_pos ? "positive" : "negative") + " for task " +
        to_string(task.kind));
  }

  std::optional<Normalizer> normalizer;
  if (cfg.normalize) {
    normalizer = Normalizer::fit(points);
    for (auto& p : points) normalizer->apply_in_place(p);
  }

  svm::TrainingSet ts(points, labels);
  svm::SolveOptions opt;
  opt.c_bound = cfg.c_bound;
  opt.kkt_tol = cfg.kkt_tol;
  opt.max_passes = cfg.max_passes;
  const svm::DualSolution sol = solve_dual(ts, cfg.kernel, opt);

  TrainedModel tm;
  tm.task = task;
  tm.model = make_model(sol, ts, normalizer);
  tm.c_bound = cfg.c_bound;
  tm.converged = sol.converged;

  // Training accuracy on exactly the features the solve saw. The model
  // normalizes probes itself, so probe with the raw feature values.
  std::size_t correct = 0;
  for (std::size_t i = 0; i < features.size(); ++i) {
    const std::vector<double> raw{features[i].values[0], features[i].values[1]};
    if (svm::classify(tm.model, raw) == labels[i]) ++correct;
  }
  tm.training_accuracy =
      static_cast<double>(correct) / static_cast<double>(features.size());
  return tm;
}

EvaluationReport evaluate(const TrainedModel& m,
                          const std::vector<io::SessionRecord>& sessions,
                          const Task& task, const SignalLoader& load) {
  if (m.task.kind != task.kind) {
    throw std::invalid_argument("model was trained for task " +
                                to_string(m.task.kind) + ", not " +
                                to_string(task.kind));
  }
  EvaluationReport report;
  report.rows.resize(sessions.size());
  for (std::size_t i = 0; i < sessions.size(); ++i) {
    const io::SessionRecord& s = sessions[i];
    const RrSeries rr = load(s);
    const hrv::HrvMetrics metrics = hrv::compute_metrics(rr);
    const FeatureVector fv = extract_features(task, metrics, s.session_id);
    EvaluationRow& row = report.rows[i];
    row.session_id = s.session_id;
    row.raw_level = task_level(task, s);
    row.true_label = label_for(task, row.raw_level);
    row.decision_value = svm::decision_value(
        m.model, std::vector<double>{fv.values[0], fv.values[1]});
    row.predicted_label = svm::sign_label(row.decision_value);
    row.correct = row.predicted_label == row.true_label;
  }
  report.total_count = report.rows.size();
  for (const auto& row : report.rows) {
    if (row.correct) ++report.correct_count;
  }
  report.accuracy = report.total_count == 0
                        ? 0.0
                        : static_cast<double>(report.correct_count) /
                              static_cast<double>(report.total_count);
  return report;
}

std::string report_to_csv(const EvaluationReport& report) {
  std::string out =
      "session_id,level,true_label,decision_value,predicted_label,correct\n";
  for (const auto& row : report.rows) {
    out += row.session_id;
    out += ',';
    out += std::to_string(row.raw_level);
    out += ',';
    out += std::to_string(row.true_label);
    out += ',';
    out += format_g17(row.decision_value);
    out += ',';
    out += std::to_string(row.predicted_label);
    out += ',';
    out += row.correct ? "true" : "false";
    out += '\n';
  }
  return out;
}

namespace {

constexpr const char* kModelHeader = "hrvsvm-model v1";

std::string kernel_line(const svm::KernelSpec& k) {
  switch (k.kind) {
    case svm::KernelKind::linear:
      return "kernel linear";
    case svm::KernelKind::gaussian:
      return "kernel gaussian " + format_g17(k.sigma);
    case svm::KernelKind::polynomial:
      return "kernel polynomial " + std::to_string(k.degree) + " " +
             format_g17(k.coef0);
  }
  return {};
}

std::vector<std::string_view> tokens_of(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && line[pos] == ' ') ++pos;
    std::size_t end = pos;
    while (end < line.size() && line[end] != ' ') ++end;
    if (end > pos) out.push_back(line.substr(pos, end - pos));
    pos = end;
  }
  return out;
}

double finite_number(std::string_view token, std::size_t line_no,
                     const char* what) {
  const auto v = detail::parse_double(token);
  if (!v) {
    throw ParseError(line_no, std::string("expected finite number for ") + what +
                                  ", got \"" + std::string(token) + "\"");
  }
  return *v;
}

}  // namespace

std::string save_model(const TrainedModel& m) {
  std::string out = kModelHeader;
  out += '\n';
  out += "task " + to_string(m.task.kind) + "\n";
  out += kernel_line(m.model.kernel) + "\n";
  out += "c_bound " + format_g17(m.c_bound) + "\n";
  out += "bias " + format_g17(m.model.bias) + "\n";
  if (m.model.normalizer) {
    for (std::size_t f = 0; f < m.model.normalizer->dim(); ++f) {
      out += "normalizer " + format_g17(m.model.normalizer->mean[f]) + " " +
             format_g17(m.model.normalizer->stdev[f]) + "\n";
    }
  } else {
    out += "normalizer none\n";
  }
  for (std::size_t i = 0; i < m.model.support_points.size(); ++i) {
    out += format_g17(m.model.support_alphas[i]);
    out += ' ';
    out += std::to_string(m.model.support_labels[i]);
    for (double x : m.model.support_points[i]) {
      out += ' ';
      out += format_g17(x);
    }
    out += '\n';
  }
  return out;
}

TrainedModel load_model(const std::string& doc) {
  const auto lines = detail::split_lines(doc);
  if (lines.empty() || detail::trim(lines[0]) != kModelHeader) {
    throw ParseError(1, std::string("expected model header \"") + kModelHeader +
                            "\"");
  }
  TrainedModel m;
  std::size_t i = 1;
  auto next_tokens = [&](const char* what) {
    if (i >= lines.size()) {
      throw ParseError(lines.size() + 1, std::string("missing ") + what);
    }
    const auto toks = tokens_of(lines[i]);
    ++i;
    return toks;
  };

  {
    const auto toks = next_tokens("task line");
    if (toks.size() != 2 || toks[0] != "task") {
      throw ParseError(i, "expected \"task <stress|influenza>\"");
    }
    try {
      m.task = Task::of(task_kind_from(std::string(toks[1])));
    } catch (const std::invalid_argument& e) {
      throw ParseError(i, e.what());
    }
  }
  {
    const auto toks = next_tokens("kernel line");
    if (toks.size() < 2 || toks[0] != "kernel") {
      throw ParseError(i, "expected \"kernel <kind> [params]\"");
    }
    svm::KernelSpec k;
    try {
      k.kind = svm::kernel_kind_from(std::string(toks[1]));
    } catch (const std::invalid_argument& e) {
      throw ParseError(i, e.what());
    }
    if (k.kind == svm::KernelKind::gaussian) {
      if (toks.size() != 3) throw ParseError(i, "gaussian kernel needs sigma");
      k.sigma = finite_number(toks[2], i, "sigma");
      if (!(k.sigma > 0.0)) throw ParseError(i, "sigma must be > 0");
    } else if (k.kind == svm::KernelKind::polynomial) {
      if (toks.size() != 4) {
        throw ParseError(i, "polynomial kernel needs degree and coef0");
      }
      const auto deg = detail::parse_int(toks[2]);
      if (!deg || *deg < 1) throw ParseError(i, "degree must be >= 1");
      k.degree = static_cast<int>(*deg);
      k.coef0 = finite_number(toks[3], i, "coef0");
    } else if (toks.size() != 2) {
      throw ParseError(i, "linear kernel takes no parameters");
    }
    m.model.kernel = k;
  }
  {
    const auto toks = next_tokens("c_bound line");
    if (toks.size() != 2 || toks[0] != "c_bound") {
      throw ParseError(i, "expected \"c_bound <value>\"");
    }
    m.c_bound = finite_number(toks[1], i, "c_bound");
    if (!(m.c_bound > 0.0)) throw ParseError(i, "c_bound must be > 0");
  }
  {
    const auto toks = next_tokens("bias line");
    if (toks.size() != 2 || toks[0] != "bias") {
      throw ParseError(i, "expected \"bias <value>\"");
    }
    m.model.bias = finite_number(toks[1], i, "bias");
  }

  Normalizer nz;
  bool saw_none = false;
  while (i < lines.size()) {
    const auto toks = tokens_of(lines[i]);
    if (toks.empty() || toks[0] != "normalizer") break;
    ++i;
    if (toks.size() == 2 && toks[1] == "none") {
      saw_none = true;
      continue;
    }
    if (toks.size() != 3) {
      throw ParseError(i - 1, "expected \"normalizer <mean> <std>\" or "
                              "\"normalizer none\"");
    }
    nz.mean.push_back(finite_number(toks[1], i - 1, "normalizer mean"));
    const double stdev = finite_number(toks[2], i - 1, "normalizer std");
    if (!(stdev > 0.0)) throw ParseError(i - 1, "normalizer std must be > 0");
    nz.stdev.push_back(stdev);
  }
  if (!nz.mean.empty()) {
    if (saw_none) {
      throw ParseError(i, "mixed \"normalizer none\" with normalizer rows");
    }
    m.model.normalizer = std::move(nz);
  }

  std::size_t dim = 0;
  for (; i < lines.size(); ++i) {
    if (detail::trim(lines[i]).empty()) continue;
    const auto toks = tokens_of(lines[i]);
    const std::size_t line_no = i + 1;
    if (toks.size() < 3) {
      throw ParseError(line_no, "support vector row needs \"alpha y x1 ...\"");
    }
    const double alpha = finite_number(toks[0], line_no, "alpha");
    if (alpha < 0.0) {
      throw ParseError(line_no, "alpha must be >= 0");
    }
    const auto y = detail::parse_int(toks[1]);
    if (!y || (*y != 1 && *y != -1)) {
      throw ParseError(line_no, "label must be -1 or +1");
    }
    std::vector<double> x;
    for (std::size_t f = 2; f < toks.size(); ++f) {
      x.push_back(finite_number(toks[f], line_no, "support coordinate"));
    }
    if (dim == 0) {
      dim = x.size();
    } else if (x.size() != dim) {
      throw ParseError(line_no, "support vectors differ in dimension");
    }
    m.model.support_alphas.push_back(alpha);
    m.model.support_labels.push_back(static_cast<int>(*y));
    m.model.support_points.push_back(std::move(x));
  }
  if (m.model.support_points.empty()) {
    throw ParseError(lines.size() + 1, "model has no support vectors");
  }
  if (m.model.normalizer && m.model.normalizer->dim() != dim) {
    throw ParseError(lines.size() + 1,
                     "normalizer dimension does not match support vectors");
  }
  return m;
}

}  // namespace hrvsvm::pipeline
