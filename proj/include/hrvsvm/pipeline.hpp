#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "hrvsvm/hrv.hpp"
#include "hrvsvm/signal_io.hpp"
#include "hrvsvm/svm.hpp"

namespace hrvsvm::pipeline {

enum class TaskKind { stress, influenza };

std::string to_string(TaskKind kind);
TaskKind task_kind_from(const std::string& name);  // throws std::invalid_argument

// Labeling rule plus the two metric keys used as the (X, Y) features.
// Stress: level > 2 is positive, features (sdev_hr, sdev_nn).
// Influenza: level > 1 is positive, features (mean_hr, mean_rr).
struct Task {
  TaskKind kind = TaskKind::stress;
  int positive_threshold = 2;
  std::array<std::string, 2> feature_names{"sdev_hr", "sdev_nn"};

  static Task stress();
  static Task influenza();
  static Task of(TaskKind kind);
};

// +1 when level > task.positive_threshold, else -1. Levels live on the
// 1..10 self-report scale.
int label_for(const Task& task, int level);

// The session's level relevant to the task (stress_level or flu_level).
int task_level(const Task& task, const io::SessionRecord& session);

struct FeatureVector {
  std::array<double, 2> values{};
  std::string session_id;
};

// Projects the task's two metric keys, rejecting missing or non-finite
// values.
FeatureVector extract_features(const Task& task, const hrv::HrvMetrics& m,
                               const std::string& session_id);

// Maps a session record to its RR series (reading and converting the signal
// file). Tests may inject in-memory loaders.
using SignalLoader = std::function<RrSeries(const io::SessionRecord&)>;

// Loader reading signal files relative to base_dir (absolute paths pass
// through).
SignalLoader file_loader(const std::string& base_dir);

struct TrainConfig {
  svm::KernelSpec kernel = svm::KernelSpec::gaussian(1.0);
  double c_bound = 1000.0;
  double kkt_tol = 1e-3;
  int max_passes = 10000;
  bool normalize = true;
  bool ectopic_filter = false;
  double ectopic_tolerance = 0.2;
};

struct TrainedModel {
  Task task;
  svm::Model model;
  double c_bound = 1000.0;
  bool converged = false;
  double training_accuracy = 0.0;  // on the features used for the solve

  std::size_t support_count() const noexcept {
    return model.support_alphas.size();
  }
};

// load signal -> optional ectopic filter -> metrics -> features ->
// optional z-score fit -> dual solve -> bias -> pruned model.
TrainedModel train(const std::vector<io::SessionRecord>& sessions,
                   const Task& task, const TrainConfig& cfg,
                   const SignalLoader& load);

struct EvaluationRow {
  std::string session_id;
  int raw_level = 0;
  int true_label = 0;
  double decision_value = 0.0;
  int predicted_label = 0;
  bool correct = false;
};

struct EvaluationReport {
  std::vector<EvaluationRow> rows;  // input order
  std::size_t correct_count = 0;
  std::size_t total_count = 0;
  double accuracy = 0.0;
};

EvaluationReport evaluate(const TrainedModel& m,
                          const std::vector<io::SessionRecord>& sessions,
                          const Task& task, const SignalLoader& load);

// CSV with header
// "session_id,level,true_label,decision_value,predicted_label,correct".
std::string report_to_csv(const EvaluationReport& report);

// Line-based versioned text: "hrvsvm-model v1" header, task, kernel spec,
// c_bound, bias, normalizer rows, then one "alpha y x1 x2" row per support
// vector at full decimal precision.
std::string save_model(const TrainedModel& m);
TrainedModel load_model(const std::string& doc);  // throws ParseError

}  // namespace hrvsvm::pipeline
