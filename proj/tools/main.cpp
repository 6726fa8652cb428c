#include <cstdio>
#include <exception>
#include <filesystem>
#include <string>

#include <CLI11.hpp>

#include "hrvsvm/hrv.hpp"
#include "hrvsvm/pipeline.hpp"
#include "hrvsvm/signal_io.hpp"
#include "hrvsvm/svm.hpp"

namespace {

using namespace hrvsvm;

RrSeries load_signal(const std::string& path, const std::string& kind) {
  const std::string text = io::read_file(path);
  if (io::signal_kind_from(kind) == io::SignalKind::rr) {
    return io::parse_rr_file(text);
  }
  return hrv::ibi_from_hr(io::parse_hr_file(text));
}

int cmd_features(const std::string& path, const std::string& kind) {
  const hrv::HrvMetrics m = hrv::compute_metrics(load_signal(path, kind));
  std::fputs(hrv::metrics_to_text(m).c_str(), stdout);
  return 0;
}

struct TrainArgs {
  std::string manifest;
  std::string task = "stress";
  std::string out;
  std::string kernel = "gaussian";
  double sigma = 1.0;
  double c = 1000.0;
  double tol = 1e-3;
  bool no_normalize = false;
  bool ectopic_filter = false;
};

svm::KernelSpec kernel_from_args(const std::string& kernel, double sigma) {
  const svm::KernelKind kind = svm::kernel_kind_from(kernel);
  switch (kind) {
    case svm::KernelKind::linear:
      return svm::KernelSpec::linear();
    case svm::KernelKind::gaussian:
      return svm::KernelSpec::gaussian(sigma);
    case svm::KernelKind::polynomial:
      return svm::KernelSpec::polynomial(3, 1.0);
  }
  throw std::invalid_argument("unknown kernel: " + kernel);
}

int cmd_train(const TrainArgs& args) {
  const auto sessions =
      io::parse_session_manifest(io::read_file(args.manifest));
  const auto base_dir =
      std::filesystem::path(args.manifest).parent_path().string();

  pipeline::TrainConfig cfg;
  cfg.kernel = kernel_from_args(args.kernel, args.sigma);
  cfg.c_bound = args.c;
  cfg.kkt_tol = args.tol;
  cfg.normalize = !args.no_normalize;
  cfg.ectopic_filter = args.ectopic_filter;

  const pipeline::Task task =
      pipeline::Task::of(pipeline::task_kind_from(args.task));
  const pipeline::TrainedModel model =
      pipeline::train(sessions, task, cfg, pipeline::file_loader(base_dir));
  io::write_file(args.out, pipeline::save_model(model));

  std::printf("support_vectors=%zu\n", model.support_count());
  std::printf("converged=%s\n", model.converged ? "true" : "false");
  std::printf("training_accuracy=%.3f\n", model.training_accuracy);
  if (!model.converged) {
    std::fprintf(stderr,
                 "warning: solver stopped at max passes; the model is "
                 "feasible but not fully KKT-converged\n");
  }
  return 0;
}

int cmd_classify(const std::string& model_path, const std::string& path,
                 const std::string& kind) {
  const pipeline::TrainedModel model =
      pipeline::load_model(io::read_file(model_path));
  const hrv::HrvMetrics m = hrv::compute_metrics(load_signal(path, kind));
  const pipeline::FeatureVector fv =
      pipeline::extract_features(model.task, m, path);
  const std::vector<double> probe{fv.values[0], fv.values[1]};
  const double decision = svm::decision_value(model.model, probe);
  const int label = svm::sign_label(decision);
  const std::string verdict =
      label > 0 ? pipeline::to_string(model.task.kind) : "healthy";
  std::printf("label=%+d decision=%.6f verdict=%s\n", label, decision,
              verdict.c_str());
  return 0;
}

int cmd_evaluate(const std::string& model_path, const std::string& task_name,
                 const std::string& manifest, const std::string& out) {
  const pipeline::TrainedModel model =
      pipeline::load_model(io::read_file(model_path));
  const pipeline::Task task =
      pipeline::Task::of(pipeline::task_kind_from(task_name));
  const auto sessions = io::parse_session_manifest(io::read_file(manifest));
  const auto base_dir = std::filesystem::path(manifest).parent_path().string();
  const pipeline::EvaluationReport report =
      pipeline::evaluate(model, sessions, task, pipeline::file_loader(base_dir));
  io::write_file(out, pipeline::report_to_csv(report));
  std::printf("accuracy=%zu/%zu\n", report.correct_count, report.total_count);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Time-domain HRV metrics and SVM stress/influenza classification"};
  app.require_subcommand(1);

  std::string signal_path, signal_kind;
  auto* features = app.add_subcommand(
      "features", "Compute time-domain HRV metrics from a signal file");
  features->add_option("--kind", signal_kind, "Signal kind")
      ->required()
      ->check(CLI::IsMember({"rr", "hr"}));
  features->add_option("path", signal_path, "Signal file")->required();

  TrainArgs train_args;
  auto* train = app.add_subcommand("train", "Train a classifier from a manifest");
  train->add_option("--task", train_args.task, "Classification task")
      ->required()
      ->check(CLI::IsMember({"stress", "influenza"}));
  train->add_option("--manifest", train_args.manifest, "Session manifest CSV")
      ->required();
  train->add_option("--out", train_args.out, "Model output path")->required();
  train->add_option("--kernel", train_args.kernel, "Kernel kind")
      ->check(CLI::IsMember({"gaussian", "linear", "polynomial"}));
  train->add_option("--sigma", train_args.sigma, "Gaussian kernel width")
      ->check(CLI::PositiveNumber);
  train->add_option("--c", train_args.c, "Soft-margin box bound")
      ->check(CLI::PositiveNumber);
  train->add_option("--tol", train_args.tol, "KKT tolerance")
      ->check(CLI::PositiveNumber);
  train->add_flag("--no-normalize", train_args.no_normalize,
                  "Train on raw features without z-scoring");
  train->add_flag("--ectopic-filter", train_args.ectopic_filter,
                  "Drop ectopic outlier intervals before computing metrics");

  std::string model_path;
  auto* classify = app.add_subcommand("classify", "Classify one session signal");
  classify->add_option("--model", model_path, "Model file")->required();
  classify->add_option("--kind", signal_kind, "Signal kind")
      ->required()
      ->check(CLI::IsMember({"rr", "hr"}));
  classify->add_option("path", signal_path, "Signal file")->required();

  std::string eval_task, eval_manifest, eval_out;
  auto* evaluate = app.add_subcommand(
      "evaluate", "Evaluate a model over a manifest and write a CSV report");
  evaluate->add_option("--model", model_path, "Model file")->required();
  evaluate->add_option("--task", eval_task, "Classification task")
      ->required()
      ->check(CLI::IsMember({"stress", "influenza"}));
  evaluate->add_option("--manifest", eval_manifest, "Session manifest CSV")
      ->required();
  evaluate->add_option("--out", eval_out, "Report output path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (features->parsed()) return cmd_features(signal_path, signal_kind);
    if (train->parsed()) return cmd_train(train_args);
    if (classify->parsed())
      return cmd_classify(model_path, signal_path, signal_kind);
    if (evaluate->parsed())
      return cmd_evaluate(model_path, eval_task, eval_manifest, eval_out);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
