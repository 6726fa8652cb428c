#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <random>

#include "hrvsvm/pipeline.hpp"
#include "synthetic.hpp"

using namespace hrvsvm;
using pipeline::Task;
using pipeline::TaskKind;
using testsupport::Cluster;

namespace {

// well-separated stress clusters: positive (level 5) vs healthy (level 1)
std::vector<testsupport::SessionSpec> separable_stress_sessions(unsigned seed) {
  return testsupport::cluster_sessions(
      TaskKind::stress,
      {Cluster{1.2, 18.0, 0.08, 1.0, 10, 5}, Cluster{4.5, 60.0, 0.15, 2.0, 10, 1}},
      seed);
}

}  // namespace

TEST_CASE("labeling thresholds split the 1..10 scale per task") {
  const Task stress = Task::stress();
  const Task flu = Task::influenza();
  const int stress_expected[] = {-1, -1, 1, 1, 1, 1, 1, 1, 1, 1};
  const int flu_expected[] = {-1, 1, 1, 1, 1, 1, 1, 1, 1, 1};
  for (int level = 1; level <= 10; ++level) {
    CHECK(pipeline::label_for(stress, level) == stress_expected[level - 1]);
    CHECK(pipeline::label_for(flu, level) == flu_expected[level - 1]);
  }
  CHECK_THROWS_AS(pipeline::label_for(stress, 0), std::invalid_argument);
  CHECK_THROWS_AS(pipeline::label_for(stress, 11), std::invalid_argument);

  // monotone step in the level
  for (int a = 1; a <= 10; ++a) {
    for (int b = a; b <= 10; ++b) {
      CHECK(pipeline::label_for(stress, a) <= pipeline::label_for(stress, b));
      CHECK(pipeline::label_for(flu, a) <= pipeline::label_for(flu, b));
    }
  }
}

TEST_CASE("task_level picks the matching metadata field") {
  io::SessionRecord s;
  s.stress_level = 7;
  s.flu_level = 2;
  CHECK(pipeline::task_level(Task::stress(), s) == 7);
  CHECK(pipeline::task_level(Task::influenza(), s) == 2);
}

TEST_CASE("extract_features projects the task's metric keys in order") {
  hrv::HrvMetrics m;
  m.mean_hr = 92.0;
  m.mean_rr = 652.2;
  m.sdev_hr = 4.2;
  m.sdev_nn = 55.0;

  const auto stress = pipeline::extract_features(Task::stress(), m, "s1");
  CHECK(stress.values[0] == 4.2);
  CHECK(stress.values[1] == 55.0);

  const auto flu = pipeline::extract_features(Task::influenza(), m, "s1");
  CHECK(flu.values[0] == 92.0);
  CHECK(flu.values[1] == 652.2);

  // sdann is unused by both tasks, so its absence is fine
  CHECK_FALSE(m.sdann.has_value());

  m.mean_hr = std::nan("");
  CHECK_THROWS_AS(pipeline::extract_features(Task::influenza(), m, "s1"),
                  std::invalid_argument);
}

TEST_CASE("normalizer z-scores features and rejects constant columns") {
  const std::vector<std::vector<double>> pts{{1.0, 10.0}, {3.0, 30.0}, {5.0, 20.0}};
  const Normalizer nz = Normalizer::fit(pts);
  double mean0 = 0.0;
  for (const auto& p : pts) mean0 += nz.apply(p)[0];
  CHECK(mean0 == doctest::Approx(0.0).epsilon(1e-12));

  CHECK_THROWS_AS(Normalizer::fit({{1.0, 2.0}, {1.0, 3.0}}),
                  std::invalid_argument);
}

TEST_CASE("synthetic series realize their feature targets") {
  SUBCASE("stress features") {
    const RrSeries rr = testsupport::stress_feature_series(3.5, 42.0);
    const hrv::HrvMetrics m = hrv::compute_metrics(rr);
    CHECK(m.sdev_hr == doctest::Approx(3.5).epsilon(1e-9));
    CHECK(m.sdev_nn == doctest::Approx(42.0).epsilon(1e-9));
  }
  SUBCASE("influenza features") {
    const RrSeries rr = testsupport::influenza_feature_series(95.0, 700.0);
    const hrv::HrvMetrics m = hrv::compute_metrics(rr);
    CHECK(m.mean_hr == doctest::Approx(95.0).epsilon(1e-9));
    CHECK(m.mean_rr == doctest::Approx(700.0).epsilon(1e-9));
  }
  SUBCASE("unrealizable influenza pair is rejected") {
    CHECK_THROWS_AS(testsupport::influenza_feature_series(60.0, 700.0),
                    std::invalid_argument);
  }
}

TEST_CASE("separable clusters train to a converged perfect model") {
  const auto specs = separable_stress_sessions(101);
  const auto records = testsupport::records_of(specs);
  const auto loader = testsupport::memory_loader(specs);

  const auto model =
      pipeline::train(records, Task::stress(), pipeline::TrainConfig{}, loader);
  CHECK(model.converged);
  CHECK(model.training_accuracy == 1.0);
  CHECK(model.support_count() >= 1);

  const auto report =
      pipeline::evaluate(model, records, Task::stress(), loader);
  CHECK(report.accuracy == 1.0);
  CHECK(report.total_count == records.size());

  // rows in input order, accuracy equals the mean of correct flags
  std::size_t correct = 0;
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    CHECK(report.rows[i].session_id == records[i].session_id);
    if (report.rows[i].correct) ++correct;
  }
  CHECK(report.accuracy == static_cast<double>(correct) /
                               static_cast<double>(report.rows.size()));
}

TEST_CASE("single-class manifests are rejected") {
  auto specs = separable_stress_sessions(103);
  for (auto& s : specs) s.stress_level = 1;  // all healthy
  const auto records = testsupport::records_of(specs);
  CHECK_THROWS_WITH_AS(
      pipeline::train(records, Task::stress(), pipeline::TrainConfig{},
                      testsupport::memory_loader(specs)),
      doctest::Contains("need both classes"), std::invalid_argument);
}

TEST_CASE("constant features cannot be normalized or separated") {
  // two sessions sharing one signal but labeled apart
  testsupport::SessionSpec a;
  a.id = "a";
  a.series = testsupport::stress_feature_series(3.0, 40.0);
  a.stress_level = 5;
  testsupport::SessionSpec b = a;
  b.id = "b";
  b.stress_level = 1;
  const std::vector<testsupport::SessionSpec> specs{a, b};
  const auto records = testsupport::records_of(specs);
  const auto loader = testsupport::memory_loader(specs);

  pipeline::TrainConfig cfg;
  cfg.normalize = true;
  CHECK_THROWS_WITH_AS(pipeline::train(records, Task::stress(), cfg, loader),
                       doctest::Contains("constant"), std::invalid_argument);

  cfg.normalize = false;  // then the duplicate opposite-label pair is caught
  CHECK_THROWS_WITH_AS(pipeline::train(records, Task::stress(), cfg, loader),
                       doctest::Contains("identical points"),
                       std::invalid_argument);
}

TEST_CASE("training needs at least two sessions") {
  const auto specs = separable_stress_sessions(104);
  const std::vector<io::SessionRecord> one{testsupport::records_of(specs)[0]};
  CHECK_THROWS_AS(pipeline::train(one, Task::stress(), pipeline::TrainConfig{},
                                  testsupport::memory_loader(specs)),
                  std::invalid_argument);
}

TEST_CASE("z-scoring makes predictions invariant to affine feature maps") {
  const auto specs = separable_stress_sessions(105);
  // per-feature positive scale plus shift, applied to every session
  auto mapped_specs = specs;
  for (auto& s : mapped_specs) {
    const hrv::HrvMetrics m = hrv::compute_metrics(s.series);
    s.series = testsupport::stress_feature_series(3.0 * m.sdev_hr + 7.0,
                                                  1000.0 * m.sdev_nn + 300.0);
  }
  const auto records = testsupport::records_of(specs);

  pipeline::TrainConfig cfg;
  cfg.normalize = true;
  const auto base = pipeline::train(records, Task::stress(), cfg,
                                    testsupport::memory_loader(specs));
  const auto mapped = pipeline::train(records, Task::stress(), cfg,
                                      testsupport::memory_loader(mapped_specs));

  const auto base_report = pipeline::evaluate(
      base, records, Task::stress(), testsupport::memory_loader(specs));
  const auto mapped_report = pipeline::evaluate(
      mapped, records, Task::stress(), testsupport::memory_loader(mapped_specs));
  REQUIRE(base_report.rows.size() == mapped_report.rows.size());
  for (std::size_t i = 0; i < base_report.rows.size(); ++i) {
    CHECK(base_report.rows[i].predicted_label ==
          mapped_report.rows[i].predicted_label);
  }
}

TEST_CASE("influenza task trains end to end") {
  const auto specs = testsupport::cluster_sessions(
      TaskKind::influenza,
      {Cluster{95.0, 650.0, 1.5, 15.0, 10, 3}, Cluster{72.0, 850.0, 1.5, 15.0, 10, 1}},
      107);
  const auto records = testsupport::records_of(specs);
  const auto loader = testsupport::memory_loader(specs);
  const auto model = pipeline::train(records, Task::influenza(),
                                     pipeline::TrainConfig{}, loader);
  CHECK(model.converged);
  CHECK(model.training_accuracy == 1.0);
  const auto report =
      pipeline::evaluate(model, records, Task::influenza(), loader);
  CHECK(report.accuracy == 1.0);
}

TEST_CASE("evaluate rejects a task mismatch") {
  const auto specs = separable_stress_sessions(109);
  const auto records = testsupport::records_of(specs);
  const auto loader = testsupport::memory_loader(specs);
  const auto model =
      pipeline::train(records, Task::stress(), pipeline::TrainConfig{}, loader);
  CHECK_THROWS_AS(pipeline::evaluate(model, records, Task::influenza(), loader),
                  std::invalid_argument);
}

TEST_CASE("model save/load round trip preserves decision values") {
  const auto specs = separable_stress_sessions(111);
  const auto records = testsupport::records_of(specs);
  const auto model = pipeline::train(records, Task::stress(),
                                     pipeline::TrainConfig{},
                                     testsupport::memory_loader(specs));

  const std::string doc = pipeline::save_model(model);
  const pipeline::TrainedModel back = pipeline::load_model(doc);
  CHECK(back.task.kind == TaskKind::stress);
  CHECK(back.c_bound == model.c_bound);

  std::mt19937 rng(11);
  std::uniform_real_distribution<double> sh(0.5, 6.0);
  std::uniform_real_distribution<double> sn(5.0, 90.0);
  for (int probe = 0; probe < 100; ++probe) {
    const std::vector<double> x{sh(rng), sn(rng)};
    const double a = svm::decision_value(model.model, x);
    const double b = svm::decision_value(back.model, x);
    CHECK(std::abs(a - b) <= 1e-12);
    CHECK(svm::sign_label(a) == svm::sign_label(b));
  }

  // a second round trip is byte-identical
  CHECK(pipeline::save_model(back) == doc);
}

TEST_CASE("linear and polynomial kernels survive the model round trip") {
  const auto specs = separable_stress_sessions(123);
  const auto records = testsupport::records_of(specs);
  const auto loader = testsupport::memory_loader(specs);
  for (const auto& kernel :
       {svm::KernelSpec::linear(), svm::KernelSpec::polynomial(3, 1.0)}) {
    pipeline::TrainConfig cfg;
    cfg.kernel = kernel;
    const auto model = pipeline::train(records, Task::stress(), cfg, loader);
    const auto back = pipeline::load_model(pipeline::save_model(model));
    CHECK(back.model.kernel.kind == kernel.kind);
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> sh(0.5, 6.0);
    std::uniform_real_distribution<double> sn(5.0, 90.0);
    for (int probe = 0; probe < 20; ++probe) {
      const std::vector<double> x{sh(rng), sn(rng)};
      CHECK(std::abs(svm::decision_value(model.model, x) -
                     svm::decision_value(back.model, x)) <= 1e-12);
    }
  }
}

TEST_CASE("model files without normalization load as raw models") {
  const auto specs = separable_stress_sessions(113);
  const auto records = testsupport::records_of(specs);
  pipeline::TrainConfig cfg;
  cfg.normalize = false;
  const auto model = pipeline::train(records, Task::stress(), cfg,
                                     testsupport::memory_loader(specs));
  CHECK_FALSE(model.model.normalizer.has_value());
  const std::string doc = pipeline::save_model(model);
  CHECK(doc.find("normalizer none\n") != std::string::npos);
  const auto back = pipeline::load_model(doc);
  CHECK_FALSE(back.model.normalizer.has_value());
}

TEST_CASE("model document validation") {
  const auto specs = separable_stress_sessions(115);
  const auto records = testsupport::records_of(specs);
  const auto model = pipeline::train(records, Task::stress(),
                                     pipeline::TrainConfig{},
                                     testsupport::memory_loader(specs));
  const std::string doc = pipeline::save_model(model);

  SUBCASE("version mismatch") {
    std::string bad = doc;
    bad.replace(bad.find("v1"), 2, "v2");
    try {
      pipeline::load_model(bad);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 1);
    }
  }
  SUBCASE("negative alpha") {
    std::string bad = doc;
    const auto pos = bad.rfind("normalizer");
    const auto sv_start = bad.find('\n', pos) + 1;
    bad.insert(sv_start, "-0.1 1 0.5 0.5\n");
    CHECK_THROWS_AS(pipeline::load_model(bad), ParseError);
  }
  SUBCASE("malformed support row") {
    CHECK_THROWS_AS(pipeline::load_model(doc + "0.5 1\n"), ParseError);
  }
  SUBCASE("bad label") {
    CHECK_THROWS_AS(pipeline::load_model(doc + "0.5 2 0.1 0.2\n"), ParseError);
  }
  SUBCASE("non-finite number") {
    CHECK_THROWS_AS(pipeline::load_model(doc + "nan 1 0.1 0.2\n"), ParseError);
  }
  SUBCASE("no support vectors") {
    CHECK_THROWS_AS(
        pipeline::load_model("hrvsvm-model v1\ntask stress\nkernel gaussian 1\n"
                             "c_bound 1000\nbias 0\nnormalizer none\n"),
        ParseError);
  }
}

TEST_CASE("evaluation report serializes in table shape") {
  const auto specs = separable_stress_sessions(117);
  const auto records = testsupport::records_of(specs);
  const auto loader = testsupport::memory_loader(specs);
  const auto model =
      pipeline::train(records, Task::stress(), pipeline::TrainConfig{}, loader);
  const auto report = pipeline::evaluate(model, records, Task::stress(), loader);
  const std::string csv = pipeline::report_to_csv(report);
  CHECK(csv.rfind("session_id,level,true_label,decision_value,predicted_label,"
                  "correct\n", 0) == 0);
  std::size_t lines = 0;
  for (char c : csv) lines += c == '\n';
  CHECK(lines == records.size() + 1);
  CHECK(csv.find(",true\n") != std::string::npos);
}

TEST_CASE("file loader reads signals relative to the manifest directory") {
  const auto specs = separable_stress_sessions(119);
  const std::string dir = testsupport::fresh_temp_dir("pipeline");
  const std::string manifest_path = testsupport::write_session_dir(dir, specs);
  const auto records =
      io::parse_session_manifest(io::read_file(manifest_path));
  const auto loader = pipeline::file_loader(dir);
  const auto model =
      pipeline::train(records, Task::stress(), pipeline::TrainConfig{}, loader);
  CHECK(model.training_accuracy == 1.0);

  io::SessionRecord missing = records[0];
  missing.signal_path = "missing.rr";
  CHECK_THROWS_AS(loader(missing), std::runtime_error);
  std::filesystem::remove_all(dir);
}

TEST_CASE("ectopic filtering cleans spiked training signals") {
  auto specs = separable_stress_sessions(121);
  for (auto& s : specs) {
    s.series.intervals[10] *= 2.5;  // one artifact per session
  }
  const auto records = testsupport::records_of(specs);
  pipeline::TrainConfig cfg;
  cfg.ectopic_filter = true;
  const auto model = pipeline::train(records, Task::stress(), cfg,
                                     testsupport::memory_loader(specs));
  CHECK(model.converged);
  CHECK(model.training_accuracy == 1.0);
}
