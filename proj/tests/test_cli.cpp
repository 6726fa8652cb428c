#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <string>

#include "hrvsvm/hrv.hpp"
#include "hrvsvm/signal_io.hpp"
#include "synthetic.hpp"

using namespace hrvsvm;
namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string binary() {
  const char* path = std::getenv("HRVSVM_BIN");
  REQUIRE_MESSAGE(path != nullptr, "HRVSVM_BIN must point at the CLI");
  return path;
}

RunResult run(const std::string& args, const std::string& dir) {
  const std::string out_path = dir + "/cmd.out";
  const std::string err_path = dir + "/cmd.err";
  const std::string cmd =
      binary() + " " + args + " >" + out_path + " 2>" + err_path;
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = io::read_file(out_path);
  r.err = io::read_file(err_path);
  return r;
}

struct CliFixture {
  std::string dir;

  CliFixture() : dir(testsupport::fresh_temp_dir("cli")) {}
  ~CliFixture() {
    std::error_code ec;
    fs::remove_all(dir, ec);
  }

  std::string path(const std::string& name) const { return dir + "/" + name; }
};

}  // namespace

TEST_CASE("features on a constant rr fixture") {
  CliFixture fx;
  io::write_file(fx.path("const800.rr"), "800\n800\n800\n");
  const auto r = run("features --kind rr " + fx.path("const800.rr"), fx.dir);
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("mean_rr=800\n") != std::string::npos);
  CHECK(r.out.find("mean_hr=75\n") != std::string::npos);
  CHECK(r.out.find("rmssd=0\n") != std::string::npos);
  CHECK(r.err.empty());

  // byte-identical on a second run
  const auto again = run("features --kind rr " + fx.path("const800.rr"), fx.dir);
  CHECK(again.out == r.out);
}

TEST_CASE("features reports the single-difference rmssd") {
  CliFixture fx;
  io::write_file(fx.path("two.rr"), "800\n900\n");
  const auto r = run("features --kind rr " + fx.path("two.rr"), fx.dir);
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("rmssd=100\n") != std::string::npos);
}

TEST_CASE("features reads hr csv files") {
  CliFixture fx;
  io::write_file(fx.path("hr.csv"), "t_ms,hr_bpm\n0,60\n1000,62\n2000,61\n");
  const auto r = run("features --kind hr " + fx.path("hr.csv"), fx.dir);
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("mean_rr=") != std::string::npos);
}

TEST_CASE("features fails cleanly on a missing file") {
  CliFixture fx;
  const auto r = run("features --kind hr " + fx.path("missing.csv"), fx.dir);
  CHECK(r.exit_code != 0);
  CHECK(r.out.empty());
  CHECK(r.err.find("no such file") != std::string::npos);
}

TEST_CASE("features rejects a malformed rr file with a line diagnostic") {
  CliFixture fx;
  io::write_file(fx.path("bad.rr"), "800\n-5\n");
  const auto r = run("features --kind rr " + fx.path("bad.rr"), fx.dir);
  CHECK(r.exit_code != 0);
  CHECK(r.err.find("line 2") != std::string::npos);
}

TEST_CASE("train, classify and evaluate round trip on synthetic sessions") {
  CliFixture fx;
  const auto specs = testsupport::cluster_sessions(
      pipeline::TaskKind::stress,
      {testsupport::Cluster{1.2, 18.0, 0.08, 1.0, 10, 5},
       testsupport::Cluster{4.5, 60.0, 0.15, 2.0, 10, 1}},
      301);
  const std::string manifest = testsupport::write_session_dir(fx.dir, specs);
  const std::string model_path = fx.path("stress.model");

  const auto train = run("train --task stress --manifest " + manifest +
                             " --out " + model_path,
                         fx.dir);
  CHECK(train.exit_code == 0);
  CHECK(train.out.find("training_accuracy=1.000") != std::string::npos);
  CHECK(train.out.find("converged=true") != std::string::npos);
  REQUIRE(fs::exists(model_path));

  // classify a member of each cluster through the saved model
  const auto stressed = run("classify --model " + model_path + " --kind rr " +
                                fx.path(specs[0].id + ".rr"),
                            fx.dir);
  CHECK(stressed.exit_code == 0);
  CHECK(stressed.out.find("label=+1") != std::string::npos);
  CHECK(stressed.out.find("verdict=stress") != std::string::npos);

  const auto healthy = run("classify --model " + model_path + " --kind rr " +
                               fx.path(specs[10].id + ".rr"),
                           fx.dir);
  CHECK(healthy.exit_code == 0);
  CHECK(healthy.out.find("label=-1") != std::string::npos);
  CHECK(healthy.out.find("verdict=healthy") != std::string::npos);

  const std::string report_path = fx.path("report.csv");
  const auto eval = run("evaluate --model " + model_path +
                            " --task stress --manifest " + manifest +
                            " --out " + report_path,
                        fx.dir);
  CHECK(eval.exit_code == 0);
  CHECK(eval.out.find("accuracy=20/20") != std::string::npos);
  REQUIRE(fs::exists(report_path));
  const std::string csv = io::read_file(report_path);
  CHECK(csv.rfind("session_id,level,true_label,decision_value,"
                  "predicted_label,correct\n", 0) == 0);

  SUBCASE("task mismatch is refused") {
    const auto r = run("evaluate --model " + model_path +
                           " --task influenza --manifest " + manifest +
                           " --out " + fx.path("r2.csv"),
                       fx.dir);
    CHECK(r.exit_code != 0);
    CHECK(r.err.find("trained for task") != std::string::npos);
  }

  SUBCASE("corrupted model files are rejected") {
    io::write_file(model_path, "hrvsvm-model v2\n");
    const auto r = run("classify --model " + model_path + " --kind rr " +
                           fx.path(specs[0].id + ".rr"),
                       fx.dir);
    CHECK(r.exit_code != 0);
    CHECK(r.err.find("hrvsvm-model v1") != std::string::npos);
  }
}

TEST_CASE("train echoes overrides into the model file") {
  CliFixture fx;
  const auto specs = testsupport::cluster_sessions(
      pipeline::TaskKind::influenza,
      {testsupport::Cluster{95.0, 650.0, 1.5, 15.0, 6, 3},
       testsupport::Cluster{72.0, 850.0, 1.5, 15.0, 6, 1}},
      303);
  const std::string manifest = testsupport::write_session_dir(fx.dir, specs);
  const std::string model_path = fx.path("flu.model");
  const auto r = run("train --task influenza --manifest " + manifest +
                         " --out " + model_path + " --c 1e6 --sigma 1",
                     fx.dir);
  CHECK(r.exit_code == 0);
  const std::string doc = io::read_file(model_path);
  CHECK(doc.find("c_bound 1000000\n") != std::string::npos);
  CHECK(doc.find("kernel gaussian 1\n") != std::string::npos);
  CHECK(doc.find("task influenza\n") != std::string::npos);
}

TEST_CASE("train refuses single-class manifests") {
  CliFixture fx;
  auto specs = testsupport::cluster_sessions(
      pipeline::TaskKind::stress,
      {testsupport::Cluster{1.2, 18.0, 0.08, 1.0, 4, 1},
       testsupport::Cluster{4.5, 60.0, 0.15, 2.0, 4, 2}},
      305);  // levels 1 and 2 are both healthy for stress
  const std::string manifest = testsupport::write_session_dir(fx.dir, specs);
  const auto r = run("train --task stress --manifest " + manifest + " --out " +
                         fx.path("m.model"),
                     fx.dir);
  CHECK(r.exit_code != 0);
  CHECK(r.err.find("need both classes") != std::string::npos);
  CHECK_FALSE(fs::exists(fx.path("m.model")));
}

TEST_CASE("unknown flags and missing subcommands fail") {
  CliFixture fx;
  CHECK(run("features --kind ecg nothing.rr", fx.dir).exit_code != 0);
  CHECK(run("", fx.dir).exit_code != 0);
  CHECK(run("train --task stress", fx.dir).exit_code != 0);
}
