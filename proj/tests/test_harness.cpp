#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <doctest.h>

#include "meds/csv.hpp"
#include "meds/errors.hpp"
#include "meds/harness.hpp"
#include "support.hpp"

using namespace meds;

namespace {

std::string wideband_config_text() {
  return "seed=64\n"
         "omega=150\n"
         "duration=0.13\n"
         "amplitude=34.6\n"
         "modulo.lambda=4.38\n"
         "modulo.h=2.19\n"
         "asdm.delta=2.5e-3\n"
         "asdm.b=9\n"
         "recovery.N=3\n"
         "recovery.iterations=30\n";
}

std::filesystem::path temp_dir(const char* tag) {
  auto dir = std::filesystem::temp_directory_path() / (std::string("meds_test_") + tag);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("config parsing: happy path, comments, defaults") {
  ExperimentConfig cfg = parse_config_text(wideband_config_text() + "# trailing comment\n\n");
  CHECK(cfg.seed == 64);
  CHECK(cfg.omega == doctest::Approx(150.0));
  CHECK(cfg.mod_lambda == doctest::Approx(4.38));
  CHECK(cfg.recovery_order == 3);
  CHECK(cfg.kind == SignalKind::Random);
  CHECK(cfg.output_dir == "out");
}

TEST_CASE("config parsing: error paths") {
  CHECK_THROWS_AS(parse_config_text("omega=150\n"), IoError);  // missing keys
  CHECK_THROWS_AS(parse_config_text(wideband_config_text() + "bogus.key=1\n"), IoError);
  CHECK_THROWS_AS(parse_config_text(wideband_config_text() + "asdm.delta=abc\n"), IoError);
  // lambda above the dynamic-range bound
  std::string bad = wideband_config_text();
  bad.replace(bad.find("modulo.lambda=4.38"), 18, "modulo.lambda=8.99");
  CHECK_THROWS_AS(parse_config_text(bad), ParameterError);
  CHECK_THROWS_AS(parse_config_text(wideband_config_text() + "signal.kind=square\n"), IoError);
}

TEST_CASE("CSV round-trips preserve values exactly") {
  auto dir = temp_dir("csv");

  TriggerTimes trig;
  trig.t = {0.0, 1.25e-3, 3.7e-3, 0.11234567890123456};
  const std::string tpath = (dir / "trig.csv").string();
  write_triggers_csv(tpath, trig);
  TriggerTimes back = read_triggers_csv(tpath);
  REQUIRE(back.t.size() == trig.t.size());
  for (std::size_t i = 0; i < trig.t.size(); ++i) CHECK(back.t[i] == trig.t[i]);

  FoldRecord folds;
  folds.tau = {0.01, 0.057};
  folds.sign = {1, -1};
  const std::string fpath = (dir / "folds.csv").string();
  write_folds_csv(fpath, folds);
  FoldRecord fback = read_folds_csv(fpath);
  CHECK(fback.tau == folds.tau);
  CHECK(fback.sign == folds.sign);

  DenseWaveform w;
  w.t0 = 0.0;
  w.dt = 1.0 / 3.0;
  w.samples = {0.1, -2.5, 3.14159265358979312, 7.0};
  const std::string wpath = (dir / "wave.csv").string();
  write_waveform_csv(wpath, w);
  DenseWaveform wback = read_waveform_csv(wpath);
  REQUIRE(wback.samples.size() == w.samples.size());
  for (std::size_t i = 0; i < w.samples.size(); ++i) CHECK(wback.samples[i] == w.samples[i]);
  CHECK(wback.dt == doctest::Approx(w.dt).epsilon(1e-15));
}

TEST_CASE("trigger ingestion rejects corrupted files") {
  auto dir = temp_dir("badcsv");
  const std::string path = (dir / "bad.csv").string();
  {
    std::ofstream out(path);
    out << "k,t\n0,0.0\n1,0.5\n2,0.25\n";
  }
  CHECK_THROWS_AS(read_triggers_csv(path), IoError);
  CHECK_THROWS_AS(read_triggers_csv((dir / "missing.csv").string()), IoError);
}

TEST_CASE("synthetic run is byte-identical across repeats") {
  ExperimentConfig cfg = parse_config_text(wideband_config_text());
  auto dir1 = temp_dir("det1");
  auto dir2 = temp_dir("det2");
  emit_synthetic_outputs(cfg, run_synthetic(cfg), dir1.string());
  emit_synthetic_outputs(cfg, run_synthetic(cfg), dir2.string());
  for (const char* name : {"report.txt", "g.csv", "x.csv", "gtilde_meds.csv",
                           "triggers_meds.csv", "folds_true.csv", "folds_est.csv"}) {
    CHECK(slurp(dir1 / name) == slurp(dir2 / name));
    CHECK(!slurp(dir1 / name).empty());
  }
}

TEST_CASE("in-range amplitude makes both pipelines agree") {
  ExperimentConfig cfg = parse_config_text(wideband_config_text());
  cfg.amplitude = 3.0;  // below lambda: the folding stage is a no-op
  SyntheticResult r = run_synthetic(cfg);
  CHECK(r.folds_true == 0);
  CHECK(r.folds_detected == 0);
  CHECK(r.err_meds == doctest::Approx(r.err_asdm).epsilon(1e-9));
}

TEST_CASE("exported triggers reproduce the in-memory recovery") {
  ExperimentConfig cfg = parse_config_text(wideband_config_text());
  SyntheticResult r = run_synthetic(cfg);
  REQUIRE(r.detection_status == "ok");

  auto dir = temp_dir("ingest");
  const std::string tpath = (dir / "triggers.csv").string();
  const std::string rpath = (dir / "ref.csv").string();
  write_triggers_csv(tpath, r.triggers_meds_stream);
  write_waveform_csv(rpath, r.reference);

  IngestResult ing = ingest_and_recover(tpath, rpath, cfg);
  CHECK(ing.recovery.report.folds.size() == r.folds_detected);
  CHECK(ing.err_percent == doctest::Approx(r.err_meds).epsilon(1e-9));
}

TEST_CASE("output directory override via environment") {
  ExperimentConfig cfg = parse_config_text(wideband_config_text());
  CHECK(resolve_output_dir(cfg) == "out");
  setenv("MEDS_OUTPUT_DIR", "/tmp/meds_env_dir", 1);
  CHECK(resolve_output_dir(cfg) == "/tmp/meds_env_dir");
  unsetenv("MEDS_OUTPUT_DIR");
}

TEST_CASE("delta sweep: argument validation and row bookkeeping") {
  ExperimentConfig cfg = parse_config_text(wideband_config_text());
  CHECK_THROWS_AS(run_delta_sweep(cfg, 0.0, 1e-3, 5), ParameterError);
  CHECK_THROWS_AS(run_delta_sweep(cfg, 2e-3, 1e-3, 5), ParameterError);
  auto rows = run_delta_sweep(cfg, 2.0e-3, 2.5e-3, 2);
  REQUIRE(rows.size() == 2);
  CHECK(rows.front().delta == doctest::Approx(2.0e-3));
  CHECK(rows.back().delta == doctest::Approx(2.5e-3));
  for (const auto& row : rows) {
    CHECK(row.status == "ok");
    CHECK(row.triggers > 100);
  }
}
