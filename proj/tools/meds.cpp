// Command-line front end: one verb per experiment.
//   simulate  encode + decode a synthetic input, write report and CSVs
//   baseline  classical (fold-free) decode only
//   recover   run the recovery algorithm on a trigger CSV
//   sweep     repeat the synthetic experiment across a delta range
//   check     evaluate the sufficient recovery conditions

#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "meds/csv.hpp"
#include "meds/errors.hpp"
#include "meds/harness.hpp"

namespace {

constexpr int kExitDetection = 2;
constexpr int kExitPrecondition = 3;
constexpr int kExitIo = 4;

void print_kv(const char* key, const std::string& value) {
  std::printf("%s=%s\n", key, value.c_str());
}

int cmd_simulate(const std::string& config_path, const std::optional<std::string>& out_override) {
  meds::ExperimentConfig cfg = meds::load_config(config_path);
  if (out_override) cfg.output_dir = *out_override;
  const std::string out_dir = meds::resolve_output_dir(cfg);
  const meds::SyntheticResult result = meds::run_synthetic(cfg);
  meds::emit_synthetic_outputs(cfg, result, out_dir);

  print_kv("status", result.detection_status);
  print_kv("err_meds_percent", meds::format_double(result.err_meds));
  print_kv("err_asdm_percent", meds::format_double(result.err_asdm));
  print_kv("folds_true", std::to_string(result.folds_true));
  print_kv("folds_detected", std::to_string(result.folds_detected));
  print_kv("triggers_meds", std::to_string(result.triggers_meds));
  print_kv("triggers_asdm", std::to_string(result.triggers_asdm));
  print_kv("output_dir", out_dir);
  return result.detection_status == "ok" ? 0 : kExitDetection;
}

int cmd_baseline(const std::string& config_path, const std::optional<std::string>& triggers) {
  meds::ExperimentConfig cfg = meds::load_config(config_path);
  meds::TriggerTimes stream;
  if (triggers) {
    stream = meds::read_triggers_csv(*triggers);
  } else {
    const auto signal = cfg.make_signal();
    stream = meds::encode_asdm(*signal, cfg.asdm(), cfg.duration);
  }
  const meds::SincModel model = meds::classical_decode_model(
      stream.t, cfg.asdm_delta, cfg.asdm_b, cfg.omega, cfg.recovery_iterations);
  const double step = M_PI / (32.0 * cfg.omega);
  const meds::DenseWaveform wave = model.sample(0.0, cfg.duration, step);

  const std::string out_dir = meds::resolve_output_dir(cfg);
  std::filesystem::create_directories(out_dir);
  meds::write_waveform_csv((std::filesystem::path(out_dir) / "gtilde_asdm.csv").string(), wave);
  if (!triggers) {
    // Scoring against the configured signal only makes sense for the
    // self-encoded stream.
    const auto signal = cfg.make_signal();
    const meds::DenseWaveform ref = meds::sample_signal(*signal, 0.0, cfg.duration, step);
    print_kv("err_asdm_percent", meds::format_double(meds::relative_error_percent(ref, wave)));
  }
  print_kv("triggers", std::to_string(stream.event_count()));
  print_kv("output_dir", out_dir);
  return 0;
}

int cmd_recover(const std::string& config_path, const std::string& trigger_csv,
                const std::optional<std::string>& reference_csv) {
  const meds::ExperimentConfig cfg = meds::load_config(config_path);
  const meds::IngestResult res = meds::ingest_and_recover(trigger_csv, reference_csv, cfg);

  const std::string out_dir = meds::resolve_output_dir(cfg);
  std::filesystem::create_directories(out_dir);
  const auto path = [&out_dir](const char* n) {
    return (std::filesystem::path(out_dir) / n).string();
  };
  meds::write_detected_folds_csv(path("folds_est.csv"), res.recovery.report.folds);
  meds::write_waveform_csv(path("gtilde_meds.csv"), res.recovery.wave);

  print_kv("folds_detected", std::to_string(res.recovery.report.folds.size()));
  print_kv("iterations_run", std::to_string(res.recovery.report.iterations_run));
  if (res.err_percent >= 0.0) print_kv("err_percent", meds::format_double(res.err_percent));
  print_kv("output_dir", out_dir);
  return 0;
}

int cmd_sweep(const std::string& config_path, double dmin, double dmax, int count) {
  const meds::ExperimentConfig cfg = meds::load_config(config_path);
  const auto rows = meds::run_delta_sweep(cfg, dmin, dmax, count);
  const std::string out_dir = meds::resolve_output_dir(cfg);
  std::filesystem::create_directories(out_dir);
  const std::string path = (std::filesystem::path(out_dir) / "sweep.csv").string();
  meds::write_sweep_csv(path, rows);
  for (const auto& r : rows) {
    std::printf("delta=%s err_meds=%s err_tau=%s triggers=%zu folds=%zu status=%s\n",
                meds::format_double(r.delta).c_str(), meds::format_double(r.err_meds).c_str(),
                meds::format_double(r.err_tau).c_str(), r.triggers, r.folds, r.status.c_str());
  }
  print_kv("output_csv", path);
  return 0;
}

int cmd_check(const std::string& config_path, std::optional<double> g_sup) {
  const meds::ExperimentConfig cfg = meds::load_config(config_path);
  const double sup = g_sup.value_or(cfg.amplitude);
  const meds::ConditionReport r = meds::check_sufficient_conditions(
      cfg.asdm(), cfg.modulo(), cfg.omega, sup, cfg.recovery_order);
  print_kv("g_sup", meds::format_double(sup));
  print_kv("s1_lhs", meds::format_double(r.s1_lhs));
  print_kv("s1_rhs", meds::format_double(r.s1_rhs));
  print_kv("s1_pass", r.s1_pass ? "1" : "0");
  print_kv("s2_lhs", meds::format_double(r.s2_lhs));
  print_kv("s2_rhs", meds::format_double(r.s2_rhs));
  print_kv("s2_pass", r.s2_pass ? "1" : "0");
  print_kv("kappa", meds::format_double(r.kappa));
  print_kv("delta_bound", meds::format_double(r.delta_bound));
  print_kv("delta_pass", r.delta_pass ? "1" : "0");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"modulo event-driven sampling: encoders, recovery, experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::string> out_override;
  auto* sim = app.add_subcommand("simulate", "run the synthetic encode/decode experiment");
  sim->add_option("-c,--config", config_path, "config file")->required();
  sim->add_option("-o,--output", out_override, "output directory override");

  std::optional<std::string> baseline_triggers;
  auto* base = app.add_subcommand("baseline", "classical decode without fold handling");
  base->add_option("-c,--config", config_path, "config file")->required();
  base->add_option("--triggers", baseline_triggers, "trigger CSV (default: encode the config signal)");

  std::string trigger_csv;
  std::optional<std::string> reference_csv;
  auto* rec = app.add_subcommand("recover", "recover from a trigger CSV");
  rec->add_option("-c,--config", config_path, "config file")->required();
  rec->add_option("--triggers", trigger_csv, "trigger CSV")->required();
  rec->add_option("--reference", reference_csv, "reference waveform CSV");

  double dmin = 0.0, dmax = 0.0;
  int count = 10;
  auto* sweep = app.add_subcommand("sweep", "repeat the experiment across delta values");
  sweep->add_option("-c,--config", config_path, "config file")->required();
  sweep->add_option("--delta-min", dmin, "smallest delta")->required();
  sweep->add_option("--delta-max", dmax, "largest delta")->required();
  sweep->add_option("--count", count, "number of delta values");

  std::optional<double> g_sup;
  auto* check = app.add_subcommand("check", "evaluate the sufficient recovery conditions");
  check->add_option("-c,--config", config_path, "config file")->required();
  check->add_option("--gsup", g_sup, "upper bound on sup|g| (default: config amplitude)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) return cmd_simulate(config_path, out_override);
    if (base->parsed()) return cmd_baseline(config_path, baseline_triggers);
    if (rec->parsed()) return cmd_recover(config_path, trigger_csv, reference_csv);
    if (sweep->parsed()) return cmd_sweep(config_path, dmin, dmax, count);
    if (check->parsed()) return cmd_check(config_path, g_sup);
  } catch (const meds::DetectionError& e) {
    std::fprintf(stderr, "detection failure: %s\n", e.what());
    return kExitDetection;
  } catch (const meds::IoError& e) {
    std::fprintf(stderr, "io failure: %s\n", e.what());
    return kExitIo;
  } catch (const meds::ParameterError& e) {
    std::fprintf(stderr, "config/precondition failure: %s\n", e.what());
    return kExitPrecondition;
  } catch (const meds::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
