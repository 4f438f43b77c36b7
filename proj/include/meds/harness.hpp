#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "meds/asdm.hpp"
#include "meds/modulo.hpp"
#include "meds/recovery.hpp"
#include "meds/signal.hpp"

namespace meds {

enum class SignalKind { Random, Sine };

// Flat key=value experiment configuration. Section prefixes follow the file
// format (modulo.lambda=..., asdm.delta=..., recovery.N=...).
struct ExperimentConfig {
  std::uint64_t seed = 1;
  double omega = 0.0;
  double duration = 0.0;
  double amplitude = 0.0;
  SignalKind kind = SignalKind::Random;
  double sine_phase = 0.0;  // start phase in radians, sine inputs only
  double mod_lambda = 0.0;
  double mod_h = 0.0;
  double asdm_delta = 0.0;
  double asdm_b = 0.0;
  int recovery_order = 3;
  int recovery_iterations = 30;
  // Bandwidth the recovery operates at; 0 means use `omega`. Must be >= the
  // signal content (a tone at exactly omega sits on the band edge, where the
  // sinc-frame iteration degenerates, so sine experiments pass a wider band).
  double recovery_omega = 0.0;
  std::string output_dir = "out";

  double effective_recovery_omega() const {
    return recovery_omega > 0.0 ? recovery_omega : omega;
  }

  ModuloParams modulo() const { return ModuloParams(mod_lambda, mod_h); }
  AsdmParams asdm() const { return AsdmParams(asdm_delta, asdm_b); }
  RecoveryConfig recovery() const;
  std::shared_ptr<const TimeSignal> make_signal() const;

  // Positivity checks plus lambda <= b - 2*delta*omega/pi.
  void validate() const;
};

ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config_text(const std::string& text);

struct SyntheticResult {
  double err_meds = -1.0;
  double err_asdm = -1.0;
  double err_tau = -1.0;          // -1 when fold counts do not match
  std::size_t triggers_meds = 0;
  std::size_t triggers_asdm = 0;
  std::size_t folds_true = 0;
  std::size_t folds_detected = 0;
  double max_fold_error = -1.0;
  double residual_meds = 0.0;     // t-transform self check
  double error_bound = -1.0;
  std::string detection_status = "ok";
  FoldRecord folds_true_record;
  RecoveryReport report;
  ConditionReport conditions;
  TriggerTimes triggers_meds_stream;
  TriggerTimes triggers_asdm_stream;
  DenseWaveform reference;
  DenseWaveform meds_wave;
  DenseWaveform asdm_wave;
  DenseWaveform folded_wave;
};

// Encodes the configured signal with the standalone modulator and with the
// folding front end, decodes both, and gathers every diagnostic the report
// needs. Detection failures are recorded, not fatal.
SyntheticResult run_synthetic(const ExperimentConfig& config);

// Writes the waveform/trigger/fold CSVs and report.txt under out_dir.
void emit_synthetic_outputs(const ExperimentConfig& config, const SyntheticResult& result,
                            const std::string& out_dir);

struct SweepRow {
  double delta = 0.0;
  double err_meds = 0.0;
  double err_tau = 0.0;
  std::size_t triggers = 0;
  std::size_t folds = 0;
  std::string status = "ok";
};

// Error value recorded for rows whose recovery failed outright.
inline constexpr double kSweepFailureError = 1e6;

// Repeats the synthetic experiment across `count` uniformly spaced deltas.
std::vector<SweepRow> run_delta_sweep(const ExperimentConfig& config, double delta_min,
                                      double delta_max, int count);

void write_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows);

struct IngestResult {
  RecoveryResult recovery;
  double err_percent = -1.0;
};

// Runs the recovery algorithm on an externally supplied trigger stream; a
// reference waveform enables the error metric and fixes the output grid.
IngestResult ingest_and_recover(const std::string& trigger_csv,
                                const std::optional<std::string>& reference_csv,
                                const ExperimentConfig& config);

// Resolves the output directory: MEDS_OUTPUT_DIR overrides the config value.
std::string resolve_output_dir(const ExperimentConfig& config);

}  // namespace meds
