#include "meds/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "meds/csv.hpp"
#include "meds/errors.hpp"

namespace meds {

RecoveryConfig ExperimentConfig::recovery() const {
  RecoveryConfig rc;
  rc.order = recovery_order;
  rc.iterations = recovery_iterations;
  return rc;
}

std::shared_ptr<const TimeSignal> ExperimentConfig::make_signal() const {
  if (kind == SignalKind::Sine) {
    // Start phase chosen by the caller; t=0 must sit inside (-lambda, lambda).
    return std::make_shared<SineSignal>(amplitude, omega, -sine_phase / omega);
  }
  return std::make_shared<BandlimitedSignal>(
      BandlimitedSignal::random(seed, omega, duration, amplitude));
}

void ExperimentConfig::validate() const {
  if (!(omega > 0.0)) throw ParameterError("config: omega must be positive");
  if (!(duration > 0.0)) throw ParameterError("config: duration must be positive");
  if (!(amplitude >= 0.0)) throw ParameterError("config: amplitude must be non-negative");
  modulo();
  asdm();
  if (recovery_order < 2) throw ParameterError("config: recovery.N must be >= 2");
  if (recovery_iterations < 1) throw ParameterError("config: recovery.iterations must be >= 1");
  if (recovery_omega < 0.0) throw ParameterError("config: recovery.omega must be non-negative");
  if (!(mod_lambda <= asdm_b - 2.0 * asdm_delta * effective_recovery_omega() / M_PI))
    throw ParameterError("config: lambda must satisfy lambda <= b - 2*delta*omega/pi");
}

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  const auto b = s.find_last_not_of(" \t\r");
  if (a == std::string::npos) return "";
  return s.substr(a, b - a + 1);
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) throw IoError("config line without '=': " + stripped);
    kv[trim(stripped.substr(0, eq))] = trim(stripped.substr(eq + 1));
  }

  ExperimentConfig cfg;
  auto take = [&kv](const std::string& key) -> std::optional<std::string> {
    auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    std::string v = it->second;
    kv.erase(it);
    return v;
  };
  auto need = [&take](const std::string& key) {
    auto v = take(key);
    if (!v) throw IoError("config missing required key: " + key);
    return *v;
  };
  auto to_double = [](const std::string& key, const std::string& v) {
    try {
      std::size_t pos = 0;
      const double d = std::stod(v, &pos);
      if (pos != v.size()) throw std::invalid_argument(v);
      return d;
    } catch (const std::exception&) {
      throw IoError("config: bad number for " + key + ": '" + v + "'");
    }
  };

  if (auto v = take("seed")) cfg.seed = std::strtoull(v->c_str(), nullptr, 10);
  cfg.omega = to_double("omega", need("omega"));
  cfg.duration = to_double("duration", need("duration"));
  cfg.amplitude = to_double("amplitude", need("amplitude"));
  if (auto v = take("signal.kind")) {
    if (*v == "random") cfg.kind = SignalKind::Random;
    else if (*v == "sine") cfg.kind = SignalKind::Sine;
    else throw IoError("config: signal.kind must be 'random' or 'sine'");
  }
  if (auto v = take("signal.phase")) cfg.sine_phase = to_double("signal.phase", *v);
  cfg.mod_lambda = to_double("modulo.lambda", need("modulo.lambda"));
  cfg.mod_h = to_double("modulo.h", need("modulo.h"));
  cfg.asdm_delta = to_double("asdm.delta", need("asdm.delta"));
  cfg.asdm_b = to_double("asdm.b", need("asdm.b"));
  if (auto v = take("recovery.N")) cfg.recovery_order = static_cast<int>(to_double("recovery.N", *v));
  if (auto v = take("recovery.iterations"))
    cfg.recovery_iterations = static_cast<int>(to_double("recovery.iterations", *v));
  if (auto v = take("recovery.omega")) cfg.recovery_omega = to_double("recovery.omega", *v);
  if (auto v = take("output_dir")) cfg.output_dir = *v;

  if (!kv.empty()) throw IoError("config: unknown key '" + kv.begin()->first + "'");
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

std::string resolve_output_dir(const ExperimentConfig& config) {
  if (const char* env = std::getenv("MEDS_OUTPUT_DIR"); env != nullptr && env[0] != '\0')
    return env;
  return config.output_dir;
}

SyntheticResult run_synthetic(const ExperimentConfig& config) {
  config.validate();
  SyntheticResult res;
  const auto signal = config.make_signal();
  const ModuloParams mod = config.modulo();
  const AsdmParams asdm = config.asdm();

  const double step = M_PI / (32.0 * config.omega);
  res.reference = sample_signal(*signal, 0.0, config.duration, step);

  const double omega_rec = config.effective_recovery_omega();

  // Standalone modulator baseline.
  res.triggers_asdm_stream = encode_asdm(*signal, asdm, config.duration);
  res.triggers_asdm = res.triggers_asdm_stream.event_count();
  if (res.triggers_asdm_stream.t.size() >= 2) {
    const SincModel base =
        classical_decode_model(res.triggers_asdm_stream.t, asdm.delta, asdm.b, omega_rec,
                               config.recovery_iterations);
    res.asdm_wave = base.sample(0.0, config.duration, step);
    res.err_asdm = relative_error_percent(res.reference, res.asdm_wave);
  } else {
    // Fully saturated stream: score the zero reconstruction.
    res.asdm_wave = res.reference;
    for (double& v : res.asdm_wave.samples) v = 0.0;
    res.err_asdm = 100.0;
  }

  // Folding front end plus the same modulator.
  const FoldedWaveform folded = encode_hysteresis(signal, mod, config.duration);
  res.folds_true_record = folded.folds();
  res.folds_true = res.folds_true_record.size();
  res.folded_wave = sample_signal(folded, 0.0, config.duration, step);
  res.triggers_meds_stream = encode_asdm(folded, asdm, config.duration);
  res.triggers_meds = res.triggers_meds_stream.event_count();
  res.residual_meds = t_transform_residual(folded, res.triggers_meds_stream, asdm);
  res.conditions = check_sufficient_conditions(asdm, mod, omega_rec,
                                               signal->amplitude_bound(),
                                               config.recovery_order);

  try {
    RecoveryResult rec = recover(res.triggers_meds_stream, asdm, mod, omega_rec,
                                 config.recovery(), &res.reference);
    res.err_meds = rec.report.err_percent;
    res.folds_detected = rec.report.folds.size();
    res.meds_wave = rec.wave;
    res.report = std::move(rec.report);

    if (res.folds_detected == res.folds_true && res.folds_true > 0) {
      double num = 0.0, den = 0.0, worst = 0.0;
      for (std::size_t r = 0; r < res.folds_true; ++r) {
        const double d = res.folds_true_record.tau[r] - res.report.folds[r].tau;
        num += d * d;
        den += res.folds_true_record.tau[r] * res.folds_true_record.tau[r];
        worst = std::max(worst, std::abs(d));
      }
      res.err_tau = den > 0.0 ? 100.0 * std::sqrt(num / den) : -1.0;
      res.max_fold_error = worst;
    }
    res.error_bound = res.report.error_bound;
  } catch (const DetectionError& e) {
    res.detection_status = std::string("detection_failure: ") + e.what();
    res.err_meds = -1.0;
  } catch (const DensityError& e) {
    res.detection_status = std::string("density_failure: ") + e.what();
    res.err_meds = -1.0;
  }

  return res;
}

namespace {

void write_report(const std::string& path, const ExperimentConfig& cfg,
                  const SyntheticResult& r) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  auto kv = [&out](const std::string& k, const std::string& v) { out << k << '=' << v << '\n'; };
  auto kvd = [&](const std::string& k, double v) { kv(k, format_double(v)); };

  kv("signal.kind", cfg.kind == SignalKind::Sine ? "sine" : "random");
  kv("seed", std::to_string(cfg.seed));
  kvd("omega", cfg.omega);
  kvd("duration", cfg.duration);
  kvd("amplitude", cfg.amplitude);
  kvd("modulo.lambda", cfg.mod_lambda);
  kvd("modulo.h", cfg.mod_h);
  kvd("asdm.delta", cfg.asdm_delta);
  kvd("asdm.b", cfg.asdm_b);
  kv("recovery.N", std::to_string(cfg.recovery_order));
  kv("recovery.iterations", std::to_string(cfg.recovery_iterations));
  out << '\n';
  kv("result.status", r.detection_status);
  kvd("result.err_meds_percent", r.err_meds);
  kvd("result.err_asdm_percent", r.err_asdm);
  kvd("result.err_tau_percent", r.err_tau);
  kv("result.triggers_meds", std::to_string(r.triggers_meds));
  kv("result.triggers_asdm", std::to_string(r.triggers_asdm));
  kv("result.folds_true", std::to_string(r.folds_true));
  kv("result.folds_detected", std::to_string(r.folds_detected));
  kvd("result.max_fold_time_error", r.max_fold_error);
  kvd("result.t_transform_residual", r.residual_meds);
  kvd("result.error_bound_l2", r.error_bound);
  kv("result.iterations_run", std::to_string(r.report.iterations_run));
  out << '\n';
  kvd("conditions.s1_lhs", r.conditions.s1_lhs);
  kvd("conditions.s1_rhs", r.conditions.s1_rhs);
  kv("conditions.s1_pass", r.conditions.s1_pass ? "1" : "0");
  kvd("conditions.s2_lhs", r.conditions.s2_lhs);
  kvd("conditions.s2_rhs", r.conditions.s2_rhs);
  kv("conditions.s2_pass", r.conditions.s2_pass ? "1" : "0");
  kvd("conditions.kappa", r.conditions.kappa);
  kvd("conditions.delta_bound", r.conditions.delta_bound);
  kv("conditions.delta_pass", r.conditions.delta_pass ? "1" : "0");
}

void write_iterations_csv(const std::string& path, const RecoveryReport& rep) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << "iter,update_norm,err_percent\n";
  for (std::size_t i = 0; i < rep.update_norms.size(); ++i) {
    out << (i + 1) << ',' << format_double(rep.update_norms[i]) << ',';
    if (i < rep.err_trace_percent.size()) out << format_double(rep.err_trace_percent[i]);
    else out << "nan";
    out << '\n';
  }
}

}  // namespace

void emit_synthetic_outputs(const ExperimentConfig& config, const SyntheticResult& result,
                            const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  const auto p = [&out_dir](const char* name) {
    return (std::filesystem::path(out_dir) / name).string();
  };
  write_waveform_csv(p("g.csv"), result.reference);
  write_waveform_csv(p("x.csv"), result.folded_wave);
  if (!result.meds_wave.samples.empty()) write_waveform_csv(p("gtilde_meds.csv"), result.meds_wave);
  if (!result.asdm_wave.samples.empty()) write_waveform_csv(p("gtilde_asdm.csv"), result.asdm_wave);
  write_triggers_csv(p("triggers_meds.csv"), result.triggers_meds_stream);
  if (result.triggers_asdm_stream.t.size() >= 2)
    write_triggers_csv(p("triggers_asdm.csv"), result.triggers_asdm_stream);
  write_folds_csv(p("folds_true.csv"), result.folds_true_record);
  write_detected_folds_csv(p("folds_est.csv"), result.report.folds);
  write_iterations_csv(p("iterations_meds.csv"), result.report);
  write_report(p("report.txt"), config, result);
}

std::vector<SweepRow> run_delta_sweep(const ExperimentConfig& config, double delta_min,
                                      double delta_max, int count) {
  if (!(delta_min > 0.0) || !(delta_max > delta_min))
    throw ParameterError("sweep: need 0 < delta_min < delta_max");
  if (count < 2) throw ParameterError("sweep: need at least two points");

  std::vector<SweepRow> rows;
  for (int i = 0; i < count; ++i) {
    const double delta =
        delta_min + (delta_max - delta_min) * static_cast<double>(i) / (count - 1);
    ExperimentConfig cfg = config;
    cfg.asdm_delta = delta;
    SweepRow row;
    row.delta = delta;
    try {
      cfg.validate();
      const SyntheticResult r = run_synthetic(cfg);
      row.triggers = r.triggers_meds;
      row.folds = r.folds_detected;
      if (r.detection_status != "ok" || r.err_meds < 0.0) {
        row.status = "detection_failure";
        row.err_meds = kSweepFailureError;
        row.err_tau = kSweepFailureError;
      } else {
        row.err_meds = r.err_meds;
        row.err_tau = r.err_tau >= 0.0 ? r.err_tau : kSweepFailureError;
        if (r.err_tau < 0.0) row.status = "fold_count_mismatch";
      }
    } catch (const Error& e) {
      row.status = std::string("error: ") + e.what();
      row.err_meds = kSweepFailureError;
      row.err_tau = kSweepFailureError;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << "delta,err_meds,err_tau,triggers,folds,status\n";
  for (const auto& r : rows) {
    out << format_double(r.delta) << ',' << format_double(r.err_meds) << ','
        << format_double(r.err_tau) << ',' << r.triggers << ',' << r.folds << ',' << r.status
        << '\n';
  }
}

IngestResult ingest_and_recover(const std::string& trigger_csv,
                                const std::optional<std::string>& reference_csv,
                                const ExperimentConfig& config) {
  config.validate();
  const TriggerTimes triggers = read_triggers_csv(trigger_csv);
  std::optional<DenseWaveform> reference;
  if (reference_csv) reference = read_waveform_csv(*reference_csv);

  IngestResult res;
  res.recovery = recover(triggers, config.asdm(), config.modulo(),
                         config.effective_recovery_omega(), config.recovery(),
                         reference ? &*reference : nullptr);
  res.err_percent = res.recovery.report.err_percent;
  return res;
}

}  // namespace meds
