#pragma once

#include <string>
#include <vector>

#include "meds/asdm.hpp"
#include "meds/modulo.hpp"
#include "meds/recovery.hpp"
#include "meds/signal.hpp"

namespace meds {

// All files are plain CSV with LF line endings and %.17g floats, so numeric
// round-trips are exact.

std::string format_double(double v);

// header `t,value`
void write_waveform_csv(const std::string& path, const DenseWaveform& w);
DenseWaveform read_waveform_csv(const std::string& path);

// header `k,t`
void write_triggers_csv(const std::string& path, const TriggerTimes& t);
TriggerTimes read_triggers_csv(const std::string& path);

// header `tau,s`
void write_folds_csv(const std::string& path, const FoldRecord& folds);
FoldRecord read_folds_csv(const std::string& path);

// header `tau_est,s_est,k_m,k_M`
void write_detected_folds_csv(const std::string& path, const std::vector<DetectedFold>& folds);

}  // namespace meds
