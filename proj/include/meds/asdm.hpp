#pragma once

#include <vector>

#include "meds/signal.hpp"

namespace meds {

// Schmitt trigger threshold (integrator units) and feedback level.
struct AsdmParams {
  AsdmParams(double delta, double b);

  double delta;
  double b;
};

// Event times t_0 < t_1 < ... < t_K emitted by the modulator. The simulators
// start the stream at t_0 = 0; ingested streams keep whatever origin the
// file carries.
struct TriggerTimes {
  std::vector<double> t;

  std::size_t size() const { return t.size(); }
  // Number of generated events past the stream origin.
  std::size_t event_count() const { return t.empty() ? 0 : t.size() - 1; }
  double min_gap() const;
  double max_gap() const;
  void validate() const;
};

// Per-trigger sample model: q_k for each interval and the cumulative
// X(t_k) = sum_{m<k} q_m with X(t_0) = 0.
struct SampleSeries {
  std::vector<double> q;  // size K
  std::vector<double> X;  // size K+1
};

// Integrate-and-trigger simulation: y' = input(t) + z(t), z alternating from
// -b, trigger when y crosses +delta (then z = +b) or -delta (then z = -b),
// y_0 = -delta. Fixed-step 4th-order integration with steps split at input
// kinks; crossings bracketed per step and refined to ~1e-12 s. Saturation
// (non-monotone y) is handled by continued integration; an empty stream past
// t_0 is a valid outcome.
TriggerTimes encode_asdm(const TimeSignal& input, const AsdmParams& params, double duration);

// max_k | int_{t_k}^{t_{k+1}} input + (-1)^k b (t_{k+1}-t_k) - (-1)^k 2 delta |,
// evaluated with the signal's own high-accuracy integral; a simulation
// correctness oracle.
double t_transform_residual(const TimeSignal& input, const TriggerTimes& triggers,
                            const AsdmParams& params);

// g_MAX = b - 2*delta*omega/pi, the largest amplitude with guaranteed
// Nyquist-density triggers. Throws when non-positive.
double dynamic_range(const AsdmParams& params, double omega);

// q_k = (-1)^k 2 delta - (-1)^k b (t_{k+1} - t_k) and the cumulative sums.
SampleSeries sample_series(const TriggerTimes& triggers, const AsdmParams& params);

// Fold-free baseline decoder: treats the q_k as local averages of the input
// and runs the iterative sinc-frame reconstruction, sampled over the stream's
// span at 32 points per pi/omega. Density is deliberately not enforced so a
// saturated stream still yields a (large-error) waveform.
DenseWaveform classical_decode(const TriggerTimes& triggers, const AsdmParams& params,
                               double omega, int iterations);

}  // namespace meds
