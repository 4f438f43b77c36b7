#include "meds/asdm.hpp"

#include <algorithm>
#include <cmath>

#include "meds/crossing.hpp"
#include "meds/errors.hpp"
#include "meds/reconstruct.hpp"

namespace meds {

AsdmParams::AsdmParams(double delta_in, double b_in) : delta(delta_in), b(b_in) {
  if (!(delta > 0.0)) throw ParameterError("AsdmParams: delta must be positive");
  if (!(b > 0.0)) throw ParameterError("AsdmParams: b must be positive");
}

void TriggerTimes::validate() const {
  if (t.size() < 2) throw ParameterError("TriggerTimes: need at least two times");
  for (std::size_t i = 1; i < t.size(); ++i) {
    if (!(t[i] > t[i - 1])) throw ParameterError("TriggerTimes: not strictly increasing");
  }
}

double TriggerTimes::min_gap() const {
  validate();
  double m = t[1] - t[0];
  for (std::size_t i = 1; i + 1 < t.size(); ++i) m = std::min(m, t[i + 1] - t[i]);
  return m;
}

double TriggerTimes::max_gap() const {
  validate();
  double m = t[1] - t[0];
  for (std::size_t i = 1; i + 1 < t.size(); ++i) m = std::max(m, t[i + 1] - t[i]);
  return m;
}

namespace {

// Simpson rule over [a, b]; the integrand is smooth inside a step because
// steps never straddle input kinks.
inline double simpson(const TimeSignal& f, double a, double fa, double b, double fb) {
  const double m = 0.5 * (a + b);
  return (b - a) / 6.0 * (fa + 4.0 * f.value(m) + fb);
}

}  // namespace

TriggerTimes encode_asdm(const TimeSignal& input, const AsdmParams& params, double duration) {
  if (!(duration > 0.0)) throw ParameterError("encode_asdm: duration must be positive");

  const double bound = input.amplitude_bound();
  const double omega = input.bandwidth();
  // Step tied to both the signal bandwidth and the shortest expected gap.
  double h = duration / 64.0;
  if (omega > 0.0) h = std::min(h, M_PI / (64.0 * omega));
  h = std::min(h, 2.0 * params.delta / (params.b + bound) / 16.0);

  const auto kink_list = input.kinks();
  std::size_t next_kink = 0;
  constexpr double kTimeTol = 1e-12;
  const double slope_y = bound + params.b;  // |y'| <= |input| + b

  TriggerTimes out;
  out.t.push_back(0.0);
  // Schmitt output starts at -b, so the integrator sees input - z = input + b
  // and rises toward +delta.
  double feed = params.b;
  double target = params.delta;
  double y = -params.delta;
  double t = 0.0;
  double ft = input.value(t);

  while (t < duration) {
    while (next_kink < kink_list.size() && kink_list[next_kink] <= t + kTimeTol) ++next_kink;
    double t_next = std::min(t + h, duration);
    bool ends_at_kink = false;
    if (next_kink < kink_list.size() && kink_list[next_kink] <= t_next) {
      t_next = kink_list[next_kink];
      ends_at_kink = true;
    }
    if (t_next <= t) break;

    // The integrand is left-continuous at a kink inside this step's closure;
    // evaluating one ulp earlier picks the pre-jump branch.
    const double f_next =
        input.value(ends_at_kink ? std::nextafter(t_next, t) : t_next);
    const double y_next = y + simpson(input, t, ft, t_next, f_next) + feed * (t_next - t);

    // y relative to the active threshold, reconstructed inside the step.
    auto y_rel = [&](double s) {
      const double fs = input.value(s);
      return y + (s - t) / 6.0 * (ft + 4.0 * input.value(0.5 * (t + s)) + fs) +
             feed * (s - t) - target;
    };
    auto hit = find_first_zero(y_rel, t, y - target, t_next, y_next - target, slope_y, kTimeTol);
    if (hit && *hit > out.t.back()) {
      const double tau = *hit;
      out.t.push_back(tau);
      y = target;  // snap to the threshold at the trigger instant
      feed = -feed;
      target = -target;
      t = tau;
      ft = input.value(t);
      continue;
    }

    t = t_next;
    ft = ends_at_kink ? input.value(t) : f_next;
    y = y_next;
  }

  return out;
}

double t_transform_residual(const TimeSignal& input, const TriggerTimes& triggers,
                            const AsdmParams& params) {
  triggers.validate();
  double worst = 0.0;
  for (std::size_t k = 0; k + 1 < triggers.t.size(); ++k) {
    const double sgn = (k % 2 == 0) ? 1.0 : -1.0;
    const double gap = triggers.t[k + 1] - triggers.t[k];
    const double lhs = input.integral(triggers.t[k], triggers.t[k + 1]) + sgn * params.b * gap;
    worst = std::max(worst, std::abs(lhs - sgn * 2.0 * params.delta));
  }
  return worst;
}

double dynamic_range(const AsdmParams& params, double omega) {
  if (!(omega > 0.0)) throw ParameterError("dynamic_range: omega must be positive");
  const double g_max = params.b - 2.0 * params.delta * omega / M_PI;
  if (!(g_max > 0.0))
    throw ParameterError("dynamic_range: b <= 2*delta*omega/pi, no positive range");
  return g_max;
}

SampleSeries sample_series(const TriggerTimes& triggers, const AsdmParams& params) {
  triggers.validate();
  const std::size_t K = triggers.t.size() - 1;
  SampleSeries s;
  s.q.resize(K);
  s.X.resize(K + 1);
  s.X[0] = 0.0;
  for (std::size_t k = 0; k < K; ++k) {
    const double sgn = (k % 2 == 0) ? 1.0 : -1.0;
    const double gap = triggers.t[k + 1] - triggers.t[k];
    s.q[k] = sgn * 2.0 * params.delta - sgn * params.b * gap;
    s.X[k + 1] = s.X[k] + s.q[k];
  }
  return s;
}

DenseWaveform classical_decode(const TriggerTimes& triggers, const AsdmParams& params,
                               double omega, int iterations) {
  if (!(omega > 0.0)) throw ParameterError("classical_decode: omega must be positive");
  const SincModel model =
      classical_decode_model(triggers.t, params.delta, params.b, omega, iterations);
  return model.sample(triggers.t.front(), triggers.t.back(), M_PI / (32.0 * omega));
}

}  // namespace meds
