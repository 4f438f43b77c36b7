#include "meds/modulo.hpp"

#include <algorithm>
#include <cmath>

#include "meds/crossing.hpp"
#include "meds/errors.hpp"

namespace meds {

ModuloParams::ModuloParams(double lambda_in, double h_in) : lambda(lambda_in), h(h_in) {
  if (!(lambda > 0.0)) throw ParameterError("ModuloParams: lambda must be positive");
  if (!(h >= 0.0 && h < lambda)) throw ParameterError("ModuloParams: need 0 <= h < lambda");
}

void FoldRecord::validate() const {
  if (tau.size() != sign.size()) throw ParameterError("FoldRecord: length mismatch");
  for (std::size_t i = 0; i < tau.size(); ++i) {
    if (sign[i] != 1 && sign[i] != -1) throw ParameterError("FoldRecord: sign not in {-1,+1}");
    if (i > 0 && !(tau[i] > tau[i - 1]))
      throw ParameterError("FoldRecord: times not strictly increasing");
  }
}

double ideal_modulo(double value, double lambda) {
  if (!(lambda > 0.0)) throw ParameterError("ideal_modulo: lambda must be positive");
  const double x = value / (2.0 * lambda) + 0.5;
  const double frac = x - std::floor(x);
  return 2.0 * lambda * (frac - 0.5);
}

std::vector<double> residue_samples(const FoldRecord& folds, double lambda_h,
                                    std::span<const double> times) {
  folds.validate();
  std::vector<double> out(times.size(), 0.0);
  for (std::size_t i = 0; i < times.size(); ++i) {
    double acc = 0.0;
    for (std::size_t r = 0; r < folds.size(); ++r) {
      const double dt = times[i] - folds.tau[r];
      if (dt > 0.0) acc += folds.sign[r] * dt;
    }
    out[i] = 2.0 * lambda_h * acc;
  }
  return out;
}

double min_fold_separation(const ModuloParams& params, double omega, double g_sup) {
  if (!(omega > 0.0) || !(g_sup > 0.0))
    throw ParameterError("min_fold_separation: omega and g_sup must be positive");
  return params.h_star() / (omega * g_sup);
}

FoldedWaveform::FoldedWaveform(std::shared_ptr<const TimeSignal> base, FoldRecord folds,
                               ModuloParams params)
    : base_(std::move(base)), folds_(std::move(folds)), params_(params) {
  folds_.validate();
}

double FoldedWaveform::offset(double t) const {
  const double step = 2.0 * params_.lambda_h();
  double c = 0.0;
  for (std::size_t r = 0; r < folds_.size(); ++r) {
    if (folds_.tau[r] <= t) c += folds_.sign[r] * step;
    else break;
  }
  return c;
}

double FoldedWaveform::value(double t) const { return base_->value(t) - offset(t); }

double FoldedWaveform::integral(double a, double b) const {
  if (b < a) return -integral(b, a);
  // Staircase integral in closed form.
  const double step = 2.0 * params_.lambda_h();
  double stair = 0.0;
  for (std::size_t r = 0; r < folds_.size(); ++r) {
    const double tau = folds_.tau[r];
    if (tau >= b) break;
    stair += folds_.sign[r] * step * (b - std::max(a, tau));
  }
  return base_->integral(a, b) - stair;
}

double FoldedWaveform::amplitude_bound() const {
  // |x| <= lambda once folding is active; before the first fold x = g.
  return std::min(base_->amplitude_bound(), params_.lambda);
}

FoldedWaveform encode_hysteresis(std::shared_ptr<const TimeSignal> input,
                                 const ModuloParams& params, double duration) {
  if (!input) throw ParameterError("encode_hysteresis: null input");
  if (!(duration > 0.0)) throw ParameterError("encode_hysteresis: duration must be positive");
  // With h = 0 the post-reset value sits exactly on the opposite threshold
  // and fold times can collapse; the continuous-time simulation needs h > 0.
  if (!(params.h > 0.0)) throw ParameterError("encode_hysteresis: requires h > 0");
  const TimeSignal& g = *input;
  if (!(std::abs(g.value(0.0)) < params.lambda))
    throw ParameterError("encode_hysteresis: |g(0)| >= lambda, start outside range");

  const double omega = g.bandwidth();
  const double scan =
      omega > 0.0 ? M_PI / (128.0 * omega) : duration / 2048.0;
  const double slope = g.slope_bound();
  constexpr double kTimeTol = 1e-12;

  FoldRecord folds;
  const double jump = 2.0 * params.lambda_h();
  double offset = 0.0;
  double t = 0.0;
  double f_up = g.value(0.0) - offset - params.lambda;
  double f_dn = g.value(0.0) - offset + params.lambda;

  while (t < duration) {
    const double t_next = std::min(t + scan, duration);
    const double gv = g.value(t_next);
    const double fu_next = gv - offset - params.lambda;
    const double fd_next = gv - offset + params.lambda;

    auto up_fn = [&](double s) { return g.value(s) - offset - params.lambda; };
    auto dn_fn = [&](double s) { return g.value(s) - offset + params.lambda; };
    auto up = find_first_zero(up_fn, t, f_up, t_next, fu_next, slope, kTimeTol);
    auto dn = find_first_zero(dn_fn, t, f_dn, t_next, fd_next, slope, kTimeTol);

    if (up || dn) {
      double tau;
      int s;
      if (up && (!dn || *up <= *dn)) {
        tau = *up;
        s = 1;
      } else {
        tau = *dn;
        s = -1;
      }
      // Nudge past the fold so the resumed scan sees the post-reset state.
      if (!folds.tau.empty() && tau <= folds.tau.back()) tau = folds.tau.back() + kTimeTol;
      folds.tau.push_back(tau);
      folds.sign.push_back(s);
      offset += s * jump;
      t = tau;
      const double gr = g.value(t);
      f_up = gr - offset - params.lambda;
      f_dn = gr - offset + params.lambda;
      continue;
    }

    t = t_next;
    f_up = fu_next;
    f_dn = fd_next;
  }

  return FoldedWaveform(std::move(input), std::move(folds), params);
}

}  // namespace meds
