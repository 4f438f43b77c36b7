#pragma once

#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "meds/signal.hpp"

namespace meds {

// Folding nonlinearity parameters. The threshold lambda and hysteresis h
// determine the reduced threshold lambda_h = lambda - h/2 and the minimum
// fold travel h* = min{h, 2*lambda_h}.
struct ModuloParams {
  ModuloParams(double lambda, double h);

  double lambda;
  double h;

  double lambda_h() const { return lambda - 0.5 * h; }
  double h_star() const { return std::min(h, 2.0 * lambda_h()); }
};

// Folding times and signs, strictly increasing in time, signs in {-1,+1}.
struct FoldRecord {
  std::vector<double> tau;
  std::vector<int> sign;

  std::size_t size() const { return tau.size(); }
  void validate() const;
};

// Centered fold: maps value into [-lambda, lambda).
double ideal_modulo(double value, double lambda);

// E(t) = 2*lambda_h * sum_r s_r * max(0, t - tau_r), the integral of the
// residue staircase; exact piecewise-linear closed form.
std::vector<double> residue_samples(const FoldRecord& folds, double lambda_h,
                                    std::span<const double> times);

// Guaranteed lower bound h* / (omega * g_sup) on the gap between folds.
double min_fold_separation(const ModuloParams& params, double omega, double g_sup);

// Output of the hysteresis encoder: x(t) = g(t) - C(t) where C is the
// accumulated staircase of +/- 2*lambda_h steps at the fold times.
class FoldedWaveform final : public TimeSignal {
 public:
  FoldedWaveform(std::shared_ptr<const TimeSignal> base, FoldRecord folds,
                 ModuloParams params);

  double value(double t) const override;
  double integral(double a, double b) const override;
  std::span<const double> kinks() const override { return folds_.tau; }
  double amplitude_bound() const override;
  double bandwidth() const override { return base_->bandwidth(); }
  double slope_bound() const override { return base_->slope_bound(); }

  const FoldRecord& folds() const { return folds_; }
  const TimeSignal& base() const { return *base_; }
  const ModuloParams& params() const { return params_; }

  // Staircase offset C(t); right-continuous at fold times.
  double offset(double t) const;

 private:
  std::shared_ptr<const TimeSignal> base_;
  FoldRecord folds_;
  ModuloParams params_;
};

// Runs the crossing rule over [0, duration]: starting with offset C = 0,
// a fold is recorded whenever g - C reaches +lambda (sign +1, C += 2*lambda_h)
// or -lambda (sign -1, C -= 2*lambda_h). Crossings are located by bracketing
// on a dense scan grid and refined to ~1e-12 s. Requires |g(0)| < lambda.
FoldedWaveform encode_hysteresis(std::shared_ptr<const TimeSignal> input,
                                 const ModuloParams& params, double duration);

}  // namespace meds
