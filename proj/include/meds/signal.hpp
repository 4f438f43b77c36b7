#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace meds {

// sinc_w(t) = sin(w*t) / (pi*t), continuously extended to w/pi at t = 0.
double sinc(double omega, double t);

// Continuous-time input seen by the encoders. Implementations provide point
// evaluation, a high-accuracy running integral, and the locations of any
// jump discontinuities so integrators can split there.
class TimeSignal {
 public:
  virtual ~TimeSignal() = default;

  virtual double value(double t) const = 0;
  virtual double integral(double a, double b) const = 0;

  // Jump locations, strictly increasing. Empty for smooth signals.
  virtual std::span<const double> kinks() const { return {}; }

  // sup |value| over the simulation window.
  virtual double amplitude_bound() const = 0;

  // Oscillation scale in rad/s; 0 when unknown/unbounded slope content.
  virtual double bandwidth() const = 0;

  // Lipschitz bound on |d value/dt| between kinks.
  virtual double slope_bound() const { return bandwidth() * amplitude_bound(); }
};

// Uniformly sampled waveform, used for norm computation and reporting.
// Never the authoritative signal definition.
struct DenseWaveform {
  double t0 = 0.0;
  double dt = 0.0;
  std::vector<double> samples;

  std::size_t size() const { return samples.size(); }
  double time_at(std::size_t i) const { return t0 + dt * static_cast<double>(i); }

  // Trapezoidal L2 norm over the grid.
  double l2_norm() const;
};

// Finite sinc series
//   g(t) = A * sum_n c_n sinc_omega(t - n*pi/omega),  n = 0..M-1
// supported on [0, t_end] for the purposes of the experiments.
class BandlimitedSignal final : public TimeSignal {
 public:
  BandlimitedSignal(std::vector<double> coefficients, double omega, double amplitude,
                    double t_end);

  // Coefficients drawn uniformly from [-1,1] with the given seed for the
  // grid points inside [0, duration], then rescaled so max_t |g(t)| over
  // [0, duration] equals `amplitude`.
  static BandlimitedSignal random(std::uint64_t seed, double omega, double duration,
                                  double amplitude);

  double value(double t) const override;
  double integral(double a, double b) const override;
  double amplitude_bound() const override { return max_abs_; }
  double bandwidth() const override { return omega_; }

  double omega() const { return omega_; }
  double amplitude() const { return amplitude_; }
  double t_end() const { return t_end_; }
  const std::vector<double>& coefficients() const { return coefficients_; }

  // Grid maximum of |g| over [0, t_end] at 64 points per pi/omega,
  // refined by golden-section search around the grid argmax.
  double max_abs() const { return max_abs_; }

  // Trapezoidal L2 norm over [0, t_end] at 32 points per pi/omega.
  double l2_norm() const;

 private:
  std::vector<double> coefficients_;
  double omega_;
  double amplitude_;
  double t_end_;
  double max_abs_;
};

// a * sin(omega * (t - tau0)); exact integral, used for the sine experiments.
class SineSignal final : public TimeSignal {
 public:
  SineSignal(double amplitude, double omega, double tau0 = 0.0);

  double value(double t) const override;
  double integral(double a, double b) const override;
  double amplitude_bound() const override { return std::abs(amplitude_); }
  double bandwidth() const override { return omega_; }

 private:
  double amplitude_;
  double omega_;
  double tau0_;
};

// Samples a signal on [t0, t1] with the given step (last point <= t1).
DenseWaveform sample_signal(const TimeSignal& sig, double t0, double t1, double step);

// 100 * ||ref - est||_L2 / ||ref||_L2 on identical grids.
double relative_error_percent(const DenseWaveform& reference, const DenseWaveform& estimate);

namespace detail {
// 53-bit uniform double in [-1, 1) from a raw 64-bit word; keeps coefficient
// draws identical across standard libraries.
double signed_unit(std::uint64_t word);
}  // namespace detail

}  // namespace meds
