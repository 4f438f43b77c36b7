#include "meds/signal.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "meds/errors.hpp"
#include "meds/quadrature.hpp"

namespace meds {

double sinc(double omega, double t) {
  const double x = omega * t;
  if (std::abs(x) < 1e-8) {
    // sin(x)/x ~ 1 - x^2/6 keeps the removable singularity smooth.
    return omega * (1.0 - x * x / 6.0) / M_PI;
  }
  return std::sin(x) / (M_PI * t);
}

double DenseWaveform::l2_norm() const {
  if (samples.size() < 2) return 0.0;
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
    const double a = samples[i], b = samples[i + 1];
    acc += 0.5 * (a * a + b * b);
  }
  return std::sqrt(acc * dt);
}

namespace detail {
double signed_unit(std::uint64_t word) {
  const double u = static_cast<double>(word >> 11) * 0x1.0p-53;  // [0,1)
  return 2.0 * u - 1.0;
}
}  // namespace detail

namespace {

double golden_refine_abs(const BandlimitedSignal& sig, double lo, double hi) {
  // Golden-section maximisation of |g| on [lo, hi].
  constexpr double kInvPhi = 0.6180339887498949;
  double a = lo, b = hi;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = std::abs(sig.value(c));
  double fd = std::abs(sig.value(d));
  for (int i = 0; i < 80 && (b - a) > 1e-14 * std::max(1.0, std::abs(b)); ++i) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = std::abs(sig.value(c));
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = std::abs(sig.value(d));
    }
  }
  return std::max(fc, fd);
}

double grid_max_abs(const BandlimitedSignal& sig, double t_end, double omega) {
  const double nyq = M_PI / omega;
  const int n = std::max(64, static_cast<int>(std::ceil(64.0 * t_end / nyq)));
  const double step = t_end / n;
  double best = 0.0;
  int best_i = 0;
  for (int i = 0; i <= n; ++i) {
    const double v = std::abs(sig.value(i * step));
    if (v > best) {
      best = v;
      best_i = i;
    }
  }
  const double lo = std::max(0.0, (best_i - 1) * step);
  const double hi = std::min(t_end, (best_i + 1) * step);
  return std::max(best, golden_refine_abs(sig, lo, hi));
}

}  // namespace

BandlimitedSignal::BandlimitedSignal(std::vector<double> coefficients, double omega,
                                     double amplitude, double t_end)
    : coefficients_(std::move(coefficients)),
      omega_(omega),
      amplitude_(amplitude),
      t_end_(t_end),
      max_abs_(0.0) {
  if (!(omega_ > 0.0)) throw ParameterError("BandlimitedSignal: omega must be positive");
  if (!(t_end_ > 0.0)) throw ParameterError("BandlimitedSignal: t_end must be positive");
  if (coefficients_.empty()) throw ParameterError("BandlimitedSignal: empty coefficient list");
  max_abs_ = grid_max_abs(*this, t_end_, omega_);
}

BandlimitedSignal BandlimitedSignal::random(std::uint64_t seed, double omega,
                                            double duration, double amplitude) {
  if (!(omega > 0.0)) throw ParameterError("random signal: omega must be positive");
  if (!(duration > 0.0)) throw ParameterError("random signal: duration must be positive");
  // Coefficient sum truncated to the grid points inside [0, duration]; terms
  // past the window would be invisible to a window-limited trigger stream yet
  // leak irreducible error back into it.
  const double grid = M_PI / omega;
  const std::size_t inside = static_cast<std::size_t>(std::floor(duration / grid)) + 1;
  std::mt19937_64 rng(seed);
  std::vector<double> c(inside);
  for (double& v : c) v = detail::signed_unit(rng());

  BandlimitedSignal raw(c, omega, 1.0, duration);
  const double m = raw.max_abs();
  if (m > 0.0) {
    for (double& v : c) v /= m;
  }
  return BandlimitedSignal(std::move(c), omega, amplitude, duration);
}

double BandlimitedSignal::value(double t) const {
  const double grid = M_PI / omega_;
  double sum = 0.0;
  for (std::size_t n = 0; n < coefficients_.size(); ++n) {
    sum += coefficients_[n] * sinc(omega_, t - static_cast<double>(n) * grid);
  }
  return amplitude_ * sum;
}

double BandlimitedSignal::integral(double a, double b) const {
  const double panel = 0.5 * M_PI / omega_;
  return integrate_smooth([this](double t) { return value(t); }, a, b, panel);
}

double BandlimitedSignal::l2_norm() const {
  const double step = M_PI / omega_ / 32.0;
  return sample_signal(*this, 0.0, t_end_, step).l2_norm();
}

SineSignal::SineSignal(double amplitude, double omega, double tau0)
    : amplitude_(amplitude), omega_(omega), tau0_(tau0) {
  if (!(omega_ > 0.0)) throw ParameterError("SineSignal: omega must be positive");
}

double SineSignal::value(double t) const { return amplitude_ * std::sin(omega_ * (t - tau0_)); }

double SineSignal::integral(double a, double b) const {
  return amplitude_ / omega_ *
         (std::cos(omega_ * (a - tau0_)) - std::cos(omega_ * (b - tau0_)));
}

DenseWaveform sample_signal(const TimeSignal& sig, double t0, double t1, double step) {
  if (!(step > 0.0)) throw ParameterError("sample_signal: step must be positive");
  if (t1 < t0) throw ParameterError("sample_signal: t1 < t0");
  DenseWaveform w;
  w.t0 = t0;
  w.dt = step;
  const std::size_t n = static_cast<std::size_t>(std::floor((t1 - t0) / step + 1e-9)) + 1;
  w.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) w.samples[i] = sig.value(t0 + step * i);
  return w;
}

double relative_error_percent(const DenseWaveform& reference, const DenseWaveform& estimate) {
  if (reference.size() != estimate.size())
    throw ParameterError("relative_error: grid size mismatch");
  const double scale = std::max(1.0, std::abs(reference.t0));
  if (std::abs(reference.t0 - estimate.t0) > 1e-9 * scale ||
      std::abs(reference.dt - estimate.dt) > 1e-12 * std::max(1.0, reference.dt))
    throw ParameterError("relative_error: grid mismatch");
  const double ref_norm = reference.l2_norm();
  if (ref_norm == 0.0) throw ParameterError("relative_error: zero reference norm");
  DenseWaveform diff = reference;
  for (std::size_t i = 0; i < diff.size(); ++i) diff.samples[i] -= estimate.samples[i];
  return 100.0 * diff.l2_norm() / ref_norm;
}

}  // namespace meds
