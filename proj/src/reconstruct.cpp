#include "meds/reconstruct.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "meds/errors.hpp"
#include "meds/quadrature.hpp"

namespace meds {

double SincModel::value(double t) const {
  double sum = 0.0;
  for (std::size_t k = 0; k < centers.size(); ++k) {
    if (radius > 0.0 && std::abs(t - centers[k]) > radius) continue;
    sum += coeffs[k] * sinc(omega, t - centers[k]);
  }
  return sum;
}

DenseWaveform SincModel::sample(double t0, double t1, double step) const {
  DenseWaveform w;
  w.t0 = t0;
  w.dt = step;
  const std::size_t n = static_cast<std::size_t>(std::floor((t1 - t0) / step + 1e-9)) + 1;
  w.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) w.samples[i] = value(t0 + step * i);
  return w;
}

namespace {

// B[k][j] = int_{t_k}^{t_{k+1}} sinc_omega(u - s_j) du, the action of the
// interval-integral operator on the sinc frame. Computed once per recovery.
std::vector<double> frame_integral_matrix(std::span<const double> t,
                                          std::span<const double> centers, double omega,
                                          double radius) {
  const std::size_t K = centers.size();
  std::vector<double> B(K * K, 0.0);
  const double panel = 0.5 * M_PI / omega;
  for (std::size_t k = 0; k < K; ++k) {
    const double a = t[k], b = t[k + 1];
    for (std::size_t j = 0; j < K; ++j) {
      const double s = centers[j];
      if (radius > 0.0 && std::min(std::abs(a - s), std::abs(b - s)) > radius &&
          (s < a) == (s < b))
        continue;
      B[k * K + j] =
          integrate_smooth([&](double u) { return sinc(omega, u - s); }, a, b, panel);
    }
  }
  return B;
}

}  // namespace

SincModel local_average_reconstruct(std::span<const double> delta_g,
                                    std::span<const double> triggers, double omega,
                                    const ReconstructOptions& opts, ReconstructTrace* trace) {
  if (!(omega > 0.0)) throw ParameterError("reconstruct: omega must be positive");
  if (triggers.size() < 2) throw ParameterError("reconstruct: need at least two triggers");
  if (delta_g.size() + 1 != triggers.size())
    throw ParameterError("reconstruct: averages/trigger size mismatch");
  if (opts.iterations < 1) throw ParameterError("reconstruct: need at least one iteration");

  double max_gap = 0.0;
  for (std::size_t k = 0; k + 1 < triggers.size(); ++k)
    max_gap = std::max(max_gap, triggers[k + 1] - triggers[k]);
  if (opts.enforce_density && !(max_gap < M_PI / omega))
    throw DensityError("reconstruct: max trigger gap " + std::to_string(max_gap) +
                       " violates pi/omega = " + std::to_string(M_PI / omega));

  const std::size_t K = delta_g.size();
  SincModel model;
  model.omega = omega;
  model.radius = opts.radius_nyquist * M_PI / omega;
  model.centers.resize(K);
  for (std::size_t k = 0; k < K; ++k) model.centers[k] = 0.5 * (triggers[k] + triggers[k + 1]);

  const std::vector<double> B =
      frame_integral_matrix(triggers, model.centers, omega, model.radius);

  // Coefficient-space iteration; the update a_0 - B a_n is exactly the
  // synthesis coefficients of g_0 - S[L g_n].
  std::vector<double> a(delta_g.begin(), delta_g.end());
  std::vector<double> update(K);
  const double sinc_norm = std::sqrt(omega / M_PI);
  double first_norm = 0.0;
  {
    double acc = 0.0;
    for (double v : a) acc += v * v;
    first_norm = std::sqrt(acc) * sinc_norm;
  }

  int n = 0;
  for (; n < opts.iterations; ++n) {
    for (std::size_t k = 0; k < K; ++k) {
      double lk = 0.0;
      const double* row = &B[k * K];
      for (std::size_t j = 0; j < K; ++j) lk += row[j] * a[j];
      update[k] = delta_g[k] - lk;
    }
    double acc = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
      a[k] += update[k];
      acc += update[k] * update[k];
    }
    const double norm = std::sqrt(acc) * sinc_norm;
    if (trace) {
      trace->update_norms.push_back(norm);
      if (trace->keep_snapshots) trace->snapshots.push_back(a);
    }
    if (norm < opts.stop_tol * first_norm) {
      ++n;
      break;
    }
  }
  if (trace) trace->iterations_run = n;

  model.coeffs = std::move(a);
  return model;
}

SincModel classical_decode_model(std::span<const double> triggers, double delta, double b,
                                 double omega, int iterations, ReconstructTrace* trace) {
  if (triggers.size() < 2)
    throw ParameterError("classical decode: need at least two triggers");
  std::vector<double> dg(triggers.size() - 1);
  for (std::size_t k = 0; k < dg.size(); ++k) {
    const double sgn = (k % 2 == 0) ? 1.0 : -1.0;
    dg[k] = sgn * 2.0 * delta - sgn * b * (triggers[k + 1] - triggers[k]);
  }
  ReconstructOptions opts;
  opts.iterations = iterations;
  opts.enforce_density = false;
  return local_average_reconstruct(dg, triggers, omega, opts, trace);
}

}  // namespace meds
