#pragma once

#include <span>
#include <vector>

#include "meds/signal.hpp"

namespace meds {

// Bandlimited estimate as a sinc frame over interval midpoints.
struct SincModel {
  std::vector<double> centers;
  std::vector<double> coeffs;
  double omega = 0.0;
  double radius = 0.0;  // sinc terms beyond this distance are dropped

  double value(double t) const;
  DenseWaveform sample(double t0, double t1, double step) const;
};

struct ReconstructOptions {
  int iterations = 30;
  // Early exit when the update norm falls below stop_tol * ||first iterate||.
  double stop_tol = 1e-10;
  // Sinc truncation radius in units of pi/omega.
  double radius_nyquist = 40.0;
  // When set, require max gap < pi/omega before iterating.
  bool enforce_density = true;
};

struct ReconstructTrace {
  std::vector<double> update_norms;
  int iterations_run = 0;
  // Coefficient vector after each iteration, kept only on request.
  bool keep_snapshots = false;
  std::vector<std::vector<double>> snapshots;
};

// Iterative reconstruction from local averages: with S the sinc synthesis
// over midpoints and L the per-interval integral,
//   a_0 = dG,  a_{n+1} = a_n + a_0 - L S a_n,
// run for the configured iterations or until the update norm stalls.
// dG holds the interval integrals of the target over [t_k, t_{k+1}].
SincModel local_average_reconstruct(std::span<const double> delta_g,
                                    std::span<const double> triggers, double omega,
                                    const ReconstructOptions& opts,
                                    ReconstructTrace* trace = nullptr);

// Baseline decoder that treats the trigger stream as fold-free: the local
// averages are the t-transform values q_k. Density enforcement is off so the
// baseline still produces output (and a large error) for saturated streams.
SincModel classical_decode_model(std::span<const double> triggers, double delta, double b,
                                 double omega, int iterations,
                                 ReconstructTrace* trace = nullptr);

}  // namespace meds
