#pragma once

#include <optional>
#include <span>
#include <vector>

#include "meds/asdm.hpp"
#include "meds/modulo.hpp"
#include "meds/reconstruct.hpp"
#include "meds/signal.hpp"

namespace meds {

struct RecoveryConfig {
  int order = 3;           // difference order N >= 2
  int iterations = 30;     // local-average iterations
  double stop_tol = 1e-10; // early-exit threshold, relative to first iterate
  double grid_step = 0.0;  // dense output step; 0 -> pi/(32*omega)
  double radius_nyquist = 40.0;
};

// Nonuniform difference of order N over a trigger-aligned sequence:
//   D^N f[k] = (D^{N-1} f[k+1] - D^{N-1} f[k]) / (t_{k+N} - t_k),  D^0 = f.
// Returns a sequence shorter by N.
std::vector<double> nonuniform_diff(std::span<const double> values,
                                    const TriggerTimes& triggers, int order);

// mu/beta sequences for pivot l: the order-2 base case has a single spike at
// k = l-1 (mu) and k = l (beta) of height 1/(t_{k+2}-t_k); higher orders run
// the same recursion as the difference operator. Entries stored for
// k in [l-N+1, l]; anything else is identically zero.
struct MuBetaTable {
  int pivot = 0;
  int order = 0;
  int k_begin = 0;
  std::vector<double> mu;
  std::vector<double> beta;

  double mu_at(int k) const;
  double beta_at(int k) const;
};

MuBetaTable mu_beta(const TriggerTimes& triggers, int pivot, int order);

// Time-varying detection threshold
//   Psi^N[k] = lambda_h * min{phi0[k+N-1], phi0[k+N-2], phi1[k-1], phi1[k]},
// aligned with the D^N-filtered sequence. Indices whose phi would need
// triggers outside the stream get +inf and are never flagged.
std::vector<double> threshold_psi(const TriggerTimes& triggers, int order, double lambda_h);

struct FoldWindow {
  int k_m = 0;
  int k_M = 0;
};

struct DetectedFold {
  int k_m = 0;
  int k_M = 0;
  double tau = 0.0;
  int sign = 0;
};

// Sequential scan for |X^N[k]| >= Psi[k]: the first window starts at the
// first flagged index, extends at most N-1 past it, and subsequent windows
// restart strictly after the previous one. A window gap outside
// {N-3, N-2, N-1} throws DetectionError.
std::vector<FoldWindow> detect_folds(std::span<const double> filtered,
                                     std::span<const double> psi, int order);

// Sign and fold-time estimate from a window: s = -sign(X^N[k_m]) and the
// midpoint / right-endpoint casework on k_M - k_m.
DetectedFold estimate_fold(const FoldWindow& window, const TriggerTimes& triggers,
                           std::span<const double> filtered, int order);

// E(t_k) = 2*lambda_h * sum_r s_r * max(0, t_k - tau_r) for estimated folds.
std::vector<double> estimate_residue(std::span<const DetectedFold> folds,
                                     const TriggerTimes& triggers, double lambda_h);

// A priori bound on |D^N G(t_k)| for G the integral of a signal
// bandlimited to omega with sup-norm g_sup:
//   (1/(omega N!)) * ((T_max/T_min) * omega * e)^N * g_sup.
double bound_dng(double omega, int order, double t_min, double t_max, double g_sup);

// Reconstruction error bound after n iterations with R detected folds:
//   4*lambda_h*2*delta*R*sqrt(omega*pi)/(pi*(b-lambda)-2*delta*omega)
//     + (2*delta*omega/(pi*(b-lambda)))^{n+1} * g_norm.
double final_error_bound(double lambda_h, double delta, int folds, double omega, double b,
                         double lambda, int iterations, double g_norm);

struct ConditionReport {
  double s1_lhs = 0.0, s1_rhs = 0.0;
  bool s1_pass = false;
  double s2_lhs = 0.0, s2_rhs = 0.0;
  bool s2_pass = false;
  double kappa = 0.0;
  double delta_bound = 0.0;
  bool delta_pass = false;
};

// Sufficient recovery conditions S1/S2 and the single delta bound with
//   kappa = min{1, lambda_h / (e^2 h* C^(2+1/(N-1)))},  C = (b+lambda)/(b-lambda).
// An upper bound on sup|g| is enough.
ConditionReport check_sufficient_conditions(const AsdmParams& asdm, const ModuloParams& mod,
                                            double omega, double g_sup, int order);

struct RecoveryReport {
  std::vector<DetectedFold> folds;
  std::vector<double> update_norms;
  std::vector<double> err_trace_percent;  // per iteration, when a reference is given
  int iterations_run = 0;
  double err_percent = -1.0;   // vs reference; -1 when no reference
  double error_bound = -1.0;   // Prop-style bound with detected R
  double t_max = 0.0;
  double t_min = 0.0;
};

struct RecoveryResult {
  SincModel model;
  DenseWaveform wave;
  RecoveryReport report;
};

// Full pipeline on a trigger stream: X from q, D^N filter, threshold,
// detect/estimate folds, residue correction, local-average iteration.
// With no detections the pipeline reduces to the classical decoder.
// The reference, when given, fixes the output grid and enables Err.
RecoveryResult recover(const TriggerTimes& triggers, const AsdmParams& asdm,
                       const ModuloParams& mod, double omega, const RecoveryConfig& config,
                       const DenseWaveform* reference = nullptr);

}  // namespace meds
