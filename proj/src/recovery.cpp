#include "meds/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "meds/errors.hpp"

namespace meds {

std::vector<double> nonuniform_diff(std::span<const double> values,
                                    const TriggerTimes& triggers, int order) {
  if (order < 0) throw ParameterError("nonuniform_diff: order must be non-negative");
  triggers.validate();
  if (values.size() != triggers.t.size())
    throw ParameterError("nonuniform_diff: sequence not aligned with triggers");
  if (values.size() <= static_cast<std::size_t>(order))
    throw ParameterError("nonuniform_diff: sequence too short for order");

  std::vector<double> work(values.begin(), values.end());
  const auto& t = triggers.t;
  for (int m = 1; m <= order; ++m) {
    const std::size_t len = work.size() - 1;
    for (std::size_t k = 0; k < len; ++k) {
      work[k] = (work[k + 1] - work[k]) / (t[k + m] - t[k]);
    }
    work.resize(len);
  }
  return work;
}

double MuBetaTable::mu_at(int k) const {
  const int i = k - k_begin;
  if (i < 0 || i >= static_cast<int>(mu.size())) return 0.0;
  return mu[i];
}

double MuBetaTable::beta_at(int k) const {
  const int i = k - k_begin;
  if (i < 0 || i >= static_cast<int>(beta.size())) return 0.0;
  return beta[i];
}

MuBetaTable mu_beta(const TriggerTimes& triggers, int pivot, int order) {
  if (order < 2) throw ParameterError("mu_beta: order must be >= 2");
  triggers.validate();
  const int K = static_cast<int>(triggers.t.size()) - 1;
  // The recursion touches t indices pivot-order+1 .. pivot+order.
  if (pivot - order + 1 < 0 || pivot + order > K)
    throw ParameterError("mu_beta: pivot " + std::to_string(pivot) +
                         " too close to the stream boundary for order " +
                         std::to_string(order));

  MuBetaTable tab;
  tab.pivot = pivot;
  tab.order = order;
  tab.k_begin = pivot - order + 1;
  const int len = order;  // k in [pivot-order+1, pivot]
  tab.mu.assign(len, 0.0);
  tab.beta.assign(len, 0.0);

  const auto& t = triggers.t;
  // Order-2 base case: single spikes at k = pivot-1 and k = pivot.
  auto base_at = [&](int k) { return 1.0 / (t[k + 2] - t[k]); };
  std::vector<double> mu(len, 0.0), beta(len, 0.0);
  {
    const int i_mu = (pivot - 1) - tab.k_begin;
    const int i_beta = pivot - tab.k_begin;
    if (i_mu >= 0 && i_mu < len) mu[i_mu] = base_at(pivot - 1);
    if (i_beta >= 0 && i_beta < len) beta[i_beta] = base_at(pivot);
  }
  for (int m = 2; m < order; ++m) {
    std::vector<double> mu_next(len, 0.0), beta_next(len, 0.0);
    for (int i = 0; i < len; ++i) {
      const int k = tab.k_begin + i;
      const double hi_mu = (i + 1 < len) ? mu[i + 1] : 0.0;
      const double hi_beta = (i + 1 < len) ? beta[i + 1] : 0.0;
      const double span = t[k + m + 1] - t[k];
      mu_next[i] = (hi_mu - mu[i]) / span;
      beta_next[i] = (hi_beta - beta[i]) / span;
    }
    mu = std::move(mu_next);
    beta = std::move(beta_next);
  }
  tab.mu = std::move(mu);
  tab.beta = std::move(beta);
  return tab;
}

namespace {

// phi0/phi1 built from the mu/beta edge and near-edge magnitudes at pivot l.
double phi0(const MuBetaTable& tab) {
  const int l = tab.pivot, N = tab.order;
  const double m1 = std::abs(tab.mu_at(l - N + 1));
  const double b2 = std::abs(tab.beta_at(l - N + 2));
  const double m2 = std::abs(tab.mu_at(l - N + 2));
  return m1 * b2 / (m1 + b2 + m2);
}

double phi1(const MuBetaTable& tab) {
  const int l = tab.pivot;
  const double m = std::abs(tab.mu_at(l - 1));
  const double b = std::abs(tab.beta_at(l));
  const double b1 = std::abs(tab.beta_at(l - 1));
  return m * b / (m + b + b1);
}

}  // namespace

std::vector<double> threshold_psi(const TriggerTimes& triggers, int order, double lambda_h) {
  if (order < 2) throw ParameterError("threshold_psi: order must be >= 2");
  if (!(lambda_h > 0.0)) throw ParameterError("threshold_psi: lambda_h must be positive");
  triggers.validate();
  const int K = static_cast<int>(triggers.t.size()) - 1;
  const int len = K - order + 1;  // aligned with D^N X
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> psi(std::max(len, 0), inf);

  // phi_{.,l} exists for l-order+1 >= 0 and l+order <= K; cache per pivot.
  const int l_lo = order - 1;
  const int l_hi = K - order;
  std::vector<double> phi0_at(std::max(l_hi - l_lo + 1, 0));
  std::vector<double> phi1_at(std::max(l_hi - l_lo + 1, 0));
  for (int l = l_lo; l <= l_hi; ++l) {
    const MuBetaTable tab = mu_beta(triggers, l, order);
    phi0_at[l - l_lo] = phi0(tab);
    phi1_at[l - l_lo] = phi1(tab);
  }
  // A window whose phi would need triggers outside the stream cannot be
  // certified; those indices stay at +inf and are never flagged.
  for (int k = 0; k < len; ++k) {
    if (k - 1 < l_lo || k + order - 1 > l_hi) continue;
    const double m =
        std::min(std::min(phi0_at[k + order - 1 - l_lo], phi0_at[k + order - 2 - l_lo]),
                 std::min(phi1_at[k - 1 - l_lo], phi1_at[k - l_lo]));
    psi[k] = lambda_h * m;
  }
  return psi;
}

std::vector<FoldWindow> detect_folds(std::span<const double> filtered,
                                     std::span<const double> psi, int order) {
  if (filtered.size() != psi.size())
    throw ParameterError("detect_folds: sequences not aligned");
  std::vector<FoldWindow> out;
  const int n = static_cast<int>(filtered.size());
  auto flagged = [&](int k) { return std::abs(filtered[k]) >= psi[k]; };

  int k = 0;
  while (k < n) {
    if (!flagged(k)) {
      ++k;
      continue;
    }
    FoldWindow w;
    w.k_m = k;
    w.k_M = k;
    for (int j = k; j < std::min(n, k + order); ++j) {
      if (flagged(j)) w.k_M = j;
    }
    const int gap = w.k_M - w.k_m;
    if (gap < order - 3 || gap > order - 1)
      throw DetectionError("detect_folds: window [" + std::to_string(w.k_m) + "," +
                           std::to_string(w.k_M) + "] has gap " + std::to_string(gap) +
                           " outside {N-3, N-2, N-1}; data violates the recovery conditions");
    out.push_back(w);
    k = w.k_M + 1;
  }
  return out;
}

DetectedFold estimate_fold(const FoldWindow& window, const TriggerTimes& triggers,
                           std::span<const double> filtered, int order) {
  const int gap = window.k_M - window.k_m;
  if (gap < order - 3 || gap > order - 1)
    throw DetectionError("estimate_fold: invalid window gap " + std::to_string(gap));
  const double x = filtered[window.k_m];
  if (x == 0.0)
    throw DetectionError("estimate_fold: zero filtered sample at k_m contradicts threshold");

  DetectedFold f;
  f.k_m = window.k_m;
  f.k_M = window.k_M;
  f.sign = x < 0.0 ? 1 : -1;  // -sign(X^N[k_m])

  const auto& t = triggers.t;
  if (gap == order - 1) {
    f.tau = 0.5 * (t[window.k_M] + t[window.k_M + 1]);
  } else if (gap == order - 2) {
    f.tau = t[window.k_M + 1];
  } else {
    f.tau = 0.5 * (t[window.k_M + 1] + t[window.k_M + 2]);
  }
  return f;
}

std::vector<double> estimate_residue(std::span<const DetectedFold> folds,
                                     const TriggerTimes& triggers, double lambda_h) {
  std::vector<double> out(triggers.t.size(), 0.0);
  for (std::size_t i = 0; i < triggers.t.size(); ++i) {
    double acc = 0.0;
    for (const auto& f : folds) {
      const double dt = triggers.t[i] - f.tau;
      if (dt > 0.0) acc += f.sign * dt;
    }
    out[i] = 2.0 * lambda_h * acc;
  }
  return out;
}

double bound_dng(double omega, int order, double t_min, double t_max, double g_sup) {
  if (!(omega > 0.0) || !(t_min > 0.0) || !(t_max > 0.0))
    throw ParameterError("bound_dng: arguments must be positive");
  if (!(g_sup >= 0.0)) throw ParameterError("bound_dng: g_sup must be non-negative");
  double fact = 1.0;
  for (int i = 2; i <= order; ++i) fact *= i;
  return std::pow(t_max / t_min * omega * M_E, order) * g_sup / (omega * fact);
}

double final_error_bound(double lambda_h, double delta, int folds, double omega, double b,
                         double lambda, int iterations, double g_norm) {
  const double denom = M_PI * (b - lambda) - 2.0 * delta * omega;
  if (!(denom > 0.0))
    throw ParameterError("final_error_bound: 2*delta*omega >= pi*(b-lambda), divergent");
  const double first = 4.0 * lambda_h * 2.0 * delta * folds * std::sqrt(omega * M_PI) / denom;
  const double ratio = 2.0 * delta * omega / (M_PI * (b - lambda));
  return first + std::pow(ratio, iterations + 1) * g_norm;
}

ConditionReport check_sufficient_conditions(const AsdmParams& asdm, const ModuloParams& mod,
                                            double omega, double g_sup, int order) {
  if (!(g_sup > 0.0)) throw ParameterError("check_sufficient_conditions: g_sup must be positive");
  if (order < 2) throw ParameterError("check_sufficient_conditions: order must be >= 2");
  const double b = asdm.b, delta = asdm.delta, lambda = mod.lambda;
  const double lambda_h = mod.lambda_h(), h_star = mod.h_star();
  const double C = (b + lambda) / (b - lambda);

  ConditionReport r;
  r.s1_lhs = std::pow(C * C / (b - lambda) * 2.0 * delta * omega * M_E, order - 1) * g_sup;
  r.s1_rhs = lambda_h / (C * order * M_E);
  r.s1_pass = r.s1_lhs < r.s1_rhs;

  r.s2_lhs = order * 2.0 * delta * omega * g_sup / (b - lambda);
  r.s2_rhs = h_star;
  r.s2_pass = r.s2_lhs <= r.s2_rhs;

  r.kappa = std::min(1.0, lambda_h / (M_E * M_E * h_star *
                                      std::pow(C, 2.0 + 1.0 / (order - 1))));
  r.delta_bound = (b - lambda) * h_star * r.kappa / (2.0 * order * omega * g_sup);
  r.delta_pass = delta < r.delta_bound;
  return r;
}

RecoveryResult recover(const TriggerTimes& triggers, const AsdmParams& asdm,
                       const ModuloParams& mod, double omega, const RecoveryConfig& config,
                       const DenseWaveform* reference) {
  if (config.order < 2) throw ParameterError("recover: order must be >= 2");
  if (!(omega > 0.0)) throw ParameterError("recover: omega must be positive");
  if (!(mod.lambda <= asdm.b - 2.0 * asdm.delta * omega / M_PI))
    throw ParameterError("recover: lambda exceeds b - 2*delta*omega/pi");
  triggers.validate();
  const int K = static_cast<int>(triggers.t.size()) - 1;
  if (K < config.order + 1)
    throw ParameterError("recover: not enough triggers for the difference order");

  const SampleSeries series = sample_series(triggers, asdm);
  const std::vector<double> filtered = nonuniform_diff(series.X, triggers, config.order);
  const std::vector<double> psi = threshold_psi(triggers, config.order, mod.lambda_h());
  const std::vector<FoldWindow> windows = detect_folds(filtered, psi, config.order);

  RecoveryResult res;
  res.report.t_max = triggers.max_gap();
  res.report.t_min = triggers.min_gap();
  for (const auto& w : windows)
    res.report.folds.push_back(estimate_fold(w, triggers, filtered, config.order));

  const std::vector<double> residue =
      estimate_residue(res.report.folds, triggers, mod.lambda_h());
  std::vector<double> dg(K);
  for (int k = 0; k < K; ++k) {
    const double g_hi = series.X[k + 1] + residue[k + 1];
    const double g_lo = series.X[k] + residue[k];
    dg[k] = g_hi - g_lo;
  }

  ReconstructOptions opts;
  opts.iterations = config.iterations;
  opts.stop_tol = config.stop_tol;
  opts.radius_nyquist = config.radius_nyquist;

  const double step = config.grid_step > 0.0 ? config.grid_step : M_PI / (32.0 * omega);
  double t0 = triggers.t.front(), t1 = triggers.t.back();
  if (reference != nullptr && reference->size() >= 2) {
    t0 = reference->t0;
    t1 = reference->time_at(reference->size() - 1);
  }

  ReconstructTrace trace;
  trace.keep_snapshots = reference != nullptr;
  res.model = local_average_reconstruct(dg, triggers.t, omega, opts, &trace);
  res.report.update_norms = trace.update_norms;
  res.report.iterations_run = trace.iterations_run;
  res.wave = res.model.sample(t0, t1, reference != nullptr ? reference->dt : step);

  if (reference != nullptr) {
    res.report.err_percent = relative_error_percent(*reference, res.wave);
    res.report.error_bound =
        final_error_bound(mod.lambda_h(), asdm.delta, static_cast<int>(windows.size()),
                          omega, asdm.b, mod.lambda, trace.iterations_run,
                          reference->l2_norm());
    SincModel snap = res.model;
    for (const auto& coeffs : trace.snapshots) {
      snap.coeffs = coeffs;
      const DenseWaveform w = snap.sample(t0, t1, reference->dt);
      res.report.err_trace_percent.push_back(relative_error_percent(*reference, w));
    }
  }

  return res;
}

}  // namespace meds
