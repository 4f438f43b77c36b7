#include "meds/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "meds/errors.hpp"

namespace meds {

namespace {

GaussRule make_rule(int n) {
  // Newton iteration on Legendre polynomials, cosine initial guesses.
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= n; ++j) {
        double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

}  // namespace

const GaussRule& gauss_legendre(int order) {
  if (order < 1) throw ParameterError("gauss_legendre: order must be positive");
  static std::map<int, GaussRule> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, make_rule(order)).first;
  return it->second;
}

double integrate_panel(const std::function<double(double)>& f, double a, double b,
                       int order) {
  const GaussRule& rule = gauss_legendre(order);
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double sum = 0.0;
  for (int i = 0; i < order; ++i) {
    sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
  }
  return sum * half;
}

double integrate_smooth(const std::function<double(double)>& f, double a, double b,
                        double max_panel, int order) {
  if (a == b) return 0.0;
  if (b < a) return -integrate_smooth(f, b, a, max_panel, order);
  if (!(max_panel > 0.0)) throw ParameterError("integrate_smooth: max_panel must be positive");
  const double len = b - a;
  const int panels = std::max(1, static_cast<int>(std::ceil(len / max_panel)));
  const double step = len / panels;
  double sum = 0.0;
  for (int i = 0; i < panels; ++i) {
    const double lo = a + i * step;
    const double hi = (i + 1 == panels) ? b : lo + step;
    sum += integrate_panel(f, lo, hi, order);
  }
  return sum;
}

}  // namespace meds
