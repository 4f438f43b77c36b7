#pragma once

#include <functional>
#include <vector>

namespace meds {

// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Nodes/weights computed once per order and cached.
const GaussRule& gauss_legendre(int order);

// Integrates f over [a, b] with one Gauss-Legendre panel.
double integrate_panel(const std::function<double(double)>& f, double a, double b,
                       int order = 12);

// Composite rule: panels no longer than max_panel. For an integrand with
// oscillation scale omega (rad/s), max_panel <= pi/(2*omega) keeps the
// panel error near machine precision at order 12.
double integrate_smooth(const std::function<double(double)>& f, double a, double b,
                        double max_panel, int order = 12);

}  // namespace meds
