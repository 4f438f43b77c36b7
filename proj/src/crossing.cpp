#include "meds/crossing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace meds {

namespace {

bool sign_change(double fa, double fb) { return (fa <= 0.0 && fb >= 0.0) || (fa >= 0.0 && fb <= 0.0); }

std::optional<double> search(const std::function<double(double)>& f, double a, double fa,
                             double b, double fb, double slope_bound, double tol) {
  const double width = b - a;
  const bool bracket = sign_change(fa, fb);
  if (!bracket) {
    // A pair of crossings can hide between the endpoints only if either
    // endpoint is within slope*width/2 of zero.
    const double guard = 0.5 * slope_bound * width;
    if (std::min(std::abs(fa), std::abs(fb)) >= guard) return std::nullopt;
  }
  if (width <= tol) {
    if (bracket) return 0.5 * (a + b);
    return std::nullopt;
  }
  const double m = 0.5 * (a + b);
  const double fm = f(m);
  if (auto left = search(f, a, fa, m, fm, slope_bound, tol)) return left;
  return search(f, m, fm, b, fb, slope_bound, tol);
}

}  // namespace

std::optional<double> find_first_zero(const std::function<double(double)>& f, double a,
                                      double fa, double b, double fb, double slope_bound,
                                      double tol) {
  if (b <= a) return std::nullopt;
  if (fa == 0.0) return a;
  tol = std::max(tol, 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(b)));
  return search(f, a, fa, b, fb, std::max(slope_bound, 0.0), tol);
}

}  // namespace meds
