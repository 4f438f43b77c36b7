#pragma once

#include <functional>
#include <optional>

namespace meds {

// Earliest zero of f on [a, b], assuming |f'| <= slope_bound between any
// hidden oscillations. Endpoint values are passed in so callers can reuse
// evaluations. The search subdivides wherever the slope bound says a sign
// change could hide between samples, then narrows the earliest bracket to
// width `tol`. An exact touch (f == 0 at an endpoint) counts as a crossing.
std::optional<double> find_first_zero(const std::function<double(double)>& f, double a,
                                      double fa, double b, double fb, double slope_bound,
                                      double tol);

}  // namespace meds
