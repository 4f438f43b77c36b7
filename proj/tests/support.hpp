#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "meds/asdm.hpp"
#include "meds/signal.hpp"

namespace meds::test {

// Deterministic helpers shared by the test binaries.
struct Rng {
  explicit Rng(std::uint64_t seed) : eng(seed) {}
  std::mt19937_64 eng;

  double unit() { return static_cast<double>(eng() >> 11) * 0x1.0p-53; }
  double range(double lo, double hi) { return lo + (hi - lo) * unit(); }
  int integer(int lo, int hi) { return lo + static_cast<int>(unit() * (hi - lo + 1)); }
  int sign() { return unit() < 0.5 ? -1 : 1; }
};

// Strictly increasing trigger set with gaps uniform in [gap_lo, gap_hi].
inline TriggerTimes make_triggers(Rng& rng, int count, double gap_lo, double gap_hi,
                                  double t0 = 0.0) {
  TriggerTimes trig;
  double t = t0;
  for (int i = 0; i <= count; ++i) {
    trig.t.push_back(t);
    t += rng.range(gap_lo, gap_hi);
  }
  return trig;
}

// Random normalized sinc series scaled to the given amplitude.
inline BandlimitedSignal make_signal(std::uint64_t seed, double omega, double duration,
                                     double amplitude) {
  return BandlimitedSignal::random(seed, omega, duration, amplitude);
}

// Sum |w_i| * |f_i| for the divided-difference stencil: the recursion run on
// absolute values. Used to normalize annihilation checks.
inline std::vector<double> diff_abs_scale(std::vector<double> values,
                                          const std::vector<double>& t, int order) {
  for (int m = 1; m <= order; ++m) {
    for (std::size_t k = 0; k + 1 < values.size(); ++k) {
      values[k] = (std::abs(values[k + 1]) + std::abs(values[k])) / (t[k + m] - t[k]);
    }
    values.resize(values.size() - 1);
  }
  return values;
}

}  // namespace meds::test
