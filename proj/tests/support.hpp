#pragma once

// Hand-rolled generators for the property tests. Every draw comes from a
// seeded mt19937_64, so failures reproduce.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>

#include "mirrorfield/emission_rates.hpp"
#include "mirrorfield/interface_model.hpp"

namespace testing {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double phase() { return uniform(0.0, 2.0 * std::numbers::pi); }

  /// (r^2, l^2) uniform on the triangle r^2 + l^2 <= 1; t^2 takes the rest.
  mirrorfield::SideCoefficients side() {
    double r2 = uniform(), l2 = uniform();
    if (r2 + l2 > 1.0) r2 = 1.0 - r2, l2 = 1.0 - l2;
    return {std::sqrt(r2), std::sqrt(std::max(0.0, 1.0 - r2 - l2)), std::sqrt(l2)};
  }

  mirrorfield::Phases phases() { return {phase(), phase(), phase(), phase()}; }

  /// Valid strict interface; degenerate draws are redrawn.
  mirrorfield::MirrorInterface interface() {
    while (true) {
      const auto a = side(), b = side();
      const auto p = phases();
      try {
        return mirrorfield::validate_interface({a.r, a.t, a.l, b.r, b.t, b.l, p}, mirrorfield::Validation::strict);
      } catch (const mirrorfield::DegenerateTransparency&) {
      }
    }
  }

  mirrorfield::DipoleOrientation dipole() {
    std::complex<double> d[3];
    for (auto& c : d) c = {uniform(-1.0, 1.0), uniform(-1.0, 1.0)};
    return mirrorfield::DipoleOrientation::normalised(d[0], d[1], d[2]);
  }

  mirrorfield::Side side_choice() { return uniform() < 0.5 ? mirrorfield::Side::a : mirrorfield::Side::b; }

 private:
  std::mt19937_64 engine_;
};

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace testing
