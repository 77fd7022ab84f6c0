#pragma once

// Spontaneous decay rates: absolute free-space and in-medium rates, and the
// closed-form distance-dependent rate of a two-level dipole near the coating.
// Distances enter only through u = 2 k0 |x|.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <sstream>
#include <utility>
#include <vector>

#include "mirrorfield/errors.hpp"
#include "mirrorfield/interface_model.hpp"

namespace mirrorfield {

struct PhysicalConstants {
  double hbar;
  double eps0;
  double mu0;
  double c0;
  double e_charge;

  /// CODATA 2018 values in SI units.
  static constexpr PhysicalConstants codata2018() {
    return {1.054571817e-34, 8.8541878128e-12, 1.25663706212e-6, 299792458.0, 1.602176634e-19};
  }

  static constexpr PhysicalConstants natural_units() { return {1.0, 1.0, 1.0, 1.0, 1.0}; }
};

struct AtomParams {
  double omega0;            ///< transition angular frequency, rad/s
  double dipole_magnitude;  ///< |d12|, m

  double k0(const PhysicalConstants& c) const { return omega0 / c.c0; }
};

/// Normalised complex dipole direction (d1 along the interface normal).
class DipoleOrientation {
 public:
  DipoleOrientation(std::complex<double> d1, std::complex<double> d2, std::complex<double> d3)
      : d_{d1, d2, d3} {
    const double norm = std::norm(d1) + std::norm(d2) + std::norm(d3);
    if (!(std::abs(norm - 1.0) <= 1e-12)) {
      std::ostringstream os;
      os << "dipole direction not normalised: |d|^2 = " << norm;
      throw DomainError(os.str());
    }
  }

  /// Scales arbitrary nonzero components to unit norm.
  static DipoleOrientation normalised(std::complex<double> d1, std::complex<double> d2,
                                      std::complex<double> d3) {
    const double n = std::sqrt(std::norm(d1) + std::norm(d2) + std::norm(d3));
    if (!(n > 0.0) || !std::isfinite(n)) throw DomainError("dipole direction must be nonzero and finite");
    return {d1 / n, d2 / n, d3 / n};
  }

  std::complex<double> d1() const noexcept { return d_[0]; }
  std::complex<double> d2() const noexcept { return d_[1]; }
  std::complex<double> d3() const noexcept { return d_[2]; }
  std::complex<double> operator[](std::size_t i) const { return d_[i]; }

  /// |d1|^2: 0 parallel to the interface, 1 perpendicular.
  double alignment() const noexcept { return std::min(1.0, std::norm(d_[0])); }

 private:
  std::complex<double> d_[3];
};

inline double gamma_air(const AtomParams& atom, const PhysicalConstants& c) {
  const double w3 = atom.omega0 * atom.omega0 * atom.omega0;
  const double d2 = atom.dipole_magnitude * atom.dipole_magnitude;
  return c.e_charge * c.e_charge * w3 * d2 / (3.0 * std::numbers::pi * c.eps0 * c.c0 * c.c0 * c.c0 * c.hbar);
}

/// Rate inside a homogeneous dielectric: n^3 e^2 w0^3 |d|^2 / (3 pi hbar eps c0^3).
inline double gamma_med(const AtomParams& atom, const PhysicalConstants& c, const Medium& med) {
  if (!(med.eps_rel > 0.0)) throw DomainError("gamma_med requires eps_rel > 0");
  const double n = refractive_index(med);
  return n * n * n / med.eps_rel * gamma_air(atom, c);
}

/// u = 2 * index * k0 * |x|. index = 1 is the literal substitution used on
/// both sides; pass the refractive index to use the in-medium wavenumber.
inline double dimensionless_distance(double x_metres, double omega0, const PhysicalConstants& c,
                                     double index = 1.0) {
  return 2.0 * index * (omega0 / c.c0) * std::abs(x_metres);
}

inline constexpr double bracket_series_threshold = 0.5;

namespace detail {

inline void check_rate_domain(double alignment, double u) {
  if (!(u >= 0.0) || !std::isfinite(u)) throw DomainError("distance u must be finite and >= 0");
  if (!(alignment >= 0.0 && alignment <= 1.0)) throw DomainError("alignment |d1|^2 must lie in [0, 1]");
}

/// sin u / u and cos u / u^2 - sin u / u^3 by their power series
/// sum (-1)^j u^2j / (2j+1)!  and  sum_{j>=1} (-1)^j 2j u^(2j-2) / (2j+1)!.
inline std::pair<double, double> bracket_terms_series(double u) {
  const double u2 = u * u;
  double sinc = 1.0, osc = 0.0;
  double previous_power = 1.0;  // u^(2j-2)
  double factorial = 1.0;       // (2j+1)!
  double sign = 1.0;
  for (int j = 1; j <= 8; ++j) {
    factorial *= (2.0 * j) * (2.0 * j + 1.0);
    sign = -sign;
    osc += sign * 2.0 * j * previous_power / factorial;
    previous_power *= u2;
    sinc += sign * previous_power / factorial;
  }
  return {sinc, osc};
}

inline std::pair<double, double> bracket_terms_direct(double u) {
  const double s = std::sin(u), c = std::cos(u);
  return {s / u, c / (u * u) - s / (u * u * u)};
}

}  // namespace detail

/// The distance bracket (1 - a) sin u/u + (1 + a)(cos u/u^2 - sin u/u^3)
/// with a = |d1|^2, evaluated through its power series below
/// bracket_series_threshold and directly above. Limit at u = 0: 2/3 - 4a/3.
inline double distance_bracket(double alignment, double u) {
  detail::check_rate_domain(alignment, u);
  const auto [sinc, osc] =
      u < bracket_series_threshold ? detail::bracket_terms_series(u) : detail::bracket_terms_direct(u);
  return (1.0 - alignment) * sinc + (1.0 + alignment) * osc;
}

/// Gamma_mirr / Gamma_free = 1 + xi * bracket, relative to Gamma_air on side a
/// and Gamma_med on side b.
inline double relative_decay_rate(const MirrorInterface& m, Side side, double alignment, double u) {
  const double bracket = distance_bracket(alignment, u);
  return 1.0 + mirror_parameter(m, side).xi * bracket;
}

/// The rate before collapsing the constant term with the normalisation
/// identity: (1 + r_s^2)/eta_s^2 + t_o^2/eta_o^2 + 3 r_s/eta_s^2 cos(phi) * bracket.
inline double unnormalised_decay_rate(const MirrorInterface& m, Side side, double alignment, double u) {
  const double bracket = distance_bracket(alignment, u);
  const double eta_sq = normalisation_constants(m).of(side);
  return constant_term(m, side) + 3.0 * m.side(side).r / eta_sq * std::cos(m.reflection_phase(side)) * bracket;
}

/// Excited-state population exp(-gamma t) of an initially excited atom.
inline double excited_population(double gamma, double t) {
  if (!(gamma >= 0.0) || !(t >= 0.0)) throw DomainError("excited_population requires gamma >= 0 and t >= 0");
  return std::exp(-gamma * t);
}

struct DecayRateCurve {
  Side side;
  double alignment;
  std::vector<std::pair<double, double>> samples;  ///< (u, ratio), u strictly increasing
};

inline DecayRateCurve decay_rate_curve(const MirrorInterface& m, Side side, double alignment,
                                       std::span<const double> u_values) {
  DecayRateCurve curve{side, alignment, {}};
  curve.samples.reserve(u_values.size());
  for (std::size_t i = 0; i < u_values.size(); ++i) {
    if (i > 0 && !(u_values[i] > u_values[i - 1])) throw DomainError("u samples must be strictly increasing");
    curve.samples.emplace_back(u_values[i], relative_decay_rate(m, side, alignment, u_values[i]));
  }
  return curve;
}

inline std::vector<double> linear_grid(double lo, double hi, std::size_t count) {
  if (count < 2) throw RangeError("grid needs at least two points");
  if (!(lo < hi)) throw RangeError("grid requires min < max");
  std::vector<double> out(count);
  const double step = (hi - lo) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) out[i] = lo + step * static_cast<double>(i);
  out.back() = hi;
  return out;
}

}  // namespace mirrorfield
