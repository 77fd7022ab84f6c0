#pragma once

// Brute-force angular integration of the decay rate, independent of the
// closed form. The 2D route integrates the full solid-angle integrand for a
// complex dipole; the 1D route integrates the azimuth-reduced integrand in
// cos(theta). Both use oscillation-aware composite Gauss-Legendre panels and
// a two-level refinement check.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <sstream>
#include <vector>

#include "mirrorfield/emission_rates.hpp"
#include "mirrorfield/errors.hpp"
#include "mirrorfield/gauss_legendre.hpp"
#include "mirrorfield/interface_model.hpp"

namespace mirrorfield {

struct QuadratureSpec {
  int panels_per_oscillation = 4;
  int points_per_panel = 16;
  int min_panels = 8;
  double rel_tolerance = 1e-9;

  void validate() const {
    if (panels_per_oscillation < 1) throw RangeError("panels_per_oscillation must be >= 1");
    if (points_per_panel < 2) throw RangeError("points_per_panel must be >= 2");
    if (min_panels < 1) throw RangeError("min_panels must be >= 1");
    if (!(rel_tolerance > 0.0)) throw RangeError("rel_tolerance must be > 0");
  }

  /// Panels in cos(theta): max(min_panels, ceil(u/pi) * panels_per_oscillation).
  std::size_t panels_for(double u) const {
    const auto oscillations = static_cast<std::size_t>(std::ceil(u / std::numbers::pi));
    return std::max<std::size_t>(static_cast<std::size_t>(min_panels),
                                 oscillations * static_cast<std::size_t>(panels_per_oscillation));
  }
};

/// Azimuthal panels of the 2D rule; each carries points_per_panel nodes.
inline constexpr std::size_t azimuth_panels = 4;

/// Solid-angle integrand (without the sin(theta) measure) for an atom on side
/// s, opposite side o:
///   (1/eta_s^2 + t_o^2/eta_o^2) (|A1|^2 + |A2|^2) + (r_s^2/eta_s^2)(|A1|^2 + |B2|^2)
///   - (r_s/eta_s^2) [ (A2* B2 - |A1|^2) e^{iu cos(theta)} e^{-i phi_s} + c.c. ]
/// with A1 = d2 sin(phi) - d3 cos(phi), A2 = d1 sin(theta) - (d2 cos(phi) + d3 sin(phi)) cos(theta),
/// B2 = d1 sin(theta) + (d2 cos(phi) + d3 sin(phi)) cos(theta).
inline double angular_integrand(const MirrorInterface& m, Side side, const DipoleOrientation& d, double u,
                                double theta, double phi) {
  const NormalisationPair eta = normalisation_constants(m);
  const Side o = opposite(side);
  const double r = m.side(side).r;
  const double t_o = m.side(o).t;
  const double st = std::sin(theta), ct = std::cos(theta);
  const double sp = std::sin(phi), cp = std::cos(phi);
  const std::complex<double> a1 = d.d2() * sp - d.d3() * cp;
  const std::complex<double> transverse = (d.d2() * cp + d.d3() * sp) * ct;
  const std::complex<double> a2 = d.d1() * st - transverse;
  const std::complex<double> b2 = d.d1() * st + transverse;
  const double n1 = std::norm(a1);
  const double direct = (1.0 / eta.of(side) + t_o * t_o / eta.of(o)) * (n1 + std::norm(a2));
  const double image = r * r / eta.of(side) * (n1 + std::norm(b2));
  const std::complex<double> overlap = std::conj(a2) * b2 - n1;
  const double interference =
      -2.0 * r / eta.of(side) * std::real(overlap * std::polar(1.0, u * ct - m.reflection_phase(side)));
  return direct + image + interference;
}

namespace detail {

inline void check_oracle_inputs(double u, const QuadratureSpec& spec) {
  spec.validate();
  if (!(u >= 0.0) || !std::isfinite(u)) throw DomainError("distance u must be finite and >= 0");
}

inline double refined(double coarse, double fine, const QuadratureSpec& spec, const char* name) {
  if (std::abs(fine - coarse) > spec.rel_tolerance * std::max(std::abs(fine), 1.0)) {
    std::ostringstream os;
    os.precision(17);
    os << name << ": refinement levels disagree (" << coarse << " vs " << fine << ")";
    throw QuadratureBudgetExceeded(os.str(), fine, coarse);
  }
  return fine;
}

inline double integrate_2d(const MirrorInterface& m, Side side, const DipoleOrientation& d, double u,
                           std::size_t panels, std::size_t points) {
  const QuadratureRule rule = gauss_legendre(points);
  // Azimuth nodes over [0, 2pi), shared by every polar node.
  std::vector<double> phi_nodes, phi_weights;
  const double phi_half = std::numbers::pi / static_cast<double>(azimuth_panels);
  for (std::size_t p = 0; p < azimuth_panels; ++p) {
    const double mid = (2.0 * static_cast<double>(p) + 1.0) * phi_half;
    for (std::size_t i = 0; i < rule.size(); ++i) {
      phi_nodes.push_back(mid + phi_half * rule.nodes[i]);
      phi_weights.push_back(phi_half * rule.weights[i]);
    }
  }
  std::vector<double> row(phi_nodes.size());
  auto polar_slice = [&](double v) {
    const double theta = std::acos(std::clamp(v, -1.0, 1.0));
    for (std::size_t j = 0; j < phi_nodes.size(); ++j)
      row[j] = phi_weights[j] * angular_integrand(m, side, d, u, theta, phi_nodes[j]);
    return pairwise_sum(row);
  };
  return 3.0 / (8.0 * std::numbers::pi) * integrate_composite(polar_slice, -1.0, 1.0, panels, rule);
}

inline double integrate_1d(const MirrorInterface& m, Side side, double alignment, double u, std::size_t panels,
                           std::size_t points) {
  const NormalisationPair eta = normalisation_constants(m);
  const double c = constant_term(m, side);
  const double coupling = 2.0 * m.side(side).r / eta.of(side);
  const double phase = m.reflection_phase(side);
  const double a = alignment;
  auto f = [&](double v) {
    const double v2 = v * v;
    return c * (1.0 + a + (1.0 - 3.0 * a) * v2) + coupling * (1.0 - 3.0 * a + (1.0 + a) * v2) * std::cos(u * v - phase);
  };
  return 3.0 / 8.0 * integrate_composite(f, -1.0, 1.0, panels, gauss_legendre(points));
}

}  // namespace detail

/// Gamma_mirr / Gamma_free by double angular quadrature over the full
/// integrand. Accepts any complex dipole; the closed form depends only on |d1|^2.
inline double decay_rate_2d_oracle(const MirrorInterface& m, Side side, const DipoleOrientation& dipole, double u,
                                   const QuadratureSpec& spec = {}) {
  detail::check_oracle_inputs(u, spec);
  const std::size_t panels = spec.panels_for(u);
  const auto points = static_cast<std::size_t>(spec.points_per_panel);
  const double coarse = detail::integrate_2d(m, side, dipole, u, panels, points);
  const double fine = detail::integrate_2d(m, side, dipole, u, panels, 2 * points);
  return detail::refined(coarse, fine, spec, "2D oracle");
}

/// Gamma_mirr / Gamma_free from the azimuth-reduced integral over cos(theta).
inline double decay_rate_1d_oracle(const MirrorInterface& m, Side side, double alignment, double u,
                                   const QuadratureSpec& spec = {}) {
  detail::check_oracle_inputs(u, spec);
  if (!(alignment >= 0.0 && alignment <= 1.0)) throw DomainError("alignment |d1|^2 must lie in [0, 1]");
  const std::size_t panels = spec.panels_for(u);
  const auto points = static_cast<std::size_t>(spec.points_per_panel);
  const double coarse = detail::integrate_1d(m, side, alignment, u, panels, points);
  const double fine = detail::integrate_1d(m, side, alignment, u, panels, 2 * points);
  return detail::refined(coarse, fine, spec, "1D oracle");
}

struct OracleReport {
  double u;
  double alignment;
  Side side;
  double closed_form;
  double oracle_2d;
  double oracle_1d;
  double max_rel_error;
};

inline double relative_deviation(double value, double reference) {
  return std::abs(value - reference) / std::max(std::abs(reference), std::numeric_limits<double>::min());
}

/// Runs both oracles and the closed form for one configuration.
inline OracleReport oracle_compare(const MirrorInterface& m, Side side, const DipoleOrientation& dipole, double u,
                                   const QuadratureSpec& spec = {}) {
  OracleReport rep{u, dipole.alignment(), side, 0.0, 0.0, 0.0, 0.0};
  rep.closed_form = relative_decay_rate(m, side, rep.alignment, u);
  rep.oracle_2d = decay_rate_2d_oracle(m, side, dipole, u, spec);
  rep.oracle_1d = decay_rate_1d_oracle(m, side, rep.alignment, u, spec);
  rep.max_rel_error =
      std::max(relative_deviation(rep.oracle_2d, rep.closed_form), relative_deviation(rep.oracle_1d, rep.closed_form));
  return rep;
}

}  // namespace mirrorfield
