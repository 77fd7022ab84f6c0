#pragma once

// Plane-wave field modes in air, in a dielectric, and in front of the coated
// interface, plus the per-mode dipole coupling that feeds the decay-rate
// integrals. Amplitudes are the c-number coefficients multiplying the photon
// annihilation operators.

#include <cmath>
#include <complex>
#include <numbers>

#include <Eigen/Dense>

#include "mirrorfield/emission_rates.hpp"
#include "mirrorfield/interface_model.hpp"

namespace mirrorfield {

using Vec3 = Eigen::Vector3d;
using ModeAmplitude = Eigen::Vector3cd;

enum class Polarisation { first, second };

/// Photon species of the doubled Hilbert space: a modes start on the air
/// side, b modes on the medium side.
enum class Species { a, b };

/// Propagation direction in polar coordinates about the interface normal (x axis).
struct WaveDirection {
  double theta = 0.0;  ///< polar angle from +x, [0, pi]
  double phi = 0.0;    ///< azimuth, [0, 2pi)
  double omega = 0.0;  ///< angular frequency, rad/s

  Vec3 unit() const {
    const double st = std::sin(theta);
    return {std::cos(theta), std::cos(phi) * st, std::sin(phi) * st};
  }

  double wavenumber(const PhysicalConstants& c) const { return omega / c.c0; }
  Vec3 wavevector(const PhysicalConstants& c) const { return wavenumber(c) * unit(); }
};

struct PolarisationBasis {
  Vec3 e1;
  Vec3 e2;

  const Vec3& operator[](Polarisation p) const { return p == Polarisation::first ? e1 : e2; }
};

/// e1 = (0, sin phi, -cos phi), e2 = (sin theta, -cos phi cos theta, -sin phi cos theta).
/// At theta = 0 or pi the same formulas give a valid pair for the arbitrary phi.
inline PolarisationBasis polarisation_basis(const WaveDirection& dir) {
  const double st = std::sin(dir.theta), ct = std::cos(dir.theta);
  const double sp = std::sin(dir.phi), cp = std::cos(dir.phi);
  return {Vec3{0.0, sp, -cp}, Vec3{st, -cp * ct, -sp * ct}};
}

/// Flips the x component (the mirror image through the interface plane).
inline Vec3 mirror_image(const Vec3& v) { return {-v.x(), v.y(), v.z()}; }
inline ModeAmplitude mirror_image(const ModeAmplitude& v) { return {-v.x(), v.y(), v.z()}; }

struct FieldModePair {
  ModeAmplitude E;
  ModeAmplitude B;
};

namespace detail {

inline std::complex<double> free_mode_scalar(const WaveDirection& dir, const Vec3& r, const PhysicalConstants& c) {
  using namespace std::complex_literals;
  const double amplitude = std::sqrt(c.hbar * dir.omega / (std::numbers::pi * c.eps0)) / (4.0 * std::numbers::pi);
  const double phase = dir.wavevector(c).dot(r);
  return 1i * amplitude * std::polar(1.0, phase);
}

}  // namespace detail

/// E = (i/4pi) sqrt(hbar w / pi eps0) e^{ik.r} e_kl, B = -(1/c0) (same scalar) k^ x e_kl.
inline FieldModePair free_mode_amplitude(const WaveDirection& dir, Polarisation pol, const Vec3& r,
                                         const PhysicalConstants& c) {
  const std::complex<double> s = detail::free_mode_scalar(dir, r, c);
  const Vec3 e = polarisation_basis(dir)[pol];
  const Vec3 b = dir.unit().cross(e);
  return {s * e.cast<std::complex<double>>(), (-s / c.c0) * b.cast<std::complex<double>>()};
}

/// E_med(r) = sqrt(n^3 eps0/eps) E_air(n r), B_med(r) = sqrt(n^3 mu/mu0) B_air(n r).
inline FieldModePair medium_mode_amplitude(const WaveDirection& dir, Polarisation pol, const Vec3& r,
                                           const PhysicalConstants& c, const Medium& med) {
  const double n = refractive_index(med);
  FieldModePair air = free_mode_amplitude(dir, pol, n * r, c);
  air.E *= std::sqrt(n * n * n / med.eps_rel);
  air.B *= std::sqrt(n * n * n * med.mu_rel);
  return air;
}

/// Coefficient of the given species' annihilation operator in the electric
/// field observable at r. Air occupies x >= 0, the medium x < 0:
///   x >= 0: a -> (1/eta_a) E_air(r) + (r_a/eta_a) e^{i phi3} ~E_air(~r),  b -> (t_b/eta_b) e^{i phi4} E_air(r)
///   x <  0: b -> (1/eta_b) E_med(r) + (r_b/eta_b) e^{i phi1} ~E_med(~r),  a -> (t_a/eta_a) e^{i phi2} E_med(r)
/// where ~ flips the x components of both the position and the field vector.
inline ModeAmplitude mirror_field_amplitude(const MirrorInterface& m, Species species, const WaveDirection& dir,
                                            Polarisation pol, const Vec3& r, const PhysicalConstants& c,
                                            const Medium& med) {
  const NormalisationPair eta = normalisation_constants(m);
  const bool in_air = r.x() >= 0.0;
  const Side home = in_air ? Side::a : Side::b;  // species native to this half-space
  const Side species_side = species == Species::a ? Side::a : Side::b;
  const double eta_home = std::sqrt(eta.of(home));

  auto field_at = [&](const Vec3& p) {
    return in_air ? free_mode_amplitude(dir, pol, p, c).E : medium_mode_amplitude(dir, pol, p, c, med).E;
  };

  if (species_side == home) {
    const double refl = m.side(home).r;
    const std::complex<double> phase = std::polar(1.0, m.reflection_phase(home));
    return (field_at(r) + (refl * phase) * mirror_image(field_at(mirror_image(r)))) / eta_home;
  }
  const Side other = opposite(home);
  const double trans = m.side(other).t;
  const std::complex<double> phase = std::polar(trans / std::sqrt(eta.of(other)), m.transmission_phase(home));
  return phase * field_at(r);
}

/// Dipole-mode contraction for an atom on the given side at distance u = 2 k0 |x|,
/// relative to the free coupling (the medium scale factor cancels in rate ratios).
/// With s the atom's side and o the opposite one:
///   species native to s:  (d*.e e^{ik.r} + r_s d~*.e e^{ik.~r} e^{i phi_s}) / eta_s
///   species native to o:  (t_o/eta_o) d*.e e^{ik.r} e^{i phi_t}
/// with k.r = (u/2) cos theta and k.~r = -(u/2) cos theta; d~ flips the sign of d1.
inline std::complex<double> coupling_amplitude(const MirrorInterface& m, Species species, const WaveDirection& dir,
                                               Polarisation pol, const DipoleOrientation& dipole, double u,
                                               Side side) {
  const NormalisationPair eta = normalisation_constants(m);
  const Vec3 e = polarisation_basis(dir)[pol];
  const std::complex<double> d1 = std::conj(dipole.d1()), d2 = std::conj(dipole.d2()), d3 = std::conj(dipole.d3());
  const std::complex<double> direct_dot = d1 * e.x() + d2 * e.y() + d3 * e.z();
  const double half_phase = 0.5 * u * std::cos(dir.theta);
  const std::complex<double> direct = direct_dot * std::polar(1.0, half_phase);

  const Side species_side = species == Species::a ? Side::a : Side::b;
  if (species_side == side) {
    const std::complex<double> image_dot = -d1 * e.x() + d2 * e.y() + d3 * e.z();
    const std::complex<double> reflected =
        m.side(side).r * image_dot * std::polar(1.0, m.reflection_phase(side) - half_phase);
    return (direct + reflected) / std::sqrt(eta.of(side));
  }
  const Side other = opposite(side);
  return m.side(other).t / std::sqrt(eta.of(other)) * direct * std::polar(1.0, m.transmission_phase(side));
}

}  // namespace mirrorfield
