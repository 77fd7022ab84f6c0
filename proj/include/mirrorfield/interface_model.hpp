#pragma once

// Coated-interface description: per-side amplitudes, phases, the
// normalisation constants of the mirror field observable and the mirror
// parameter xi that controls the distance dependence of decay rates.
//
// Side a is light approaching the coating from the left (medium side),
// side b light approaching from the right (air side). An atom in air (x > 0)
// sees reflection r_a with phase phi3; an atom in the medium sees r_b, phi1.

#include <cmath>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>

#include "mirrorfield/errors.hpp"

namespace mirrorfield {

enum class Side { a, b };

inline constexpr std::string_view to_string(Side s) { return s == Side::a ? "a" : "b"; }

inline Side parse_side(std::string_view s) {
  if (s == "a") return Side::a;
  if (s == "b") return Side::b;
  throw RangeError("side must be 'a' or 'b', got '" + std::string(s) + "'");
}

inline constexpr Side opposite(Side s) { return s == Side::a ? Side::b : Side::a; }

inline constexpr double energy_tolerance = 1e-9;
inline constexpr double degeneracy_tolerance = 1e-9;

struct SideCoefficients {
  double r = 0.0;
  double t = 0.0;
  double l = 0.0;

  friend bool operator==(const SideCoefficients&, const SideCoefficients&) = default;
};

/// Phase shifts in radians: phi1 reflection seen from the medium, phi2
/// transmission into the medium, phi3 reflection seen from air, phi4
/// transmission into air.
struct Phases {
  double phi1 = 0.0;
  double phi2 = 0.0;
  double phi3 = 0.0;
  double phi4 = 0.0;
};

/// Reduces an angle to [0, 2pi).
inline double reduce_phase(double phi) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double reduced = std::fmod(phi, two_pi);
  if (reduced < 0.0) reduced += two_pi;
  if (reduced >= two_pi) reduced = 0.0;
  return reduced;
}

/// Raw, unvalidated interface parameters as supplied by a user. Omitted loss
/// amplitudes select relaxed validation (loss inferred).
struct InterfaceParams {
  double r_a = 0.0;
  double t_a = 0.0;
  std::optional<double> l_a;
  double r_b = 0.0;
  double t_b = 0.0;
  std::optional<double> l_b;
  Phases phases;
};

enum class Validation { strict, relaxed };

class MirrorInterface;
MirrorInterface validate_interface(const InterfaceParams& raw, Validation mode);

/// A validated coating. Immutable; construct through validate_interface,
/// lossless_interface or MirrorInterface::make.
class MirrorInterface {
 public:
  /// Strict construction from explicit per-side coefficients.
  static MirrorInterface make(SideCoefficients a, SideCoefficients b, Phases phases = {}) {
    return validate_interface({a.r, a.t, a.l, b.r, b.t, b.l, phases}, Validation::strict);
  }

  const SideCoefficients& side_a() const noexcept { return a_; }
  const SideCoefficients& side_b() const noexcept { return b_; }
  const SideCoefficients& side(Side s) const noexcept { return s == Side::a ? a_ : b_; }
  const Phases& phases() const noexcept { return phases_; }
  double phi1() const noexcept { return phases_.phi1; }
  double phi2() const noexcept { return phases_.phi2; }
  double phi3() const noexcept { return phases_.phi3; }
  double phi4() const noexcept { return phases_.phi4; }

  /// Reflection phase seen by an atom on the given side (phi3 for a, phi1 for b).
  double reflection_phase(Side s) const noexcept { return s == Side::a ? phases_.phi3 : phases_.phi1; }
  /// Transmission phase of light crossing towards the given side (phi4 into air, phi2 into the medium).
  double transmission_phase(Side s) const noexcept { return s == Side::a ? phases_.phi4 : phases_.phi2; }

  bool relaxed() const noexcept { return relaxed_; }

  /// The same coating seen from the other side: a <-> b, phi1 <-> phi3, phi2 <-> phi4.
  MirrorInterface mirrored() const {
    MirrorInterface m = *this;
    m.a_ = b_;
    m.b_ = a_;
    m.phases_ = {phases_.phi3, phases_.phi4, phases_.phi1, phases_.phi2};
    return m;
  }

 private:
  friend MirrorInterface validate_interface(const InterfaceParams&, Validation);
  MirrorInterface(SideCoefficients a, SideCoefficients b, Phases p, bool relaxed)
      : a_(a), b_(b), phases_(p), relaxed_(relaxed) {}

  SideCoefficients a_;
  SideCoefficients b_;
  Phases phases_;
  bool relaxed_ = false;
};

namespace detail {

inline void check_finite(double v, const char* name) {
  if (!std::isfinite(v)) throw RangeError(std::string(name) + " must be finite");
}

inline void check_unit_range(double v, const char* name) {
  check_finite(v, name);
  if (v < 0.0 || v > 1.0) {
    std::ostringstream os;
    os << name << " = " << v << " outside [0, 1]";
    throw RangeError(os.str());
  }
}

inline SideCoefficients check_side(double r, double t, std::optional<double> l, Validation mode,
                                   const char* label) {
  const std::string side(label);
  check_unit_range(r, ("r_" + side).c_str());
  check_unit_range(t, ("t_" + side).c_str());
  SideCoefficients out{r, t, 0.0};
  if (mode == Validation::strict) {
    if (!l) throw EnergyViolation("l_" + side + " is required in strict validation");
    check_unit_range(*l, ("l_" + side).c_str());
    out.l = *l;
    const double total = r * r + t * t + out.l * out.l;
    if (std::abs(total - 1.0) > energy_tolerance) {
      std::ostringstream os;
      os << "side " << side << ": r^2 + t^2 + l^2 = " << total << " != 1";
      throw EnergyViolation(os.str());
    }
  } else {
    const double rt = r * r + t * t;
    if (rt > 1.0 + energy_tolerance) {
      std::ostringstream os;
      os << "side " << side << ": r^2 + t^2 = " << rt << " exceeds 1";
      throw EnergyViolation(os.str());
    }
    out.l = std::sqrt(std::max(0.0, 1.0 - rt));
    if (l) {
      check_unit_range(*l, ("l_" + side).c_str());
      if (std::abs(*l * *l - out.l * out.l) > energy_tolerance)
        throw EnergyViolation("side " + side + ": supplied loss disagrees with the implied loss");
    }
  }
  if (1.0 + r * r - t * t <= degeneracy_tolerance)
    throw DegenerateTransparency("side " + side + ": 1 + r^2 - t^2 vanishes (fully transparent, lossless)");
  return out;
}

}  // namespace detail

/// Validates raw coefficients and phases. Amplitudes are kept unchanged,
/// phases are reduced to [0, 2pi).
inline MirrorInterface validate_interface(const InterfaceParams& raw, Validation mode = Validation::strict) {
  for (double p : {raw.phases.phi1, raw.phases.phi2, raw.phases.phi3, raw.phases.phi4})
    detail::check_finite(p, "phase");
  const SideCoefficients a = detail::check_side(raw.r_a, raw.t_a, raw.l_a, mode, "a");
  const SideCoefficients b = detail::check_side(raw.r_b, raw.t_b, raw.l_b, mode, "b");
  const Phases reduced{reduce_phase(raw.phases.phi1), reduce_phase(raw.phases.phi2),
                       reduce_phase(raw.phases.phi3), reduce_phase(raw.phases.phi4)};
  return MirrorInterface(a, b, reduced, mode == Validation::relaxed);
}

/// Uncoated dielectric: no loss, r_a = r_b = r, t = sqrt(1 - r^2).
/// r = 1 must go through validate_interface with t = 0 directly.
inline MirrorInterface lossless_interface(double r, Phases phases = {}) {
  detail::check_finite(r, "r");
  if (r < 0.0 || r >= 1.0) {
    std::ostringstream os;
    os << "lossless reflection amplitude r = " << r << " outside [0, 1)";
    throw RangeError(os.str());
  }
  const double t = std::sqrt(1.0 - r * r);
  return validate_interface({r, t, 0.0, r, t, 0.0, phases}, Validation::strict);
}

struct NormalisationPair {
  double eta_a_sq;
  double eta_b_sq;

  double of(Side s) const noexcept { return s == Side::a ? eta_a_sq : eta_b_sq; }
};

/// The normalisation formula on raw amplitudes, with no validation. Exposed
/// for limit studies outside the energy constraint.
inline NormalisationPair unchecked_normalisation(double r_a, double t_a, double r_b, double t_b) {
  const double ra2 = r_a * r_a, ta2 = t_a * t_a, rb2 = r_b * r_b, tb2 = t_b * t_b;
  const double den_a = 1.0 + ra2 - ta2;
  const double den_b = 1.0 + rb2 - tb2;
  return {1.0 + ra2 + den_a / den_b * tb2, 1.0 + rb2 + den_b / den_a * ta2};
}

/// eta_a^2 and eta_b^2, fixed by demanding free-space rates far from the
/// coating: (1 + r_a^2)/eta_a^2 + t_b^2/eta_b^2 = 1 and the a <-> b partner.
inline NormalisationPair normalisation_constants(const MirrorInterface& m) {
  return unchecked_normalisation(m.side_a().r, m.side_a().t, m.side_b().r, m.side_b().t);
}

/// Distance-independent part of the unnormalised rate for an atom on side s:
/// (1 + r_s^2)/eta_s^2 + t_o^2/eta_o^2 with o the opposite side. Equals one
/// for every valid interface.
inline double constant_term(const MirrorInterface& m, Side s) {
  const NormalisationPair eta = normalisation_constants(m);
  const Side o = opposite(s);
  const double r = m.side(s).r;
  const double t_opposite = m.side(o).t;
  return (1.0 + r * r) / eta.of(s) + t_opposite * t_opposite / eta.of(o);
}

struct MirrorSideSummary {
  double eta_sq;
  double xi;
};

/// xi = 3 r cos(phi) / eta^2 for the requested side (r_a, phi3 for a; r_b, phi1 for b).
inline MirrorSideSummary mirror_parameter(const MirrorInterface& m, Side s) {
  const double eta_sq = normalisation_constants(m).of(s);
  return {eta_sq, 3.0 * m.side(s).r * std::cos(m.reflection_phase(s)) / eta_sq};
}

/// Linear dielectric with relative permittivity and permeability.
struct Medium {
  double eps_rel = 1.0;
  double mu_rel = 1.0;

  static Medium air() { return {1.0, 1.0}; }

  static Medium make(double eps_rel, double mu_rel = 1.0) {
    detail::check_finite(eps_rel, "eps_rel");
    detail::check_finite(mu_rel, "mu_rel");
    if (eps_rel < 0.0) throw RangeError("eps_rel must be >= 0");
    if (mu_rel <= 0.0) throw RangeError("mu_rel must be > 0");
    return {eps_rel, mu_rel};
  }
};

inline double refractive_index(const Medium& med) { return std::sqrt(med.eps_rel * med.mu_rel); }

/// Normal-incidence Fresnel amplitude (n - 1)/(n + 1); negative for n < 1.
inline double fresnel_normal_reflectivity(const Medium& med) {
  const double n = refractive_index(med);
  return (n - 1.0) / (n + 1.0);
}

// ---------------------------------------------------------------------------
// Flat key=value text form: keys r_a, t_a, l_a, r_b, t_b, l_b, phi1..phi4.
// '#' starts a comment; blank lines are ignored; '-' in keys reads as '_'.

using KeyValues = std::map<std::string, std::string>;

inline std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

inline std::string normalise_key(std::string key) {
  for (char& c : key)
    if (c == '-') c = '_';
  return key;
}

inline KeyValues parse_key_values(std::string_view text) {
  KeyValues out;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos)
      throw ValidationError("line " + std::to_string(lineno) + ": expected key = value");
    std::string key = normalise_key(trim(std::string_view(stripped).substr(0, eq)));
    std::string value = trim(std::string_view(stripped).substr(eq + 1));
    if (key.empty()) throw ValidationError("line " + std::to_string(lineno) + ": empty key");
    out[std::move(key)] = std::move(value);
  }
  return out;
}

inline double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ValidationError("'" + key + "' expects a number, got '" + value + "'");
  }
}

/// Builds interface parameters from key/value pairs. Missing amplitudes and
/// phases default to zero; missing loss amplitudes stay unset.
inline InterfaceParams interface_params_from(const KeyValues& kv) {
  auto get = [&](const char* key) -> std::optional<double> {
    if (auto it = kv.find(key); it != kv.end()) return parse_double(key, it->second);
    return std::nullopt;
  };
  InterfaceParams p;
  p.r_a = get("r_a").value_or(0.0);
  p.t_a = get("t_a").value_or(0.0);
  p.l_a = get("l_a");
  p.r_b = get("r_b").value_or(0.0);
  p.t_b = get("t_b").value_or(0.0);
  p.l_b = get("l_b");
  p.phases = {get("phi1").value_or(0.0), get("phi2").value_or(0.0), get("phi3").value_or(0.0),
              get("phi4").value_or(0.0)};
  return p;
}

/// Parses and validates an interface. Strict validation when both l_a and
/// l_b are present, relaxed (loss inferred) otherwise.
inline MirrorInterface parse_interface(std::string_view text) {
  const InterfaceParams p = interface_params_from(parse_key_values(text));
  return validate_interface(p, p.l_a && p.l_b ? Validation::strict : Validation::relaxed);
}

}  // namespace mirrorfield
