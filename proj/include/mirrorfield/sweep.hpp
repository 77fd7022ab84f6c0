#pragma once

// Parameter sweeps behind the command-line tool: normalisation and
// mirror-parameter maps, decay-rate curves (with figure presets), and the
// seeded oracle check. Tables are rectangular float grids written as CSV with
// a provenance line echoing every effective parameter.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "mirrorfield/emission_rates.hpp"
#include "mirrorfield/errors.hpp"
#include "mirrorfield/interface_model.hpp"
#include "mirrorfield/quadrature_oracle.hpp"

namespace mirrorfield {

/// Shortest representation that parses back to the same double; '.' decimal point.
inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline double parse_number(std::string_view s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw ValidationError("not a number: '" + std::string(s) + "'");
  return v;
}

struct ResultTable {
  std::string command;
  KeyValues parameters;  ///< provenance echo
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  std::size_t column(std::string_view name) const {
    const auto it = std::find(columns.begin(), columns.end(), name);
    if (it == columns.end()) throw ValidationError("no column '" + std::string(name) + "'");
    return static_cast<std::size_t>(it - columns.begin());
  }
};

inline std::string provenance_line(const ResultTable& t) {
  std::string line = "# provenance: " + t.command;
  for (const auto& [k, v] : t.parameters) line += " " + k + "=" + v;
  return line;
}

inline std::string to_csv(const ResultTable& t) {
  std::string out = provenance_line(t) + "\n";
  for (std::size_t i = 0; i < t.columns.size(); ++i) out += (i ? "," : "") + t.columns[i];
  out += "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ",";
      out += format_double(row[i]);
    }
    out += "\n";
  }
  return out;
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.emplace_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

inline ResultTable parse_csv(std::string_view text) {
  ResultTable t;
  const auto lines = split(text, '\n');
  if (lines.size() < 2) throw ValidationError("CSV needs a provenance and a header line");
  constexpr std::string_view prefix = "# provenance: ";
  if (lines[0].rfind(prefix, 0) != 0) throw ValidationError("missing provenance line");
  auto tokens = split(std::string_view(lines[0]).substr(prefix.size()), ' ');
  t.command = tokens.at(0);
  for (std::size_t i = 1; i < tokens.size(); ++i) {
    const auto eq = tokens[i].find('=');
    if (eq == std::string::npos) throw ValidationError("bad provenance token '" + tokens[i] + "'");
    t.parameters[tokens[i].substr(0, eq)] = tokens[i].substr(eq + 1);
  }
  t.columns = split(lines[1], ',');
  for (std::size_t i = 2; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    std::vector<double> row;
    for (const auto& cell : split(lines[i], ',')) row.push_back(parse_number(cell));
    if (row.size() != t.columns.size()) throw ValidationError("ragged CSV row");
    t.rows.push_back(std::move(row));
  }
  return t;
}

// ---------------------------------------------------------------------------
// Configuration

enum class Command { eta_map, xi_map, decay_curve, oracle_check };

inline Command parse_command(std::string_view s) {
  if (s == "eta-map") return Command::eta_map;
  if (s == "xi-map") return Command::xi_map;
  if (s == "decay-curve") return Command::decay_curve;
  if (s == "oracle-check") return Command::oracle_check;
  throw ValidationError("unknown subcommand '" + std::string(s) + "'");
}

inline std::string_view to_string(Command c) {
  switch (c) {
    case Command::eta_map: return "eta-map";
    case Command::xi_map: return "xi-map";
    case Command::decay_curve: return "decay-curve";
    case Command::oracle_check: return "oracle-check";
  }
  return "";
}

inline const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys{
      "r_a",      "t_a",   "l_a",     "r_b",     "t_b",        "l_b",        "phi1",
      "phi2",     "phi3",  "phi4",    "side",    "alignment",  "u_min",      "u_max",
      "u_count",  "preset", "seed",   "out",     "svg",        "grid_count", "xi_phases",
      "cases",    "points_per_panel", "panels_per_oscillation", "min_panels", "rel_tolerance"};
  return keys;
}

/// Resolved sweep parameters. Keys mirror the command-line flags with '_'
/// in place of '-'.
struct SweepConfig {
  Command command = Command::decay_curve;
  KeyValues given;  ///< user-supplied keys (config file overlaid by flags)

  InterfaceParams interface;
  Side side = Side::a;
  double alignment = 0.0;
  double u_min = 0.01;
  double u_max = 50.0;
  std::size_t u_count = 501;
  std::optional<std::string> preset;
  std::uint64_t seed = 42;
  std::size_t cases = 64;
  std::size_t grid_count = 101;
  double map_loss_a = std::sqrt(0.2);
  double map_loss_b = std::sqrt(0.2);
  std::vector<double> xi_phases{0.0, std::numbers::pi};
  QuadratureSpec quadrature;
  std::optional<std::string> out;
  bool svg = false;

  /// Parameters echoed into the provenance stamp.
  KeyValues echo() const;
};

namespace detail {

inline std::uint64_t parse_count(const std::string& key, const std::string& value) {
  const double v = parse_double(key, value);
  if (!(v >= 0.0) || v != std::floor(v) || v > 1e15) throw ValidationError("'" + key + "' expects a non-negative integer");
  return static_cast<std::uint64_t>(v);
}

inline bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "1" || value == "true" || value == "yes" || value == "on") return true;
  if (value == "0" || value == "false" || value == "no" || value == "off") return false;
  throw ValidationError("'" + key + "' expects a boolean");
}

inline std::string join_numbers(const std::vector<double>& values) {
  std::string s;
  for (std::size_t i = 0; i < values.size(); ++i) s += (i ? "," : "") + format_double(values[i]);
  return s;
}

}  // namespace detail

inline const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{"fig4", "fig5a", "fig5b", "fig6", "fig7a", "fig7b"};
  return names;
}

inline SweepConfig resolve_config(Command command, const KeyValues& given) {
  for (const auto& [k, v] : given)
    if (!known_keys().contains(k)) throw ValidationError("unknown parameter '" + k + "'");

  SweepConfig cfg;
  cfg.command = command;
  cfg.given = given;
  auto has = [&](const char* k) { return given.contains(k); };
  auto num = [&](const char* k) { return parse_double(k, given.at(k)); };
  auto count = [&](const char* k) { return detail::parse_count(k, given.at(k)); };

  cfg.interface = interface_params_from(given);
  if (has("side")) cfg.side = parse_side(given.at("side"));
  if (has("alignment")) cfg.alignment = num("alignment");
  if (!(cfg.alignment >= 0.0 && cfg.alignment <= 1.0)) throw RangeError("alignment must lie in [0, 1]");
  if (has("u_min")) cfg.u_min = num("u_min");
  if (has("u_max")) cfg.u_max = num("u_max");
  if (has("u_count")) cfg.u_count = count("u_count");
  if (cfg.u_count < 2) throw RangeError("u_count must be >= 2");
  if (!(cfg.u_min >= 0.0) || !(cfg.u_min < cfg.u_max) || !std::isfinite(cfg.u_max))
    throw RangeError("u range requires 0 <= u_min < u_max");
  if (has("preset")) {
    const std::string& p = given.at("preset");
    if (std::find(preset_names().begin(), preset_names().end(), p) == preset_names().end())
      throw ValidationError("unknown preset '" + p + "'");
    cfg.preset = p;
  }
  if (has("seed")) cfg.seed = count("seed");
  if (has("cases")) cfg.cases = count("cases");
  if (cfg.cases < 1) throw RangeError("cases must be >= 1");
  if (has("grid_count")) cfg.grid_count = count("grid_count");
  if (cfg.grid_count < 2) throw RangeError("grid_count must be >= 2");
  if (has("l_a")) cfg.map_loss_a = num("l_a");
  if (has("l_b")) cfg.map_loss_b = num("l_b");
  if (has("xi_phases")) {
    cfg.xi_phases.clear();
    for (const auto& part : split(given.at("xi_phases"), ',')) cfg.xi_phases.push_back(parse_double("xi_phases", trim(part)));
  } else if (const char* key = cfg.side == Side::a ? "phi3" : "phi1"; has(key)) {
    cfg.xi_phases = {num(key)};
  }
  if (has("points_per_panel")) cfg.quadrature.points_per_panel = static_cast<int>(count("points_per_panel"));
  if (has("panels_per_oscillation"))
    cfg.quadrature.panels_per_oscillation = static_cast<int>(count("panels_per_oscillation"));
  if (has("min_panels")) cfg.quadrature.min_panels = static_cast<int>(count("min_panels"));
  if (has("rel_tolerance")) cfg.quadrature.rel_tolerance = num("rel_tolerance");
  cfg.quadrature.validate();
  if (has("out")) cfg.out = given.at("out");
  if (has("svg")) cfg.svg = detail::parse_bool("svg", given.at("svg"));
  if (cfg.svg && !cfg.out) throw ValidationError("--svg needs --out to name the plot file");
  return cfg;
}

inline KeyValues SweepConfig::echo() const {
  KeyValues kv;
  auto put = [&](const char* k, double v) { kv[k] = format_double(v); };
  switch (command) {
    case Command::eta_map:
    case Command::xi_map:
      put("l_a", map_loss_a);
      put("l_b", map_loss_b);
      kv["grid_count"] = std::to_string(grid_count);
      if (command == Command::xi_map) {
        kv["side"] = std::string(to_string(side));
        kv["xi_phases"] = detail::join_numbers(xi_phases);
      }
      break;
    case Command::decay_curve:
      put("u_min", u_min);
      put("u_max", u_max);
      kv["u_count"] = std::to_string(u_count);
      if (preset) {
        kv["preset"] = *preset;
      } else {
        put("r_a", interface.r_a);
        put("t_a", interface.t_a);
        put("r_b", interface.r_b);
        put("t_b", interface.t_b);
        if (interface.l_a) put("l_a", *interface.l_a);
        if (interface.l_b) put("l_b", *interface.l_b);
        put("phi1", interface.phases.phi1);
        put("phi2", interface.phases.phi2);
        put("phi3", interface.phases.phi3);
        put("phi4", interface.phases.phi4);
        kv["side"] = std::string(to_string(side));
        put("alignment", alignment);
      }
      break;
    case Command::oracle_check:
      kv["seed"] = std::to_string(seed);
      kv["cases"] = std::to_string(cases);
      kv["points_per_panel"] = std::to_string(quadrature.points_per_panel);
      kv["panels_per_oscillation"] = std::to_string(quadrature.panels_per_oscillation);
      kv["min_panels"] = std::to_string(quadrature.min_panels);
      put("rel_tolerance", quadrature.rel_tolerance);
      break;
  }
  return kv;
}

/// Interface from a resolved config: strict when both loss amplitudes are given.
inline MirrorInterface config_interface(const SweepConfig& cfg) {
  const auto& p = cfg.interface;
  return validate_interface(p, p.l_a && p.l_b ? Validation::strict : Validation::relaxed);
}

// ---------------------------------------------------------------------------
// Evaluation helpers

/// Runs body(i) for i in [0, n) across hardware threads. Each index writes
/// only its own output slot, so results do not depend on scheduling.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  const std::size_t workers = std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, 64);
  if (workers == 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::jthread> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += workers) body(i);
    });
}

/// Builds a side from squared reflection and loss amplitudes; t^2 takes the rest.
inline SideCoefficients side_from_squares(double r2, double l2) {
  return {std::sqrt(r2), std::sqrt(std::max(0.0, 1.0 - r2 - l2)), std::sqrt(l2)};
}

/// Seeded uniform doubles in [0, 1) from mt19937_64, identical on every platform.
class UniformStream {
 public:
  explicit UniformStream(std::uint64_t seed) : engine_(seed) {}
  double next() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double next(double lo, double hi) { return lo + (hi - lo) * next(); }

 private:
  std::mt19937_64 engine_;
};

// ---------------------------------------------------------------------------
// Commands

/// Grid of (r_a, r_b, eta_a^2, eta_b^2) for fixed loss amplitudes; t^2 inferred.
/// Cells that are degenerate (1 + r^2 - t^2 = 0) are omitted and counted.
inline ResultTable cmd_eta_map(const SweepConfig& cfg) {
  ResultTable t{"eta-map", cfg.echo(), {"r_a", "r_b", "eta_a_sq", "eta_b_sq"}, {}};
  const double la2 = cfg.map_loss_a * cfg.map_loss_a, lb2 = cfg.map_loss_b * cfg.map_loss_b;
  if (!(la2 <= 1.0 && lb2 <= 1.0 && cfg.map_loss_a >= 0.0 && cfg.map_loss_b >= 0.0))
    throw RangeError("map loss amplitudes must lie in [0, 1]");
  const auto ra = linear_grid(0.0, std::sqrt(1.0 - la2), cfg.grid_count);
  const auto rb = linear_grid(0.0, std::sqrt(1.0 - lb2), cfg.grid_count);
  std::size_t skipped = 0;
  for (double r_a : ra) {
    for (double r_b : rb) {
      try {
        const auto a = side_from_squares(r_a * r_a, la2), b = side_from_squares(r_b * r_b, lb2);
        const MirrorInterface m = validate_interface({r_a, a.t, cfg.map_loss_a, r_b, b.t, cfg.map_loss_b, {}},
                                                     Validation::strict);
        const auto eta = normalisation_constants(m);
        t.rows.push_back({r_a, r_b, eta.eta_a_sq, eta.eta_b_sq});
      } catch (const DegenerateTransparency&) {
        ++skipped;
      }
    }
  }
  t.parameters["skipped_cells"] = std::to_string(skipped);
  return t;
}

/// Grid of (r_a, r_b, xi per requested phase); the phase is phi3 for side a, phi1 for side b.
inline ResultTable cmd_xi_map(const SweepConfig& cfg) {
  ResultTable t{"xi-map", cfg.echo(), {"r_a", "r_b"}, {}};
  for (double phi : cfg.xi_phases) t.columns.push_back("xi[phi=" + format_double(phi) + "]");
  const double la2 = cfg.map_loss_a * cfg.map_loss_a, lb2 = cfg.map_loss_b * cfg.map_loss_b;
  if (!(la2 <= 1.0 && lb2 <= 1.0 && cfg.map_loss_a >= 0.0 && cfg.map_loss_b >= 0.0))
    throw RangeError("map loss amplitudes must lie in [0, 1]");
  const auto ra = linear_grid(0.0, std::sqrt(1.0 - la2), cfg.grid_count);
  const auto rb = linear_grid(0.0, std::sqrt(1.0 - lb2), cfg.grid_count);
  std::size_t skipped = 0;
  for (double r_a : ra) {
    for (double r_b : rb) {
      try {
        std::vector<double> row{r_a, r_b};
        const auto a = side_from_squares(r_a * r_a, la2), b = side_from_squares(r_b * r_b, lb2);
        for (double phi : cfg.xi_phases) {
          Phases ph;
          (cfg.side == Side::a ? ph.phi3 : ph.phi1) = phi;
          const MirrorInterface m =
              validate_interface({r_a, a.t, cfg.map_loss_a, r_b, b.t, cfg.map_loss_b, ph}, Validation::strict);
          row.push_back(mirror_parameter(m, cfg.side).xi);
        }
        t.rows.push_back(std::move(row));
      } catch (const DegenerateTransparency&) {
        ++skipped;
      }
    }
  }
  t.parameters["skipped_cells"] = std::to_string(skipped);
  return t;
}

/// One curve of a figure preset. All presets place the atom on side a.
struct CurveDefinition {
  double r2_a, l2_a, r2_b, l2_b;
  double phi3;
  double alignment;

  std::string label() const {
    return "r2a=" + format_double(r2_a) + ";l2a=" + format_double(l2_a) + ";r2b=" + format_double(r2_b) +
           ";l2b=" + format_double(l2_b) + ";phi3=" + format_double(phi3) + ";d1sq=" + format_double(alignment);
  }

  MirrorInterface interface() const {
    const auto a = side_from_squares(r2_a, l2_a), b = side_from_squares(r2_b, l2_b);
    Phases ph;
    ph.phi3 = phi3;
    return MirrorInterface::make(a, b, ph);
  }

  static std::optional<CurveDefinition> from_label(std::string_view label) {
    CurveDefinition c{};
    double* fields[] = {&c.r2_a, &c.l2_a, &c.r2_b, &c.l2_b, &c.phi3, &c.alignment};
    static constexpr std::string_view names[] = {"r2a", "l2a", "r2b", "l2b", "phi3", "d1sq"};
    const auto parts = split(label, ';');
    if (parts.size() != 6) return std::nullopt;
    for (std::size_t i = 0; i < 6; ++i) {
      const auto eq = parts[i].find('=');
      if (eq == std::string::npos || parts[i].substr(0, eq) != names[i]) return std::nullopt;
      *fields[i] = parse_number(std::string_view(parts[i]).substr(eq + 1));
    }
    return c;
  }
};

/// Parameter families of the figure presets (phi3 = pi throughout unless noted):
///   fig4   lossless symmetric, xi in {+-0.5, +-1, +-1.5} (phi3 = 0 for xi > 0), |d1|^2 in {0, 1}
///   fig5a  lossless symmetric r in {0.2, 0.4, 0.6, 0.8, 1}, |d1|^2 in {0, 1}
///   fig5b  symmetric l^2 = 0.9, r^2 in {0, 0.025, 0.05, 0.075, 0.1}, |d1|^2 in {0, 1}
///   fig6   symmetric r^2 = 0.4, l^2 in {0, 0.1, ..., 0.6}, |d1|^2 = 0
///   fig7a  r^2 = 0.4, l_b^2 = 0.6 held, l_a^2 in {0, 0.2, 0.4, 0.6}, |d1|^2 = 0
///   fig7b  r^2 = 0.4, l_a^2 = 0.6 held, l_b^2 in {0, 0.2, 0.4, 0.6}, |d1|^2 = 0
inline std::vector<CurveDefinition> preset_curves(std::string_view name) {
  constexpr double pi = std::numbers::pi;
  std::vector<CurveDefinition> out;
  if (name == "fig4") {
    for (double alignment : {0.0, 1.0})
      for (double xi : {-1.5, -1.0, -0.5, 0.5, 1.0, 1.5}) {
        const double r = std::abs(xi) / 1.5;
        out.push_back({r * r, 0.0, r * r, 0.0, xi < 0.0 ? pi : 0.0, alignment});
      }
  } else if (name == "fig5a") {
    for (double alignment : {0.0, 1.0})
      for (double r : {0.2, 0.4, 0.6, 0.8, 1.0}) out.push_back({r * r, 0.0, r * r, 0.0, pi, alignment});
  } else if (name == "fig5b") {
    for (double alignment : {0.0, 1.0})
      for (double r2 : {0.0, 0.025, 0.05, 0.075, 0.1}) out.push_back({r2, 0.9, r2, 0.9, pi, alignment});
  } else if (name == "fig6") {
    for (double l2 : {0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6}) out.push_back({0.4, l2, 0.4, l2, pi, 0.0});
  } else if (name == "fig7a") {
    for (double l2 : {0.0, 0.2, 0.4, 0.6}) out.push_back({0.4, l2, 0.4, 0.6, pi, 0.0});
  } else if (name == "fig7b") {
    for (double l2 : {0.0, 0.2, 0.4, 0.6}) out.push_back({0.4, 0.6, 0.4, l2, pi, 0.0});
  } else {
    throw ValidationError("unknown preset '" + std::string(name) + "'");
  }
  return out;
}

inline std::string ratio_column(Side side) {
  return side == Side::a ? "gamma_mirr_over_gamma_air" : "gamma_mirr_over_gamma_med";
}

/// Decay-rate curves over a linear u grid: one configured curve, or every
/// curve of a preset (one column per curve, labelled by its parameters).
inline ResultTable cmd_decay_curve(const SweepConfig& cfg) {
  ResultTable t{"decay-curve", cfg.echo(), {"u"}, {}};
  const auto u = linear_grid(cfg.u_min, cfg.u_max, cfg.u_count);
  std::vector<std::function<double(double)>> curves;
  if (cfg.preset) {
    for (const auto& c : preset_curves(*cfg.preset)) {
      t.columns.push_back(c.label());
      curves.emplace_back([m = c.interface(), a = c.alignment](double x) {
        return relative_decay_rate(m, Side::a, a, x);
      });
    }
  } else {
    t.columns.push_back(ratio_column(cfg.side));
    curves.emplace_back([m = config_interface(cfg), s = cfg.side, a = cfg.alignment](double x) {
      return relative_decay_rate(m, s, a, x);
    });
  }
  t.rows.resize(u.size());
  parallel_for(u.size(), [&](std::size_t i) {
    std::vector<double> row{u[i]};
    for (const auto& f : curves) row.push_back(f(u[i]));
    t.rows[i] = std::move(row);
  });
  return t;
}

inline constexpr double oracle_acceptance_threshold = 1e-6;
inline constexpr double oracle_distances[] = {0.1, 1.0, 5.0, 20.0, 100.0};

/// One seeded oracle-check configuration.
struct OracleCase {
  MirrorInterface interface;
  Side side;
  DipoleOrientation dipole;
  double u;
};

/// Draws `count` configurations: independent per-side r^2, l^2 uniform on
/// r^2 + l^2 <= 1 (degenerate draws rejected), uniform phases, complex
/// dipole components uniform in the unit square before normalisation,
/// u cycling through oracle_distances, side alternating a/b.
inline std::vector<OracleCase> oracle_cases(std::uint64_t seed, std::size_t count) {
  UniformStream rng(seed);
  auto draw_side = [&] {
    double r2 = rng.next(), l2 = rng.next();
    if (r2 + l2 > 1.0) r2 = 1.0 - r2, l2 = 1.0 - l2;
    return side_from_squares(r2, l2);
  };
  std::vector<OracleCase> out;
  out.reserve(count);
  while (out.size() < count) {
    const SideCoefficients a = draw_side(), b = draw_side();
    Phases ph;
    ph.phi1 = rng.next(0.0, 2.0 * std::numbers::pi);
    ph.phi2 = rng.next(0.0, 2.0 * std::numbers::pi);
    ph.phi3 = rng.next(0.0, 2.0 * std::numbers::pi);
    ph.phi4 = rng.next(0.0, 2.0 * std::numbers::pi);
    std::complex<double> d[3];
    for (auto& c : d) c = {rng.next(-1.0, 1.0), rng.next(-1.0, 1.0)};
    try {
      const std::size_t i = out.size();
      out.push_back({MirrorInterface::make(a, b, ph), i % 2 == 0 ? Side::a : Side::b,
                     DipoleOrientation::normalised(d[0], d[1], d[2]),
                     oracle_distances[i % std::size(oracle_distances)]});
    } catch (const ValidationError&) {
      // redraw
    }
  }
  return out;
}

/// Per-case oracle comparison. The final row (case = -1) summarises: its
/// max_rel_error is the worst case and `failed` the number of failures.
inline ResultTable cmd_oracle_check(const SweepConfig& cfg) {
  ResultTable t{"oracle-check",
                cfg.echo(),
                {"case", "side", "u", "alignment", "r_a", "t_a", "l_a", "r_b", "t_b", "l_b", "phi1", "phi3",
                 "closed_form", "oracle_2d", "oracle_1d", "max_rel_error", "abs_error_1d", "failed"},
                {}};
  const auto cases = oracle_cases(cfg.seed, cfg.cases);
  t.rows.resize(cases.size());
  parallel_for(cases.size(), [&](std::size_t i) {
    const OracleCase& c = cases[i];
    const auto& m = c.interface;
    double closed = relative_decay_rate(m, c.side, c.dipole.alignment(), c.u);
    double o2 = 0.0, o1 = 0.0;
    bool failed = false;
    try {
      o2 = decay_rate_2d_oracle(m, c.side, c.dipole, c.u, cfg.quadrature);
    } catch (const QuadratureBudgetExceeded& e) {
      o2 = e.fine();
      failed = true;
    }
    try {
      o1 = decay_rate_1d_oracle(m, c.side, c.dipole.alignment(), c.u, cfg.quadrature);
    } catch (const QuadratureBudgetExceeded& e) {
      o1 = e.fine();
      failed = true;
    }
    const double err = std::max(relative_deviation(o2, closed), relative_deviation(o1, closed));
    failed = failed || !(err <= oracle_acceptance_threshold);
    t.rows[i] = {static_cast<double>(i), c.side == Side::a ? 0.0 : 1.0, c.u, c.dipole.alignment(),
                 m.side_a().r, m.side_a().t, m.side_a().l, m.side_b().r, m.side_b().t, m.side_b().l,
                 m.phi1(), m.phi3(), closed, o2, o1, err, std::abs(o1 - closed), failed ? 1.0 : 0.0};
  });
  std::vector<double> summary(t.columns.size(), 0.0);
  summary[0] = -1.0;
  for (const auto& row : t.rows) {
    summary[15] = std::max(summary[15], row[15]);
    summary[16] = std::max(summary[16], row[16]);
    summary[17] += row[17];
  }
  t.rows.push_back(std::move(summary));
  return t;
}

/// Failure count recorded in an oracle-check table's summary row.
inline std::size_t oracle_failures(const ResultTable& t) {
  return static_cast<std::size_t>(t.rows.back()[t.column("failed")]);
}

// ---------------------------------------------------------------------------
// SVG output

namespace detail {

inline std::string svg_header(int width, int height) {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width) + "\" height=\"" +
         std::to_string(height) + "\" viewBox=\"0 0 " + std::to_string(width) + " " + std::to_string(height) +
         "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

inline std::string svg_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

inline std::pair<double, double> finite_range(const ResultTable& t, std::size_t first, std::size_t last) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& row : t.rows)
    for (std::size_t c = first; c < last; ++c)
      if (std::isfinite(row[c])) lo = std::min(lo, row[c]), hi = std::max(hi, row[c]);
  if (!(lo < hi)) lo -= 0.5, hi += 0.5;
  return {lo, hi};
}

}  // namespace detail

/// Line plot of every column against the first one.
inline std::string svg_line_plot(const ResultTable& t) {
  constexpr int W = 800, H = 500, margin = 60;
  static constexpr const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b",
                                            "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
  const auto [x0, x1] = detail::finite_range(t, 0, 1);
  const auto [y0, y1] = detail::finite_range(t, 1, t.columns.size());
  auto px = [&](double x) { return margin + (x - x0) / (x1 - x0) * (W - 2 * margin); };
  auto py = [&](double y) { return H - margin - (y - y0) / (y1 - y0) * (H - 2 * margin); };
  std::string s = detail::svg_header(W, H);
  s += "<rect x=\"" + std::to_string(margin) + "\" y=\"" + std::to_string(margin) + "\" width=\"" +
       std::to_string(W - 2 * margin) + "\" height=\"" + std::to_string(H - 2 * margin) +
       "\" fill=\"none\" stroke=\"black\"/>\n";
  s += "<text x=\"" + std::to_string(W / 2) + "\" y=\"" + std::to_string(H - 20) + "\" text-anchor=\"middle\">" +
       detail::svg_escape(t.columns[0]) + " [" + format_double(x0) + ", " + format_double(x1) + "]</text>\n";
  s += "<text x=\"10\" y=\"30\">y [" + format_double(y0) + ", " + format_double(y1) + "]</text>\n";
  for (std::size_t c = 1; c < t.columns.size(); ++c) {
    s += "<polyline fill=\"none\" stroke=\"" + std::string(palette[(c - 1) % std::size(palette)]) +
         "\" stroke-width=\"1.5\" points=\"";
    for (const auto& row : t.rows) {
      if (!std::isfinite(row[c])) continue;
      s += format_double(std::round(px(row[0]) * 100) / 100) + "," + format_double(std::round(py(row[c]) * 100) / 100) + " ";
    }
    if (s.back() == ' ') s.pop_back();
    s += "\"><title>" + detail::svg_escape(t.columns[c]) + "</title></polyline>\n";
  }
  return s + "</svg>\n";
}

/// Heat map of column `value` over the (column 0, column 1) grid; blue low, red high.
inline std::string svg_heat_map(const ResultTable& t, std::size_t value) {
  constexpr int W = 600, H = 600, margin = 50;
  const auto [x0, x1] = detail::finite_range(t, 0, 1);
  const auto [y0, y1] = detail::finite_range(t, 1, 2);
  const auto [v0, v1] = detail::finite_range(t, value, value + 1);
  std::set<double> xs, ys;
  for (const auto& row : t.rows) xs.insert(row[0]), ys.insert(row[1]);
  const double cw = static_cast<double>(W - 2 * margin) / static_cast<double>(std::max<std::size_t>(xs.size(), 1));
  const double ch = static_cast<double>(H - 2 * margin) / static_cast<double>(std::max<std::size_t>(ys.size(), 1));
  std::string s = detail::svg_header(W, H);
  s += "<text x=\"10\" y=\"30\">" + detail::svg_escape(t.columns[value]) + " [" + format_double(v0) + ", " +
       format_double(v1) + "]</text>\n";
  for (const auto& row : t.rows) {
    const double f = std::clamp((row[value] - v0) / (v1 - v0), 0.0, 1.0);
    const int red = static_cast<int>(std::lround(255 * f)), blue = 255 - red;
    const double x = margin + (row[0] - x0) / (x1 - x0) * (W - 2 * margin - cw);
    const double y = H - margin - ch - (row[1] - y0) / (y1 - y0) * (H - 2 * margin - ch);
    s += "<rect x=\"" + format_double(std::round(x * 100) / 100) + "\" y=\"" + format_double(std::round(y * 100) / 100) +
         "\" width=\"" + format_double(std::ceil(cw * 100) / 100) + "\" height=\"" +
         format_double(std::ceil(ch * 100) / 100) + "\" fill=\"rgb(" + std::to_string(red) + ",0," +
         std::to_string(blue) + ")\"/>\n";
  }
  return s + "</svg>\n";
}

/// The plot matching a command's table: heat map for the maps, lines otherwise.
inline std::string svg_for(const ResultTable& t) {
  if (t.command == "eta-map" || t.command == "xi-map") return svg_heat_map(t, 2);
  if (t.command == "oracle-check") {
    ResultTable errors{t.command, t.parameters, {"case", "max_rel_error"}, {}};
    for (const auto& row : t.rows)
      if (row[0] >= 0.0) errors.rows.push_back({row[0], row[t.column("max_rel_error")]});
    return svg_line_plot(errors);
  }
  return svg_line_plot(t);
}

inline ResultTable run_sweep(const SweepConfig& cfg) {
  switch (cfg.command) {
    case Command::eta_map: return cmd_eta_map(cfg);
    case Command::xi_map: return cmd_xi_map(cfg);
    case Command::decay_curve: return cmd_decay_curve(cfg);
    case Command::oracle_check: return cmd_oracle_check(cfg);
  }
  throw ValidationError("unhandled command");
}

}  // namespace mirrorfield
