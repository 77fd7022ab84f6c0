// Acceptance run: one PASS/FAIL line per criterion, tolerances fixed below.
// Exit status is nonzero if any criterion fails.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <memory>
#include <numbers>
#include <string>
#include <vector>

#include "mirrorfield/emission_rates.hpp"
#include "mirrorfield/gauss_legendre.hpp"
#include "mirrorfield/interface_model.hpp"
#include "mirrorfield/mode_functions.hpp"
#include "mirrorfield/quadrature_oracle.hpp"
#include "mirrorfield/sweep.hpp"
#include "support.hpp"

using namespace mirrorfield;

namespace {

constexpr double pi = std::numbers::pi;

// Pinned tolerances.
constexpr double c1_rel_2d = 1e-6;
constexpr double c1_abs_1d = 1e-8;
constexpr double c1_seconds = 60.0;
constexpr double c2_identity = 1e-12;
constexpr double c2_exact_ulps = 4.0;
constexpr double c3_limit = 1e-6;
constexpr double c3_u = 1e-7;
constexpr double c4_u = 1e3;
constexpr double c4_slack = 1e-6;
constexpr double c5_attained = 1e-12;
constexpr double c5_near_r = 2e-6, c5_near_phase = 2e-6, c5_near_t2 = 2e-12;
constexpr double c6_low_target = 1.0 - 2.0 * 0.31622776601683794 / 1.1;  // 1 - 2 sqrt(0.1) / 1.1
constexpr double c6_low_tol = 1e-3;
constexpr double c6_max_lo = 1.5, c6_max_hi = 1.7;
constexpr double c7_scaling = 1e-12;
constexpr double c7_sum_rule = 1e-9;
constexpr double c8_flat = 1e-12;
constexpr double c8_shift = 0.05;

int failures = 0;

void report(int id, const char* name, bool pass, const std::string& detail) {
  std::printf("criterion %d [%s]: %s (%s)\n", id, name, pass ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

MirrorInterface from_squares(double ra2, double la2, double rb2, double lb2, double phi3) {
  Phases p;
  p.phi3 = phi3;
  return MirrorInterface::make(side_from_squares(ra2, la2), side_from_squares(rb2, lb2), p);
}

void oracle_equivalence() {
  const auto start = std::chrono::steady_clock::now();
  const auto cases = oracle_cases(42, 64);
  double worst_2d = 0, worst_1d = 0;
  bool ok = true;
  std::size_t budget = 0;
  for (const auto& c : cases) {
    try {
      const double closed = relative_decay_rate(c.interface, c.side, c.dipole.alignment(), c.u);
      const double o2 = decay_rate_2d_oracle(c.interface, c.side, c.dipole, c.u);
      const double o1 = decay_rate_1d_oracle(c.interface, c.side, c.dipole.alignment(), c.u);
      worst_2d = std::max(worst_2d, std::abs(o2 - closed) / std::abs(closed));
      worst_1d = std::max(worst_1d, std::abs(o1 - closed));
    } catch (const QuadratureBudgetExceeded&) {
      ++budget;
      ok = false;
    }
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  ok = ok && worst_2d <= c1_rel_2d && worst_1d <= c1_abs_1d && seconds < c1_seconds;
  report(1, "oracle equivalence", ok,
         fmt("64 cases, max 2D rel err %.3g <= 1e-6, max 1D abs err %.3g <= 1e-8, %.2f s < 60 s", worst_2d, worst_1d,
             seconds) +
             (budget ? ", " + std::to_string(budget) + " quadrature failures" : ""));
}

void normalisation_identities() {
  testing::Gen g(20240601);
  double worst = 0, min_eta = 1e300;
  for (int i = 0; i < 10000; ++i) {
    const auto m = g.interface();
    const auto eta = normalisation_constants(m);
    min_eta = std::min({min_eta, eta.eta_a_sq, eta.eta_b_sq});
    worst = std::max({worst, std::abs(constant_term(m, Side::a) - 1), std::abs(constant_term(m, Side::b) - 1)});
  }
  double worst_ulps = 0;
  auto ulps_from_two = [](double v) { return std::abs(v - 2.0) / (std::nextafter(2.0, 3.0) - 2.0); };
  const auto mirror = normalisation_constants(MirrorInterface::make({1, 0, 0}, {1, 0, 0}));
  worst_ulps = std::max({ulps_from_two(mirror.eta_a_sq), ulps_from_two(mirror.eta_b_sq)});
  for (int i = 1; i < 1000; ++i) {
    const auto eta = normalisation_constants(lossless_interface(i / 1000.0));
    worst_ulps = std::max({worst_ulps, ulps_from_two(eta.eta_a_sq), ulps_from_two(eta.eta_b_sq)});
  }
  const bool pass = worst <= c2_identity && min_eta >= 1.0 && worst_ulps <= c2_exact_ulps;
  report(2, "normalisation identities", pass,
         fmt("1e4 interfaces, max identity residual %.3g <= 1e-12, min eta^2 %.6g >= 1, "
             "symmetric lossless eta^2 within %.0f ulp of 2",
             worst, min_eta, worst_ulps));
}

void perfect_mirror_limits() {
  const auto m = MirrorInterface::make({1, 0, 0}, {1, 0, 0}, {0, 0, pi, 0});
  const double par = relative_decay_rate(m, Side::a, 0.0, c3_u);
  const double perp = relative_decay_rate(m, Side::a, 1.0, c3_u);
  const double xi = mirror_parameter(m, Side::a).xi;
  const double taylor_par = 1 + xi * 2.0 / 3, taylor_perp = 1 + xi * (2.0 / 3 - 4.0 / 3);
  const bool pass = std::abs(par - taylor_par) <= c3_limit && std::abs(perp - taylor_perp) <= c3_limit &&
                    std::abs(taylor_par) <= c3_limit && std::abs(taylor_perp - 2) <= c3_limit;
  report(3, "perfect-mirror limits", pass,
         fmt("u=1e-7: parallel %.3g (limit %.3g), perpendicular %.12g (limit %.12g)", par, taylor_par, perp,
             taylor_perp));
}

void asymptotic_freedom() {
  testing::Gen g(4242);
  double worst_excess = -1e300;
  std::size_t tested = 0;
  auto check = [&](const MirrorInterface& m, Side s, double a) {
    const double ratio = relative_decay_rate(m, s, a, c4_u);
    const double bound = 3 * std::abs(mirror_parameter(m, s).xi) / c4_u + c4_slack;
    worst_excess = std::max(worst_excess, std::abs(ratio - 1) - bound);
    ++tested;
  };
  for (int i = 0; i < 10000; ++i) check(g.interface(), g.side_choice(), g.uniform());
  for (const auto& name : preset_names())
    for (const auto& c : preset_curves(name)) check(c.interface(), Side::a, c.alignment);
  for (double phi : {0.0, pi})
    for (double a : {0.0, 1.0}) check(MirrorInterface::make({1, 0, 0}, {1, 0, 0}, {phi, 0, phi, 0}), Side::a, a);
  report(4, "asymptotic freedom", worst_excess <= 0,
         std::to_string(tested) + " configurations at u=1e3, worst |ratio-1| - bound = " + fmt("%.3g", worst_excess));
}

void mirror_parameter_range() {
  testing::Gen g(777);
  double max_xi = 0;
  std::size_t attained_elsewhere = 0, near_bound = 0;
  // |xi| is quadratic in 1 - r and in the phase offset but linear in t_opp^2
  // near the extreme, so coming within 1e-12 of the bound pins the
  // configuration to this neighbourhood of r = 1, t_opp = 0, phi in {0, pi}.
  auto extreme = [](const MirrorInterface& m, Side s) {
    const double t = m.side(opposite(s)).t;
    return 1.0 - m.side(s).r <= c5_near_r && std::abs(std::sin(m.reflection_phase(s))) <= c5_near_phase &&
           t * t <= c5_near_t2;
  };
  auto visit = [&](const MirrorInterface& m) {
    for (Side s : {Side::a, Side::b}) {
      const double xi = std::abs(mirror_parameter(m, s).xi);
      max_xi = std::max(max_xi, xi);
      if (xi >= 1.5 - c5_attained) {
        ++near_bound;
        if (!extreme(m, s)) ++attained_elsewhere;
      }
    }
  };
  for (int i = 0; i < 100000; ++i) visit(g.interface());
  // Near-extreme draws: r close to one, small opposite transmission, phase near 0 or pi.
  for (int i = 0; i < 20000; ++i) {
    const double r2 = 1 - std::pow(10.0, g.uniform(-12, -1));
    const double tb2 = std::pow(10.0, g.uniform(-12, -1)) * g.uniform();
    const double phase = (i % 2 ? pi : 0.0) + std::pow(10.0, g.uniform(-8, -1)) * (g.uniform() - 0.5);
    Phases p;
    p.phi3 = reduce_phase(phase);
    const double rb2 = g.uniform() * (1 - tb2);
    visit(MirrorInterface::make(side_from_squares(r2, g.uniform() * (1 - r2)), side_from_squares(rb2, 1 - rb2 - tb2), p));
  }
  // The bound itself at the extreme configurations (loss on the opposite side allowed).
  double extreme_gap = 0;
  for (double phi : {0.0, pi})
    for (double rb : {1.0, 0.6, 0.0}) {
      Phases p;
      p.phi3 = phi;
      const auto m = MirrorInterface::make({1, 0, 0}, {rb, 0, std::sqrt(1 - rb * rb)}, p);
      extreme_gap = std::max(extreme_gap, std::abs(std::abs(mirror_parameter(m, Side::a).xi) - 1.5));
      visit(m);
    }
  const bool pass = max_xi <= 1.5 && attained_elsewhere == 0 && extreme_gap <= c5_attained;
  report(5, "mirror-parameter range", pass,
         fmt("max sampled |xi| = %.15g <= 1.5, extreme configurations within %.3g of 1.5, ", max_xi, extreme_gap) +
             std::to_string(near_bound) + " draws within 1e-12 of the bound, " + std::to_string(attained_elsewhere) +
             " of them away from r=1, t_opp=0, phi in {0, pi}");
}

void lossy_figure_value() {
  const auto curves = preset_curves("fig5b");
  const auto it = std::find_if(curves.begin(), curves.end(),
                               [](const CurveDefinition& c) { return c.r2_a == 0.1 && c.alignment == 0.0; });
  const auto m = it->interface();
  const double low = relative_decay_rate(m, Side::a, 0.0, 1e-9);
  double high = 0, at = 0;
  for (double u : linear_grid(0.01, 50.0, 50000)) {
    const double v = relative_decay_rate(m, Side::a, 0.0, u);
    if (v > high) high = v, at = u;
  }
  const bool low_ok = std::abs(low - c6_low_target) <= c6_low_tol;
  const bool high_ok = high >= c6_max_lo && high <= c6_max_hi;
  report(6, "lossy-case figure value", low_ok && high_ok,
         fmt("u->0 value %.7f vs %.7f within 1e-3: ", low, c6_low_target) + (low_ok ? "yes" : "no") +
             fmt("; max over u in [0.01, 50] is %.5f at u=%.3f, required in [1.5, 1.7]: ", high, at) +
             (high_ok ? "yes" : "no"));
  // Informational: the perpendicular member of the same family.
  const auto perp = std::find_if(curves.begin(), curves.end(),
                                 [](const CurveDefinition& c) { return c.r2_a == 0.1 && c.alignment == 1.0; });
  double perp_high = 0;
  for (double u : linear_grid(0.01, 50.0, 50000))
    perp_high = std::max(perp_high, relative_decay_rate(perp->interface(), Side::a, 1.0, u));
  std::printf("  info: |d1|^2=1 curve of the same family peaks at %.5f; |d1|^2=0 curve spans [%.5f, %.5f]\n",
              perp_high, low, high);
}

void medium_scaling() {
  testing::Gen g(11);
  const auto c = PhysicalConstants::codata2018();
  const AtomParams atom{2 * pi * 4.5e14, 2.5e-11};
  double worst_scaling = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto med = Medium::make(g.uniform(1e-2, 30.0));
    worst_scaling = std::max(worst_scaling, testing::rel_diff(gamma_med(atom, c, med), refractive_index(med) * gamma_air(atom, c)));
  }
  const auto rule = gauss_legendre(24);
  double worst_sum = 0;
  for (int i = 0; i < 100; ++i) {
    const auto d = g.dipole();
    auto polar = [&](double v) {
      auto azimuth = [&](double phi) {
        const auto b = polarisation_basis({std::acos(v), phi, 1});
        double s = 0;
        for (const Vec3* e : {&b.e1, &b.e2})
          s += std::norm(std::conj(d.d1()) * e->x() + std::conj(d.d2()) * e->y() + std::conj(d.d3()) * e->z());
        return s;
      };
      return integrate_composite(azimuth, 0.0, 2 * pi, 4, rule);
    };
    const double sum = 3.0 / (8 * pi) * integrate_composite(polar, -1.0, 1.0, 2, rule);
    worst_sum = std::max(worst_sum, std::abs(sum - 1));
  }
  report(7, "medium scaling", worst_scaling <= c7_scaling && worst_sum <= c7_sum_rule,
         fmt("max |gamma_med/(n gamma_air) - 1| = %.3g <= 1e-12; sum rule residual over 100 dipoles %.3g <= 1e-9",
             worst_scaling, worst_sum));
}

void fig7_asymmetry() {
  const auto u = linear_grid(0.01, 50.0, 501);
  double spread_a = 0;
  std::vector<double> reference;
  for (double la2 : {0.0, 0.2, 0.4}) {
    const auto m = from_squares(0.4, la2, 0.4, 0.6, pi);
    for (std::size_t i = 0; i < u.size(); ++i) {
      const double v = relative_decay_rate(m, Side::a, 0.0, u[i]);
      if (reference.size() < u.size()) reference.push_back(v);
      spread_a = std::max(spread_a, std::abs(v - reference[i]));
    }
  }
  std::vector<double> lows;
  for (double lb2 : {0.0, 0.2, 0.4}) lows.push_back(relative_decay_rate(from_squares(0.4, 0.6, 0.4, lb2, pi), Side::a, 0.0, 0.0));
  double min_step = 1e300;
  for (std::size_t i = 1; i < lows.size(); ++i) min_step = std::min(min_step, std::abs(lows[i] - lows[i - 1]));
  report(8, "fig7 asymmetry", spread_a < c8_flat && min_step > c8_shift,
         fmt("l_a sweep max pointwise change %.3g < 1e-12; l_b sweep u->0 values %.4f, %.4f, %.4f",
             spread_a, lows[0], lows[1], lows[2]) +
             fmt(" (min step %.3g > 0.05)", min_step));
}

std::string capture(const std::string& cmd) {
  std::string out;
  std::unique_ptr<FILE, int (*)(FILE*)> pipe(popen(cmd.c_str(), "r"), pclose);
  if (!pipe) return out;
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe.get())) > 0) out.append(buf.data(), n);
  return out;
}

void determinism() {
  const std::string cmd = std::string(MIRRORFIELD_CLI) + " oracle-check --seed 42";
  const std::string first = capture(cmd), second = capture(cmd);
  const bool pass = !first.empty() && first == second && first.rfind("# provenance: oracle-check", 0) == 0;
  report(9, "determinism", pass, std::to_string(first.size()) + " bytes, runs " + (first == second ? "identical" : "differ"));
}

}  // namespace

int main() {
  oracle_equivalence();
  normalisation_identities();
  perfect_mirror_limits();
  asymptotic_freedom();
  mirror_parameter_range();
  lossy_figure_value();
  medium_scaling();
  fig7_asymmetry();
  determinism();
  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
