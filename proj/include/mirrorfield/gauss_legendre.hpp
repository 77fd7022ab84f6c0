#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace mirrorfield {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const noexcept { return nodes.size(); }
};

namespace detail {

/// Returns (P_n(z), P_{n-1}(z)) by the three-term recurrence.
inline std::pair<double, double> legendre_pair(std::size_t n, double z) {
  double prev = 1.0, cur = z;
  for (std::size_t k = 2; k <= n; ++k) {
    const double next = ((2.0 * k - 1.0) * z * cur - (k - 1.0) * prev) / static_cast<double>(k);
    prev = cur;
    cur = next;
  }
  return {cur, prev};
}

}  // namespace detail

/// n-point Gauss-Legendre rule on [-1, 1]; nodes by Newton iteration on P_n.
inline QuadratureRule gauss_legendre(std::size_t n) {
  if (n == 0) throw std::invalid_argument("Gauss-Legendre rule needs at least one node");
  QuadratureRule rule{std::vector<double>(n), std::vector<double>(n)};
  if (n == 1) {
    rule.nodes[0] = 0.0;
    rule.weights[0] = 2.0;
    return rule;
  }
  const double dn = static_cast<double>(n);
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (dn + 0.5));
    for (int iter = 0; iter < 100; ++iter) {
      const auto [p, q] = detail::legendre_pair(n, z);
      const double step = p / (dn * (z * p - q) / (z * z - 1.0));
      z -= step;
      if (std::abs(step) < 1e-15) break;
    }
    const auto [p, q] = detail::legendre_pair(n, z);
    const double dp = dn * (z * p - q) / (z * z - 1.0);
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    rule.nodes[i] = -z;
    rule.nodes[n - 1 - i] = z;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

/// Pairwise (cascade) summation; the result depends only on the order of the input.
inline double pairwise_sum(std::span<const double> values) {
  if (values.empty()) return 0.0;
  if (values.size() <= 8) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t mid = values.size() / 2;
  return pairwise_sum(values.first(mid)) + pairwise_sum(values.subspan(mid));
}

/// Composite rule: `panels` equal panels on [lo, hi], each with `rule`.
/// Panel sums are combined by pairwise summation.
template <class F>
double integrate_composite(F&& f, double lo, double hi, std::size_t panels, const QuadratureRule& rule) {
  std::vector<double> panel_sums(panels);
  const double width = (hi - lo) / static_cast<double>(panels);
  const double half = 0.5 * width;
  std::vector<double> terms(rule.size());
  for (std::size_t p = 0; p < panels; ++p) {
    const double mid = lo + (static_cast<double>(p) + 0.5) * width;
    for (std::size_t i = 0; i < rule.size(); ++i) terms[i] = rule.weights[i] * f(mid + half * rule.nodes[i]);
    panel_sums[p] = half * pairwise_sum(terms);
  }
  return pairwise_sum(panel_sums);
}

}  // namespace mirrorfield
