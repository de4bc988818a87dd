#include "charpit/linalg.hpp"

#include <cmath>
#include <random>
#include <vector>

namespace charpit {

bool is_proper(const AugmentedSystem& a, double inv_tol) {
  return std::max(std::abs(a.p1), std::abs(a.p2)) > inv_tol;
}

std::optional<double> proportionality_factor(std::span<const double> a,
                                             std::span<const double> b,
                                             double inv_tol, double tol) {
  std::size_t dominant = 0;
  for (std::size_t i = 1; i < a.size(); ++i)
    if (std::abs(a[i]) > std::abs(a[dominant])) dominant = i;
  if (std::abs(a[dominant]) <= inv_tol)
    throw Error("proportionality_factor: vector is not proper");

  const double lambda = b[dominant] / a[dominant];
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double scale = std::max(1.0, std::abs(b[i]) + std::abs(lambda * a[i]));
    if (std::abs(b[i] - lambda * a[i]) > tol * scale) return std::nullopt;
  }
  return lambda;
}

bool kernel_containment_generic(std::span<const double> a, std::span<const double> b,
                                double inv_tol, double tol) {
  const bool direct = proportionality_factor(a, b, inv_tol, tol).has_value();

  const std::size_t n = a.size();
  if (n < 2) return direct;  // the kernel is {0}; containment is trivial

  // Generic route: eliminate the dominant component, leaving n-1 free
  // first-order generators; the substituted b-dot-delta must be the zero
  // element.
  std::size_t dominant = 0;
  for (std::size_t i = 1; i < n; ++i)
    if (std::abs(a[i]) > std::abs(a[dominant])) dominant = i;

  const weil::BlockSpec spec = weil::BlockSpec::single(static_cast<int>(n) - 1, 1);
  std::vector<weil::Element> delta(n, weil::Element(spec));
  double scale = 1.0;
  int g = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (i == dominant) continue;
    delta[i] = weil::Element::generator(spec, 0, g++);
    delta[dominant] -= delta[i] * (a[i] / a[dominant]);
    scale = std::max({scale, std::abs(b[i]), std::abs(b[dominant] * a[i] / a[dominant])});
  }
  weil::Element dot(spec);
  for (std::size_t i = 0; i < n; ++i) dot += delta[i] * b[i];
  const bool generic = dot.is_zero(tol * scale);

  return direct && generic;
}

std::optional<double> system_containment_factor(const AugmentedSystem& a,
                                                const AugmentedSystem& b,
                                                double inv_tol, double tol) {
  if (!is_proper(a, inv_tol))
    throw Error("system_containment_factor: first system is not proper");
  const double av[] = {a.p1, a.p2, a.r1, a.r2};
  const double bv[] = {b.p1, b.p2, b.r1, b.r2};
  return proportionality_factor(av, bv, inv_tol, tol);
}

StaircaseSolution solve_staircase(const AugmentedSystem& a, double inv_tol) {
  if (!is_proper(a, inv_tol)) throw Error("solve_staircase: system is not proper");
  StaircaseSolution out{};
  auto& [r, s, t] = out.particular;
  if (std::abs(a.p1) >= std::abs(a.p2)) {
    t = 0.0;
    s = a.r2 / a.p1;
    r = (a.r1 - a.p2 * s) / a.p1;
  } else {
    r = 0.0;
    s = a.r1 / a.p2;
    t = (a.r2 - a.p1 * s) / a.p2;
  }
  out.kernel = {a.p2 * a.p2, -a.p1 * a.p2, a.p1 * a.p1};
  const double norm = std::hypot(out.kernel[0], out.kernel[1], out.kernel[2]);
  for (double& k : out.kernel) k /= norm;
  return out;
}

BasePointCheck base_point_check(std::span<const double> zeta) {
  const int n = static_cast<int>(zeta.size());
  // block 0: the candidate's coordinates; block 1: the probing displacement
  const weil::BlockSpec spec({weil::Block{n, 1}, weil::Block{n, 1}});
  BasePointCheck out{true, true};
  for (int i = 0; i < n; ++i) {
    const weil::Element z_i =
        weil::Element::generator(spec, 0, i) * zeta[static_cast<std::size_t>(i)];
    const weil::Element u_i = weil::Element::generator(spec, 1, i);
    const weil::Element square = (z_i + u_i) * (z_i + u_i);
    const weil::Element coeff = square.coefficient_of(spec.generator_offset(1) + i);
    if (!(coeff == z_i * 2.0)) out.coefficients_match = false;
    if (!coeff.is_zero()) out.accepted = false;
  }
  return out;
}

bool is_base_point_only_zero(int n, int trials, std::uint64_t seed) {
  std::vector<double> zeta(static_cast<std::size_t>(n), 0.0);
  BasePointCheck zero = base_point_check(zeta);
  if (!zero.coefficients_match || !zero.accepted) return false;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> mag(0.1, 2.0);
  std::uniform_int_distribution<int> pick(0, n - 1);
  for (int trial = 0; trial < trials; ++trial) {
    for (double& v : zeta) v = 0.0;
    // at least one coordinate nonzero; others random including zero
    zeta[static_cast<std::size_t>(pick(rng))] = mag(rng) * (rng() % 2 ? 1.0 : -1.0);
    for (double& v : zeta)
      if (rng() % 2) v = mag(rng) * (rng() % 2 ? 1.0 : -1.0);
    BasePointCheck check = base_point_check(zeta);
    bool any_nonzero = false;
    for (double v : zeta) any_nonzero |= v != 0.0;
    if (!check.coefficients_match) return false;
    if (any_nonzero && check.accepted) return false;
  }
  return true;
}

}  // namespace charpit
