#include "charpit/pde.hpp"

#include <cmath>
#include <string>

namespace charpit {

namespace {

constexpr double kPi = 3.14159265358979323846;

double max_abs(double a, double b) { return std::max(std::abs(a), std::abs(b)); }

void require_on_surface(const PdePoint& pt, const char* who) {
  if (!pt.on_surface)
    throw OffSurfaceError(std::string(who) + ": element is not on the PDE", pt.value);
}

}  // namespace

PdePoint at_element(const Pde& pde, const SurfaceElement<double>& element,
                    Tolerances tols) {
  PdePoint pt;
  pt.pde = &pde;
  pt.element = element;
  pt.tols = tols;
  const std::array<double, 5> state = pt.state();
  pt.value = pde.value(state);
  pt.partials = pde.gradient(state);
  pt.margin = max_abs(pt.partials[3], pt.partials[4]);
  pt.on_surface = std::abs(pt.value) <= tols.on_tol;
  if (pt.margin <= tols.inv_tol)
    throw DegeneracyError("at_element: psi_p and psi_q vanish simultaneously",
                          pt.margin);
  return pt;
}

AugmentedSystem calotte_system(const PdePoint& pt) {
  const auto& [px, py, pz, pp, pq] = pt.partials;
  return {pp, pq, -px - pt.element.p * pz, -py - pt.element.q * pz};
}

CalotteFamily solution_calotte_family(const PdePoint& pt) {
  require_on_surface(pt, "solution_calotte_family");
  const AugmentedSystem sys = calotte_system(pt);
  const StaircaseSolution sol = solve_staircase(sys, pt.tols.inv_tol);
  return {sol.particular, sol.kernel, sys};
}

bool is_solution_calotte(const Pde& pde, const Calotte<double>& k, Tolerances tols) {
  const std::array<double, 5> state = {k.x, k.y, k.z, k.p, k.q};
  if (std::abs(pde.value(state)) > tols.on_tol) return false;

  const std::array<double, 5> g = pde.gradient(state);
  const double rhs1 = -g[0] - k.p * g[2];
  const double rhs2 = -g[1] - k.q * g[2];
  const double res1 = g[3] * k.r + g[4] * k.s - rhs1;
  const double res2 = g[3] * k.s + g[4] * k.t - rhs2;
  const double scale1 = std::max(1.0, std::abs(g[3] * k.r) + std::abs(g[4] * k.s) + std::abs(rhs1));
  const double scale2 = std::max(1.0, std::abs(g[3] * k.s) + std::abs(g[4] * k.t) + std::abs(rhs2));
  const double tol = std::max(tols.on_tol, 1e-9);
  const bool rows_ok = std::abs(res1) <= tol * scale1 && std::abs(res2) <= tol * scale2;

  // Generic route: psi on the calotte's first-order point set must be the
  // zero element of R[dx,dy]/(degree 2).
  const weil::BlockSpec spec = weil::BlockSpec::single(2, 1);
  const weil::Element dx = weil::Element::generator(spec, 0, 0);
  const weil::Element dy = weil::Element::generator(spec, 0, 1);
  const weil::Element env[5] = {
      dx + k.x,
      dy + k.y,
      dx * k.p + dy * k.q + k.z,
      dx * k.r + dy * k.s + k.p,
      dx * k.s + dy * k.t + k.q,
  };
  const weil::Element value = eval(*pde.psi, spec, env, tols.inv_tol);
  double scale = 1.0;
  for (double v : {g[0], g[1], g[2], g[3] * k.r, g[4] * k.s, g[3] * k.s, g[4] * k.t})
    scale = std::max(scale, std::abs(v));
  const bool generic_ok = value.is_zero(tol * scale);

  return rows_ok && generic_ok;
}

CharDirection characteristic_direction(const PdePoint& pt) {
  require_on_surface(pt, "characteristic_direction");
  const auto& [px, py, pz, pp, pq] = pt.partials;
  const double p = pt.element.p, q = pt.element.q;
  return {pp, pq, p * pp + q * pq, -px - p * pz, -py - q * pz};
}

std::optional<double> is_characteristic_neighbour(const PdePoint& pt,
                                                  const Displacement<double>& d,
                                                  double tol) {
  require_on_surface(pt, "is_characteristic_neighbour");
  const CharDirection dir = characteristic_direction(pt);
  const double c[5] = {dir.dx, dir.dy, dir.dz, dir.dp, dir.dq};
  const double v[5] = {d.dx, d.dy, d.dz, d.dp, d.dq};

  int dominant = 0;
  for (int i = 1; i < 5; ++i)
    if (std::abs(c[i]) > std::abs(c[dominant])) dominant = i;
  const double lambda = v[dominant] / c[dominant];
  for (int i = 0; i < 5; ++i) {
    const double scale = std::max(1.0, std::abs(v[i]) + std::abs(lambda * c[i]));
    if (std::abs(v[i] - lambda * c[i]) > tol * scale) return std::nullopt;
  }
  if (!united_position(pt.element, d, tol)) return std::nullopt;
  return lambda;
}

std::array<double, 2> monge_direction(const PdePoint& pt) {
  require_on_surface(pt, "monge_direction");
  const double norm = std::hypot(pt.partials[3], pt.partials[4]);
  return {pt.partials[3] / norm, pt.partials[4] / norm};
}

double monge_generic_residual(const PdePoint& pt) {
  require_on_surface(pt, "monge_generic_residual");
  const weil::BlockSpec spec = weil::BlockSpec::single(1, 1);
  const weil::Element tau = weil::Element::generator(spec, 0, 0);
  // slope displacement constrained to first order inside the PDE
  const weil::Element dp = tau * -pt.partials[4];
  const weil::Element dq = tau * pt.partials[3];
  const weil::Element constraint = dp * pt.partials[3] + dq * pt.partials[4];

  const std::array<double, 2> dir = monge_direction(pt);
  const weil::Element contact = dp * dir[0] + dq * dir[1];

  const double scale = std::max(1.0, max_abs(pt.partials[3], pt.partials[4]));
  double residual = 0.0;
  for (const auto& [m, c] : constraint.terms()) residual = std::max(residual, std::abs(c));
  for (const auto& [m, c] : contact.terms()) residual = std::max(residual, std::abs(c));
  return residual / scale;
}

bool monge_generic_check(const PdePoint& pt, double tol) {
  return monge_generic_residual(pt) <= tol;
}

std::vector<ConeSample> monge_cone_sample(const Pde& pde, double x, double y, double z,
                                          int n, double p0, double q0,
                                          Tolerances tols) {
  double p = p0, q = q0;
  auto point_at = [&](double pp, double qq) {
    return at_element(pde, {x, y, z, pp, qq}, tols);
  };

  PdePoint pt = point_at(p, q);  // throws if the seed is degenerate
  if (!pt.on_surface)
    throw OffSurfaceError("monge_cone_sample: seed is not on the PDE", pt.value);

  std::vector<ConeSample> samples;
  samples.push_back({p, q, characteristic_direction(pt)});
  if (n <= 0) return samples;

  const int substeps = 8 * n;
  const double h = 2.0 * kPi / substeps;
  for (int k = 1; k < substeps; ++k) {
    // tangent predictor along the solution family of psi(x,y,z,.,.) = 0
    const double gp = pt.partials[3], gq = pt.partials[4];
    const double norm = std::hypot(gp, gq);
    p += h * (-gq / norm);
    q += h * (gp / norm);

    // corrective solve back to the family
    bool corrected = false;
    for (int iter = 0; iter < 10; ++iter) {
      const std::array<double, 5> state = {x, y, z, p, q};
      const double val = pde.value(state);
      if (std::abs(val) <= 1e-12) {
        corrected = true;
        break;
      }
      const std::array<double, 5> grad = pde.gradient(state);
      const double g2 = grad[3] * grad[3] + grad[4] * grad[4];
      if (g2 <= tols.inv_tol * tols.inv_tol) break;
      p -= val * grad[3] / g2;
      q -= val * grad[4] / g2;
    }
    const double residual = pde.value(std::array<double, 5>{x, y, z, p, q});
    if (!corrected && std::abs(residual) > 1e-8)
      throw NumericError("monge_cone_sample: correction stalled at substep " +
                         std::to_string(k) + ", |psi| = " + std::to_string(residual));

    try {
      pt = point_at(p, q);
    } catch (const DegeneracyError&) {
      return samples;  // the family leaves the nondegenerate region
    }
    if (k % 8 == 0) samples.push_back({p, q, characteristic_direction(pt)});
  }
  return samples;
}

double symmetry_residual(const PdePoint& pt) {
  require_on_surface(pt, "symmetry_residual");
  const CharDirection dir = characteristic_direction(pt);
  const double c[5] = {dir.dx, dir.dy, dir.dz, dir.dp, dir.dq};
  const std::array<double, 5> state = pt.state();

  const weil::BlockSpec spec = weil::BlockSpec::single(1, 1);
  const weil::Element lambda = weil::Element::generator(spec, 0, 0);

  // the displaced element P + lambda * field(P)
  std::vector<weil::Element> env;
  env.reserve(5);
  for (int i = 0; i < 5; ++i) env.push_back(lambda * c[i] + state[static_cast<std::size_t>(i)]);

  // the field evaluated at the displaced element, in the ring
  std::array<weil::Element, 5> grad = {
      eval(*pt.pde->partials[0], spec, env, pt.tols.inv_tol),
      eval(*pt.pde->partials[1], spec, env, pt.tols.inv_tol),
      eval(*pt.pde->partials[2], spec, env, pt.tols.inv_tol),
      eval(*pt.pde->partials[3], spec, env, pt.tols.inv_tol),
      eval(*pt.pde->partials[4], spec, env, pt.tols.inv_tol)};
  const weil::Element& pp = env[3];
  const weil::Element& qq = env[4];
  const std::array<weil::Element, 5> field = {
      grad[3],
      grad[4],
      pp * grad[3] + qq * grad[4],
      -grad[0] - pp * grad[2],
      -grad[1] - qq * grad[2]};

  double scale = 1.0;
  for (double v : c) scale = std::max(scale, std::abs(v));
  double residual = 0.0;
  for (int i = 0; i < 5; ++i) {
    // lambda^2 terms vanish structurally, so this compares field components
    // at P and at P + dP after multiplication by lambda
    const weil::Element diff = lambda * field[static_cast<std::size_t>(i)] - lambda * c[i];
    for (const auto& [m, coeff] : diff.terms())
      residual = std::max(residual, std::abs(coeff));
  }
  return residual / scale;
}

bool symmetry_check(const PdePoint& pt, double tol) {
  return symmetry_residual(pt) <= tol;
}

}  // namespace charpit
