#include "charpit/jets.hpp"

#include <cmath>
#include <string>

namespace charpit {

namespace {

bool near_zero(double residual, double scale, double tol) {
  return std::abs(residual) <= tol * std::max(1.0, scale);
}

}  // namespace

bool united_position(const SurfaceElement<double>& e, const Displacement<double>& d,
                     double tol) {
  const double residual = d.dz - e.p * d.dx - e.q * d.dy;
  const double scale = std::abs(d.dz) + std::abs(e.p * d.dx) + std::abs(e.q * d.dy);
  return near_zero(residual, scale, tol);
}

bool united_position(const SurfaceElement<weil::Element>& e,
                     const Displacement<weil::Element>& d, double coeff_tol) {
  return (d.dz - e.p * d.dx - e.q * d.dy).is_zero(coeff_tol);
}

bool belongs_to(const SurfaceElement<double>& e, double dx, double dy, double dp,
                double dq, const Calotte<double>& k, double tol) {
  const SurfaceElement<double> r = restriction(k);
  const double fields[5][2] = {{e.x, r.x}, {e.y, r.y}, {e.z, r.z}, {e.p, r.p}, {e.q, r.q}};
  for (const auto& f : fields) {
    if (!near_zero(f[0] - f[1], std::abs(f[0]) + std::abs(f[1]), tol))
      throw Error("belongs_to: calotte restriction does not match the element");
  }
  const double res1 = k.r * dx + k.s * dy - dp;
  const double res2 = k.s * dx + k.t * dy - dq;
  return near_zero(res1, std::abs(k.r * dx) + std::abs(k.s * dy) + std::abs(dp), tol) &&
         near_zero(res2, std::abs(k.s * dx) + std::abs(k.t * dy) + std::abs(dq), tol);
}

bool belongs_to(const SurfaceElement<weil::Element>& e, const weil::Element& dx,
                const weil::Element& dy, const weil::Element& dp,
                const weil::Element& dq, const Calotte<weil::Element>& k,
                double coeff_tol) {
  const SurfaceElement<weil::Element> r = restriction(k);
  if (!(e.x - r.x).is_zero(coeff_tol) || !(e.y - r.y).is_zero(coeff_tol) ||
      !(e.z - r.z).is_zero(coeff_tol) || !(e.p - r.p).is_zero(coeff_tol) ||
      !(e.q - r.q).is_zero(coeff_tol))
    throw Error("belongs_to: calotte restriction does not match the element");
  return (k.r * dx + k.s * dy - dp).is_zero(coeff_tol) &&
         (k.s * dx + k.t * dy - dq).is_zero(coeff_tol);
}

SurfaceElement<weil::Element> lift(const SurfaceElement<double>& e,
                                   const weil::BlockSpec& spec) {
  auto c = [&](double v) { return weil::Element::constant(spec, v); };
  return {c(e.x), c(e.y), c(e.z), c(e.p), c(e.q)};
}

Calotte<weil::Element> lift(const Calotte<double>& k, const weil::BlockSpec& spec) {
  auto c = [&](double v) { return weil::Element::constant(spec, v); };
  return {c(k.x), c(k.y), c(k.z), c(k.p), c(k.q), c(k.r), c(k.s), c(k.t)};
}

GraphSurface GraphSurface::from(ExprPtr f) {
  GraphSurface g;
  g.f = std::move(f);
  g.fx = differentiate(*g.f, 0);
  g.fy = differentiate(*g.f, 1);
  g.fxx = differentiate(*g.fx, 0);
  g.fxy = differentiate(*g.fx, 1);
  g.fyy = differentiate(*g.fy, 1);
  return g;
}

GraphSurface GraphSurface::parse(std::string_view source) {
  static const std::string vars[] = {"x", "y"};
  return from(charpit::parse(source, vars));
}

SurfaceElement<double> GraphSurface::jet1(double x0, double y0) const {
  const double env[] = {x0, y0};
  return {x0, y0, eval(*f, env), eval(*fx, env), eval(*fy, env)};
}

Calotte<double> GraphSurface::jet2(double x0, double y0) const {
  const double env[] = {x0, y0};
  return {x0, y0, eval(*f, env), eval(*fx, env), eval(*fy, env),
          eval(*fxx, env), eval(*fxy, env), eval(*fyy, env)};
}

}  // namespace charpit
