#pragma once

// 1-jets (surface elements) and 2-jets (calottes) of graph surfaces in R^3,
// their point sets, united position, and calotte membership.  The point/
// membership operations are templated over the scalar so the same formulas
// run on reals and on truncated-ring elements.

#include <array>
#include <string_view>

#include "charpit/expr.hpp"
#include "charpit/weil.hpp"

namespace charpit {

/// The 5-tuple (x,y,z,p,q): base point plus tangent-plane slopes.
template <class S = double>
struct SurfaceElement {
  S x, y, z, p, q;
};

/// The 8-tuple (x,y,z,p,q,r,s,t): adds the second-order data.
template <class S = double>
struct Calotte {
  S x, y, z, p, q, r, s, t;
};

/// First-order offset between neighbouring surface elements.
template <class S = double>
struct Displacement {
  S dx, dy, dz, dp, dq;
};

template <class S>
SurfaceElement<S> restriction(const Calotte<S>& k) {
  return {k.x, k.y, k.z, k.p, k.q};
}

/// The point of the element at planar offset (dx, dy):
/// (x+dx, y+dy, z + p dx + q dy).
template <class S>
std::array<S, 3> element_point(const SurfaceElement<S>& e, const S& dx, const S& dy) {
  return {e.x + dx, e.y + dy, e.z + e.p * dx + e.q * dy};
}

/// The point of the calotte at planar offset (dx, dy), second order included.
template <class S>
std::array<S, 3> calotte_point(const Calotte<S>& k, const S& dx, const S& dy) {
  return {k.x + dx, k.y + dy,
          k.z + k.p * dx + k.q * dy + k.r * dx * dx * 0.5 + k.s * dx * dy +
              k.t * dy * dy * 0.5};
}

/// United position: dz = p dx + q dy within a relative tolerance.
bool united_position(const SurfaceElement<double>& e, const Displacement<double>& d,
                     double tol = 1e-9);

/// United position over the ring: the residual must be the zero element
/// (coefficient tolerance for coefficients built from floating data).
bool united_position(const SurfaceElement<weil::Element>& e,
                     const Displacement<weil::Element>& d, double coeff_tol = 0.0);

/// Does the neighbour element at (dx,dy) with slope offsets (dp,dq) belong to
/// the calotte?  True iff r dx + s dy = dp and s dx + t dy = dq.  Throws if
/// the calotte's restriction does not match `e`.
bool belongs_to(const SurfaceElement<double>& e, double dx, double dy, double dp,
                double dq, const Calotte<double>& k, double tol = 1e-9);

bool belongs_to(const SurfaceElement<weil::Element>& e, const weil::Element& dx,
                const weil::Element& dy, const weil::Element& dp,
                const weil::Element& dq, const Calotte<weil::Element>& k,
                double coeff_tol = 0.0);

/// Embeds a real element into the ring as constants (for generic checks).
SurfaceElement<weil::Element> lift(const SurfaceElement<double>& e,
                                   const weil::BlockSpec& spec);
Calotte<weil::Element> lift(const Calotte<double>& k, const weil::BlockSpec& spec);

/// A graph surface z = f(x,y) with symbolic partials up to second order.
struct GraphSurface {
  ExprPtr f, fx, fy, fxx, fxy, fyy;

  static GraphSurface from(ExprPtr f);      ///< differentiate a parsed tree
  static GraphSurface parse(std::string_view source);  ///< over variables {x, y}

  SurfaceElement<double> jet1(double x0, double y0) const;
  Calotte<double> jet2(double x0, double y0) const;
};

}  // namespace charpit
