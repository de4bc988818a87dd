#pragma once

// Everything derived from a first-order PDE psi(x,y,z,p,q) = 0 at a point:
// membership and nondegeneracy, the one-parameter family of solution
// calottes, the characteristic direction field, characteristic-neighbour
// testing, Monge directions and cone sampling, and the generic (ring-level)
// verification of the symmetry of the characteristic-neighbour relation.

#include <array>
#include <optional>
#include <vector>

#include "charpit/expr.hpp"
#include "charpit/jets.hpp"
#include "charpit/linalg.hpp"

namespace charpit {

struct Tolerances {
  double on_tol = 1e-9;   ///< |psi| membership threshold
  double inv_tol = 1e-9;  ///< invertibility / nondegeneracy threshold
};

/// psi and its gradient evaluated at a surface element.  Construction
/// enforces nondegeneracy: max(|psi_p|, |psi_q|) must exceed inv_tol.
struct PdePoint {
  const Pde* pde = nullptr;  // non-owning; must outlive the point
  SurfaceElement<double> element{};
  double value = 0.0;
  std::array<double, 5> partials{};  // psi_x, psi_y, psi_z, psi_p, psi_q
  bool on_surface = false;
  double margin = 0.0;  // max(|psi_p|, |psi_q|)
  Tolerances tols{};

  std::array<double, 5> state() const {
    return {element.x, element.y, element.z, element.p, element.q};
  }
};

/// Throws DegeneracyError when both slope partials are below inv_tol.
PdePoint at_element(const Pde& pde, const SurfaceElement<double>& element,
                    Tolerances tols = {});

/// The (r,s,t) data of calottes extending the element inside the PDE:
/// an affine line particular + c * kernel.
struct CalotteFamily {
  std::array<double, 3> particular;
  std::array<double, 3> kernel;  // unit length
  AugmentedSystem system;        // the staircase system the family solves
};

/// The staircase system whose solutions are the (r,s,t) of solution
/// calottes through the point.
AugmentedSystem calotte_system(const PdePoint& pt);

CalotteFamily solution_calotte_family(const PdePoint& pt);

/// True iff the restriction lies on the PDE and (r,s,t) solves the calotte
/// system; additionally verified generically by evaluating psi on the
/// calotte's first-order point set in the truncated ring.
bool is_solution_calotte(const Pde& pde, const Calotte<double>& k, Tolerances tols = {});

/// Tangent of the characteristic strip through a point, scale fixed by
/// lambda = 1: (psi_p, psi_q, p psi_p + q psi_q, -psi_x - p psi_z,
/// -psi_y - q psi_z).  dz = p dx + q dy holds by construction.
struct CharDirection {
  double dx, dy, dz, dp, dq;
};

CharDirection characteristic_direction(const PdePoint& pt);

/// The unique factor lambda with d = lambda * characteristic_direction(pt),
/// when the displacement is characteristic; empty otherwise.
std::optional<double> is_characteristic_neighbour(const PdePoint& pt,
                                                  const Displacement<double>& d,
                                                  double tol = 1e-9);

/// Normalized (psi_p, psi_q): the base-plane direction of the cone contact.
std::array<double, 2> monge_direction(const PdePoint& pt);

/// Generic route to the same direction: slope displacements constrained to
/// stay inside the PDE annihilate the Monge direction's point displacement.
/// The residual form returns the largest leftover coefficient relative to
/// the partials' magnitude.
double monge_generic_residual(const PdePoint& pt);
bool monge_generic_check(const PdePoint& pt, double tol = 1e-12);

struct ConeSample {
  double p, q;  // the element over the base point
  CharDirection direction;
};

/// Traces {(p,q) : psi(x,y,z,p,q) = 0} by arc-length continuation over a
/// total arc of 2*pi, emitting n samples (the seed first); n = 0 yields the
/// seed alone.  Stops early when nondegeneracy fails along the family.
std::vector<ConeSample> monge_cone_sample(const Pde& pde, double x, double y, double z,
                                          int n, double p0, double q0,
                                          Tolerances tols = {});

/// Mechanical symmetry proof for the characteristic-neighbour relation:
/// with lambda a square-zero generator and dP = lambda * field(P), checks
/// lambda * field(P + dP) = lambda * field(P) identically in the ring.
/// The residual form returns the largest leftover coefficient relative to
/// the field's magnitude.
double symmetry_residual(const PdePoint& pt);
bool symmetry_check(const PdePoint& pt, double tol = 1e-12);

}  // namespace charpit
