#pragma once

// Small linear algebra over a ring where "invertible" means "bounded away
// from zero": proportionality factors, kernel/solution-set containment for
// the 2x3 staircase systems
//
//     [ p1 p2  0 | r1 ]
//     [  0 p1 p2 | r2 ]
//
// and the base-point reconstruction check.  Containment conclusions are
// cross-validated generically through the truncated ring.

#include <array>
#include <cstdint>
#include <optional>
#include <span>

#include "charpit/weil.hpp"

namespace charpit {

struct AugmentedSystem {
  double p1, p2;  // staircase coefficients
  double r1, r2;  // right-hand sides
};

/// At least one coefficient exceeds the invertibility threshold.
bool is_proper(const AugmentedSystem& a, double inv_tol = 1e-9);

/// The unique lambda with b = lambda * a, if any: candidate from the dominant
/// component of a, accepted when every cross-component residual is small.
/// Throws when a has no component above inv_tol.
std::optional<double> proportionality_factor(std::span<const double> a,
                                             std::span<const double> b,
                                             double inv_tol = 1e-9, double tol = 1e-9);

/// ker(a-dot) contained in ker(b-dot)?  Equivalent to b = lambda a; also
/// verified generically: the first-order solutions of a.delta = 0 are
/// parametrized by n-1 ring generators and substituted into b.delta.
bool kernel_containment_generic(std::span<const double> a, std::span<const double> b,
                                double inv_tol = 1e-9, double tol = 1e-9);

/// solution-set(A) contained in solution-set(B) iff B's data is a scalar
/// multiple of A's; returns that scalar when it exists.
std::optional<double> system_containment_factor(const AugmentedSystem& a,
                                                const AugmentedSystem& b,
                                                double inv_tol = 1e-9,
                                                double tol = 1e-9);

struct StaircaseSolution {
  std::array<double, 3> particular;
  std::array<double, 3> kernel;  // unit length, annihilates both rows
};

/// Particular solution by dominant-pivot back-substitution plus the kernel
/// direction (p2^2, -p1 p2, p1^2) normalized.
StaircaseSolution solve_staircase(const AugmentedSystem& a, double inv_tol = 1e-9);

/// Base-point reconstruction, generically: for a candidate point of the
/// first-order neighbourhood of 0 with coordinates z_i = zeta_i * (z-block
/// generator i), the u_i-linear coefficient of (z_i + u_i)^2 must equal
/// 2 z_i exactly, and the candidate passes as base point iff all those
/// coefficients vanish, i.e. iff zeta = 0.
struct BasePointCheck {
  bool coefficients_match = false;  // extracted coefficient == 2 z_i, exactly
  bool accepted = false;            // all coefficients zero
};

BasePointCheck base_point_check(std::span<const double> zeta);

/// Runs base_point_check on zero and on `trials` random nonzero coefficient
/// patterns; true iff zero is accepted, every nonzero pattern is rejected,
/// and the coefficient identity holds throughout.
bool is_base_point_only_zero(int n, int trials = 10, std::uint64_t seed = 2026);

}  // namespace charpit
